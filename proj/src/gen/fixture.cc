// Copyright 2026 The odqa Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "odqa/gen/fixture.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "odqa/core/error.h"
#include "odqa/ingest/csv.h"
#include "odqa/ingest/timestamp.h"

namespace odqa::gen {

namespace {

using ingest::kSecondsPerDay;
namespace chr = std::chrono;

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}
  uint64_t Next() { return engine_(); }
  int64_t Uniform(int64_t lo, int64_t hi) { return lo + static_cast<int64_t>(Next() % static_cast<uint64_t>(hi - lo + 1)); }
  bool Chance(double p) { return static_cast<double>(Next() >> 11) * 0x1.0p-53 < p; }
  template <typename T, size_t N>
  const T& Pick(const T (&items)[N]) {
    return items[Next() % N];
  }
  template <typename T>
  const T& Pick(const std::vector<T>& items) {
    return items[Next() % items.size()];
  }

 private:
  std::mt19937_64 engine_;
};

struct Agency {
  const char* code;
  const char* name;
  int weight;
  std::vector<const char*> complaints;
};

const std::vector<Agency>& Agencies() {
  static const std::vector<Agency> kAgencies = {
      {"NYPD", "New York City Police Department", 400,
       {"Noise - Residential", "Illegal Parking", "Blocked Driveway", "Noise - Street/Sidewalk", "Abandoned Vehicle",
        "Noise - Commercial", "Noise - Vehicle", "Non-Emergency Police Matter", "Encampment", "Illegal Fireworks"}},
      {"HPD", "Department of Housing Preservation and Development", 200,
       {"HEAT/HOT WATER", "UNSANITARY CONDITION", "PLUMBING", "PAINT/PLASTER", "DOOR/WINDOW", "WATER LEAK",
        "GENERAL", "ELECTRIC", "FLOORING/STAIRS", "APPLIANCE"}},
      {"DSNY", "Department of Sanitation", 120,
       {"Dirty Condition", "Missed Collection", "Illegal Dumping", "Derelict Vehicles", "Residential Disposal Complaint",
        "Litter Basket Request", "Snow or Ice"}},
      {"DOT", "Department of Transportation", 80,
       {"Street Condition", "Street Light Condition", "Traffic Signal Condition", "Sidewalk Condition",
        "Broken Parking Meter", "Highway Condition"}},
      {"DEP", "Department of Environmental Protection", 70,
       {"Water System", "Sewer", "Noise", "Air Quality", "Water Conservation"}},
      {"DOB", "Department of Buildings", 50,
       {"General Construction/Plumbing", "Building/Use", "Elevator", "Scaffold Safety", "Special Projects Inspection Team (SPIT)"}},
      {"DPR", "Department of Parks and Recreation", 30,
       {"Damaged Tree", "Overgrown Tree/Branches", "Dead/Dying Tree", "New Tree Request", "Maintenance or Facility"}},
      {"DOHMH", "Department of Health and Mental Hygiene", 20,
       {"Rodent", "Food Establishment", "Unsanitary Animal Pvt Property", "Indoor Air Quality", "Mold"}},
      {"DHS", "Department of Homeless Services", 12, {"Homeless Person Assistance"}},
      {"TLC", "Taxi and Limousine Commission", 10, {"Taxi Complaint", "For Hire Vehicle Complaint", "Lost Property"}},
      {"DCWP", "Department of Consumer and Worker Protection", 5, {"Consumer Complaint", "Vendor Enforcement"}},
      {"EDC", "Economic Development Corporation", 3, {"Noise - Helicopter", "Ferry Complaint"}},
  };
  return kAgencies;
}

const char* const kBoroughs[] = {"BROOKLYN", "QUEENS", "MANHATTAN", "BRONX", "STATEN ISLAND"};
const char* const kCities[] = {"BROOKLYN", "QUEENS", "NEW YORK", "BRONX", "STATEN ISLAND"};
const char* const kStreetNames[] = {
    "BROADWAY",      "AMSTERDAM",    "LEXINGTON",  "ATLANTIC",   "FLATBUSH",  "JAMAICA",     "GRAND CONCOURSE",
    "OCEAN",         "NOSTRAND",     "BEDFORD",    "LINDEN",     "MYRTLE",    "KNICKERBOCKER", "CONEY ISLAND",
    "RICHMOND",      "VICTORY",      "HYLAN",      "FOREST",     "QUEENS",    "NORTHERN",    "ASTORIA",
    "DITMARS",       "JUNCTION",     "WOODHAVEN",  "UNION",      "KANE",      "CLINTON",     "COURT",
    "SMITH",         "DEAN",         "BERGEN",     "PACIFIC",    "ST MARKS",  "PROSPECT",    "EASTERN",
    "FULTON",        "GATES",        "MADISON",    "PARK",       "WEST END",  "RIVERSIDE",   "FORDHAM",
    "TREMONT",       "WEBSTER",      "MORRIS",     "JEROME",     "BAYCHESTER", "PELHAM",     "CASTLE HILL",
    "SOUNDVIEW"};
const char* const kSuffixes[] = {"AVENUE", "STREET", "PLACE", "ROAD", "BOULEVARD", "DRIVE", "COURT", "LANE", "PARKWAY"};
const char* const kSuffixAbbrev[] = {"AVE", "ST", "PL", "RD", "BLVD", "DR", "CT", "LN", "PKWY"};
const char* const kLocationTypes[] = {"RESIDENTIAL BUILDING", "Street/Sidewalk", "Residential Building/House",
                                      "Sidewalk",             "Street",          "Store/Commercial",
                                      "Park",                 "Club/Bar/Restaurant"};
const char* const kDescriptors[] = {"N/A", "Loud Music/Party", "Banging/Pounding", "ENTIRE BUILDING", "APARTMENT ONLY",
                                    "Pothole", "Blocked Hydrant", "Trash", "Street Light Out", "Other"};
const char* const kChannels[] = {"PHONE", "ONLINE", "MOBILE", "UNKNOWN"};
const char* const kAddressTypes[] = {"ADDRESS", "INTERSECTION", "BLOCKFACE", "LATLONG"};
const char* const kStatuses[] = {"Assigned", "In Progress", "Pending", "Started"};
const char* const kResolutions[] = {
    "The Police Department responded to the complaint and with the information available observed no evidence of "
    "the violation at that time.",
    "The Department of Housing Preservation and Development inspected the following conditions. Violations were "
    "issued. Information about specific violations is available at www.nyc.gov/hpd.",
    "The Department of Sanitation investigated this complaint and found no violation at the location.",
    "The Department of Transportation inspected this condition and repaired the problem.",
    "The Department of Environmental Protection determined that this complaint is a duplicate of a previously filed "
    "complaint. The original complaint is being addressed.",
    "The Department of Buildings reviewed this complaint and closed it. If the problem still exists, please call 311 "
    "and enter a new complaint.",
    "Your request can not be processed at this time because of insufficient contact information. Please create a new "
    "Service Request on NYC.gov and provide more detailed contact information.",
    "The Police Department responded to the complaint and took action to fix the condition.",
    "This complaint does not fall under the Police Department's jurisdiction.",
    "The Department of Parks and Recreation has completed the requested work order and corrected the problem."};
const char* const kInvalidZips[] = {"00000", "99999", "1234", "ABCDE", "10O01", "123456", "07302"};

std::vector<std::string> NycZips() {
  std::vector<std::string> zips;
  auto range = [&](int lo, int hi) {
    for (int z = lo; z <= hi; ++z) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "%05d", z);
      zips.emplace_back(buf);
    }
  };
  range(10001, 10040);
  range(10065, 10075);
  range(10128, 10128);
  range(10280, 10282);
  range(10301, 10314);
  range(10451, 10475);
  range(11004, 11005);
  range(11101, 11106);
  range(11201, 11239);
  range(11354, 11379);
  range(11411, 11436);
  range(11691, 11697);
  return zips;
}

struct Stamp {
  int64_t days = 0;
  int64_t sod = 0;  // seconds of day

  int64_t local() const { return days * kSecondsPerDay + sod; }
  static Stamp From(int64_t local) {
    int64_t d = local / kSecondsPerDay;
    int64_t s = local % kSecondsPerDay;
    if (s < 0) {
      s += kSecondsPerDay;
      --d;
    }
    return {d, s};
  }
};

int64_t DaysOf(chr::year_month_day ymd) { return chr::sys_days(ymd).time_since_epoch().count(); }

/// True for local times that never existed or happened twice under US
/// Eastern rules (2007+).
bool InGapOrFold(const Stamp& t) {
  const chr::year_month_day ymd{chr::sys_days(chr::days(t.days))};
  const chr::year y = ymd.year();
  const int64_t start = DaysOf(chr::year_month_day(chr::sys_days(y / chr::March / chr::Sunday[2])));
  const int64_t end = DaysOf(chr::year_month_day(chr::sys_days(y / chr::November / chr::Sunday[1])));
  if (t.days == start && t.sod >= 2 * 3600 && t.sod < 3 * 3600) return true;
  if (t.days == end && t.sod >= 1 * 3600 && t.sod < 2 * 3600) return true;
  return false;
}

bool Clean(const Stamp& t) { return t.sod != 0 && !InGapOrFold(t); }

std::string Format(const Stamp& t) {
  const chr::year_month_day ymd{chr::sys_days(chr::days(t.days))};
  const int64_t h24 = t.sod / 3600;
  const int64_t h12 = h24 % 12 == 0 ? 12 : h24 % 12;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02u/%02u/%04d %02lld:%02lld:%02lld %s", static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(ymd.year()), static_cast<long long>(h12),
                static_cast<long long>(t.sod / 60 % 60), static_cast<long long>(t.sod % 60), h24 < 12 ? "AM" : "PM");
  return buf;
}

enum class Plant : uint8_t {
  kNone,
  kNegative,
  kZero,
  kSentinel,
  kMidnightCreated,
  kMidnightClosed,
  kInvalidZip,
  kDuplicateSource,
  kDuplicateCopy,
  kDstGap,
  kPostClose,
};

std::vector<Plant> PlanInjections(const FixtureOptions& o, Rng& rng) {
  const auto& in = o.inject;
  if (in.rows_needed() > o.rows) {
    ThrowConfig("fixture of " + std::to_string(o.rows) + " rows cannot hold " + std::to_string(in.rows_needed()) +
                " injected rows");
  }
  std::vector<Plant> plants(o.rows, Plant::kNone);
  std::vector<uint64_t> chosen;
  {
    // Partial Fisher-Yates over row indices; sparse so it also works for
    // multi-million-row fixtures.
    std::unordered_map<uint64_t, uint64_t> swapped;
    auto at = [&](uint64_t i) {
      auto it = swapped.find(i);
      return it == swapped.end() ? i : it->second;
    };
    for (uint64_t i = 0; i < in.rows_needed(); ++i) {
      const uint64_t j = i + rng.Next() % (o.rows - i);
      const uint64_t vi = at(i), vj = at(j);
      swapped[i] = vj;
      swapped[j] = vi;
      chosen.push_back(vj);
    }
  }
  size_t next = 0;
  auto assign = [&](uint64_t n, Plant p) {
    for (uint64_t i = 0; i < n; ++i) plants[chosen[next++]] = p;
  };
  assign(in.negative_durations, Plant::kNegative);
  assign(in.zero_durations, Plant::kZero);
  assign(in.sentinel_dates, Plant::kSentinel);
  assign(in.midnight_rows - in.midnight_rows / 3, Plant::kMidnightCreated);
  assign(in.midnight_rows / 3, Plant::kMidnightClosed);
  assign(in.invalid_zips, Plant::kInvalidZip);
  assign(in.dst_gap_timestamps, Plant::kDstGap);
  assign(in.post_close_updates, Plant::kPostClose);
  for (uint64_t i = 0; i < in.duplicate_keys; ++i) {
    uint64_t a = chosen[next++], b = chosen[next++];
    if (a > b) std::swap(a, b);
    plants[a] = Plant::kDuplicateSource;
    plants[b] = Plant::kDuplicateCopy;
  }
  return plants;
}

struct Generator {
  explicit Generator(const FixtureOptions& o) : rng(o.seed), zips(NycZips()) {
    for (const auto& a : Agencies()) total_weight += a.weight;
    first_day = DaysOf(chr::year_month_day(chr::year(2022), chr::January, chr::day(1)));
    last_day = DaysOf(chr::year_month_day(chr::year(2023), chr::December, chr::day(31)));
  }

  Stamp CleanStamp() {
    for (;;) {
      Stamp t{rng.Uniform(first_day, last_day), rng.Uniform(1, kSecondsPerDay - 1)};
      if (Clean(t)) return t;
    }
  }

  /// A clean timestamp `lo..hi` seconds after (or before, when negative)
  /// `from`; magnitudes stay at least two hours so a DST shift can never
  /// flip the sign.
  Stamp Offset(const Stamp& from, int64_t lo, int64_t hi) {
    for (;;) {
      const Stamp t = Stamp::From(from.local() + rng.Uniform(lo, hi));
      if (Clean(t)) return t;
    }
  }

  const Agency& PickAgency() {
    int64_t r = rng.Uniform(0, total_weight - 1);
    for (const auto& a : Agencies()) {
      if ((r -= a.weight) < 0) return a;
    }
    return Agencies().front();
  }

  std::string Street() {
    const size_t s = rng.Next() % std::size(kSuffixes);
    std::string name = rng.Pick(kStreetNames);
    if (rng.Chance(0.15)) {
      const char* ordinals[] = {"1", "2", "3", "4", "5", "9", "14", "23", "42", "86"};
      const char* tail[] = {"ST", "ND", "RD", "TH", "TH", "TH", "TH", "RD", "ND", "TH"};
      const size_t k = rng.Next() % std::size(ordinals);
      name = std::string(ordinals[k]) + tail[k];
    }
    return name + " " + kSuffixes[s];
  }

  std::string Digits(int n) {
    std::string d(static_cast<size_t>(n), '0');
    for (auto& c : d) c = static_cast<char>('0' + rng.Next() % 10);
    return d;
  }

  std::string AbbreviateSuffix(const std::string& street) {
    for (size_t i = 0; i < std::size(kSuffixes); ++i) {
      const std::string suffix = std::string(" ") + kSuffixes[i];
      if (street.size() > suffix.size() && street.compare(street.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return street.substr(0, street.size() - suffix.size()) + " " + kSuffixAbbrev[i];
      }
    }
    return street;
  }

  Rng rng;
  std::vector<std::string> zips;
  int64_t total_weight = 0;
  int64_t first_day = 0;
  int64_t last_day = 0;
};

const char* const kHeader[] = {"Unique Key",
                               "Created Date",
                               "Closed Date",
                               "Agency",
                               "Agency Name",
                               "Complaint Type",
                               "Descriptor",
                               "Location Type",
                               "Incident Zip",
                               "Incident Address",
                               "Street Name",
                               "Cross Street 1",
                               "Intersection Street 1",
                               "Address Type",
                               "City",
                               "Status",
                               "Due Date",
                               "Resolution Description",
                               "Resolution Action Updated Date",
                               "Community Board",
                               "Borough",
                               "X Coordinate (State Plane)",
                               "Y Coordinate (State Plane)",
                               "Open Data Channel Type",
                               "Park Facility Name",
                               "Park Borough",
                               "Taxi Company Borough",
                               "Latitude",
                               "Longitude",
                               "Location"};

void WriteData(const std::string& path, const FixtureOptions& o, FixtureFiles& files) {
  Generator g(o);
  const auto plants = PlanInjections(o, g.rng);
  ingest::CsvWriter out(path);
  out.WriteRow(std::span<const std::string_view>(std::vector<std::string_view>(std::begin(kHeader), std::end(kHeader))));

  std::vector<uint64_t> key_of_source;  // duplicate sources in row order
  size_t copy_index = 0;
  for (uint64_t i = 0; i < o.rows; ++i) {
    const Plant plant = plants[i];
    if (plant == Plant::kDuplicateSource) key_of_source.push_back(i);
    const uint64_t key_row = plant == Plant::kDuplicateCopy ? key_of_source.at(copy_index++) : i;
    const std::string key = std::to_string(50000000 + key_row);

    const Agency& agency = g.PickAgency();
    const std::string complaint = g.rng.Pick(agency.complaints);
    const size_t b = g.rng.Next() % std::size(kBoroughs);
    const std::string borough = kBoroughs[b];

    Stamp created = g.CleanStamp();
    if (plant == Plant::kMidnightCreated) created.sod = 0;
    const bool needs_closed = plant == Plant::kNegative || plant == Plant::kZero || plant == Plant::kMidnightClosed ||
                              plant == Plant::kPostClose || plant == Plant::kMidnightCreated;
    const bool open = !needs_closed && g.rng.Chance(0.03);
    Stamp closed;
    if (plant == Plant::kNegative) {
      closed = g.Offset(created, -400 * kSecondsPerDay, -2 * 3600);
    } else if (plant == Plant::kZero) {
      closed = created;
    } else if (plant == Plant::kMidnightClosed) {
      closed = {created.days + g.rng.Uniform(2, 20), 0};
    } else if (g.rng.Chance(0.6)) {
      closed = g.Offset(created, 2 * 3600, 3 * kSecondsPerDay);
    } else {
      closed = g.Offset(created, 3 * kSecondsPerDay, 120 * kSecondsPerDay);
    }

    std::string updated;
    if (!open && (plant == Plant::kPostClose || g.rng.Chance(0.95))) {
      updated = Format(plant == Plant::kPostClose ? g.Offset(closed, 31 * kSecondsPerDay, 200 * kSecondsPerDay)
                                                  : g.Offset(closed, 2 * 3600, 20 * kSecondsPerDay));
    } else if (open && g.rng.Chance(0.5)) {
      updated = Format(g.Offset(created, 2 * 3600, 10 * kSecondsPerDay));
    }

    std::string due;
    if (plant == Plant::kSentinel) {
      due = "01/01/1900 12:00:00 AM";
    } else if (plant == Plant::kDstGap) {
      due = Format({DaysOf(chr::year_month_day(chr::year(2022), chr::March, chr::day(13))), g.rng.Uniform(7200, 10799)});
    } else if (g.rng.Chance(0.3)) {
      due = Format(g.Offset(created, 7 * kSecondsPerDay, 60 * kSecondsPerDay));
    }

    std::string zip = g.rng.Chance(0.05) ? "" : g.rng.Pick(g.zips);
    if (plant == Plant::kInvalidZip) zip = g.rng.Pick(kInvalidZips);

    const std::string street = g.Street();
    const std::string address = g.rng.Chance(0.1) ? "" : std::to_string(g.rng.Uniform(1, 3999)) + " " + street;
    std::string cross, inter;
    if (g.rng.Chance(0.6)) {
      cross = g.Street();
      inter = g.rng.Chance(0.88) ? cross : (g.rng.Chance(0.5) ? g.AbbreviateSuffix(cross) : g.Street());
    }
    const char* address_type = g.rng.Chance(0.05) ? "" : g.rng.Pick(kAddressTypes);
    const char* status = open ? g.rng.Pick(kStatuses) : "Closed";
    const std::string resolution = open ? "" : g.rng.Pick(kResolutions);

    char board[32];
    std::snprintf(board, sizeof board, "%02d %s", static_cast<int>(g.rng.Uniform(1, 18)), borough.c_str());
    std::string lat, lon, location, x, y;
    if (!g.rng.Chance(0.04)) {
      lat = "40." + std::to_string(g.rng.Uniform(5, 8)) + g.Digits(13);
      lon = g.rng.Chance(0.6) ? "-73." + std::to_string(g.rng.Uniform(7, 9)) + g.Digits(13)
                              : "-74." + std::to_string(g.rng.Uniform(0, 1)) + g.Digits(13);
      location = "(" + lat + ", " + lon + ")";
      x = std::to_string(g.rng.Uniform(913000, 1067000));
      y = std::to_string(g.rng.Uniform(121000, 271000));
    }
    const std::string taxi = g.rng.Chance(0.0006) ? borough : "";
    const std::string park_facility = agency.code == std::string("DPR") ? "Prospect Park" : "Unspecified";

    const std::string created_s = Format(created);
    const std::string closed_s = open ? "" : Format(closed);
    const std::string descriptor = g.rng.Pick(kDescriptors);
    const std::string_view row[] = {key,
                                    created_s,
                                    closed_s,
                                    agency.code,
                                    agency.name,
                                    complaint,
                                    descriptor,
                                    g.rng.Chance(0.25) ? "" : g.rng.Pick(kLocationTypes),
                                    zip,
                                    address,
                                    street,
                                    cross,
                                    inter,
                                    address_type,
                                    kCities[b],
                                    status,
                                    due,
                                    resolution,
                                    updated,
                                    board,
                                    borough,
                                    x,
                                    y,
                                    g.rng.Pick(kChannels),
                                    park_facility,
                                    borough,
                                    taxi,
                                    lat,
                                    lon,
                                    location};
    out.WriteRow(row);
  }
  out.Close();
  files.rows = o.rows;
  files.bytes = out.bytes_written();
}

void WriteDictionary(const std::string& path) {
  std::string agencies, names, complaints;
  std::vector<std::string> all_complaints;
  for (const auto& a : Agencies()) {
    agencies += (agencies.empty() ? "" : "|") + std::string(a.code);
    names += (names.empty() ? "" : "|") + std::string(a.name);
    for (const char* c : a.complaints) all_complaints.emplace_back(c);
  }
  std::sort(all_complaints.begin(), all_complaints.end());
  all_complaints.erase(std::unique(all_complaints.begin(), all_complaints.end()), all_complaints.end());
  for (const auto& c : all_complaints) complaints += (complaints.empty() ? "" : "|") + c;
  std::string boroughs;
  for (const char* b : kBoroughs) boroughs += (boroughs.empty() ? "" : "|") + std::string(b);

  ingest::CsvWriter out(path);
  out.WriteRow({"name", "type_class", "domain", "required", "documented", "domain_ref", "notes"});
  const std::vector<std::vector<std::string>> rows = {
      {"unique_key", "integer", "", "yes", "yes", "", "Unique identifier of a Service Request"},
      {"created_date", "timestamp", "", "yes", "yes", "", "Date SR was created"},
      {"closed_date", "timestamp", "", "no", "yes", "", "Date SR was closed by responding agency"},
      {"agency", "categorical", agencies, "yes", "yes", "", "Acronym of responding City Government Agency"},
      {"agency_name", "categorical", names, "yes", "yes", "", "Full Agency name"},
      {"complaint_type", "categorical", complaints, "yes", "yes", "", "Topic of the incident or condition"},
      {"descriptor", "text", "", "no", "yes", "", "Further detail on the complaint type"},
      {"location_type", "categorical", "", "no", "yes", "", "Type of location used in the address information"},
      {"incident_zip", "text", "", "no", "yes", "", "Incident location zip code"},
      {"incident_address", "text", "", "no", "yes", "", "House number of incident address"},
      {"street_name", "text", "", "no", "yes", "", "Street name of incident address"},
      {"cross_street_1", "text", "", "no", "yes", "", "First cross street"},
      {"intersection_street_1", "text", "", "no", "yes", "", "First intersecting street"},
      {"address_type", "categorical", "ADDRESS|BLOCKFACE|INTERSECTION|LATLONG|PLACENAME", "no", "yes", "",
       "Type of incident location information available"},
      {"city", "text", "", "no", "yes", "", "City of the incident location"},
      {"status", "categorical", "Assigned|Closed|In Progress|Pending|Started", "yes", "yes", "", "Status of SR"},
      {"due_date", "timestamp", "", "no", "yes", "", "Date when responding agency is expected to update the SR"},
      {"resolution_description", "text", "", "no", "yes", "", "Last action taken on the SR by the agency"},
      {"resolution_action_updated_date", "timestamp", "", "no", "yes", "", "Date when responding agency last updated"},
      {"community_board", "text", "", "no", "yes", "", "Provided by geovalidation"},
      {"borough", "categorical", boroughs + "|Unspecified", "no", "yes", "", "Provided by the submitter"},
      {"x_coordinate__state_plane", "integer", "", "no", "yes", "", "Geo-validated X coordinate"},
      {"y_coordinate__state_plane", "integer", "", "no", "yes", "", "Geo-validated Y coordinate"},
      {"open_data_channel_type", "categorical", "MOBILE|ONLINE|OTHER|PHONE|UNKNOWN", "no", "yes", "",
       "How the SR was submitted"},
      {"park_facility_name", "text", "", "no", "yes", "", "Name of the Parks facility, if applicable"},
      {"park_borough", "categorical", boroughs + "|Unspecified", "no", "yes", "", "Borough of incident"},
      {"taxi_company_borough", "categorical", "", "no", "yes", "", "Borough of the taxi company, if applicable"},
      {"latitude", "decimal", "", "no", "yes", "", "Geo-based latitude of the incident location"},
      {"longitude", "decimal", "", "no", "yes", "", "Geo-based longitude of the incident location"},
      {"location", "geo_point", "", "no", "yes", "", "Combination of latitude and longitude"},
  };
  for (const auto& r : rows) {
    const std::vector<std::string_view> v(r.begin(), r.end());
    out.WriteRow(v);
  }
  out.Close();
}

void WriteText(const std::string& path, const std::string& text) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) ThrowIo("cannot write '" + path + "'");
  std::fwrite(text.data(), 1, text.size(), f);
  if (std::fclose(f) != 0) ThrowIo("cannot write '" + path + "'");
}

constexpr const char* kConfig = R"({
  "input": "requests.csv",
  "dictionary": "dictionary.csv",
  "references": {"incident_zip": "zips.txt"},
  "redundancy": {
    "pairs": [
      {"a": "borough", "b": "park_borough"},
      {"a": "cross_street_1", "b": "intersection_street_1", "normalize": true},
      {"a": "incident_address", "b": "street_name"}
    ]
  },
  "report": {"severity_threshold": "error", "sample_cap": 100}
}
)";

}  // namespace

uint64_t Injections::rows_needed() const {
  return negative_durations + zero_durations + sentinel_dates + midnight_rows + invalid_zips + 2 * duplicate_keys +
         dst_gap_timestamps + post_close_updates;
}

FixtureFiles WriteFixture(const std::string& dir, const FixtureOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) ThrowIo("cannot create '" + dir + "': " + ec.message());
  const std::filesystem::path d(dir);
  FixtureFiles files;
  files.data = (d / "requests.csv").string();
  files.dictionary = (d / "dictionary.csv").string();
  files.zips = (d / "zips.txt").string();
  files.config = (d / "config.json").string();
  WriteData(files.data, options, files);
  WriteDictionary(files.dictionary);
  std::string zips = "# NYC zip codes\n";
  for (const auto& z : NycZips()) zips += z + "\n";
  WriteText(files.zips, zips);
  WriteText(files.config, kConfig);
  return files;
}

uint64_t RowsForBytes(uint64_t target_bytes, uint64_t seed) {
  const auto dir = std::filesystem::temp_directory_path() / ("odqa-size-probe-" + std::to_string(seed));
  FixtureOptions probe;
  probe.rows = 20000;
  probe.seed = seed;
  const auto files = WriteFixture(dir.string(), probe);
  std::filesystem::remove_all(dir);
  const double per_row = static_cast<double>(files.bytes) / static_cast<double>(files.rows);
  return std::max<uint64_t>(probe.inject.rows_needed(), static_cast<uint64_t>(static_cast<double>(target_bytes) / per_row));
}

}  // namespace odqa::gen
