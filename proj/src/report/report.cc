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

#include "odqa/report/report.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "odqa/core/error.h"
#include "odqa/ingest/csv.h"

namespace odqa::report {

namespace {

using Json = nlohmann::ordered_json;

std::string Days(int64_t seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", static_cast<double>(seconds) / ingest::kSecondsPerDay);
  return buf;
}

std::string Num(double v, const char* fmt = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string Pct(uint64_t part, uint64_t whole) {
  return whole ? profile::FormatPct(100.0 * static_cast<double>(part) / static_cast<double>(whole)) + "%" : "n/a";
}

Json OptionalRate(const std::optional<double>& r) { return r ? Json(*r) : Json(nullptr); }

template <typename Map>
Json MapJson(const Map& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

Json HistogramJson(const temporal::DayHistogram& h) {
  Json j = Json::array();
  for (const auto& [bucket, count] : h) j.push_back({bucket, count});
  return j;
}

Json QuantilesJson(const temporal::DayHistogram& h) {
  Json j = Json::object();
  for (const auto& [name, q] : {std::pair{"min", 0.0}, {"p25", 0.25}, {"p50", 0.5}, {"p75", 0.75}, {"p90", 0.9},
                                {"p99", 0.99}, {"max", 1.0}}) {
    const auto v = HistogramQuantile(h, q);
    j[name] = v ? Json(*v) : Json(nullptr);
  }
  return j;
}

Json FindingJson(const Finding& f) {
  Json j;
  j["rule"] = RuleName(f.rule());
  j["severity"] = SeverityName(f.severity());
  if (!f.fields().empty()) j["fields"] = f.fields();
  if (!f.locators().empty()) {
    Json rows = Json::array();
    for (const auto& l : f.locators()) {
      Json r;
      r["row"] = l.ordinal;
      if (!l.key.empty()) r["key"] = l.key;
      rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
  }
  if (f.measured()) {
    j["measured"] = *f.measured();
    j["unit"] = f.unit();
  }
  if (!f.agency().empty()) j["agency"] = f.agency();
  j["message"] = f.message();
  return j;
}

Json ProfilesJson(const std::vector<profile::ColumnProfile>& profiles) {
  Json j = Json::array();
  for (const auto& p : profiles) {
    Json c;
    c["field"] = p.field;
    c["total"] = p.total_rows;
    c["present"] = p.present_count;
    c["blank_pct"] = p.blank_pct();
    c["tier"] = p.total_rows ? Json(profile::TierName(profile::TierFor(p.blank_pct()))) : Json(nullptr);
    Json missing = Json::object();
    for (int k = 1; k < ingest::kSentinelKinds; ++k) {
      if (p.missing_counts[k]) missing[ingest::SentinelName(static_cast<ingest::MissingSentinel>(k))] = p.missing_counts[k];
    }
    c["missing"] = std::move(missing);
    c["distinct"] = p.distinct_count;
    c["approximate"] = p.approximate;
    Json top = Json::array();
    for (const auto& [v, n] : p.top_values) top.push_back({v, n});
    c["top_values"] = std::move(top);
    c["per_agency_present"] = MapJson(p.per_agency_present);
    c["disk_bytes"] = p.disk_bytes;
    j.push_back(std::move(c));
  }
  return j;
}

Json TiersJson(const std::vector<profile::ColumnProfile>& profiles) {
  Json j = Json::array();
  if (profiles.empty() || profiles.front().total_rows == 0) return j;
  for (const auto& t : profile::TierMissingness(profiles)) {
    j.push_back({{"field", t.field}, {"blank_pct", t.blank_pct}, {"tier", profile::TierName(t.tier)}});
  }
  return j;
}

Json DriftJson(const dictionary::DriftReport& d, const std::string& version) {
  Json j;
  j["dictionary_version"] = version;
  j["undocumented_fields"] = d.undocumented_fields;
  j["experimental_fields"] = d.experimental_fields;
  j["unobserved_fields"] = d.unobserved_fields;
  Json values = Json::object();
  for (const auto& [field, v] : d.value_drift) {
    values[field] = {{"declared_size", v.declared_size},
                     {"from_reference", v.from_reference},
                     {"approximate", v.approximate},
                     {"undeclared", MapJson(v.undeclared)},
                     {"unobserved_declared", v.unobserved_declared}};
  }
  j["value_drift"] = std::move(values);
  j["type_violations"] = MapJson(d.type_violations);
  return j;
}

Json HourJson(const temporal::HourSeries& s) {
  Json j;
  j["field"] = s.field;
  j["parsed"] = s.parsed;
  j["on_the_hour"] = s.on_the_hour;
  j["insufficient"] = s.result.insufficient;
  j["mean"] = s.result.mean;
  j["sigma"] = s.result.sigma;
  j["threshold"] = s.result.threshold;
  j["flagged_hours"] = s.result.flagged_hours;
  Json agencies = Json::object();
  for (const auto& [a, h] : s.by_agency) agencies[a] = h;
  j["by_agency"] = std::move(agencies);
  return j;
}

Json TemporalJson(const temporal::TemporalSummary& t) {
  Json j;
  Json d;
  d["computed"] = t.durations;
  d["negative"] = t.negative;
  d["zero"] = t.zero;
  d["extreme"] = t.extreme;
  d["dst_explainable"] = t.dst_explainable;
  d["negative_with_sentinel"] = t.negative_with_sentinel;
  Json by_agency = Json::object();
  for (const auto& [a, n] : t.negative_by_agency) by_agency[a] = {{"count", n.count}, {"min_seconds", n.min_seconds}};
  d["negative_by_agency"] = std::move(by_agency);
  d["quantiles_days"] = QuantilesJson(t.duration_days);
  d["histogram_days"] = HistogramJson(t.duration_days);
  j["durations"] = std::move(d);
  j["timestamps"] = {{"sentinel_cells", t.sentinel_cells},
                     {"dst_gap_cells", t.gap_cells},
                     {"dst_fold_cells", t.fold_cells},
                     {"unparseable", MapJson(t.unparseable)}};
  Json hours = Json::array();
  for (const auto& s : t.hours) hours.push_back(HourJson(s));
  j["hours"] = std::move(hours);
  j["midnight"] = {{"rows", t.midnight_rows},
                   {"timestamps", t.midnight_timestamps},
                   {"by_agency", MapJson(t.midnight_by_agency)}};
  j["update_lags"] = {{"compared", t.lag_compared},
                      {"post_close", t.post_close},
                      {"infeasible", t.infeasible_lag},
                      {"unparseable", t.lag_unparseable},
                      {"quantiles_days", QuantilesJson(t.lag_days)},
                      {"histogram_days", HistogramJson(t.lag_days)}};
  return j;
}

Json DomainJson(const DomainSection& d) {
  Json j;
  Json m = Json::array();
  for (const auto& r : d.membership) {
    m.push_back({{"field", r.field},
                 {"present", r.present},
                 {"invalid", r.invalid},
                 {"invalid_rate", r.invalid_rate()},
                 {"invalid_values", MapJson(r.invalid_values)},
                 {"present_by_agency", MapJson(r.present_by_agency)},
                 {"invalid_by_agency", MapJson(r.invalid_by_agency)}});
  }
  j["membership"] = std::move(m);
  j["geo"] = {{"checked", d.geo.checked}, {"out_of_bounds", d.geo.out_of_bounds}};
  j["unique"] = {{"field", d.unique.field},
                 {"checked", d.unique.checked},
                 {"duplicate_values", d.unique.duplicate_values},
                 {"duplicate_rows", d.unique.duplicate_rows},
                 {"missing", d.unique.missing}};
  Json p = Json::array();
  for (const auto& r : d.precision) {
    Json hist = Json::object();
    for (const auto& [digits, n] : r.decimal_digit_histogram) hist[std::to_string(digits)] = n;
    p.push_back({{"field", r.field}, {"flagged", r.flagged_count}, {"decimal_digits", std::move(hist)}});
  }
  j["precision"] = std::move(p);
  return j;
}

Json RedundancyJson(const RedundancySection& r) {
  Json j;
  Json pairs = Json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back({{"field_a", p.field_a},
                     {"field_b", p.field_b},
                     {"rows", p.rows_total},
                     {"both_blank", p.both_blank},
                     {"one_blank", p.one_blank},
                     {"both_present", p.both_present},
                     {"exact_match", p.exact_match},
                     {"normalized", p.normalized},
                     {"normalized_match", p.normalized_match},
                     {"rate_both_present", OptionalRate(p.match_rate_both_present())},
                     {"rate_nonblank", OptionalRate(p.match_rate_nonblank())},
                     {"normalization_gain", OptionalRate(p.normalization_gain())},
                     {"verdict", redundancy::VerdictName(redundancy::Classify(p, r.thresholds))}});
  }
  j["pairs"] = std::move(pairs);
  Json concat = Json::array();
  for (const auto& c : r.concatenations) {
    concat.push_back({{"target", c.target},
                      {"part_a", c.part_a},
                      {"part_b", c.part_b},
                      {"pattern", c.pattern},
                      {"all_present", c.all_present},
                      {"matches", c.matches},
                      {"rate", OptionalRate(c.rate())},
                      {"reconstructible", c.reconstructible()}});
  }
  j["concatenations"] = std::move(concat);
  Json deps = Json::array();
  for (const auto& d : r.dependencies) {
    deps.push_back({{"determinant", d.determinant},
                    {"dependent", d.dependent},
                    {"rows", d.rows},
                    {"determinant_values", d.mapping.size()},
                    {"holds", d.holds()},
                    {"truncated", d.truncated},
                    {"violations", d.violations()}});
  }
  j["dependencies"] = std::move(deps);
  return j;
}

void MarkdownTable(std::ostringstream& md, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
  auto line = [&](const std::vector<std::string>& cells) {
    md << "|";
    for (const auto& c : cells) {
      std::string esc;
      for (char ch : c) {
        if (ch == '|') esc += "\\|";
        else if (ch == '\n' || ch == '\r') esc += ' ';
        else esc += ch;
      }
      md << " " << esc << " |";
    }
    md << "\n";
  };
  line(header);
  md << "|";
  for (size_t i = 0; i < header.size(); ++i) md << " --- |";
  md << "\n";
  for (const auto& r : rows) line(r);
  md << "\n";
}

std::string Locator(const Finding& f) {
  if (f.locators().empty()) return "";
  const auto& l = f.locators().front();
  std::string s = "row " + std::to_string(l.ordinal);
  if (!l.key.empty()) s += " (key " + l.key + ")";
  if (f.locators().size() > 1) s += " +" + std::to_string(f.locators().size() - 1) + " more";
  return s;
}

constexpr size_t kMarkdownSample = 10;

void MarkdownFindings(std::ostringstream& md, const AuditReport& r) {
  md << "## Findings\n\n";
  if (r.findings.empty()) {
    md << "No findings.\n\n";
    return;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : r.findings) {
    rows.push_back({std::string(RuleName(s.rule)), std::string(SeverityName(s.severity)), std::to_string(s.count)});
  }
  MarkdownTable(md, {"rule", "severity", "count"}, rows);
  for (const auto& s : r.findings) {
    md << "### " << RuleName(s.rule) << " (" << s.count << ")\n\n";
    md << LookupRule(s.rule).summary << ".\n\n";
    const size_t n = std::min(s.sample.size(), kMarkdownSample);
    for (size_t i = 0; i < n; ++i) {
      const auto& f = s.sample[i];
      md << "- ";
      const auto loc = Locator(f);
      if (!loc.empty()) md << loc << ": ";
      md << f.message() << "\n";
    }
    if (s.count > n) md << "- ... " << (s.count - n) << " more\n";
    md << "\n";
  }
}

void MarkdownTiers(std::ostringstream& md, const std::vector<profile::ColumnProfile>& profiles) {
  if (profiles.empty() || profiles.front().total_rows == 0) return;
  md << "## Missingness tiers\n\n";
  const auto tiers = profile::TierMissingness(profiles);
  for (auto tier : {profile::Tier::kMostlyEmpty, profile::Tier::kPartiallyEmpty, profile::Tier::kFewNoneEmpty}) {
    size_t n = 0;
    for (const auto& t : tiers) n += t.tier == tier;
    md << "- " << profile::TierName(tier) << ": " << n << " fields\n";
  }
  md << "\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& t : tiers) rows.push_back({t.field, profile::FormatPct(t.blank_pct), std::string(profile::TierName(t.tier))});
  MarkdownTable(md, {"field", "blank %", "tier"}, rows);
}

void MarkdownAgencies(std::ostringstream& md, const AgencyShare& a) {
  md << "## Agency concentration\n\n";
  md << "Top " << a.top.size() << " values of " << a.field << " account for "
     << profile::FormatPct(100.0 * a.top_share) << "% of " << a.rows << " rows"
     << (a.approximate ? " (approximate)" : "") << ".\n\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& [v, n] : a.top) rows.push_back({v, std::to_string(n), Pct(n, a.rows)});
  MarkdownTable(md, {"agency", "rows", "share"}, rows);
}

void MarkdownDistribution(std::ostringstream& md, const std::string& title, const temporal::DayHistogram& h) {
  uint64_t n = 0;
  for (const auto& [b, c] : h) n += c;
  md << "### " << title << "\n\n";
  if (n == 0) {
    md << "No observations.\n\n";
    return;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& [name, q] : {std::pair{"min", 0.0}, {"p25", 0.25}, {"median", 0.5}, {"p75", 0.75}, {"p90", 0.9},
                                {"p99", 0.99}, {"max", 1.0}}) {
    rows.push_back({name, std::to_string(*HistogramQuantile(h, q))});
  }
  MarkdownTable(md, {"statistic", "days"}, rows);
  const std::pair<const char*, std::pair<int64_t, int64_t>> bands[] = {
      {"< 0", {INT64_MIN, -1}}, {"0", {0, 0}},         {"1-7", {1, 7}},
      {"8-30", {8, 30}},        {"31-365", {31, 365}}, {"> 365", {366, INT64_MAX}}};
  rows.clear();
  for (const auto& [label, range] : bands) {
    uint64_t c = 0;
    for (auto it = h.lower_bound(range.first); it != h.end() && it->first <= range.second; ++it) c += it->second;
    rows.push_back({label, std::to_string(c), Pct(c, n)});
  }
  MarkdownTable(md, {"days", "count", "share"}, rows);
}

void MarkdownTemporal(std::ostringstream& md, const temporal::TemporalSummary& t) {
  md << "## Timestamps\n\n";
  md << "- durations computed: " << t.durations << "\n";
  md << "- negative: " << t.negative << " (" << t.dst_explainable << " explainable by a DST fold, "
     << t.negative_with_sentinel << " involving a sentinel date)\n";
  md << "- zero: " << t.zero << "\n";
  md << "- extreme: " << t.extreme << "\n";
  md << "- sentinel-date cells: " << t.sentinel_cells << "\n";
  md << "- DST gap cells: " << t.gap_cells << ", fold cells: " << t.fold_cells << "\n";
  md << "- rows with a midnight-exact timestamp: " << t.midnight_rows << "\n\n";
  if (!t.negative_by_agency.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [a, n] : t.negative_by_agency) rows.push_back({a, std::to_string(n.count), Days(n.min_seconds)});
    MarkdownTable(md, {"agency", "negative durations", "most negative (days)"}, rows);
  }
  MarkdownDistribution(md, "Duration distribution (days, closed minus created)", t.duration_days);
  for (const auto& s : t.hours) {
    md << "### On-the-hour timestamps: " << s.field << "\n\n";
    if (s.result.insufficient) {
      md << "Too few parsed timestamps (" << s.parsed << ") for spike detection.\n\n";
      continue;
    }
    md << "Mean " << Num(s.result.mean) << ", sigma " << Num(s.result.sigma) << ", threshold "
       << Num(s.result.threshold) << ".\n\n";
    std::vector<std::vector<std::string>> rows;
    for (int h = 0; h < 24; ++h) {
      const bool flagged =
          std::find(s.result.flagged_hours.begin(), s.result.flagged_hours.end(), h) != s.result.flagged_hours.end();
      rows.push_back({Num(h, "%02.0f") + ":00", std::to_string(s.on_the_hour[static_cast<size_t>(h)]), flagged ? "spike" : ""});
    }
    MarkdownTable(md, {"hour", "count", "flag"}, rows);
  }
  md << "### Resolution updates after closing\n\n";
  md << "- compared: " << t.lag_compared << "\n";
  md << "- beyond the post-close window: " << t.post_close << "\n";
  md << "- infeasible lag: " << t.infeasible_lag << "\n\n";
  MarkdownDistribution(md, "Update lag distribution (days, updated minus closed)", t.lag_days);
}

void MarkdownDomain(std::ostringstream& md, const DomainSection& d) {
  md << "## Domain compliance\n\n";
  if (!d.membership.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& m : d.membership) {
      rows.push_back({m.field, std::to_string(m.present), std::to_string(m.invalid), Pct(m.invalid, m.present)});
    }
    MarkdownTable(md, {"field", "present", "invalid", "invalid %"}, rows);
  }
  md << "- coordinates checked: " << d.geo.checked << ", out of bounds: " << d.geo.out_of_bounds << "\n";
  if (!d.unique.field.empty()) {
    md << "- " << d.unique.field << ": " << d.unique.duplicate_values << " duplicated values, "
       << d.unique.duplicate_rows << " extra rows, " << d.unique.missing << " missing\n";
  }
  for (const auto& p : d.precision) {
    md << "- " << p.field << ": " << p.flagged_count << " values exceed the decimal limit";
    if (!p.decimal_digit_histogram.empty()) md << " (max " << p.decimal_digit_histogram.rbegin()->first << " digits)";
    md << "\n";
  }
  md << "\n";
}

void MarkdownRedundancy(std::ostringstream& md, const RedundancySection& r) {
  md << "## Redundant columns\n\n";
  if (!r.pairs.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : r.pairs) {
      const auto rate = p.match_rate_both_present();
      rows.push_back({p.field_a, p.field_b, std::to_string(p.both_present),
                      rate ? profile::FormatPct(100 * *rate) + "%" : "n/a",
                      std::string(redundancy::VerdictName(redundancy::Classify(p, r.thresholds)))});
    }
    MarkdownTable(md, {"field a", "field b", "both present", "match", "verdict"}, rows);
  }
  for (const auto& c : r.concatenations) {
    const auto rate = c.rate();
    md << "- " << c.target << " = " << c.pattern << " over " << c.part_a << ", " << c.part_b << ": "
       << (rate ? profile::FormatPct(100 * *rate) + "%" : "n/a") << " of " << c.all_present << " rows\n";
  }
  for (const auto& d : r.dependencies) {
    md << "- " << d.determinant << " -> " << d.dependent << ": " << (d.holds() ? "holds" : "violated") << " over "
       << d.mapping.size() << " values\n";
  }
  md << "\n";
}

void MarkdownDrift(std::ostringstream& md, const dictionary::DriftReport& d, const std::string& version) {
  md << "## Dictionary drift\n\n";
  if (!version.empty()) md << "Dictionary: " << version << "\n\n";
  auto list = [&](const char* label, const std::vector<std::string>& v) {
    md << "- " << label << " (" << v.size() << ")";
    if (!v.empty()) {
      md << ": ";
      for (size_t i = 0; i < v.size(); ++i) md << (i ? ", " : "") << v[i];
    }
    md << "\n";
  };
  list("undocumented fields", d.undocumented_fields);
  list("experimental fields", d.experimental_fields);
  list("declared but absent fields", d.unobserved_fields);
  md << "\n";
  if (!d.value_drift.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [f, v] : d.value_drift) {
      rows.push_back({f, std::to_string(v.declared_size), std::to_string(v.undeclared.size()),
                      std::to_string(v.unobserved_declared.size())});
    }
    MarkdownTable(md, {"field", "declared values", "undeclared observed", "declared unobserved"}, rows);
  }
  if (!d.type_violations.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [f, n] : d.type_violations) rows.push_back({f, std::to_string(n)});
    MarkdownTable(md, {"field", "type violations"}, rows);
  }
}

void WriteFindingsCsv(const std::vector<RuleSection>& sections, const std::string& path) {
  ingest::CsvWriter out(path);
  out.WriteRow({"rule", "severity", "row", "key", "fields", "measured", "unit", "agency", "message"});
  for (const auto& s : sections) {
    for (const auto& f : s.sample) {
      std::string row, key, fields, measured;
      if (!f.locators().empty()) {
        row = std::to_string(f.locators().front().ordinal);
        key = f.locators().front().key;
      }
      for (const auto& name : f.fields()) fields += (fields.empty() ? "" : "|") + name;
      if (f.measured()) measured = Num(*f.measured(), "%.17g");
      out.WriteRow({RuleName(f.rule()), SeverityName(f.severity()), row, key, fields, measured, f.unit(), f.agency(),
                    f.message()});
    }
  }
  out.Close();
}

void WriteCountsCsv(const std::vector<RuleSection>& sections, const std::string& path) {
  ingest::CsvWriter out(path);
  out.WriteRow({"rule", "severity", "count"});
  for (const auto& s : sections) {
    const std::string n = std::to_string(s.count);
    out.WriteRow({RuleName(s.rule), SeverityName(s.severity), n});
  }
  out.Close();
}

void WriteHoursCsv(const std::vector<temporal::HourSeries>& hours, const std::string& path) {
  ingest::CsvWriter out(path);
  out.WriteRow({"field", "hour", "count", "flagged"});
  for (const auto& s : hours) {
    for (int h = 0; h < 24; ++h) {
      const bool flagged =
          std::find(s.result.flagged_hours.begin(), s.result.flagged_hours.end(), h) != s.result.flagged_hours.end();
      const std::string hour = std::to_string(h);
      const std::string count = std::to_string(s.on_the_hour[static_cast<size_t>(h)]);
      out.WriteRow({s.field, hour, count, flagged ? "yes" : "no"});
    }
  }
  out.Close();
}

}  // namespace

uint64_t AuditReport::findings_total() const {
  uint64_t n = 0;
  for (const auto& s : findings) n += s.count;
  return n;
}

AgencyShare ComputeAgencyShare(const std::string& field, const dictionary::ObservedValues& observed, size_t k) {
  AgencyShare share;
  share.field = field;
  share.k = k;
  share.approximate = observed.approximate;
  for (const auto& [v, n] : observed.counts) share.rows += n;
  if (share.rows == 0 || k == 0) return share;
  const auto c = profile::ComputeConcentration(observed.counts, k);
  share.top_share = c.top_k_share;
  share.top.assign(c.sorted.begin(), c.sorted.begin() + static_cast<std::ptrdiff_t>(std::min(k, c.sorted.size())));
  return share;
}

std::optional<int64_t> HistogramQuantile(const temporal::DayHistogram& histogram, double q) {
  uint64_t n = 0;
  for (const auto& [b, c] : histogram) n += c;
  if (n == 0) return std::nullopt;
  auto rank = static_cast<uint64_t>(std::ceil(q * static_cast<double>(n)));
  rank = std::clamp<uint64_t>(rank, 1, n);
  uint64_t seen = 0;
  for (const auto& [b, c] : histogram) {
    seen += c;
    if (seen >= rank) return b;
  }
  return histogram.rbegin()->first;
}

std::string ReportToJson(const AuditReport& r) {
  Json j;
  j["format"] = "odqa-report/1";
  j["command"] = r.command;
  j["dataset"] = {{"source", r.dataset.source},
                  {"sha256", r.dataset.sha256},
                  {"bytes", r.dataset.bytes},
                  {"rows", r.dataset.rows},
                  {"rows_evaluated", r.dataset.rows_evaluated},
                  {"ragged_rows", r.dataset.ragged_rows},
                  {"malformed_rows", r.dataset.malformed_rows},
                  {"fields", r.dataset.fields}};
  j["config_sha256"] = r.config_sha256;
  j["severity_threshold"] = SeverityName(r.threshold);
  j["exit_status"] = r.exit_status();
  j["findings_total"] = r.findings_total();
  Json counts = Json::object();
  for (const auto& s : r.findings) counts[std::string(RuleName(s.rule))] = s.count;
  j["finding_counts"] = std::move(counts);
  Json findings = Json::object();
  for (const auto& s : r.findings) {
    Json sample = Json::array();
    for (const auto& f : s.sample) sample.push_back(FindingJson(f));
    findings[std::string(RuleName(s.rule))] = {
        {"severity", SeverityName(s.severity)}, {"count", s.count}, {"sample", std::move(sample)}};
  }
  j["findings"] = std::move(findings);
  if (r.profiles) {
    j["profiles"] = ProfilesJson(*r.profiles);
    j["tiers"] = TiersJson(*r.profiles);
  }
  if (r.agencies) {
    Json top = Json::array();
    for (const auto& [v, n] : r.agencies->top) top.push_back({v, n});
    j["agency_concentration"] = {{"field", r.agencies->field}, {"k", r.agencies->k},
                                 {"rows", r.agencies->rows},   {"top_share", r.agencies->top_share},
                                 {"top", std::move(top)},      {"approximate", r.agencies->approximate}};
  }
  if (r.drift) j["drift"] = DriftJson(*r.drift, r.dictionary_version);
  if (r.temporal) j["temporal"] = TemporalJson(*r.temporal);
  if (r.domain) j["domain"] = DomainJson(*r.domain);
  if (r.redundancy) j["redundancy"] = RedundancyJson(*r.redundancy);
  if (r.plan) {
    j["plan"] = {{"path", r.plan->path},
                 {"baseline_bytes", r.plan->baseline_bytes},
                 {"estimated_total_saved", r.plan->estimated_total_saved},
                 {"actions", r.plan->actions}};
  }
  return j.dump(2) + "\n";
}

std::string ReportToMarkdown(const AuditReport& r) {
  std::ostringstream md;
  md << "# Data quality report: " << r.command << "\n\n";
  md << "- source: " << r.dataset.source << "\n";
  md << "- sha256: " << r.dataset.sha256 << "\n";
  md << "- rows: " << r.dataset.rows << " (" << r.dataset.rows_evaluated << " evaluated, " << r.dataset.ragged_rows
     << " ragged, " << r.dataset.malformed_rows << " malformed)\n";
  md << "- fields: " << r.dataset.fields.size() << "\n";
  md << "- findings: " << r.findings_total() << "\n";
  md << "- severity threshold: " << SeverityName(r.threshold) << ", exit status " << r.exit_status() << "\n\n";
  MarkdownFindings(md, r);
  if (r.profiles) MarkdownTiers(md, *r.profiles);
  if (r.agencies && r.agencies->rows) MarkdownAgencies(md, *r.agencies);
  if (r.temporal) MarkdownTemporal(md, *r.temporal);
  if (r.domain) MarkdownDomain(md, *r.domain);
  if (r.redundancy) MarkdownRedundancy(md, *r.redundancy);
  if (r.drift) MarkdownDrift(md, *r.drift, r.dictionary_version);
  if (r.plan) {
    md << "## Reduction plan\n\n";
    md << r.plan->actions << " actions in " << r.plan->path << ", estimated saving " << r.plan->estimated_total_saved
       << " of " << r.plan->baseline_bytes << " bytes (" << Pct(r.plan->estimated_total_saved, r.plan->baseline_bytes)
       << ").\n\n";
  }
  std::string text = md.str();
  while (text.size() > 1 && text[text.size() - 1] == '\n' && text[text.size() - 2] == '\n') text.pop_back();
  return text;
}

unsigned ParseFormats(std::string_view list) {
  unsigned formats = 0;
  size_t start = 0;
  while (start <= list.size()) {
    size_t comma = list.find(',', start);
    if (comma == std::string_view::npos) comma = list.size();
    const auto name = ingest::Trim(list.substr(start, comma - start));
    if (name == "json") formats |= kJson;
    else if (name == "markdown" || name == "md") formats |= kMarkdown;
    else if (name == "csv") formats |= kCsv;
    else ThrowConfig("unknown output format '" + std::string(name) + "' (expected json, markdown, csv)");
    start = comma + 1;
  }
  return formats;
}

void WriteText(const std::string& path, const std::string& text) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) ThrowIo("cannot write '" + path + "': " + std::strerror(errno));
  const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
  if (std::fclose(f) != 0 || !ok) ThrowIo("cannot write '" + path + "'");
}

std::vector<std::string> WriteReport(const AuditReport& r, const std::string& out_dir, unsigned formats) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) ThrowIo("cannot create output directory '" + out_dir + "': " + ec.message());
  const std::filesystem::path dir(out_dir);
  std::vector<std::string> written;
  auto path = [&](const char* name) {
    written.push_back((dir / name).string());
    return written.back();
  };
  if (formats & kJson) WriteText(path("report.json"), ReportToJson(r));
  if (formats & kMarkdown) WriteText(path("report.md"), ReportToMarkdown(r));
  if (formats & kCsv) {
    WriteFindingsCsv(r.findings, path("findings.csv"));
    WriteCountsCsv(r.findings, path("finding_counts.csv"));
    if (r.profiles) profile::WriteProfilesCsv(*r.profiles, path("profiles.csv"));
    if (r.redundancy) redundancy::WritePairsCsv(r.redundancy->pairs, r.redundancy->thresholds, path("pairs.csv"));
    if (r.temporal) {
      temporal::WriteHistogramCsv(r.temporal->duration_days, path("durations.csv"));
      temporal::WriteHistogramCsv(r.temporal->lag_days, path("update_lags.csv"));
      WriteHoursCsv(r.temporal->hours, path("hours.csv"));
    }
  }
  return written;
}

}  // namespace odqa::report
