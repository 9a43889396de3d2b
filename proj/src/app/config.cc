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

#include "odqa/app/config.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "odqa/core/digest.h"
#include "odqa/core/error.h"

namespace odqa::app {

namespace {

using Json = nlohmann::ordered_json;

/// Typed access to one JSON object that remembers which keys were read, so
/// typos surface as "unknown key" errors instead of silently using defaults.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) ThrowConfig(Where() + " must be an object");
  }

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) ThrowConfig("unknown config key '" + Join(k) + "'");
    }
  }

  bool Has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const Json& Raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string Join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void String(const std::string& key, std::string& out) {
    if (!Has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_string()) Bad(key, "a string");
    out = v.get<std::string>();
  }

  std::string RequiredString(const std::string& key) {
    if (!Has(key)) ThrowConfig("missing required config key '" + Join(key) + "'");
    std::string out;
    String(key, out);
    if (out.empty()) Bad(key, "a non-empty string");
    return out;
  }

  void Bool(const std::string& key, bool& out) {
    if (!Has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) Bad(key, "true or false");
    out = v.get<bool>();
  }

  void Double(const std::string& key, double& out) {
    if (!Has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_number()) Bad(key, "a number");
    out = v.get<double>();
  }

  template <typename Int>
  void Integer(const std::string& key, Int& out, long long min = 0) {
    if (!Has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < min) Bad(key, "an integer >= " + std::to_string(min));
    out = static_cast<Int>(v.get<long long>());
  }

  void Strings(const std::string& key, std::vector<std::string>& out) {
    if (!Has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_array()) Bad(key, "an array of strings");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_string()) Bad(key, "an array of strings");
      out.push_back(e.get<std::string>());
    }
  }

  Section Child(const std::string& key) { return Section(Raw(key), Join(key)); }

  [[noreturn]] void Bad(const std::string& key, const std::string& expected) const {
    ThrowConfig("config key '" + Join(key) + "' must be " + expected);
  }

 private:
  std::string Where() const { return path_.empty() ? "config" : "config key '" + path_ + "'"; }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string Resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return p;
  const std::filesystem::path path(p);
  return path.is_absolute() ? p : (base / path).lexically_normal().string();
}

void ParseFields(Section s, FieldMap& f) {
  s.String("key", f.key);
  s.String("created", f.created);
  s.String("closed", f.closed);
  s.String("updated", f.updated);
  s.String("agency", f.agency);
  s.String("latitude", f.latitude);
  s.String("longitude", f.longitude);
  s.Strings("other_dates", f.other_dates);
}

void ParseZone(Section s, ZoneConfig& z) {
  s.String("rules", z.rules);
  s.Integer("first_year", z.first_year, 1800);
  s.Integer("last_year", z.last_year, 1800);
  s.Integer("offset_seconds", z.offset_seconds, -86400);
  if (s.Has("transitions")) {
    const auto& arr = s.Raw("transitions");
    if (!arr.is_array()) s.Bad("transitions", "an array");
    for (size_t i = 0; i < arr.size(); ++i) {
      Section t(arr[i], s.Join("transitions[" + std::to_string(i) + "]"));
      ingest::ZoneTransition tr;
      t.Integer("utc", tr.utc, INT64_MIN);
      t.Integer("offset_before", tr.offset_before, -86400);
      t.Integer("offset_after", tr.offset_after, -86400);
      z.transitions.push_back(tr);
    }
  }
  if (z.rules != "america_new_york" && z.rules != "fixed" && z.rules != "table") {
    s.Bad("rules", "one of america_new_york, fixed, table");
  }
  if (z.first_year > z.last_year) s.Bad("first_year", "no later than last_year");
}

void ParseTimestamps(Section s, Config& c) {
  s.Strings("formats", c.timestamp_formats);
  if (c.timestamp_formats.empty()) s.Bad("formats", "a non-empty array");
  if (s.Has("zone")) ParseZone(s.Child("zone"), c.zone);
}

void ParseThresholds(Section s, Config& c) {
  s.Double("sigma_multiplier", c.spikes.sigma_multiplier);
  s.Integer("extreme_cutoff_days", c.spikes.extreme_cutoff_days, 1);
  s.Integer("post_close_window_days", c.spikes.post_close_window_days, 0);
  if (s.Has("sentinel_dates")) {
    std::vector<std::string> dates;
    s.Strings("sentinel_dates", dates);
    c.spikes.sentinel_dates.clear();
    for (const auto& d : dates) {
      const auto day = ingest::ParseIsoDate(d);
      if (!day) s.Bad("sentinel_dates", "an array of YYYY-MM-DD dates");
      c.spikes.sentinel_dates.insert(*day);
    }
  }
  s.Integer("max_decimals", c.max_decimals, 0);
  s.Strings("precision_fields", c.precision_fields);
  if (s.Has("geo_bounds")) {
    Section g = s.Child("geo_bounds");
    g.Double("lat_min", c.geo_bounds.lat_min);
    g.Double("lat_max", c.geo_bounds.lat_max);
    g.Double("lon_min", c.geo_bounds.lon_min);
    g.Double("lon_max", c.geo_bounds.lon_max);
  }
  s.Double("near_duplicate", c.redundancy.thresholds.near_duplicate);
  s.Bool("key_required", c.key_required);
  s.Bool("case_fold_domains", c.case_fold_domains);
}

void ParseProfile(Section s, Config& c) {
  s.Integer("distinct_cap", c.profile.distinct_cap, 1);
  s.Integer("exact_entry_budget", c.profile.exact_entry_budget, 1);
  s.Integer("heavy_hitters", c.profile.heavy_hitters, 1);
  s.Integer("hll_precision", c.profile.hll_precision, 4);
  s.Integer("top_k", c.profile.top_k, 0);
  s.Integer("max_agencies", c.profile.max_agencies, 1);
  s.Integer("agency_top_k", c.agency_top_k, 1);
  if (c.profile.hll_precision > 18) s.Bad("hll_precision", "between 4 and 18");
}

void ParseRedundancy(Section s, redundancy::RedundancyConfig& r) {
  if (s.Has("pairs")) {
    const auto& arr = s.Raw("pairs");
    if (!arr.is_array()) s.Bad("pairs", "an array");
    for (size_t i = 0; i < arr.size(); ++i) {
      Section p(arr[i], s.Join("pairs[" + std::to_string(i) + "]"));
      redundancy::PairSpec spec;
      spec.a = p.RequiredString("a");
      spec.b = p.RequiredString("b");
      p.Bool("normalize", spec.normalize);
      r.pairs.push_back(std::move(spec));
    }
  }
  s.Strings("auto_candidates", r.auto_candidates);
  if (s.Has("concatenations")) {
    const auto& arr = s.Raw("concatenations");
    if (!arr.is_array()) s.Bad("concatenations", "an array");
    r.concatenations.clear();
    for (size_t i = 0; i < arr.size(); ++i) {
      Section p(arr[i], s.Join("concatenations[" + std::to_string(i) + "]"));
      redundancy::ConcatSpec spec;
      spec.target = p.RequiredString("target");
      spec.part_a = p.RequiredString("part_a");
      spec.part_b = p.RequiredString("part_b");
      p.String("pattern", spec.pattern);
      redundancy::ConcatTemplate::Compile(spec.pattern);
      r.concatenations.push_back(std::move(spec));
    }
  }
  if (s.Has("functional_dependencies")) {
    const auto& arr = s.Raw("functional_dependencies");
    if (!arr.is_array()) s.Bad("functional_dependencies", "an array");
    r.dependencies.clear();
    for (size_t i = 0; i < arr.size(); ++i) {
      Section p(arr[i], s.Join("functional_dependencies[" + std::to_string(i) + "]"));
      r.dependencies.push_back({p.RequiredString("determinant"), p.RequiredString("dependent")});
    }
  }
  if (s.Has("street_abbreviations")) {
    const auto& obj = s.Raw("street_abbreviations");
    if (!obj.is_object()) s.Bad("street_abbreviations", "an object of abbreviation -> expansion");
    for (const auto& [k, v] : obj.items()) {
      if (!v.is_string()) s.Bad("street_abbreviations", "an object of abbreviation -> expansion");
      r.street_abbreviations.emplace_back(k, v.get<std::string>());
    }
  }
  s.Integer("dependency_cap", r.dependency_cap, 1);
}

void ParsePlan(Section s, reduce::PlanPolicy& p) {
  s.Bool("drop_duplicates", p.drop_duplicates);
  s.Bool("drop_concatenations", p.drop_concatenations);
  s.Bool("drop_functional_dependents", p.drop_functional_dependents);
  s.Strings("near_duplicate_drops", p.near_duplicate_drops);
  s.Bool("acknowledge_lossy", p.acknowledge_lossy);
  s.Double("sparse_threshold_pct", p.sparse_threshold_pct);
  s.Integer("encode_cap", p.encode_cap, 1);
  s.Strings("encode_fields", p.encode_fields);
  s.Strings("protect", p.protect);
  if (p.sparse_threshold_pct < 0 || p.sparse_threshold_pct > 100) s.Bad("sparse_threshold_pct", "within [0, 100]");
}

Severity ParseSeverityValue(Section& s, const std::string& key, const std::string& text) {
  const auto sev = ParseSeverity(text);
  if (!sev) s.Bad(key, "one of info, warning, error");
  return *sev;
}

void ParseReport(Section s, Config& c) {
  if (s.Has("severity_threshold")) {
    std::string t;
    s.String("severity_threshold", t);
    c.severity_threshold = ParseSeverityValue(s, "severity_threshold", t);
  }
  if (s.Has("severity_overrides")) {
    const auto& obj = s.Raw("severity_overrides");
    if (!obj.is_object()) s.Bad("severity_overrides", "an object of rule -> severity");
    for (const auto& [rule, sev] : obj.items()) {
      const auto id = ParseRuleId(rule);
      if (!id) ThrowConfig("config key '" + s.Join("severity_overrides") + "' names unknown rule '" + rule + "'");
      if (!sev.is_string()) s.Bad("severity_overrides", "an object of rule -> severity");
      c.severities.Override(*id, ParseSeverityValue(s, "severity_overrides." + rule, sev.get<std::string>()));
    }
  }
  s.Integer("sample_cap", c.sample_cap, 0);
}

}  // namespace

ingest::ZoneRules ZoneConfig::Build() const {
  if (rules == "fixed") return ingest::ZoneRules::FixedOffset(offset_seconds);
  if (rules == "table") return ingest::ZoneRules(offset_seconds, transitions);
  return ingest::ZoneRules::AmericaNewYork(first_year, last_year);
}

ingest::IngestOptions Config::IngestOptionsFor() const {
  ingest::IngestOptions o;
  o.classifier = ingest::MissingClassifier(missing_sentinels);
  o.key_field = fields.key;
  return o;
}

ingest::TimestampParser Config::BuildTimestampParser() const {
  std::vector<ingest::TimestampFormat> formats;
  for (const auto& f : timestamp_formats) formats.push_back(ingest::TimestampFormat::Compile(f));
  return ingest::TimestampParser(std::move(formats), zone.Build());
}

Config ParseConfig(const std::string& text, const std::string& path) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    ThrowConfig("config '" + path + "' is not valid JSON: " + e.what());
  }
  Config c;
  c.path = path;
  c.sha256 = Sha256Hex(text);
  const auto base = std::filesystem::path(path).parent_path();
  {
    Section s(j, "");
    c.input = Resolve(base, s.RequiredString("input"));
    s.String("dictionary", c.dictionary);
    c.dictionary = Resolve(base, c.dictionary);
    if (s.Has("references")) {
      const auto& obj = s.Raw("references");
      if (!obj.is_object()) s.Bad("references", "an object of field -> path");
      for (const auto& [field, p] : obj.items()) {
        if (!p.is_string()) s.Bad("references." + field, "a path string");
        c.references[field] = Resolve(base, p.get<std::string>());
      }
    }
    if (s.Has("fields")) ParseFields(s.Child("fields"), c.fields);
    if (s.Has("timestamps")) ParseTimestamps(s.Child("timestamps"), c);
    s.Strings("missing_sentinels", c.missing_sentinels);
    if (s.Has("thresholds")) ParseThresholds(s.Child("thresholds"), c);
    if (s.Has("profile")) ParseProfile(s.Child("profile"), c);
    if (s.Has("redundancy")) ParseRedundancy(s.Child("redundancy"), c.redundancy);
    if (s.Has("plan")) ParsePlan(s.Child("plan"), c.plan);
    if (s.Has("report")) ParseReport(s.Child("report"), c);
  }
  c.profile.agency_field = c.fields.agency;
  c.plan.key_field = c.fields.key;
  c.spikes.Validate();
  c.geo_bounds.Validate();
  c.zone.Build();
  c.BuildTimestampParser();
  return c;
}

Config LoadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowIo("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str(), path);
}

}  // namespace odqa::app
