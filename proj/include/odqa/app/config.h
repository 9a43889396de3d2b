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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "odqa/core/finding.h"
#include "odqa/ingest/csv.h"
#include "odqa/ingest/timestamp.h"
#include "odqa/profile/profile.h"
#include "odqa/reduce/reduce.h"
#include "odqa/redundancy/redundancy.h"
#include "odqa/report/aggregate.h"
#include "odqa/rules/domain_rules.h"
#include "odqa/temporal/temporal.h"

namespace odqa::app {

struct FieldMap {
  std::string key = "unique_key";
  std::string created = "created_date";
  std::string closed = "closed_date";
  std::string updated = "resolution_action_updated_date";
  std::string agency = "agency";
  std::string latitude = "latitude";
  std::string longitude = "longitude";
  std::vector<std::string> other_dates = {"due_date"};
};

struct ZoneConfig {
  std::string rules = "america_new_york";  // or "fixed", "table"
  int first_year = 1990;
  int last_year = 2040;
  int32_t offset_seconds = 0;  // fixed, and the initial offset of a table
  std::vector<ingest::ZoneTransition> transitions;

  ingest::ZoneRules Build() const;
};

/// Parsed run configuration. Relative paths are resolved against the
/// directory of the config file.
struct Config {
  std::string path;
  std::string sha256;  // of the config file bytes

  std::string input;
  std::string dictionary;                        // optional
  std::map<std::string, std::string> references;  // field -> reference list path
  FieldMap fields;

  std::vector<std::string> timestamp_formats = ingest::DefaultTimestampFormats();
  ZoneConfig zone;
  std::vector<std::string> missing_sentinels;  // extra tokens

  temporal::SpikeConfig spikes;
  rules::GeoBounds geo_bounds;
  int max_decimals = 6;
  std::vector<std::string> precision_fields = {"latitude", "longitude"};
  bool key_required = true;
  bool case_fold_domains = false;
  profile::ProfileOptions profile;
  size_t agency_top_k = 6;

  redundancy::RedundancyConfig redundancy;
  reduce::PlanPolicy plan;

  report::SeverityPolicy severities;
  Severity severity_threshold = Severity::kError;
  size_t sample_cap = 100;

  ingest::IngestOptions IngestOptionsFor() const;
  ingest::TimestampParser BuildTimestampParser() const;
};

/// Reads and validates a JSON config. Throws Error(kConfig) naming the
/// offending key for missing required keys, unknown keys and bad values;
/// Error(kIo) when the file cannot be read.
Config LoadConfig(const std::string& path);
Config ParseConfig(const std::string& text, const std::string& path);

}  // namespace odqa::app
