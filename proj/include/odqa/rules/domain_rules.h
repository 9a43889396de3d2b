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

#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "odqa/core/finding.h"
#include "odqa/core/value_counter.h"
#include "odqa/ingest/csv.h"

namespace odqa::rules {

struct GeoBounds {
  double lat_min = 40.49;
  double lat_max = 40.92;
  double lon_min = -74.27;
  double lon_max = -73.68;

  /// Throws Config on inverted or out-of-range bounds.
  void Validate() const;
  /// Closed intervals on both axes.
  bool Contains(double lat, double lon) const;
};

struct MembershipResult {
  std::string field;
  uint64_t present = 0;
  uint64_t invalid = 0;
  std::map<std::string, uint64_t> invalid_values;
  std::map<std::string, uint64_t> present_by_agency;
  std::map<std::string, uint64_t> invalid_by_agency;

  double invalid_rate() const;
};

struct PrecisionAuditResult {
  std::string field;
  std::map<int, uint64_t> decimal_digit_histogram;
  uint64_t flagged_count = 0;
};

struct GeoResult {
  uint64_t checked = 0;
  uint64_t out_of_bounds = 0;
};

struct UniqueResult {
  std::string field;
  uint64_t checked = 0;
  uint64_t duplicate_values = 0;
  uint64_t duplicate_rows = 0;  // rows beyond the first occurrence
  uint64_t missing = 0;
};

struct ReferenceSpec {
  std::string field;
  std::unordered_set<std::string> tokens;
};

struct DomainRulesConfig {
  std::vector<ReferenceSpec> references;
  std::string lat_field = "latitude";
  std::string lon_field = "longitude";
  GeoBounds bounds;
  std::string key_field = "unique_key";
  bool key_required = true;
  std::vector<std::string> precision_fields = {"latitude", "longitude"};
  int max_decimals = 6;
  std::string agency_field = "agency";
};

/// Zip-style reference membership, geographic bounds, key uniqueness and
/// the decimal-precision audit in one pass. Keys are copied into an arena
/// and checked by sort-and-scan at the end.
class DomainAuditor : public ingest::RowConsumer {
 public:
  DomainAuditor(DomainRulesConfig config, FindingSink& sink);

  void Begin(const ingest::RawTable& table) override;
  void Consume(const ingest::Row& row) override;
  void Finish(const ingest::RawTable& table, FindingSink& sink) override;

  const std::vector<MembershipResult>& membership() const { return membership_; }
  const GeoResult& geo() const { return geo_; }
  const UniqueResult& unique() const { return unique_; }
  const std::vector<PrecisionAuditResult>& precision() const { return precision_; }

 private:
  struct KeyEntry {
    const char* data;
    uint32_t size;
    uint64_t ordinal;
  };

  DomainRulesConfig config_;
  FindingSink& sink_;
  const ingest::RawTable* table_ = nullptr;
  int agency_index_ = -1;
  std::vector<int> reference_index_;
  std::vector<MembershipResult> membership_;
  int lat_index_ = -1;
  int lon_index_ = -1;
  GeoResult geo_;
  int key_index_ = -1;
  StringArena keys_;
  std::vector<KeyEntry> key_entries_;
  UniqueResult unique_;
  std::vector<int> precision_index_;
  std::vector<PrecisionAuditResult> precision_;
};

/// Digits after the decimal point in the trimmed text; -1 when the text is
/// not a plain decimal.
int DecimalDigits(std::string_view raw);

}  // namespace odqa::rules
