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

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "odqa/core/finding.h"
#include "odqa/core/sketch.h"
#include "odqa/core/value_counter.h"
#include "odqa/dictionary/dictionary.h"
#include "odqa/ingest/csv.h"

namespace odqa::profile {

using Frequencies = std::vector<std::pair<std::string, uint64_t>>;

struct ColumnProfile {
  std::string field;
  uint64_t total_rows = 0;
  uint64_t present_count = 0;
  std::array<uint64_t, ingest::kSentinelKinds> missing_counts{};  // indexed by MissingSentinel
  uint64_t distinct_count = 0;
  bool approximate = false;
  Frequencies top_values;  // count desc, value asc
  std::map<std::string, uint64_t> per_agency_present;
  uint64_t disk_bytes = 0;          // all cells, quotes included
  uint64_t present_disk_bytes = 0;  // present cells only

  uint64_t missing_total() const;
  double blank_pct() const;
};

enum class Tier { kMostlyEmpty, kPartiallyEmpty, kFewNoneEmpty };

std::string_view TierName(Tier tier);
/// >= 90 mostly empty, <= 2 few or none empty, partially empty otherwise.
Tier TierFor(double blank_pct);

struct MissingnessTier {
  std::string field;
  double blank_pct = 0;
  Tier tier = Tier::kFewNoneEmpty;
};

/// Sorted by blank_pct descending, then field name. Throws Validation when a
/// profile has no rows.
std::vector<MissingnessTier> TierMissingness(const std::vector<ColumnProfile>& profiles);

struct Concentration {
  double top_k_share = 0;
  std::vector<double> cumulative;  // cumulative[i] = share of the top i + 1
  Frequencies sorted;
};

/// Throws Validation when every count is zero.
Concentration ComputeConcentration(Frequencies frequencies, size_t k);

struct ProfileOptions {
  std::string agency_field = "agency";
  /// Per-column exact distinct values before falling back to sketches.
  size_t distinct_cap = 1'000'000;
  /// Exact entries across all columns; the widest column is demoted first.
  size_t exact_entry_budget = 3'000'000;
  size_t heavy_hitters = 1024;
  int hll_precision = 14;
  size_t top_k = 20;  // 0 keeps every value
  /// Further agencies share the "(other)" bucket.
  size_t max_agencies = 256;
};

/// One-pass column profiler. Exact per-sentinel counts always; exact value
/// counts until a column hits the distinct cap or the shared entry budget,
/// after which it keeps SpaceSaving heavy hitters plus a HyperLogLog
/// estimate and is flagged approximate.
class Profiler : public ingest::RowConsumer {
 public:
  explicit Profiler(ProfileOptions options = {});
  ~Profiler() override;

  void Begin(const ingest::RawTable& table) override;
  void Consume(const ingest::Row& row) override;
  void Finish(const ingest::RawTable& table, FindingSink& sink) override;

  const std::vector<ColumnProfile>& profiles() const { return profiles_; }
  const ColumnProfile* Find(std::string_view field) const;
  bool agency_tracked() const { return agency_index_ >= 0; }

  /// Every observed value with its count when exact, else the heavy hitters.
  dictionary::ObservedValues Observed(std::string_view field) const;
  std::map<std::string, dictionary::ObservedValues> ObservedFor(const std::vector<std::string>& fields) const;

 private:
  struct Column;

  void Demote(Column& column);
  void EnforceBudget();
  uint32_t AgencyId(const ingest::Row& row);

  ProfileOptions options_;
  std::vector<std::string> fields_;
  std::vector<std::unique_ptr<Column>> columns_;
  int agency_index_ = -1;
  ValueCounter agencies_;
  std::vector<std::string> agency_names_;
  size_t exact_entries_ = 0;
  std::vector<ColumnProfile> profiles_;
};

std::string FormatPct(double pct);

/// "field,total,present,blank_pct,tier,distinct"
void WriteProfilesCsv(const std::vector<ColumnProfile>& profiles, const std::string& path);

}  // namespace odqa::profile
