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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "odqa/core/finding.h"
#include "odqa/ingest/csv.h"
#include "odqa/ingest/timestamp.h"

namespace odqa::temporal {

struct SpikeConfig {
  double sigma_multiplier = 3.0;
  int64_t extreme_cutoff_days = 730;
  int64_t post_close_window_days = 30;
  std::set<int64_t> sentinel_dates = {-25567};  // 1900-01-01 as days since epoch

  /// Throws Config unless every parameter is strictly positive.
  void Validate() const;
};

struct Duration {
  int64_t seconds = 0;
  bool dst_explainable = false;
};

/// closed - created on earliest UTC candidates. dst_explainable is set when
/// that is negative but some candidate pairing is not. nullopt when either
/// side has no candidate (gap times).
std::optional<Duration> ComputeDuration(const ingest::LocalTimestamp& created, const ingest::LocalTimestamp& closed);

struct SpikeResult {
  double mean = 0;
  double sigma = 0;
  double threshold = 0;
  std::vector<int> flagged_hours;
  bool insufficient = false;
};

/// Population mean and sigma over the 24 on-the-hour buckets; flags buckets
/// strictly above mean + k * sigma. `parsed` below 24 marks the result
/// insufficient and flags nothing.
SpikeResult DetectHourSpikes(const std::array<uint64_t, 24>& on_the_hour, uint64_t parsed, const SpikeConfig& config);

bool IsMidnightExact(const ingest::LocalDateTime& t);

using DayHistogram = std::map<int64_t, uint64_t>;

/// Rounds toward negative infinity so -1 s lands in day -1.
int64_t DayBucket(int64_t seconds);

struct HourSeries {
  std::string field;
  std::array<uint64_t, 24> on_the_hour{};
  uint64_t parsed = 0;
  std::map<std::string, std::array<uint64_t, 24>> by_agency;
  SpikeResult result;
};

struct AgencyNegatives {
  uint64_t count = 0;
  int64_t min_seconds = 0;
};

struct TemporalSummary {
  uint64_t durations = 0;  // rows with a computable duration
  uint64_t negative = 0;
  uint64_t zero = 0;
  uint64_t extreme = 0;
  uint64_t dst_explainable = 0;
  uint64_t negative_with_sentinel = 0;
  std::map<std::string, AgencyNegatives> negative_by_agency;
  DayHistogram duration_days;  // sentinel and extreme rows excluded

  uint64_t sentinel_cells = 0;
  uint64_t gap_cells = 0;
  uint64_t fold_cells = 0;
  std::map<std::string, uint64_t> unparseable;

  std::vector<HourSeries> hours;  // created then closed

  uint64_t lag_compared = 0;
  uint64_t post_close = 0;
  uint64_t infeasible_lag = 0;
  uint64_t lag_unparseable = 0;
  DayHistogram lag_days;

  uint64_t midnight_rows = 0;
  uint64_t midnight_timestamps = 0;
  std::map<std::string, uint64_t> midnight_by_agency;
};

struct TemporalFields {
  std::string created = "created_date";
  std::string closed = "closed_date";
  std::string updated = "resolution_action_updated_date";
  std::string agency = "agency";
  /// Further date columns checked for sentinel, gap and parse problems.
  std::vector<std::string> other_dates = {"due_date"};
};

/// Every date rule in one streaming pass. Nothing is kept per row; the
/// distributions are day-bucket histograms.
class TemporalAuditor : public ingest::RowConsumer {
 public:
  TemporalAuditor(TemporalFields fields, SpikeConfig config, const ingest::TimestampParser& parser, FindingSink& sink);

  void Begin(const ingest::RawTable& table) override;
  void Consume(const ingest::Row& row) override;
  void Finish(const ingest::RawTable& table, FindingSink& sink) override;

  const TemporalSummary& summary() const { return summary_; }

 private:
  struct Slot {
    std::string field;
    int index = -1;
  };
  struct Parsed {
    std::optional<ingest::LocalTimestamp> ts;
    bool sentinel = false;
  };

  Parsed ParseCell(const ingest::Row& row, const Slot& slot);
  void CountHour(HourSeries& series, const Parsed& p, std::string_view agency);

  TemporalFields fields_;
  SpikeConfig config_;
  const ingest::TimestampParser& parser_;
  FindingSink& sink_;
  const ingest::RawTable* table_ = nullptr;
  Slot created_, closed_, updated_, agency_;
  std::vector<Slot> others_;
  TemporalSummary summary_;
};

/// "bucket,count"
void WriteHistogramCsv(const DayHistogram& histogram, const std::string& path);

}  // namespace odqa::temporal
