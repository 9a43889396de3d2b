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

#include "odqa/temporal/temporal.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "odqa/core/error.h"

namespace odqa::temporal {

namespace {

std::string Days(int64_t seconds) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f days", static_cast<double>(seconds) / ingest::kSecondsPerDay);
  return buf;
}

std::string AgencyShares(const std::map<std::string, std::array<uint64_t, 24>>& by_agency, int hour) {
  std::vector<std::pair<std::string, uint64_t>> rows;
  uint64_t total = 0;
  for (const auto& [agency, counts] : by_agency) {
    if (counts[static_cast<size_t>(hour)] == 0) continue;
    rows.emplace_back(agency, counts[static_cast<size_t>(hour)]);
    total += counts[static_cast<size_t>(hour)];
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; });
  std::string out;
  for (size_t i = 0; i < rows.size() && i < 3; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " %.1f%%", 100.0 * static_cast<double>(rows[i].second) / static_cast<double>(total));
    out += (i ? ", " : "") + rows[i].first + buf;
  }
  return out;
}

}  // namespace

void SpikeConfig::Validate() const {
  if (!(sigma_multiplier > 0)) ThrowConfig("sigma_multiplier must be positive");
  if (extreme_cutoff_days <= 0) ThrowConfig("extreme_cutoff_days must be positive");
  if (post_close_window_days <= 0) ThrowConfig("post_close_window_days must be positive");
}

std::optional<Duration> ComputeDuration(const ingest::LocalTimestamp& created, const ingest::LocalTimestamp& closed) {
  const auto a = created.earliest();
  const auto b = closed.earliest();
  if (!a || !b) return std::nullopt;
  Duration d{*b - *a, false};
  if (d.seconds < 0) {
    for (int64_t c : created.utc_candidates()) {
      for (int64_t e : closed.utc_candidates()) {
        if (e - c >= 0) d.dst_explainable = true;
      }
    }
  }
  return d;
}

SpikeResult DetectHourSpikes(const std::array<uint64_t, 24>& on_the_hour, uint64_t parsed, const SpikeConfig& config) {
  SpikeResult r;
  __int128 s = 0;
  __int128 q = 0;
  for (uint64_t c : on_the_hour) {
    s += c;
    q += static_cast<__int128>(c) * c;
  }
  const __int128 spread = 24 * q - s * s;  // (24 sigma)^2
  r.mean = static_cast<double>(s) / 24.0;
  r.sigma = std::sqrt(static_cast<double>(spread)) / 24.0;
  r.threshold = r.mean + config.sigma_multiplier * r.sigma;
  if (parsed < 24) {
    r.insufficient = true;
    return r;
  }
  // count > mean + k sigma  <=>  24 count - S > k sqrt(24 Q - S^2), compared
  // squared so that scaling every bucket cannot flip a decision.
  const double k2 = config.sigma_multiplier * config.sigma_multiplier;
  const bool integral = k2 == std::floor(k2) && k2 < 1e9;
  for (int h = 0; h < 24; ++h) {
    const __int128 lhs = 24 * static_cast<__int128>(on_the_hour[static_cast<size_t>(h)]) - s;
    if (lhs <= 0) continue;
    bool flag;
    if (integral) {
      flag = lhs * lhs > static_cast<__int128>(k2) * spread;
    } else {
      flag = static_cast<long double>(lhs) * static_cast<long double>(lhs) >
             static_cast<long double>(k2) * static_cast<long double>(spread);
    }
    if (flag) r.flagged_hours.push_back(h);
  }
  return r;
}

bool IsMidnightExact(const ingest::LocalDateTime& t) { return t.seconds_of_day == 0; }

int64_t DayBucket(int64_t seconds) {
  int64_t q = seconds / ingest::kSecondsPerDay;
  if (seconds % ingest::kSecondsPerDay < 0) --q;
  return q;
}

TemporalAuditor::TemporalAuditor(TemporalFields fields, SpikeConfig config, const ingest::TimestampParser& parser,
                                 FindingSink& sink)
    : fields_(std::move(fields)), config_(std::move(config)), parser_(parser), sink_(sink) {
  config_.Validate();
}

void TemporalAuditor::Begin(const ingest::RawTable& table) {
  table_ = &table;
  auto slot = [&](const std::string& name) { return Slot{name, name.empty() ? -1 : table.FieldIndex(name)}; };
  created_ = slot(fields_.created);
  closed_ = slot(fields_.closed);
  updated_ = slot(fields_.updated);
  agency_ = slot(fields_.agency);
  others_.clear();
  for (const auto& f : fields_.other_dates) {
    if (table.FieldIndex(f) >= 0) others_.push_back(slot(f));
  }
  summary_ = {};
  summary_.hours.resize(2);
  summary_.hours[0].field = fields_.created;
  summary_.hours[1].field = fields_.closed;
}

TemporalAuditor::Parsed TemporalAuditor::ParseCell(const ingest::Row& row, const Slot& slot) {
  Parsed p;
  if (slot.index < 0) return p;
  const auto& cell = row.cells[static_cast<size_t>(slot.index)];
  if (cell.missing()) return p;
  p.ts = parser_.Parse(cell.raw);
  if (!p.ts) {
    ++summary_.unparseable[slot.field];
    sink_.Emit(Finding::Make(RuleId::kUnparseableTimestamp, "'" + std::string(cell.raw) + "' matches no timestamp format")
                   .Field(slot.field)
                   .At(row.ordinal, std::string(row.key(*table_))));
    return p;
  }
  if (p.ts->zone_status == ingest::ZoneStatus::kDstGapInvalid) {
    ++summary_.gap_cells;
    sink_.Emit(Finding::Make(RuleId::kDstGapInvalid,
                             FormatIso(p.ts->local) + " falls in the spring-forward gap and never occurred locally")
                   .Field(slot.field)
                   .At(row.ordinal, std::string(row.key(*table_))));
  } else if (p.ts->zone_status == ingest::ZoneStatus::kDstFoldAmbiguous) {
    ++summary_.fold_cells;
    sink_.Emit(Finding::Make(RuleId::kDstFoldAmbiguous, FormatIso(p.ts->local) + " occurs twice at the fall-back fold")
                   .Field(slot.field)
                   .At(row.ordinal, std::string(row.key(*table_))));
  }
  if (config_.sentinel_dates.count(p.ts->local.days)) {
    p.sentinel = true;
    ++summary_.sentinel_cells;
    sink_.Emit(Finding::Make(RuleId::kSentinelDate, "placeholder date " + FormatIso(p.ts->local))
                   .Field(slot.field)
                   .At(row.ordinal, std::string(row.key(*table_))));
  }
  return p;
}

void TemporalAuditor::CountHour(HourSeries& series, const Parsed& p, std::string_view agency) {
  if (!p.ts || p.sentinel) return;
  ++series.parsed;
  const auto& t = p.ts->local;
  if (t.minute() != 0 || t.second() != 0) return;
  const int h = t.hour();
  ++series.on_the_hour[static_cast<size_t>(h)];
  if (!agency.empty()) ++series.by_agency[std::string(agency)][static_cast<size_t>(h)];
}

void TemporalAuditor::Consume(const ingest::Row& row) {
  std::string_view agency;
  if (agency_.index >= 0 && row.cells[static_cast<size_t>(agency_.index)].present()) {
    agency = row.cells[static_cast<size_t>(agency_.index)].raw;
  }
  const Parsed c = ParseCell(row, created_);
  const Parsed d = ParseCell(row, closed_);
  const Parsed u = ParseCell(row, updated_);
  for (const auto& slot : others_) ParseCell(row, slot);

  CountHour(summary_.hours[0], c, agency);
  CountHour(summary_.hours[1], d, agency);

  const bool c_mid = c.ts && !c.sentinel && IsMidnightExact(c.ts->local);
  const bool d_mid = d.ts && !d.sentinel && IsMidnightExact(d.ts->local);
  if (c_mid || d_mid) {
    ++summary_.midnight_rows;
    summary_.midnight_timestamps += uint64_t{c_mid} + uint64_t{d_mid};
    if (!agency.empty()) ++summary_.midnight_by_agency[std::string(agency)];
    auto f = Finding::Make(RuleId::kMidnightExact, c_mid && d_mid ? "created and closed exactly at 00:00:00"
                                                   : c_mid        ? "created exactly at 00:00:00"
                                                                  : "closed exactly at 00:00:00");
    if (c_mid) f.Field(fields_.created);
    if (d_mid) f.Field(fields_.closed);
    sink_.Emit(std::move(f.At(row.ordinal, std::string(row.key(*table_))).Agency(std::string(agency))));
  }

  if (c.ts && d.ts) {
    if (auto dur = ComputeDuration(*c.ts, *d.ts)) {
      ++summary_.durations;
      const int64_t s = dur->seconds;
      const bool sentinel = c.sentinel || d.sentinel;
      const bool extreme = std::llabs(s) > config_.extreme_cutoff_days * ingest::kSecondsPerDay;
      auto at = [&](Finding f) {
        sink_.Emit(std::move(f.Field(fields_.created)
                                 .Field(fields_.closed)
                                 .At(row.ordinal, std::string(row.key(*table_)))
                                 .Agency(std::string(agency))));
      };
      if (s < 0) {
        ++summary_.negative;
        if (dur->dst_explainable) ++summary_.dst_explainable;
        if (sentinel) ++summary_.negative_with_sentinel;
        if (!agency.empty()) {
          auto& a = summary_.negative_by_agency[std::string(agency)];
          a.min_seconds = a.count == 0 ? s : std::min(a.min_seconds, s);
          ++a.count;
        }
        at(Finding::Make(RuleId::kNegativeDuration,
                         "closed " + Days(-s) + " before created" +
                             (dur->dst_explainable ? "; consistent with the fall-back fold" : ""))
               .Measured(static_cast<double>(s), "seconds"));
      } else if (s == 0) {
        ++summary_.zero;
        at(Finding::Make(RuleId::kZeroDuration, "created and closed at the same second").Measured(0, "seconds"));
      }
      if (extreme) {
        ++summary_.extreme;
        at(Finding::Make(RuleId::kExtremeDuration, "duration of " + Days(s) + " exceeds the " +
                                                       std::to_string(config_.extreme_cutoff_days) + "-day cutoff")
               .Measured(static_cast<double>(s), "seconds"));
      }
      if (!sentinel && !extreme) ++summary_.duration_days[DayBucket(s)];
    }
  }

  if (d.ts && u.ts) {
    const auto a = d.ts->earliest();
    const auto b = u.ts->earliest();
    if (a && b) {
      ++summary_.lag_compared;
      const int64_t lag = *b - *a;
      auto at = [&](Finding f) {
        sink_.Emit(std::move(f.Field(fields_.updated)
                                 .Measured(static_cast<double>(lag), "seconds")
                                 .At(row.ordinal, std::string(row.key(*table_)))
                                 .Agency(std::string(agency))));
      };
      if (std::llabs(lag) > config_.extreme_cutoff_days * ingest::kSecondsPerDay) {
        ++summary_.infeasible_lag;
        at(Finding::Make(RuleId::kInfeasibleUpdateLag, "resolution updated " + Days(lag) +
                                                           " after closing; outside the feasible window"));
      } else {
        if (!d.sentinel && !u.sentinel) ++summary_.lag_days[DayBucket(lag)];
        if (lag > config_.post_close_window_days * ingest::kSecondsPerDay) {
          ++summary_.post_close;
          at(Finding::Make(RuleId::kPostCloseUpdate, "resolution updated " + Days(lag) + " after closing"));
        }
      }
    } else {
      ++summary_.lag_unparseable;
    }
  } else if (closed_.index >= 0 && updated_.index >= 0 &&
             row.cells[static_cast<size_t>(closed_.index)].present() &&
             row.cells[static_cast<size_t>(updated_.index)].present()) {
    ++summary_.lag_unparseable;
  }
}

void TemporalAuditor::Finish(const ingest::RawTable& /*table*/, FindingSink& sink) {
  auto require = [&](const Slot& slot, const char* what) {
    if (slot.index >= 0) return;
    sink.Emit(Finding::Make(RuleId::kInsufficientData,
                            "field '" + slot.field + "' not present; " + what + " skipped")
                  .Field(slot.field));
  };
  require(created_, "duration and hour-spike checks");
  require(closed_, "duration, hour-spike and post-close checks");
  require(updated_, "post-close checks");

  for (auto& series : summary_.hours) {
    const int index = series.field == fields_.created ? created_.index : closed_.index;
    if (index < 0) continue;
    series.result = DetectHourSpikes(series.on_the_hour, series.parsed, config_);
    if (series.result.insufficient) {
      sink.Emit(Finding::Make(RuleId::kInsufficientData, "fewer than 24 parsed timestamps; hour-spike test skipped")
                    .Field(series.field)
                    .Measured(static_cast<double>(series.parsed), "timestamps"));
      continue;
    }
    char stats[96];
    std::snprintf(stats, sizeof stats, " (mean %.2f, sigma %.2f, threshold %.2f)", series.result.mean,
                  series.result.sigma, series.result.threshold);
    for (int h : series.result.flagged_hours) {
      const auto count = static_cast<double>(series.on_the_hour[static_cast<size_t>(h)]);
      char hour[8];
      std::snprintf(hour, sizeof hour, "%02d:00", h);
      const std::string shares = AgencyShares(series.by_agency, h);
      sink.Emit(Finding::Make(RuleId::kHourSpike, std::string(hour) + " on-the-hour count " +
                                                      std::to_string(static_cast<uint64_t>(count)) + stats +
                                                      (shares.empty() ? "" : "; by agency:" + shares))
                    .Field(series.field)
                    .Measured(count, "timestamps"));
      if (h == 0) {
        sink.Emit(Finding::Make(RuleId::kMidnightBatchSuspect,
                                "midnight spike suggests batch creation or closing" +
                                    (shares.empty() ? std::string() : "; by agency:" + shares))
                      .Field(series.field)
                      .Measured(count, "timestamps"));
      }
    }
  }
}

void WriteHistogramCsv(const DayHistogram& histogram, const std::string& path) {
  ingest::CsvWriter out(path);
  out.WriteRow({"bucket", "count"});
  for (const auto& [bucket, count] : histogram) {
    const std::string b = std::to_string(bucket);
    const std::string c = std::to_string(count);
    out.WriteRow({b, c});
  }
  out.Close();
}

}  // namespace odqa::temporal
