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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "../support/temp_dir.h"
#include "doctest.h"
#include "odqa/core/error.h"
#include "odqa/temporal/temporal.h"

using namespace odqa;
using namespace odqa::temporal;
using ingest::LocalDateTime;
using odqa::testing::TempDir;
namespace chr = std::chrono;

namespace {

const ingest::TimestampParser& Parser() {
  static const auto parser = ingest::TimestampParser::Default();
  return parser;
}

ingest::LocalTimestamp Ts(std::string_view text) {
  auto t = Parser().Parse(text);
  REQUIRE(t);
  return *t;
}

int64_t CalendarDays(int y, unsigned m, unsigned d) {
  return chr::sys_days{chr::year{y} / chr::month{m} / chr::day{d}}.time_since_epoch().count();
}

struct Audit {
  VectorSink sink;
  TemporalSummary summary;
};

Audit AuditText(const std::string& csv, SpikeConfig config = {}, const ingest::TimestampParser* parser = nullptr) {
  TempDir dir;
  const auto path = dir.Write("t.csv", csv);
  Audit out;
  TemporalAuditor auditor({}, config, parser ? *parser : Parser(), out.sink);
  ingest::RowConsumer* consumers[] = {&auditor};
  ingest::StreamRows(path, consumers, out.sink, {});
  out.summary = auditor.summary();
  return out;
}

}  // namespace

TEST_CASE("compute_durations examples") {
  auto d = ComputeDuration(Ts("2023-01-27 14:40:00"), Ts("2022-01-14 14:40:00"));
  REQUIRE(d);
  const int64_t want = (CalendarDays(2022, 1, 14) - CalendarDays(2023, 1, 27)) * 86400;
  CHECK(want == -378 * 86400);
  CHECK(d->seconds == want);
  CHECK_FALSE(d->dst_explainable);

  d = ComputeDuration(Ts("01/27/2023 02:40:00 PM"), Ts("01/27/2023 02:40:00 PM"));
  CHECK(d->seconds == 0);

  // Fold: 01:59 EDT then 01:29 EST is thirty minutes later in real time.
  d = ComputeDuration(Ts("2022-11-06 01:59:00"), Ts("2022-11-06 01:29:00"));
  REQUIRE(d);
  CHECK(d->seconds == -30 * 60);
  CHECK(d->dst_explainable);

  // A plain wall-clock reversal is not explainable.
  d = ComputeDuration(Ts("2022-06-06 01:59:00"), Ts("2022-06-06 01:29:00"));
  CHECK(d->seconds == -30 * 60);
  CHECK_FALSE(d->dst_explainable);

  // Across spring-forward: 01:30 EST to 03:30 EDT is one real hour.
  d = ComputeDuration(Ts("2022-03-13 01:30:00"), Ts("2022-03-13 03:30:00"));
  CHECK(d->seconds == 3600);

  CHECK_FALSE(ComputeDuration(Ts("2022-03-13 02:30:00"), Ts("2022-03-13 03:30:00")));
}

TEST_CASE("durations: antisymmetry and whole-day translation") {
  std::mt19937_64 rng(41);
  const auto fixed = ingest::TimestampParser(
      [] {
        std::vector<ingest::TimestampFormat> f;
        for (const auto& p : ingest::DefaultTimestampFormats()) f.push_back(ingest::TimestampFormat::Compile(p));
        return f;
      }(),
      ingest::ZoneRules::FixedOffset(-5 * 3600));
  for (int i = 0; i < 5000; ++i) {
    const auto a = LocalDateTime{static_cast<int64_t>(18000 + rng() % 2000), static_cast<int32_t>(rng() % 86400)};
    const auto b = LocalDateTime{static_cast<int64_t>(18000 + rng() % 2000), static_cast<int32_t>(rng() % 86400)};
    const auto ta = Parser().Resolve(a);
    const auto tb = Parser().Resolve(b);
    if (ta.zone_status == ingest::ZoneStatus::kUnambiguous && tb.zone_status == ingest::ZoneStatus::kUnambiguous) {
      CHECK(ComputeDuration(ta, tb)->seconds == -ComputeDuration(tb, ta)->seconds);
    }
    const int64_t shift = static_cast<int64_t>(rng() % 5000) - 2500;
    const auto base = ComputeDuration(fixed.Resolve(a), fixed.Resolve(b));
    const auto moved =
        ComputeDuration(fixed.Resolve({a.days + shift, a.seconds_of_day}), fixed.Resolve({b.days + shift, b.seconds_of_day}));
    CHECK(base->seconds == moved->seconds);
  }
}

TEST_CASE("detect_hour_spikes") {
  std::array<uint64_t, 24> counts;
  counts.fill(10);
  counts[5] = 100;
  // Arithmetic oracle: mean = 330 / 24; population variance over 24 buckets.
  double mean = 0;
  for (auto c : counts) mean += static_cast<double>(c);
  mean /= 24;
  double var = 0;
  for (auto c : counts) var += (static_cast<double>(c) - mean) * (static_cast<double>(c) - mean);
  const double sigma = std::sqrt(var / 24);
  CHECK(mean == doctest::Approx(13.75));
  CHECK(sigma == doctest::Approx(17.98).epsilon(1e-3));
  CHECK(mean + 3 * sigma == doctest::Approx(67.7).epsilon(1e-3));

  const auto r = DetectHourSpikes(counts, 1000, {});
  CHECK(r.mean == doctest::Approx(mean));
  CHECK(r.sigma == doctest::Approx(sigma));
  CHECK(r.threshold == doctest::Approx(mean + 3 * sigma));
  CHECK(r.flagged_hours == std::vector<int>{5});

  counts.fill(7);
  CHECK(DetectHourSpikes(counts, 1000, {}).flagged_hours.empty());
  CHECK(DetectHourSpikes(counts, 23, {}).insufficient);
}

TEST_CASE("detect_hour_spikes is scale invariant") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 2000; ++trial) {
    std::array<uint64_t, 24> counts;
    for (auto& c : counts) c = rng() % 50;
    counts[rng() % 24] += rng() % 400;
    SpikeConfig config;
    config.sigma_multiplier = trial % 2 ? 3.0 : 0.5 + static_cast<double>(rng() % 40) / 10;
    const auto base = DetectHourSpikes(counts, 10000, config);
    auto scaled = counts;
    const uint64_t k = 1 + rng() % 100000;
    for (auto& c : scaled) c *= k;
    CHECK(DetectHourSpikes(scaled, 10000, config).flagged_hours == base.flagged_hours);
  }
}

TEST_CASE("spike config validation") {
  SpikeConfig c;
  c.sigma_multiplier = 0;
  CHECK_THROWS_AS(c.Validate(), Error);
  c = {};
  c.post_close_window_days = -1;
  CHECK_THROWS_AS(c.Validate(), Error);
}

TEST_CASE("post-close lag examples") {
  const std::string header = "unique_key,agency,created_date,closed_date,resolution_action_updated_date\n";
  auto a = AuditText(header + "1,DOT,2021-12-01 10:00:00,2022-01-01 00:00:00,2022-03-01 00:00:00\n"
                              "2,DOT,2021-12-01 10:00:00,2022-01-01 00:00:00,2022-01-01 00:00:00\n"
                              "3,DHS,2022-05-01 10:00:00,2022-06-01 00:00:00,1900-01-01\n"
                              "4,DHS,2022-05-01 10:00:00,2022-06-01 00:00:00,garbage\n");
  CHECK(CalendarDays(2022, 3, 1) - CalendarDays(2022, 1, 1) == 59);
  CHECK(a.summary.lag_compared == 3);
  CHECK(a.summary.post_close == 1);
  CHECK(a.summary.lag_days.at(59) == 1);
  CHECK(a.summary.lag_days.at(0) == 1);
  CHECK(a.summary.infeasible_lag == 1);
  CHECK(a.summary.lag_unparseable == 1);
  CHECK(a.sink.Count(RuleId::kPostCloseUpdate) == 1);
  CHECK(a.sink.Count(RuleId::kInfeasibleUpdateLag) == 1);
  CHECK(a.sink.Count(RuleId::kSentinelDate) == 1);
  CHECK(a.sink.Count(RuleId::kUnparseableTimestamp) == 1);
}

TEST_CASE("midnight_exact_count") {
  const std::string header = "unique_key,agency,created_date,closed_date\n";
  auto a = AuditText(header + "1,DSNY,2022-05-01 00:00:00,2022-05-01 00:00:00\n"
                              "2,DSNY,2022-05-01 00:00:01,2022-05-02 10:00:00\n"
                              "3,DOB,2022-05-01 10:00:00,2022-05-03\n"
                              "4,DOB,1900-01-01,2022-05-03 10:00:00\n");
  CHECK(a.summary.midnight_rows == 2);
  CHECK(a.summary.midnight_timestamps == 3);
  CHECK(a.summary.midnight_by_agency == std::map<std::string, uint64_t>{{"DOB", 1}, {"DSNY", 1}});
  CHECK(a.sink.Count(RuleId::kMidnightExact) == 2);
  CHECK(a.sink.Count(RuleId::kZeroDuration) == 1);
  CHECK(a.sink.Count(RuleId::kSentinelDate) == 1);
  CHECK(a.sink.Count(RuleId::kExtremeDuration) == 1);
  CHECK(a.summary.duration_days.size() == 2);
  CHECK(a.sink.Count(RuleId::kInsufficientData) >= 1);
}

TEST_CASE("midnight spike carries agency attribution") {
  std::string csv = "unique_key,agency,created_date,closed_date\n";
  int key = 0;
  for (int h = 0; h < 24; ++h) {
    for (int i = 0; i < 5; ++i) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%d,NYPD,2022-04-0%d %02d:00:00,2022-04-0%d %02d:17:00\n", ++key, 1 + i % 5, h,
                    1 + i % 5, h);
      csv += buf;
    }
  }
  for (int i = 0; i < 60; ++i) csv += std::to_string(++key) + (i < 45 ? ",DOB" : ",DSNY") + ",2022-04-10 08:13:00,2022-04-12 00:00:00\n";
  auto a = AuditText(csv);
  const auto& closed = a.summary.hours[1];
  CHECK(closed.on_the_hour[0] == 60);
  CHECK(closed.result.flagged_hours == std::vector<int>{0});
  CHECK(a.summary.hours[0].result.flagged_hours.empty());
  CHECK(a.sink.Count(RuleId::kHourSpike) == 1);
  REQUIRE(a.sink.Count(RuleId::kMidnightBatchSuspect) == 1);
  for (const auto& f : a.sink.findings()) {
    if (f.rule() == RuleId::kMidnightBatchSuspect) CHECK(f.message().find("DOB 75.0%, DSNY 25.0%") != std::string::npos);
  }
}

// Brute-force oracle: sscanf parsing, US Eastern rules from first principles
// (2007+ second Sunday of March / first Sunday of November; earlier years EST
// only for the fixture's 1900 sentinels), and row-by-row counting.
namespace {

struct OracleTs {
  int64_t local;
  int n;
  int64_t utc[2];
};

int64_t NthSunday(int year, unsigned month, int nth) {
  const chr::sys_days first{chr::year{year} / chr::month{month} / chr::day{1}};
  const chr::weekday wd{first};
  const int to_sunday = (7 - static_cast<int>(wd.c_encoding())) % 7;
  return (first + chr::days{to_sunday + 7 * (nth - 1)}).time_since_epoch().count();
}

std::optional<OracleTs> OracleParse(const std::string& s) {
  int mo, d, y, h, mi, se;
  char ampm[3];
  int64_t local;
  if (std::sscanf(s.c_str(), "%2d/%2d/%4d %2d:%2d:%2d %2s", &mo, &d, &y, &h, &mi, &se, ampm) == 7 && s.size() == 22) {
    if (h < 1 || h > 12) return std::nullopt;
    h = h % 12 + (std::string(ampm) == "PM" ? 12 : 0);
  } else if (std::sscanf(s.c_str(), "%4d-%2d-%2d", &y, &mo, &d) == 3 && s.size() == 10) {
    h = mi = se = 0;
  } else {
    return std::nullopt;
  }
  const chr::year_month_day ymd{chr::year{y} / chr::month{static_cast<unsigned>(mo)} / chr::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  local = chr::sys_days{ymd}.time_since_epoch().count() * 86400 + h * 3600 + mi * 60 + se;
  OracleTs t{local, 0, {0, 0}};
  if (y < 2007) {
    t.n = 1;
    t.utc[0] = local + 5 * 3600;
    return t;
  }
  const int64_t start = NthSunday(y, 3, 2) * 86400 + 2 * 3600;  // local wall clock
  const int64_t end = NthSunday(y, 11, 1) * 86400 + 2 * 3600;
  if (local >= start && local < start + 3600) return t;  // gap
  if (local >= end - 3600 && local < end) {
    t.n = 2;
    t.utc[0] = local + 4 * 3600;
    t.utc[1] = local + 5 * 3600;
  } else {
    t.n = 1;
    t.utc[0] = local + ((local >= start + 3600 && local < end - 3600) ? 4 : 5) * 3600;
  }
  return t;
}

std::string Render(int64_t local, bool date_only) {
  const chr::sys_days day{chr::days{local / 86400 - (local % 86400 < 0)}};
  const chr::year_month_day ymd{day};
  const int64_t sod = local - day.time_since_epoch().count() * 86400;
  char buf[64];
  if (date_only) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
  } else {
    const int h = static_cast<int>(sod / 3600);
    std::snprintf(buf, sizeof buf, "%02u/%02u/%04d %02d:%02d:%02d %s", static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<int>(ymd.year()), h % 12 == 0 ? 12 : h % 12,
                  static_cast<int>(sod / 60 % 60), static_cast<int>(sod % 60), h < 12 ? "AM" : "PM");
  }
  return buf;
}

}  // namespace

TEST_CASE("temporal findings match a brute-force oracle") {
  std::mt19937_64 rng(47);
  const int64_t sentinel_local = CalendarDays(1900, 1, 1) * 86400;
  const int64_t fold = (CalendarDays(2022, 11, 6)) * 86400 + 3600;
  const int64_t gap = (CalendarDays(2022, 3, 13)) * 86400 + 2 * 3600;
  for (int trial = 0; trial < 6; ++trial) {
    std::string csv = "unique_key,agency,created_date,closed_date,resolution_action_updated_date,due_date\n";
    std::map<std::string, uint64_t> want;
    const int rows = 500 + static_cast<int>(rng() % 9500);
    std::array<std::array<uint64_t, 24>, 2> hours{};
    std::array<uint64_t, 2> parsed{};
    for (int r = 0; r < rows; ++r) {
      auto pick = [&]() -> std::string {
        const int kind = static_cast<int>(rng() % 100);
        int64_t t = (CalendarDays(2021, 1, 1) + static_cast<int64_t>(rng() % 1000)) * 86400 + static_cast<int64_t>(rng() % 86400);
        if (kind < 3) return "";
        if (kind < 4) return "not a date";
        if (kind < 6) return Render(sentinel_local, rng() % 2);
        if (kind < 10) t = fold + static_cast<int64_t>(rng() % 3600);
        else if (kind < 13) t = gap + static_cast<int64_t>(rng() % 3600);
        else if (kind < 20) t -= t % 86400;
        else if (kind < 30) t -= t % 3600;
        return Render(t, kind >= 15 && kind < 18);
      };
      std::string c = pick(), d = pick(), u = pick(), due = pick();
      if (rng() % 10 == 0) d = c;
      if (rng() % 10 == 0 && !d.empty()) u = d;
      const std::string agency = rng() % 3 ? "DOT" : "DOB";
      csv += std::to_string(r) + "," + agency + "," + c + "," + d + "," + u + "," + due + "\n";

      std::optional<OracleTs> oc, od, ou;
      std::array<bool, 4> sent{};
      const std::string cells[4] = {c, d, u, due};
      std::optional<OracleTs> parsed_cells[4];
      for (int i = 0; i < 4; ++i) {
        if (cells[i].empty()) continue;
        parsed_cells[i] = OracleParse(cells[i]);
        if (!parsed_cells[i]) {
          ++want["unparseable"];
          continue;
        }
        if (parsed_cells[i]->n == 0) ++want["gap"];
        if (parsed_cells[i]->n == 2) ++want["fold"];
        if (parsed_cells[i]->local / 86400 == sentinel_local / 86400) {
          sent[static_cast<size_t>(i)] = true;
          ++want["sentinel"];
        }
      }
      oc = parsed_cells[0];
      od = parsed_cells[1];
      ou = parsed_cells[2];
      for (int i = 0; i < 2; ++i) {
        if (!parsed_cells[i] || sent[static_cast<size_t>(i)]) continue;
        ++parsed[static_cast<size_t>(i)];
        const int64_t sod = ((parsed_cells[i]->local % 86400) + 86400) % 86400;
        if (sod % 3600 == 0) ++hours[static_cast<size_t>(i)][static_cast<size_t>(sod / 3600)];
      }
      const bool cm = oc && !sent[0] && oc->local % 86400 == 0;
      const bool dm = od && !sent[1] && od->local % 86400 == 0;
      if (cm || dm) ++want["midnight"];
      if (oc && od && oc->n > 0 && od->n > 0) {
        const int64_t dur = od->utc[0] - oc->utc[0];
        if (dur < 0) {
          ++want["negative"];
          bool ok = false;
          for (int i = 0; i < oc->n; ++i)
            for (int j = 0; j < od->n; ++j) ok |= od->utc[j] - oc->utc[i] >= 0;
          if (ok) ++want["explainable"];
        }
        if (dur == 0) ++want["zero"];
        if (std::llabs(dur) > 730 * 86400LL) ++want["extreme"];
      }
      if (od && ou && od->n > 0 && ou->n > 0) {
        const int64_t lag = ou->utc[0] - od->utc[0];
        if (std::llabs(lag) > 730 * 86400LL) {
          ++want["infeasible"];
        } else if (lag > 30 * 86400LL) {
          ++want["post_close"];
        }
      }
    }
    auto a = AuditText(csv);
    CHECK(a.sink.Count(RuleId::kUnparseableTimestamp) == want["unparseable"]);
    CHECK(a.sink.Count(RuleId::kDstGapInvalid) == want["gap"]);
    CHECK(a.sink.Count(RuleId::kDstFoldAmbiguous) == want["fold"]);
    CHECK(a.sink.Count(RuleId::kSentinelDate) == want["sentinel"]);
    CHECK(a.sink.Count(RuleId::kMidnightExact) == want["midnight"]);
    CHECK(a.sink.Count(RuleId::kNegativeDuration) == want["negative"]);
    CHECK(a.summary.dst_explainable == want["explainable"]);
    CHECK(a.sink.Count(RuleId::kZeroDuration) == want["zero"]);
    CHECK(a.sink.Count(RuleId::kExtremeDuration) == want["extreme"]);
    CHECK(a.sink.Count(RuleId::kInfeasibleUpdateLag) == want["infeasible"]);
    CHECK(a.sink.Count(RuleId::kPostCloseUpdate) == want["post_close"]);
    CHECK(a.summary.hours[0].on_the_hour == hours[0]);
    CHECK(a.summary.hours[1].on_the_hour == hours[1]);
    CHECK(a.summary.hours[0].parsed == parsed[0]);
    CHECK(want["explainable"] > 0);
    CHECK(want["gap"] > 0);
  }
}

TEST_CASE("histogram csv and day buckets") {
  CHECK(DayBucket(-1) == -1);
  CHECK(DayBucket(0) == 0);
  CHECK(DayBucket(86399) == 0);
  CHECK(DayBucket(-86400) == -1);
  CHECK(DayBucket(-86401) == -2);
  TempDir dir;
  WriteHistogramCsv({{-2, 3}, {5, 1}}, dir.File("h.csv"));
  CHECK(odqa::testing::ReadFile(dir.File("h.csv")) == "bucket,count\n-2,3\n5,1\n");
}
