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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

#include "../support/temp_dir.h"
#include "doctest.h"
#include "odqa/core/error.h"
#include "odqa/core/sketch.h"
#include "odqa/core/value_counter.h"
#include "odqa/profile/profile.h"

using namespace odqa;
using namespace odqa::profile;
using ingest::MissingSentinel;
using odqa::testing::TempDir;

namespace {

struct Run {
  std::vector<ColumnProfile> profiles;
  VectorSink sink;
  std::unique_ptr<Profiler> profiler;
};

std::unique_ptr<Run> ProfileText(const std::string& csv, ProfileOptions options = {}) {
  TempDir dir;
  const auto path = dir.Write("in.csv", csv);
  auto run = std::make_unique<Run>();
  run->profiler = std::make_unique<Profiler>(options);
  ingest::RowConsumer* consumers[] = {run->profiler.get()};
  ingest::StreamRows(path, consumers, run->sink, {});
  run->profiles = run->profiler->profiles();
  return run;
}

size_t Idx(MissingSentinel s) { return static_cast<size_t>(s); }

// Independent reading of the sentinel rules, used by the oracle below.
MissingSentinel OracleSentinel(const std::string& v) {
  if (v.empty()) return MissingSentinel::kEmpty;
  if (v.find_first_not_of(" \t") == std::string::npos) return MissingSentinel::kWhitespace;
  std::string t = v.substr(v.find_first_not_of(" \t"));
  t = t.substr(0, t.find_last_not_of(" \t") + 1);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "na") return MissingSentinel::kNA;
  if (t == "n/a") return MissingSentinel::kNSlashA;
  if (t == "<na>") return MissingSentinel::kAngleNA;
  if (t == "null") return MissingSentinel::kNullLiteral;
  return MissingSentinel::kNone;
}

std::string Quote(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

TEST_CASE("profile_columns: hand example and all-missing column") {
  auto run = ProfileText("status,notes\nA,\n,\nN/A,NA\nA,\n");
  const auto& s = run->profiles[0];
  CHECK(s.total_rows == 4);
  CHECK(s.present_count == 2);
  CHECK(s.missing_counts[Idx(MissingSentinel::kEmpty)] == 1);
  CHECK(s.missing_counts[Idx(MissingSentinel::kNSlashA)] == 1);
  CHECK(s.missing_total() == 2);
  CHECK(s.top_values == Frequencies{{"A", 2}});
  CHECK(s.distinct_count == 1);
  CHECK_FALSE(s.approximate);

  const auto& n = run->profiles[1];
  CHECK(n.present_count == 0);
  CHECK(n.distinct_count == 0);
  CHECK(n.blank_pct() == 100.0);
  CHECK(n.top_values.empty());
}

TEST_CASE("profile_columns: per-agency present counts and missing agency field") {
  auto run = ProfileText("agency,due_date,x\nNYPD,,1\nDOT,2023-01-01,2\nNYPD,2023-01-02,\n,2023-01-03,4\n");
  const auto& due = *run->profiler->Find("due_date");
  CHECK(due.per_agency_present == std::map<std::string, uint64_t>{{"DOT", 1}, {"NYPD", 1}});
  CHECK(run->profiler->Find("x")->per_agency_present == std::map<std::string, uint64_t>{{"DOT", 1}, {"NYPD", 1}});
  CHECK(run->sink.Count(RuleId::kMissingAgencyField) == 0);

  auto none = ProfileText("a,b\n1,2\n");
  CHECK(none->sink.Count(RuleId::kMissingAgencyField) == 1);
  CHECK(none->profiles[0].per_agency_present.empty());
}

TEST_CASE("profile_columns matches a brute-force oracle in exact mode") {
  const std::vector<std::string> pool = {"a", "b", "c", "NYPD", "x,y", "q\"uote", "", "  ", "NA", "N/A", "<NA>",
                                         "null", "n/a", "Null", " a", "na "};
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const size_t rows = 1 + rng() % 3000;
    const size_t cols = 1 + rng() % 6;
    std::string csv;
    for (size_t c = 0; c < cols; ++c) csv += (c ? ",f" : "f") + std::to_string(c);
    csv += "\n";
    std::vector<std::map<std::string, uint64_t>> counts(cols);
    std::vector<std::map<MissingSentinel, uint64_t>> missing(cols);
    for (size_t r = 0; r < rows; ++r) {
      bool all_empty = true;
      std::string line;
      for (size_t c = 0; c < cols; ++c) {
        std::string v = pool[rng() % pool.size()];
        if (rng() % 4 == 0) v = "v" + std::to_string(rng() % 200);
        if (!v.empty()) all_empty = false;
        if (c == cols - 1 && all_empty) v = "z";  // a blank line is not a record
        const auto s = OracleSentinel(v);
        if (s == MissingSentinel::kNone) {
          ++counts[c][v];
        } else {
          ++missing[c][s];
        }
        line += (c ? "," : "") + Quote(v);
      }
      csv += line + "\n";
    }
    auto run = ProfileText(csv, {.top_k = 0});
    REQUIRE(run->profiles.size() == cols);
    for (size_t c = 0; c < cols; ++c) {
      const auto& p = run->profiles[c];
      CHECK_FALSE(p.approximate);
      CHECK(p.total_rows == rows);
      uint64_t present = 0;
      for (const auto& [v, n] : counts[c]) present += n;
      CHECK(p.present_count == present);
      CHECK(p.present_count + p.missing_total() == p.total_rows);
      for (int k = 1; k < ingest::kSentinelKinds; ++k) {
        const auto s = static_cast<MissingSentinel>(k);
        const uint64_t want = missing[c].count(s) ? missing[c][s] : 0;
        CHECK(p.missing_counts[static_cast<size_t>(k)] == want);
      }
      Frequencies want(counts[c].begin(), counts[c].end());
      std::sort(want.begin(), want.end(),
                [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; });
      CHECK(p.top_values == want);
      CHECK(p.distinct_count == counts[c].size());
    }
  }
}

TEST_CASE("profile_columns is insensitive to row order") {
  std::mt19937_64 rng(17);
  std::vector<std::string> lines;
  for (int i = 0; i < 2000; ++i) {
    lines.push_back(std::to_string(rng() % 37) + "," + (rng() % 3 ? "NYPD" : (rng() % 2 ? "DOT" : "")) + "," +
                    (rng() % 5 ? "" : "N/A"));
  }
  auto render = [&] {
    std::string csv = "v,agency,w\n";
    for (const auto& l : lines) csv += l + "\n";
    return csv;
  };
  auto a = ProfileText(render());
  std::shuffle(lines.begin(), lines.end(), rng);
  auto b = ProfileText(render());
  for (size_t c = 0; c < 3; ++c) {
    const auto& x = a->profiles[c];
    const auto& y = b->profiles[c];
    CHECK(x.missing_counts == y.missing_counts);
    CHECK(x.present_count == y.present_count);
    CHECK(x.top_values == y.top_values);
    CHECK(x.distinct_count == y.distinct_count);
    CHECK(x.per_agency_present == y.per_agency_present);
    CHECK(x.disk_bytes == y.disk_bytes);
  }
}

TEST_CASE("tier_missingness") {
  CHECK(TierFor(99.6) == Tier::kMostlyEmpty);
  CHECK(TierFor(90.0) == Tier::kMostlyEmpty);
  CHECK(TierFor(89.99) == Tier::kPartiallyEmpty);
  CHECK(TierFor(50) == Tier::kPartiallyEmpty);
  CHECK(TierFor(2.0) == Tier::kFewNoneEmpty);
  CHECK(TierFor(2.01) == Tier::kPartiallyEmpty);
  CHECK(TierFor(0) == Tier::kFewNoneEmpty);

  // 1000 rows: due_date with 996 blanks is 99.6% blank.
  std::vector<ColumnProfile> profiles(3);
  profiles[0].field = "key";
  profiles[0].total_rows = 1000;
  profiles[1].field = "due_date";
  profiles[1].total_rows = 1000;
  profiles[1].missing_counts[Idx(MissingSentinel::kEmpty)] = 990;
  profiles[1].missing_counts[Idx(MissingSentinel::kNSlashA)] = 6;
  profiles[2].field = "bridge";
  profiles[2].total_rows = 1000;
  profiles[2].missing_counts[Idx(MissingSentinel::kEmpty)] = 500;
  const auto tiers = TierMissingness(profiles);
  REQUIRE(tiers.size() == 3);
  CHECK(tiers[0].field == "due_date");
  CHECK(tiers[0].blank_pct == doctest::Approx(99.6));
  CHECK(tiers[0].tier == Tier::kMostlyEmpty);
  CHECK(tiers[1].tier == Tier::kPartiallyEmpty);
  CHECK(tiers[2].tier == Tier::kFewNoneEmpty);

  profiles[0].total_rows = 0;
  CHECK_THROWS_AS(TierMissingness(profiles), Error);
}

TEST_CASE("concentration") {
  auto c = ComputeConcentration({{"b", 20}, {"a", 70}, {"c", 10}}, 1);
  CHECK(c.top_k_share == doctest::Approx(0.70));
  CHECK(c.sorted.front().first == "a");
  CHECK(c.cumulative.back() == 1.0);
  CHECK(ComputeConcentration({{"a", 1}}, 5).top_k_share == 1.0);
  CHECK_THROWS_AS(ComputeConcentration({{"a", 0}, {"b", 0}}, 1), Error);
  CHECK_THROWS_AS(ComputeConcentration({}, 1), Error);

  // Ties break by value.
  c = ComputeConcentration({{"z", 5}, {"y", 5}}, 1);
  CHECK(c.sorted.front().first == "y");
}

TEST_CASE("concentration: monotone, reaches one, scale invariant") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    Frequencies f;
    const size_t n = 1 + rng() % 60;
    for (size_t i = 0; i < n; ++i) f.emplace_back("v" + std::to_string(i), rng() % 1000);
    f[rng() % n].second += 1;
    const uint64_t scale = 1 + rng() % 1000;
    Frequencies scaled = f;
    for (auto& [v, count] : scaled) count *= scale;
    double prev = 0;
    for (size_t k = 1; k <= n; ++k) {
      const double share = ComputeConcentration(f, k).top_k_share;
      CHECK(share >= prev);
      CHECK(ComputeConcentration(scaled, k).top_k_share == doctest::Approx(share).epsilon(1e-12));
      prev = share;
    }
    CHECK(ComputeConcentration(f, n).top_k_share == 1.0);
  }
}

TEST_CASE("ValueCounter agrees with a hash map and keeps first-appearance ids") {
  std::mt19937_64 rng(29);
  ValueCounter vc;
  std::unordered_map<std::string, uint64_t> ref;
  std::vector<std::string> order;
  for (int i = 0; i < 200000; ++i) {
    std::string v(rng() % 40, 'x');
    for (auto& ch : v) ch = static_cast<char>('a' + rng() % 3);
    if (!ref.count(v)) order.push_back(v);
    ++ref[v];
    vc.Add(v);
  }
  REQUIRE(vc.size() == ref.size());
  for (uint32_t id = 0; id < vc.size(); ++id) {
    CHECK(vc.value(id) == order[id]);
    CHECK(vc.count(id) == ref[order[id]]);
  }
  CHECK_FALSE(vc.Find("not-there-at-all-0123456789-0123456789-0123456789"));
  std::string big(3 << 20, 'q');
  const auto id = vc.Add(big);
  CHECK(vc.value(id) == big);
  CHECK(vc.Find(big) == id);
}

TEST_CASE("SpaceSaving bounds and HyperLogLog accuracy") {
  std::mt19937_64 rng(31);
  SpaceSaving ss(64);
  std::map<std::string, uint64_t> truth;
  uint64_t n = 0;
  for (int i = 0; i < 100000; ++i) {
    // Zipf-ish: a handful of heavy values over a long tail.
    const uint64_t r = rng() % 100;
    const std::string v = r < 50 ? "h" + std::to_string(r % 5) : "t" + std::to_string(rng() % 50000);
    ss.Add(v);
    ++truth[v];
    ++n;
  }
  uint64_t sum = 0;
  for (const auto& c : ss.Top()) {
    sum += c.count;
    CHECK(c.count >= truth[c.value]);
    CHECK(c.count - c.error <= truth[c.value]);
  }
  CHECK(sum == n);
  for (const auto& [v, count] : truth) {
    if (count > n / 64) {
      const auto top = ss.Top();
      CHECK(std::any_of(top.begin(), top.end(), [&](const auto& c) { return c.value == v; }));
    }
  }

  for (uint64_t distinct : {10ULL, 1000ULL, 100000ULL, 1000000ULL}) {
    HyperLogLog hll(14);
    for (uint64_t i = 0; i < distinct; ++i) {
      hll.Add("k" + std::to_string(i));
      hll.Add("k" + std::to_string(i));
    }
    const double err = std::abs(static_cast<double>(hll.Estimate()) - static_cast<double>(distinct)) / distinct;
    CHECK(err < 0.03);
  }
}

TEST_CASE("approximate mode engages past the budget and is flagged") {
  std::string csv = "key,kind\n";
  for (int i = 0; i < 5000; ++i) csv += std::to_string(i) + "," + (i % 10 == 0 ? "rare" : "common") + "\n";
  auto run = ProfileText(csv, {.distinct_cap = 100000, .exact_entry_budget = 1000, .heavy_hitters = 16});
  const auto& key = run->profiles[0];
  const auto& kind = run->profiles[1];
  CHECK(key.approximate);
  CHECK_FALSE(kind.approximate);
  CHECK(kind.top_values == Frequencies{{"common", 4500}, {"rare", 500}});
  CHECK(std::abs(static_cast<double>(key.distinct_count) - 5000.0) < 5000 * 0.03);
  uint64_t sum = 0;
  for (const auto& [v, c] : key.top_values) sum += c;
  CHECK(sum <= key.present_count);
  CHECK(run->sink.Count(RuleId::kApproximateProfile) == 1);
  CHECK(run->profiler->Observed("key").approximate);

  auto capped = ProfileText(csv, {.distinct_cap = 100});
  CHECK(capped->profiles[0].approximate);
  CHECK_FALSE(capped->profiles[1].approximate);
}

TEST_CASE("profiles csv") {
  auto run = ProfileText("a,b\n1,\n2,x\n");
  TempDir dir;
  WriteProfilesCsv(run->profiles, dir.File("p.csv"));
  CHECK(odqa::testing::ReadFile(dir.File("p.csv")) ==
        "field,total,present,blank_pct,tier,distinct\na,2,2,0.00,few_none_empty,2\nb,2,1,50.00,partially_empty,1\n");
}
