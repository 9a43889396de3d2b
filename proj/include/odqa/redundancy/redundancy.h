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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "odqa/core/finding.h"
#include "odqa/ingest/csv.h"

namespace odqa::redundancy {

/// Uppercases, collapses whitespace, expands street-suffix abbreviations and
/// rewrites ordinals (NINTH, 9TH) as cardinals. Idempotent by construction:
/// the table refuses expansions that would themselves be rewritten.
class StreetNormalizer {
 public:
  static const StreetNormalizer& Default();
  StreetNormalizer();

  /// Throws Config when `expansion` contains a token the normalizer rewrites.
  void AddAbbreviation(std::string abbreviation, std::string expansion);

  std::string Normalize(std::string_view raw) const;

 private:
  void Validate(const std::string& key, const std::string& expansion) const;
  bool Rewrites(std::string_view token) const;

  std::unordered_map<std::string, std::string> suffixes_;
};

enum class Verdict { kNotApplicable, kDistinct, kNearDuplicate, kDuplicate };
std::string_view VerdictName(Verdict verdict);

struct PairMatchStats {
  std::string field_a;
  std::string field_b;
  uint64_t rows_total = 0;
  uint64_t both_blank = 0;
  uint64_t one_blank = 0;
  uint64_t both_present = 0;
  uint64_t exact_match = 0;
  uint64_t normalized_match = 0;  // equals exact_match unless normalization ran
  uint64_t blank_raw_mismatch = 0;  // both blank, different sentinel text
  bool normalized = false;

  /// Every row byte-identical, blanks included: b is recoverable from a.
  bool identical() const { return exact_match == both_present && one_blank == 0 && blank_raw_mismatch == 0; }

  std::optional<double> match_rate_nonblank() const;
  std::optional<double> match_rate_both_present() const;
  std::optional<double> normalized_rate_both_present() const;
  /// normalized minus raw both-present rate; nullopt without normalization.
  std::optional<double> normalization_gain() const;

  /// Adds one aligned row. `normalizer` non-null enables normalized matching.
  void Add(const ingest::CellValue& a, const ingest::CellValue& b, const StreetNormalizer* normalizer);
};

struct VerdictThresholds {
  double near_duplicate = 0.85;
};

Verdict Classify(const PairMatchStats& stats, const VerdictThresholds& thresholds);

/// Pairwise statistics over two equal-length columns. Throws Internal on
/// length mismatch.
PairMatchStats PairMatch(const std::vector<ingest::CellValue>& a, const std::vector<ingest::CellValue>& b,
                         const StreetNormalizer* normalizer = nullptr);

/// A two-placeholder template such as "({a}, {b})".
class ConcatTemplate {
 public:
  /// Throws Config unless {a} and {b} each appear exactly once.
  static ConcatTemplate Compile(std::string_view pattern);

  bool Matches(std::string_view target, std::string_view a, std::string_view b) const;
  std::string Render(std::string_view a, std::string_view b) const;
  const std::string& pattern() const { return pattern_; }

 private:
  std::string pattern_;
  std::string prefix_, middle_, suffix_;
  bool a_first_ = true;
};

struct ConcatStats {
  std::string target;
  std::string part_a;
  std::string part_b;
  std::string pattern;
  uint64_t all_present = 0;
  uint64_t matches = 0;
  uint64_t target_only = 0;        // target present, a part missing
  uint64_t parts_only = 0;         // parts present, target missing
  uint64_t target_blank_text = 0;  // missing target with non-empty raw text

  std::optional<double> rate() const;
  /// The target can be rebuilt byte for byte from its parts.
  bool reconstructible() const {
    return all_present > 0 && matches == all_present && target_only == 0 && parts_only == 0 && target_blank_text == 0;
  }
};

struct DependencyStats {
  std::string determinant;
  std::string dependent;
  uint64_t rows = 0;  // both present
  uint64_t dependent_only = 0;
  uint64_t determinant_only = 0;
  uint64_t dependent_blank_text = 0;
  std::map<std::string, std::map<std::string, uint64_t, std::less<>>, std::less<>> mapping;
  bool truncated = false;  // determinant cardinality exceeded the cap

  bool holds() const;
  /// holds() and blanks line up, so a lookup table rebuilds the dependent.
  bool reconstructible() const {
    return holds() && dependent_only == 0 && determinant_only == 0 && dependent_blank_text == 0;
  }
  std::vector<std::string> violations() const;
};

struct PairSpec {
  std::string a;
  std::string b;
  bool normalize = false;
};

struct ConcatSpec {
  std::string target;
  std::string part_a;
  std::string part_b;
  std::string pattern = "({a}, {b})";
};

struct DependencySpec {
  std::string determinant;
  std::string dependent;
};

struct RedundancyConfig {
  std::vector<PairSpec> pairs;
  /// Every unordered pair among these is compared as well.
  std::vector<std::string> auto_candidates;
  std::vector<ConcatSpec> concatenations = {{"location", "latitude", "longitude", "({a}, {b})"}};
  std::vector<DependencySpec> dependencies = {{"agency", "agency_name"}};
  std::vector<std::pair<std::string, std::string>> street_abbreviations;
  VerdictThresholds thresholds;
  size_t dependency_cap = 100000;
};

class RedundancyAnalyzer : public ingest::RowConsumer {
 public:
  RedundancyAnalyzer(RedundancyConfig config, FindingSink& sink);

  void Begin(const ingest::RawTable& table) override;
  void Consume(const ingest::Row& row) override;
  void Finish(const ingest::RawTable& table, FindingSink& sink) override;

  const std::vector<PairMatchStats>& pairs() const { return pairs_; }
  const std::vector<ConcatStats>& concatenations() const { return concats_; }
  const std::vector<DependencyStats>& dependencies() const { return dependencies_; }
  Verdict VerdictFor(const PairMatchStats& stats) const { return Classify(stats, config_.thresholds); }
  const VerdictThresholds& thresholds() const { return config_.thresholds; }

 private:
  struct PairSlot {
    int a, b;
    bool normalize;
  };
  struct ConcatSlot {
    int target, a, b;
    ConcatTemplate tmpl;
  };
  struct DependencySlot {
    int determinant, dependent;
  };

  RedundancyConfig config_;
  FindingSink& sink_;
  StreetNormalizer normalizer_;
  std::vector<PairSlot> pair_slots_;
  std::vector<PairMatchStats> pairs_;
  std::vector<ConcatSlot> concat_slots_;
  std::vector<ConcatStats> concats_;
  std::vector<DependencySlot> dependency_slots_;
  std::vector<DependencyStats> dependencies_;
  std::vector<std::string> skipped_;
};

std::string FormatRate(const std::optional<double>& rate);

/// "field_a,field_b,both_present,exact_match,rate_both_present,verdict"
void WritePairsCsv(const std::vector<PairMatchStats>& pairs, const VerdictThresholds& thresholds,
                   const std::string& path);

}  // namespace odqa::redundancy
