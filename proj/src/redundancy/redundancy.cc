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

#include "odqa/redundancy/redundancy.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "odqa/core/error.h"
#include "odqa/core/text.h"

namespace odqa::redundancy {

namespace {

constexpr std::pair<const char*, const char*> kSuffixes[] = {
    {"PL", "PLACE"}, {"AVE", "AVENUE"}, {"ST", "STREET"}, {"RD", "ROAD"},     {"BLVD", "BOULEVARD"},
    {"DR", "DRIVE"}, {"CT", "COURT"},   {"LN", "LANE"},   {"PKWY", "PARKWAY"},
};

constexpr const char* kOrdinalWords[] = {
    "FIRST",      "SECOND",     "THIRD",      "FOURTH",      "FIFTH",       "SIXTH",     "SEVENTH",
    "EIGHTH",     "NINTH",      "TENTH",      "ELEVENTH",    "TWELFTH",     "THIRTEENTH", "FOURTEENTH",
    "FIFTEENTH",  "SIXTEENTH",  "SEVENTEENTH", "EIGHTEENTH", "NINETEENTH",  "TWENTIETH",
};

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<std::string_view> Tokens(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && IsSpace(s[i])) ++i;
    const size_t start = i;
    while (i < s.size() && !IsSpace(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

int OrdinalWord(std::string_view token) {
  for (int i = 0; i < 20; ++i) {
    if (token == kOrdinalWords[i]) return i + 1;
  }
  return 0;
}

// "9TH", "21ST": digits followed by an ordinal suffix; returns the digits.
std::string_view OrdinalNumeral(std::string_view token) {
  if (token.size() < 3) return {};
  const std::string_view suffix = token.substr(token.size() - 2);
  if (suffix != "ST" && suffix != "ND" && suffix != "RD" && suffix != "TH") return {};
  const std::string_view digits = token.substr(0, token.size() - 2);
  if (!IsIntegerText(digits) || digits[0] == '+' || digits[0] == '-') return {};
  return digits;
}

}  // namespace

// ------------------------------------------------------------ StreetNormalizer

StreetNormalizer::StreetNormalizer() {
  for (const auto& [k, v] : kSuffixes) suffixes_.emplace(k, v);
}

const StreetNormalizer& StreetNormalizer::Default() {
  static const StreetNormalizer normalizer;
  return normalizer;
}

bool StreetNormalizer::Rewrites(std::string_view token) const {
  return OrdinalWord(token) != 0 || !OrdinalNumeral(token).empty() || suffixes_.count(std::string(token));
}

void StreetNormalizer::Validate(const std::string& key, const std::string& expansion) const {
  const auto key_tokens = Tokens(key);
  if (key_tokens.size() != 1 || key_tokens[0] != key) ThrowConfig("abbreviation '" + key + "' must be a single token");
  if (IsIntegerText(key)) ThrowConfig("abbreviation '" + key + "' must not be numeric");
  if (OrdinalWord(key) || !OrdinalNumeral(key).empty()) ThrowConfig("abbreviation '" + key + "' is an ordinal");
  const auto tokens = Tokens(expansion);
  if (tokens.empty()) ThrowConfig("abbreviation '" + key + "' needs a non-empty expansion");
  for (auto t : tokens) {
    if (Rewrites(t) || t == key) {
      ThrowConfig("expansion '" + expansion + "' of '" + key + "' contains '" + std::string(t) +
                  "', which would be rewritten again");
    }
  }
  for (const auto& [k, v] : suffixes_) {
    for (auto t : Tokens(v)) {
      if (t == key) ThrowConfig("abbreviation '" + key + "' would rewrite the expansion of '" + k + "'");
    }
  }
}

void StreetNormalizer::AddAbbreviation(std::string abbreviation, std::string expansion) {
  abbreviation = ToUpperAscii(abbreviation);
  expansion = ToUpperAscii(expansion);
  suffixes_.erase(abbreviation);
  Validate(abbreviation, expansion);
  suffixes_[abbreviation] = expansion;
}

std::string StreetNormalizer::Normalize(std::string_view raw) const {
  const std::string upper = ToUpperAscii(raw);
  const auto tokens = Tokens(upper);
  std::string out;
  out.reserve(upper.size() + 8);
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string_view t = tokens[i];
    if (!out.empty()) out += ' ';
    if (const int n = OrdinalWord(t)) {
      out += std::to_string(n);
      continue;
    }
    if (const auto digits = OrdinalNumeral(t); !digits.empty()) {
      out += digits;
      continue;
    }
    // A leading or inner ST is usually SAINT; only a trailing one is a suffix.
    if (t == "ST" && i + 1 != tokens.size()) {
      out += t;
      continue;
    }
    const auto it = suffixes_.find(std::string(t));
    out += it == suffixes_.end() ? t : std::string_view(it->second);
  }
  return out;
}

// ------------------------------------------------------------ pair matching

std::string_view VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kNotApplicable: return "not_applicable";
    case Verdict::kDistinct: return "distinct";
    case Verdict::kNearDuplicate: return "near_duplicate";
    case Verdict::kDuplicate: return "duplicate";
  }
  return "unknown";
}

std::optional<double> PairMatchStats::match_rate_nonblank() const {
  const uint64_t denom = rows_total - both_blank;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(exact_match) / static_cast<double>(denom);
}

std::optional<double> PairMatchStats::match_rate_both_present() const {
  if (both_present == 0) return std::nullopt;
  return static_cast<double>(exact_match) / static_cast<double>(both_present);
}

std::optional<double> PairMatchStats::normalized_rate_both_present() const {
  if (both_present == 0) return std::nullopt;
  return static_cast<double>(normalized_match) / static_cast<double>(both_present);
}

std::optional<double> PairMatchStats::normalization_gain() const {
  if (!normalized || both_present == 0) return std::nullopt;
  return *normalized_rate_both_present() - *match_rate_both_present();
}

void PairMatchStats::Add(const ingest::CellValue& a, const ingest::CellValue& b, const StreetNormalizer* normalizer) {
  ++rows_total;
  if (a.missing() && b.missing()) {
    ++both_blank;
    if (a.raw != b.raw) ++blank_raw_mismatch;
    return;
  }
  if (a.missing() || b.missing()) {
    ++one_blank;
    return;
  }
  ++both_present;
  if (a.raw == b.raw) {
    ++exact_match;
    ++normalized_match;
  } else if (normalizer && normalizer->Normalize(a.raw) == normalizer->Normalize(b.raw)) {
    ++normalized_match;
  }
}

Verdict Classify(const PairMatchStats& stats, const VerdictThresholds& thresholds) {
  if (stats.both_present == 0) return Verdict::kNotApplicable;
  if (stats.exact_match == stats.both_present) return Verdict::kDuplicate;
  if (*stats.match_rate_both_present() >= thresholds.near_duplicate) return Verdict::kNearDuplicate;
  return Verdict::kDistinct;
}

PairMatchStats PairMatch(const std::vector<ingest::CellValue>& a, const std::vector<ingest::CellValue>& b,
                         const StreetNormalizer* normalizer) {
  if (a.size() != b.size()) {
    ThrowInternal("pair_match stream misalignment: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  PairMatchStats s;
  s.normalized = normalizer != nullptr;
  for (size_t i = 0; i < a.size(); ++i) s.Add(a[i], b[i], normalizer);
  return s;
}

// ------------------------------------------------------------ concatenation

ConcatTemplate ConcatTemplate::Compile(std::string_view pattern) {
  auto count = [&](std::string_view needle) {
    size_t n = 0;
    for (size_t pos = pattern.find(needle); pos != std::string_view::npos; pos = pattern.find(needle, pos + 1)) ++n;
    return n;
  };
  if (count("{a}") != 1 || count("{b}") != 1) {
    ThrowConfig("concatenation template '" + std::string(pattern) + "' must contain {a} and {b} exactly once");
  }
  ConcatTemplate t;
  t.pattern_ = pattern;
  const size_t pa = pattern.find("{a}");
  const size_t pb = pattern.find("{b}");
  t.a_first_ = pa < pb;
  const size_t first = std::min(pa, pb);
  const size_t second = std::max(pa, pb);
  t.prefix_ = pattern.substr(0, first);
  t.middle_ = pattern.substr(first + 3, second - first - 3);
  t.suffix_ = pattern.substr(second + 3);
  return t;
}

bool ConcatTemplate::Matches(std::string_view target, std::string_view a, std::string_view b) const {
  const std::string_view x = a_first_ ? a : b;
  const std::string_view y = a_first_ ? b : a;
  if (target.size() != prefix_.size() + x.size() + middle_.size() + y.size() + suffix_.size()) return false;
  size_t pos = 0;
  for (std::string_view piece : {std::string_view(prefix_), x, std::string_view(middle_), y, std::string_view(suffix_)}) {
    if (target.compare(pos, piece.size(), piece) != 0) return false;
    pos += piece.size();
  }
  return true;
}

std::string ConcatTemplate::Render(std::string_view a, std::string_view b) const {
  const std::string_view x = a_first_ ? a : b;
  const std::string_view y = a_first_ ? b : a;
  std::string out;
  out.reserve(prefix_.size() + x.size() + middle_.size() + y.size() + suffix_.size());
  out.append(prefix_).append(x).append(middle_).append(y).append(suffix_);
  return out;
}

std::optional<double> ConcatStats::rate() const {
  if (all_present == 0) return std::nullopt;
  return static_cast<double>(matches) / static_cast<double>(all_present);
}

bool DependencyStats::holds() const {
  if (truncated || rows == 0) return false;
  return std::all_of(mapping.begin(), mapping.end(), [](const auto& m) { return m.second.size() == 1; });
}

std::vector<std::string> DependencyStats::violations() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : mapping) {
    if (v.size() > 1) out.push_back(k);
  }
  return out;
}

// ------------------------------------------------------------ analyzer

RedundancyAnalyzer::RedundancyAnalyzer(RedundancyConfig config, FindingSink& sink)
    : config_(std::move(config)), sink_(sink) {
  for (const auto& [k, v] : config_.street_abbreviations) normalizer_.AddAbbreviation(k, v);
  for (const auto& c : config_.concatenations) ConcatTemplate::Compile(c.pattern);
  if (!(config_.thresholds.near_duplicate > 0 && config_.thresholds.near_duplicate <= 1)) {
    ThrowConfig("near_duplicate threshold must lie in (0, 1]");
  }
}

void RedundancyAnalyzer::Begin(const ingest::RawTable& table) {
  pair_slots_.clear();
  pairs_.clear();
  concat_slots_.clear();
  concats_.clear();
  dependency_slots_.clear();
  dependencies_.clear();
  skipped_.clear();

  auto present = [&](const std::string& f) {
    if (table.FieldIndex(f) >= 0) return true;
    if (std::find(skipped_.begin(), skipped_.end(), f) == skipped_.end()) skipped_.push_back(f);
    return false;
  };
  std::set<std::pair<std::string, std::string>> seen;
  auto add_pair = [&](const std::string& a, const std::string& b, bool normalize) {
    if (a == b || !present(a) || !present(b)) return;
    if (!seen.insert(std::minmax(a, b)).second) return;
    pair_slots_.push_back({table.FieldIndex(a), table.FieldIndex(b), normalize});
    PairMatchStats s;
    s.field_a = a;
    s.field_b = b;
    s.normalized = normalize;
    pairs_.push_back(std::move(s));
  };
  for (const auto& p : config_.pairs) add_pair(p.a, p.b, p.normalize);
  for (size_t i = 0; i < config_.auto_candidates.size(); ++i) {
    for (size_t j = i + 1; j < config_.auto_candidates.size(); ++j) {
      add_pair(config_.auto_candidates[i], config_.auto_candidates[j], false);
    }
  }
  for (const auto& c : config_.concatenations) {
    if (!present(c.target) || !present(c.part_a) || !present(c.part_b)) continue;
    concat_slots_.push_back({table.FieldIndex(c.target), table.FieldIndex(c.part_a), table.FieldIndex(c.part_b),
                             ConcatTemplate::Compile(c.pattern)});
    concats_.push_back({.target = c.target, .part_a = c.part_a, .part_b = c.part_b, .pattern = c.pattern});
  }
  for (const auto& d : config_.dependencies) {
    if (!present(d.determinant) || !present(d.dependent)) continue;
    dependency_slots_.push_back({table.FieldIndex(d.determinant), table.FieldIndex(d.dependent)});
    dependencies_.emplace_back();
    dependencies_.back().determinant = d.determinant;
    dependencies_.back().dependent = d.dependent;
  }
}

void RedundancyAnalyzer::Consume(const ingest::Row& row) {
  for (size_t i = 0; i < pair_slots_.size(); ++i) {
    const auto& slot = pair_slots_[i];
    pairs_[i].Add(row.cells[static_cast<size_t>(slot.a)], row.cells[static_cast<size_t>(slot.b)],
                  slot.normalize ? &normalizer_ : nullptr);
  }
  for (size_t i = 0; i < concat_slots_.size(); ++i) {
    const auto& slot = concat_slots_[i];
    const auto& t = row.cells[static_cast<size_t>(slot.target)];
    const auto& a = row.cells[static_cast<size_t>(slot.a)];
    const auto& b = row.cells[static_cast<size_t>(slot.b)];
    ConcatStats& s = concats_[i];
    const bool parts = a.present() && b.present();
    if (t.missing()) {
      if (!t.raw.empty()) ++s.target_blank_text;
      if (parts) ++s.parts_only;
      continue;
    }
    if (!parts) {
      ++s.target_only;
      continue;
    }
    ++s.all_present;
    if (slot.tmpl.Matches(t.raw, a.raw, b.raw)) ++s.matches;
  }
  for (size_t i = 0; i < dependency_slots_.size(); ++i) {
    const auto& slot = dependency_slots_[i];
    const auto& det = row.cells[static_cast<size_t>(slot.determinant)];
    const auto& dep = row.cells[static_cast<size_t>(slot.dependent)];
    DependencyStats& s = dependencies_[i];
    if (dep.missing() && !dep.raw.empty()) ++s.dependent_blank_text;
    if (det.missing() || dep.missing()) {
      if (det.present()) ++s.determinant_only;
      if (dep.present()) ++s.dependent_only;
      continue;
    }
    ++s.rows;
    auto it = s.mapping.find(det.raw);
    if (it == s.mapping.end()) {
      if (s.mapping.size() >= config_.dependency_cap) {
        s.truncated = true;
        continue;
      }
      it = s.mapping.emplace(std::string(det.raw), std::map<std::string, uint64_t, std::less<>>{}).first;
    }
    auto& targets = it->second;
    auto jt = targets.find(dep.raw);
    if (jt == targets.end()) {
      targets.emplace(std::string(dep.raw), 1);
    } else {
      ++jt->second;
    }
  }
}

std::string FormatRate(const std::optional<double>& rate) {
  if (!rate) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *rate);
  return buf;
}

void RedundancyAnalyzer::Finish(const ingest::RawTable& /*table*/, FindingSink& sink) {
  for (const auto& f : skipped_) {
    sink.Emit(Finding::Make(RuleId::kInsufficientData, "field '" + f + "' not present; redundancy checks on it skipped")
                  .Field(f));
  }
  for (const auto& p : pairs_) {
    const Verdict v = Classify(p, config_.thresholds);
    if (v != Verdict::kDuplicate && v != Verdict::kNearDuplicate) continue;
    std::string msg = std::string(p.field_b) + " matches " + p.field_a + " on " + FormatRate(p.match_rate_both_present()) +
                      " of " + std::to_string(p.both_present) + " rows where both are present";
    if (p.normalized) msg += "; normalization gain " + FormatRate(p.normalization_gain());
    sink.Emit(Finding::Make(v == Verdict::kDuplicate ? RuleId::kRedundantDuplicate : RuleId::kRedundantNearDuplicate,
                            std::move(msg))
                  .Field(p.field_a)
                  .Field(p.field_b)
                  .Measured(*p.match_rate_both_present(), "rate"));
  }
  for (const auto& c : concats_) {
    const auto rate = c.rate();
    if (!rate || *rate < config_.thresholds.near_duplicate) continue;
    sink.Emit(Finding::Make(RuleId::kConcatenationColumn, c.target + " equals " + c.pattern + " over " + c.part_a +
                                                              ", " + c.part_b + " on " + FormatRate(rate) + " of " +
                                                              std::to_string(c.all_present) + " rows")
                  .Field(c.target)
                  .Field(c.part_a)
                  .Field(c.part_b)
                  .Measured(*rate, "rate"));
  }
  for (const auto& d : dependencies_) {
    if (!d.holds()) continue;
    sink.Emit(Finding::Make(RuleId::kFunctionalDependency, "each of " + std::to_string(d.mapping.size()) + " " +
                                                               d.determinant + " values maps to exactly one " +
                                                               d.dependent)
                  .Field(d.determinant)
                  .Field(d.dependent)
                  .Measured(static_cast<double>(d.mapping.size()), "values"));
  }
}

void WritePairsCsv(const std::vector<PairMatchStats>& pairs, const VerdictThresholds& thresholds,
                   const std::string& path) {
  ingest::CsvWriter out(path);
  out.WriteRow({"field_a", "field_b", "both_present", "exact_match", "rate_both_present", "verdict"});
  for (const auto& p : pairs) {
    const std::string both = std::to_string(p.both_present);
    const std::string exact = std::to_string(p.exact_match);
    const std::string rate = FormatRate(p.match_rate_both_present());
    out.WriteRow({p.field_a, p.field_b, both, exact, rate, VerdictName(Classify(p, thresholds))});
  }
  out.Close();
}

}  // namespace odqa::redundancy
