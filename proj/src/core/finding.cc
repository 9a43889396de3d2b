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

#include "odqa/core/finding.h"

#include <algorithm>
#include <array>

#include "odqa/core/error.h"

namespace odqa {

namespace {

constexpr std::array kCatalog = {
    RuleInfo{RuleId::kRaggedRow, "ragged_row", Severity::kError,
             "row cell count differs from the header; row excluded from rule evaluation"},
    RuleInfo{RuleId::kMalformedQuote, "malformed_quote", Severity::kError,
             "quoting violates RFC 4180 or the row exceeds the row size limit; row skipped"},
    RuleInfo{RuleId::kHeaderCollision, "header_collision", Severity::kWarning,
             "two headers normalize to the same name; later ones get _2, _3 suffixes"},
    RuleInfo{RuleId::kUnparseableTimestamp, "unparseable_timestamp", Severity::kError,
             "present timestamp cell matches none of the configured formats"},
    RuleInfo{RuleId::kUndocumentedField, "undocumented_field", Severity::kWarning,
             "column present in the file but not declared in the data dictionary"},
    RuleInfo{RuleId::kExperimentalField, "experimental_field", Severity::kInfo,
             "undocumented @computed_region column; excluded from rules"},
    RuleInfo{RuleId::kUnobservedField, "unobserved_field", Severity::kInfo,
             "column declared in the data dictionary but absent from the file"},
    RuleInfo{RuleId::kUndeclaredValue, "undeclared_value", Severity::kWarning,
             "observed value outside the declared domain of its field"},
    RuleInfo{RuleId::kUnobservedDeclared, "unobserved_declared", Severity::kInfo,
             "declared domain value never observed"},
    RuleInfo{RuleId::kTypeViolation, "type_violation", Severity::kError,
             "present cell fails to parse under the declared type class"},
    RuleInfo{RuleId::kDomainRefError, "domain_ref_error", Severity::kWarning,
             "reference list for a field could not be read; field skipped"},
    RuleInfo{RuleId::kMissingnessTier, "missingness_tier", Severity::kInfo,
             "per-field blank percentage and tier"},
    RuleInfo{RuleId::kApproximateProfile, "approximate_profile", Severity::kInfo,
             "distinct cap exceeded; top values and distinct count are approximate"},
    RuleInfo{RuleId::kMissingAgencyField, "missing_agency_field", Severity::kWarning,
             "configured agency field absent; per-agency breakdowns omitted"},
    RuleInfo{RuleId::kNegativeDuration, "negative_duration", Severity::kError,
             "closed timestamp precedes created timestamp"},
    RuleInfo{RuleId::kZeroDuration, "zero_duration", Severity::kWarning,
             "closed timestamp equals created timestamp to the second"},
    RuleInfo{RuleId::kSentinelDate, "sentinel_date", Severity::kError,
             "timestamp falls on a configured placeholder date such as 1900-01-01"},
    RuleInfo{RuleId::kExtremeDuration, "extreme_duration", Severity::kWarning,
             "absolute duration exceeds the extreme cutoff"},
    RuleInfo{RuleId::kDstGapInvalid, "dst_gap_invalid", Severity::kWarning,
             "local timestamp falls inside a spring-forward gap and never existed"},
    RuleInfo{RuleId::kDstFoldAmbiguous, "dst_fold_ambiguous", Severity::kInfo,
             "local timestamp falls inside a fall-back fold and maps to two instants"},
    RuleInfo{RuleId::kHourSpike, "hour_spike", Severity::kWarning,
             "on-the-hour bucket count exceeds mean + k sigma over the 24 hours"},
    RuleInfo{RuleId::kMidnightBatchSuspect, "midnight_batch_suspect", Severity::kWarning,
             "hour-0 on-the-hour spike, suggestive of batch timestamping"},
    RuleInfo{RuleId::kMidnightExact, "midnight_exact", Severity::kInfo,
             "created and/or closed exactly at 00:00:00"},
    RuleInfo{RuleId::kPostCloseUpdate, "post_close_update", Severity::kWarning,
             "resolution updated more than the post-close window after closing"},
    RuleInfo{RuleId::kInfeasibleUpdateLag, "infeasible_update_lag", Severity::kWarning,
             "update lag beyond the extreme cutoff; excluded from the distribution"},
    RuleInfo{RuleId::kInsufficientData, "insufficient_data", Severity::kInfo,
             "too few observations for a statistical detector"},
    RuleInfo{RuleId::kInvalidValue, "invalid_value", Severity::kError,
             "present value not found in the field's reference list"},
    RuleInfo{RuleId::kGeoOutOfBounds, "geo_out_of_bounds", Severity::kError,
             "latitude/longitude pair outside the configured bounding box"},
    RuleInfo{RuleId::kDuplicateKey, "duplicate_key", Severity::kError,
             "value occurs more than once in a field required to be unique"},
    RuleInfo{RuleId::kMissingKey, "missing_key", Severity::kError,
             "required unique key is missing"},
    RuleInfo{RuleId::kPrecisionFlag, "precision_flag", Severity::kWarning,
             "more decimal digits than the configured maximum"},
    RuleInfo{RuleId::kRedundantDuplicate, "redundant_duplicate", Severity::kInfo,
             "column pair matches on 100% of rows where both are present"},
    RuleInfo{RuleId::kRedundantNearDuplicate, "redundant_near_duplicate", Severity::kInfo,
             "column pair matches at or above the near-duplicate threshold"},
    RuleInfo{RuleId::kConcatenationColumn, "concatenation_column", Severity::kInfo,
             "column equals a template over two other columns"},
    RuleInfo{RuleId::kFunctionalDependency, "functional_dependency", Severity::kInfo,
             "one column is determined by another (e.g. agency -> agency_name)"},
    RuleInfo{RuleId::kEncodeRefused, "encode_refused", Severity::kWarning,
             "column exceeds the encode cap or would not shrink; left as text"},
};

}  // namespace

std::string_view SeverityName(Severity severity) {
  switch (severity) {
    case Severity::kInfo:
      return "info";
    case Severity::kWarning:
      return "warning";
    case Severity::kError:
      return "error";
  }
  return "info";
}

std::optional<Severity> ParseSeverity(std::string_view text) {
  if (text == "info") return Severity::kInfo;
  if (text == "warning") return Severity::kWarning;
  if (text == "error") return Severity::kError;
  return std::nullopt;
}

std::span<const RuleInfo> RuleCatalog() { return kCatalog; }

const RuleInfo& LookupRule(RuleId id) {
  for (const auto& info : kCatalog) {
    if (info.id == id) return info;
  }
  ThrowInternal("rule id missing from catalog");
}

std::string_view RuleName(RuleId id) { return LookupRule(id).name; }

std::optional<RuleId> ParseRuleId(std::string_view name) {
  for (const auto& info : kCatalog) {
    if (info.name == name) return info.id;
  }
  return std::nullopt;
}

Finding::Finding(RuleId rule, std::string message)
    : rule_(rule), severity_(LookupRule(rule).default_severity), message_(std::move(message)) {}

Finding Finding::Make(RuleId rule, std::string message) { return Finding(rule, std::move(message)); }

Finding Finding::Make(std::string_view rule_name, std::string message) {
  auto id = ParseRuleId(rule_name);
  if (!id) ThrowValidation("unknown rule id '" + std::string(rule_name) + "'");
  return Finding(*id, std::move(message));
}

Finding& Finding::Field(std::string name) {
  fields_.push_back(std::move(name));
  return *this;
}

Finding& Finding::At(uint64_t ordinal, std::string key) {
  locators_.push_back(RowLocator{ordinal, std::move(key)});
  return *this;
}

Finding& Finding::Measured(double value, std::string unit) {
  measured_ = value;
  unit_ = std::move(unit);
  return *this;
}

Finding& Finding::Agency(std::string agency) {
  agency_ = std::move(agency);
  return *this;
}

Finding& Finding::WithSeverity(Severity severity) {
  severity_ = severity;
  return *this;
}

std::optional<uint64_t> Finding::first_row() const {
  if (locators_.empty()) return std::nullopt;
  return locators_.front().ordinal;
}

size_t VectorSink::Count(RuleId rule) const {
  return static_cast<size_t>(std::count_if(findings_.begin(), findings_.end(),
                                           [rule](const Finding& f) { return f.rule() == rule; }));
}

}  // namespace odqa
