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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace odqa {

enum class Severity { kInfo = 0, kWarning = 1, kError = 2 };

std::string_view SeverityName(Severity severity);
std::optional<Severity> ParseSeverity(std::string_view text);

// The published rule catalog. Every Finding carries exactly one of these;
// docs/rules.md documents each id and a test keeps the two in sync.
enum class RuleId {
  // ingest
  kRaggedRow,
  kMalformedQuote,
  kHeaderCollision,
  kUnparseableTimestamp,
  // dictionary
  kUndocumentedField,
  kExperimentalField,
  kUnobservedField,
  kUndeclaredValue,
  kUnobservedDeclared,
  kTypeViolation,
  kDomainRefError,
  // profile
  kMissingnessTier,
  kApproximateProfile,
  kMissingAgencyField,
  // temporal
  kNegativeDuration,
  kZeroDuration,
  kSentinelDate,
  kExtremeDuration,
  kDstGapInvalid,
  kDstFoldAmbiguous,
  kHourSpike,
  kMidnightBatchSuspect,
  kMidnightExact,
  kPostCloseUpdate,
  kInfeasibleUpdateLag,
  kInsufficientData,
  // domain rules
  kInvalidValue,
  kGeoOutOfBounds,
  kDuplicateKey,
  kMissingKey,
  kPrecisionFlag,
  // redundancy
  kRedundantDuplicate,
  kRedundantNearDuplicate,
  kConcatenationColumn,
  kFunctionalDependency,
  // reduce
  kEncodeRefused,
};

struct RuleInfo {
  RuleId id;
  std::string_view name;
  Severity default_severity;
  std::string_view summary;
};

std::span<const RuleInfo> RuleCatalog();
const RuleInfo& LookupRule(RuleId id);
std::string_view RuleName(RuleId id);
/// Returns nullopt for ids outside the catalog.
std::optional<RuleId> ParseRuleId(std::string_view name);

struct RowLocator {
  uint64_t ordinal = 0;  // 1-based data row, header excluded
  std::string key;       // unique key value when the key field is present

  bool operator==(const RowLocator&) const = default;
};

/// One rule violation or anomaly. Build with Finding::Make or the fluent
/// setters; the aggregator takes ownership of a copy, so emitted findings are
/// never mutated afterwards.
class Finding {
 public:
  static Finding Make(RuleId rule, std::string message);
  /// Throws Error(kValidation) for ids not in the catalog.
  static Finding Make(std::string_view rule_name, std::string message);

  Finding& Field(std::string name);
  Finding& At(uint64_t ordinal, std::string key = {});
  Finding& Measured(double value, std::string unit);
  Finding& Agency(std::string agency);
  Finding& WithSeverity(Severity severity);

  RuleId rule() const { return rule_; }
  Severity severity() const { return severity_; }
  const std::vector<std::string>& fields() const { return fields_; }
  const std::vector<RowLocator>& locators() const { return locators_; }
  std::optional<uint64_t> first_row() const;
  const std::optional<double>& measured() const { return measured_; }
  const std::string& unit() const { return unit_; }
  const std::string& message() const { return message_; }
  const std::string& agency() const { return agency_; }

 private:
  Finding(RuleId rule, std::string message);

  RuleId rule_;
  Severity severity_;
  std::vector<std::string> fields_;
  std::vector<RowLocator> locators_;
  std::optional<double> measured_;
  std::string unit_;
  std::string message_;
  std::string agency_;
};

class FindingSink {
 public:
  virtual ~FindingSink() = default;
  virtual void Emit(Finding finding) = 0;
};

/// Collects everything; used by tests and by small sub-pipelines.
class VectorSink : public FindingSink {
 public:
  void Emit(Finding finding) override { findings_.push_back(std::move(finding)); }

  const std::vector<Finding>& findings() const { return findings_; }
  size_t Count(RuleId rule) const;

 private:
  std::vector<Finding> findings_;
};

}  // namespace odqa
