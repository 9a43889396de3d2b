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
#include <mutex>
#include <vector>

#include "odqa/core/finding.h"

namespace odqa::report {

/// Catalog default severities with per-rule overrides.
class SeverityPolicy {
 public:
  void Override(RuleId rule, Severity severity) { overrides_[rule] = severity; }
  Severity For(RuleId rule) const;
  const std::map<RuleId, Severity>& overrides() const { return overrides_; }

 private:
  std::map<RuleId, Severity> overrides_;
};

struct RuleSection {
  RuleId rule;
  Severity severity = Severity::kInfo;
  uint64_t count = 0;
  std::vector<Finding> sample;  // row ordinal asc, then emission order
};

/// Exit status for a set of sections: 1 when any rule at or above
/// `threshold` fired, else 0.
int ExitStatusFor(const std::vector<RuleSection>& sections, Severity threshold);

/// Counts every finding exactly and keeps the `sample_cap` lowest-ordinal
/// findings per rule. Findings without a row sort before row findings.
/// Emit is serialized, so producers may run on several threads; the retained
/// sample is chosen by (ordinal, emission sequence).
class Aggregator : public FindingSink {
 public:
  explicit Aggregator(SeverityPolicy policy = {}, size_t sample_cap = 100);

  void Emit(Finding finding) override;

  /// Sections for rules with at least one finding, ordered by rule name.
  std::vector<RuleSection> Sections() const;
  uint64_t Count(RuleId rule) const;
  uint64_t total() const { return total_; }
  const SeverityPolicy& policy() const { return policy_; }

 private:
  struct Held {
    uint64_t ordinal;
    uint64_t seq;
    Finding finding;
  };
  struct Bucket {
    uint64_t count = 0;
    std::vector<Held> heap;  // max-heap on (ordinal, seq)
  };

  SeverityPolicy policy_;
  size_t sample_cap_;
  mutable std::mutex mu_;
  std::map<RuleId, Bucket> buckets_;
  uint64_t seq_ = 0;
  uint64_t total_ = 0;
};

}  // namespace odqa::report
