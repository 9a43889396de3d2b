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

#include "odqa/report/aggregate.h"

#include <algorithm>

namespace odqa::report {

namespace {

bool HeldLess(uint64_t ao, uint64_t as, uint64_t bo, uint64_t bs) { return ao != bo ? ao < bo : as < bs; }

}  // namespace

Severity SeverityPolicy::For(RuleId rule) const {
  const auto it = overrides_.find(rule);
  return it != overrides_.end() ? it->second : LookupRule(rule).default_severity;
}

int ExitStatusFor(const std::vector<RuleSection>& sections, Severity threshold) {
  for (const auto& s : sections) {
    if (s.count > 0 && s.severity >= threshold) return 1;
  }
  return 0;
}

Aggregator::Aggregator(SeverityPolicy policy, size_t sample_cap) : policy_(std::move(policy)), sample_cap_(sample_cap) {}

void Aggregator::Emit(Finding finding) {
  finding.WithSeverity(policy_.For(finding.rule()));
  const uint64_t ordinal = finding.first_row().value_or(0);
  std::lock_guard lock(mu_);
  const uint64_t seq = seq_++;
  ++total_;
  Bucket& b = buckets_[finding.rule()];
  ++b.count;
  if (sample_cap_ == 0) return;
  auto cmp = [](const Held& a, const Held& c) { return HeldLess(a.ordinal, a.seq, c.ordinal, c.seq); };
  if (b.heap.size() < sample_cap_) {
    b.heap.push_back({ordinal, seq, std::move(finding)});
    std::push_heap(b.heap.begin(), b.heap.end(), cmp);
    return;
  }
  const Held& worst = b.heap.front();
  if (!HeldLess(ordinal, seq, worst.ordinal, worst.seq)) return;
  std::pop_heap(b.heap.begin(), b.heap.end(), cmp);
  b.heap.back() = {ordinal, seq, std::move(finding)};
  std::push_heap(b.heap.begin(), b.heap.end(), cmp);
}

std::vector<RuleSection> Aggregator::Sections() const {
  std::lock_guard lock(mu_);
  std::vector<RuleSection> out;
  for (const auto& [rule, b] : buckets_) {
    RuleSection s{rule, policy_.For(rule), b.count, {}};
    std::vector<const Held*> held;
    for (const auto& h : b.heap) held.push_back(&h);
    std::sort(held.begin(), held.end(),
              [](const Held* a, const Held* c) { return HeldLess(a->ordinal, a->seq, c->ordinal, c->seq); });
    for (const Held* h : held) s.sample.push_back(h->finding);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const RuleSection& a, const RuleSection& b) {
    return RuleName(a.rule) < RuleName(b.rule);
  });
  return out;
}

uint64_t Aggregator::Count(RuleId rule) const {
  std::lock_guard lock(mu_);
  const auto it = buckets_.find(rule);
  return it == buckets_.end() ? 0 : it->second.count;
}

}  // namespace odqa::report
