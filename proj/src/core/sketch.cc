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

#include "odqa/core/sketch.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include "odqa/core/error.h"
#include "odqa/core/value_counter.h"

namespace odqa {

HyperLogLog::HyperLogLog(int precision) : precision_(precision) {
  if (precision < 4 || precision > 18) ThrowConfig("hyperloglog precision must be in [4, 18]");
  registers_.assign(size_t{1} << precision, 0);
}

void HyperLogLog::AddHash(uint64_t hash) {
  const size_t index = hash >> (64 - precision_);
  const uint64_t rest = hash << precision_;
  const int rank = rest == 0 ? 64 - precision_ + 1 : std::countl_zero(rest) + 1;
  uint8_t& r = registers_[index];
  if (rank > r) r = static_cast<uint8_t>(rank);
}

void HyperLogLog::Add(std::string_view value) { AddHash(ValueCounter::Hash(value)); }

uint64_t HyperLogLog::Estimate() const {
  const double m = static_cast<double>(registers_.size());
  double sum = 0;
  size_t zeros = 0;
  for (uint8_t r : registers_) {
    sum += std::ldexp(1.0, -r);
    zeros += r == 0;
  }
  const double alpha = 0.7213 / (1.0 + 1.079 / m);
  double estimate = alpha * m * m / sum;
  if (estimate <= 2.5 * m && zeros > 0) estimate = m * std::log(m / static_cast<double>(zeros));
  return static_cast<uint64_t>(std::llround(estimate));
}

SpaceSaving::SpaceSaving(size_t capacity) : capacity_(capacity) {
  if (capacity == 0) ThrowConfig("heavy-hitter capacity must be positive");
  heap_.reserve(capacity);
  index_.reserve(capacity * 2);
}

bool SpaceSaving::Less(size_t a, size_t b) const {
  const Counter& x = heap_[a];
  const Counter& y = heap_[b];
  return x.count != y.count ? x.count < y.count : x.value > y.value;
}

void SpaceSaving::Swap(size_t a, size_t b) {
  std::swap(heap_[a], heap_[b]);
  index_[heap_[a].value] = a;
  index_[heap_[b].value] = b;
}

void SpaceSaving::SiftUp(size_t i) {
  while (i > 0) {
    const size_t parent = (i - 1) / 2;
    if (!Less(i, parent)) break;
    Swap(i, parent);
    i = parent;
  }
}

void SpaceSaving::SiftDown(size_t i) {
  while (true) {
    const size_t l = 2 * i + 1;
    const size_t r = l + 1;
    size_t smallest = i;
    if (l < heap_.size() && Less(l, smallest)) smallest = l;
    if (r < heap_.size() && Less(r, smallest)) smallest = r;
    if (smallest == i) return;
    Swap(i, smallest);
    i = smallest;
  }
}

void SpaceSaving::Seed(std::string_view value, uint64_t count) {
  if (heap_.size() >= capacity_) ThrowInternal("heavy-hitter seed beyond capacity");
  std::string key(value);
  if (index_.count(key)) ThrowInternal("heavy-hitter seed repeated");
  heap_.push_back({key, count, 0});
  index_.emplace(std::move(key), heap_.size() - 1);
  SiftUp(heap_.size() - 1);
}

void SpaceSaving::Add(std::string_view value, uint64_t n) {
  std::string key(value);
  auto it = index_.find(key);
  if (it != index_.end()) {
    heap_[it->second].count += n;
    SiftDown(it->second);
    return;
  }
  if (heap_.size() < capacity_) {
    Seed(value, n);
    return;
  }
  Counter& min = heap_[0];
  index_.erase(min.value);
  min.error = min.count;
  min.count += n;
  min.value = std::move(key);
  index_.emplace(min.value, 0);
  SiftDown(0);
}

std::vector<SpaceSaving::Counter> SpaceSaving::Top(size_t limit) const {
  std::vector<Counter> out = heap_;
  std::sort(out.begin(), out.end(), [](const Counter& a, const Counter& b) {
    return a.count != b.count ? a.count > b.count : a.value < b.value;
  });
  if (limit != 0 && out.size() > limit) out.resize(limit);
  return out;
}

}  // namespace odqa
