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
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace odqa {

/// HyperLogLog distinct counter with 2^precision one-byte registers.
/// Standard error is about 1.04 / sqrt(2^precision).
class HyperLogLog {
 public:
  explicit HyperLogLog(int precision = 14);

  void AddHash(uint64_t hash);
  void Add(std::string_view value);
  uint64_t Estimate() const;
  int precision() const { return precision_; }

 private:
  int precision_;
  std::vector<uint8_t> registers_;
};

/// SpaceSaving heavy hitters (Metwally et al.) over at most `capacity`
/// counters. Every reported count overestimates the true count by at most
/// its `error`, and any value whose true count exceeds n / capacity is kept.
class SpaceSaving {
 public:
  struct Counter {
    std::string value;
    uint64_t count;
    uint64_t error;
  };

  explicit SpaceSaving(size_t capacity);

  void Add(std::string_view value, uint64_t n = 1);
  /// Inserts an exactly known count; only valid while below capacity.
  void Seed(std::string_view value, uint64_t count);

  /// Ordered by count desc then value asc.
  std::vector<Counter> Top(size_t limit = 0) const;
  size_t capacity() const { return capacity_; }
  size_t size() const { return heap_.size(); }

 private:
  void SiftDown(size_t i);
  void SiftUp(size_t i);
  void Swap(size_t a, size_t b);
  bool Less(size_t a, size_t b) const;

  size_t capacity_;
  std::vector<Counter> heap_;  // min-heap on (count, value)
  std::unordered_map<std::string, size_t> index_;
};

}  // namespace odqa
