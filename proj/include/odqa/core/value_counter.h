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
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace odqa {

/// Append-only byte arena. Stored views stay valid until the arena dies.
class StringArena {
 public:
  explicit StringArena(size_t block_bytes = size_t{1} << 20) : block_bytes_(block_bytes) {}

  std::string_view Store(std::string_view s);
  size_t reserved_bytes() const { return reserved_; }
  void Clear();

 private:
  size_t block_bytes_;
  std::vector<std::unique_ptr<char[]>> blocks_;
  char* cur_ = nullptr;
  size_t left_ = 0;
  size_t reserved_ = 0;
};

/// Open-addressing string -> count table. Ids are dense and follow first
/// insertion, so the table doubles as a first-appearance dictionary.
/// Roughly 40 bytes per entry plus the value bytes.
class ValueCounter {
 public:
  ValueCounter() = default;

  uint32_t Add(std::string_view value, uint64_t n = 1);
  std::optional<uint32_t> Find(std::string_view value) const;

  size_t size() const { return entries_.size(); }
  std::string_view value(uint32_t id) const { return {entries_[id].data, entries_[id].size}; }
  uint64_t count(uint32_t id) const { return entries_[id].count; }
  size_t memory_bytes() const;
  void Clear();

  /// (value, count) ordered by count desc then value asc; limit 0 = all.
  std::vector<std::pair<std::string_view, uint64_t>> Sorted(size_t limit = 0) const;

  static uint64_t Hash(std::string_view value);

 private:
  struct Entry {
    const char* data;
    uint32_t size;
    uint64_t count;
  };

  size_t Probe(std::string_view value, uint64_t hash) const;
  void Grow();

  StringArena arena_;
  std::vector<Entry> entries_;
  std::vector<uint64_t> slots_;  // (hash >> 32) << 32 | (id + 1); 0 = empty
  size_t mask_ = 0;
};

}  // namespace odqa
