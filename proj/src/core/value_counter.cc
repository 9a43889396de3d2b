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

#include "odqa/core/value_counter.h"

#include <algorithm>
#include <cstring>
#include <functional>
#include <limits>

#include "odqa/core/error.h"

namespace odqa {

std::string_view StringArena::Store(std::string_view s) {
  if (s.empty()) return {};
  if (s.size() > left_) {
    const size_t size = std::max(block_bytes_, s.size());
    blocks_.push_back(std::make_unique<char[]>(size));
    reserved_ += size;
    if (size == block_bytes_) {
      cur_ = blocks_.back().get();
      left_ = size;
    } else {
      // Oversized value gets a private block; keep filling the current one.
      std::memcpy(blocks_.back().get(), s.data(), s.size());
      return {blocks_.back().get(), s.size()};
    }
  }
  std::memcpy(cur_, s.data(), s.size());
  std::string_view out(cur_, s.size());
  cur_ += s.size();
  left_ -= s.size();
  return out;
}

void StringArena::Clear() {
  blocks_.clear();
  blocks_.shrink_to_fit();
  cur_ = nullptr;
  left_ = 0;
  reserved_ = 0;
}

uint64_t ValueCounter::Hash(std::string_view value) {
  uint64_t h = std::hash<std::string_view>{}(value);
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

size_t ValueCounter::Probe(std::string_view value, uint64_t hash) const {
  const uint64_t tag = hash >> 32;
  size_t i = static_cast<size_t>(hash) & mask_;
  while (true) {
    const uint64_t slot = slots_[i];
    if (slot == 0) return i;
    if ((slot >> 32) == tag) {
      const Entry& e = entries_[static_cast<uint32_t>(slot) - 1];
      if (e.size == value.size() && std::memcmp(e.data, value.data(), value.size()) == 0) return i;
    }
    i = (i + 1) & mask_;
  }
}

void ValueCounter::Grow() {
  const size_t cap = slots_.empty() ? 64 : slots_.size() * 2;
  std::vector<uint64_t> old;
  old.swap(slots_);
  slots_.assign(cap, 0);
  mask_ = cap - 1;
  for (uint64_t slot : old) {
    if (slot == 0) continue;
    const Entry& e = entries_[static_cast<uint32_t>(slot) - 1];
    const uint64_t h = Hash({e.data, e.size});
    size_t i = static_cast<size_t>(h) & mask_;
    while (slots_[i] != 0) i = (i + 1) & mask_;
    slots_[i] = slot;
  }
}

uint32_t ValueCounter::Add(std::string_view value, uint64_t n) {
  if ((entries_.size() + 1) * 10 > slots_.size() * 7) Grow();
  const uint64_t h = Hash(value);
  const size_t i = Probe(value, h);
  if (slots_[i] != 0) {
    const uint32_t id = static_cast<uint32_t>(slots_[i]) - 1;
    entries_[id].count += n;
    return id;
  }
  if (entries_.size() >= std::numeric_limits<uint32_t>::max() - 1) ThrowInternal("value counter overflow");
  const std::string_view stored = arena_.Store(value);
  const auto id = static_cast<uint32_t>(entries_.size());
  entries_.push_back({stored.data(), static_cast<uint32_t>(stored.size()), n});
  slots_[i] = ((h >> 32) << 32) | (uint64_t{id} + 1);
  return id;
}

std::optional<uint32_t> ValueCounter::Find(std::string_view value) const {
  if (slots_.empty()) return std::nullopt;
  const size_t i = Probe(value, Hash(value));
  if (slots_[i] == 0) return std::nullopt;
  return static_cast<uint32_t>(slots_[i]) - 1;
}

size_t ValueCounter::memory_bytes() const {
  return arena_.reserved_bytes() + entries_.capacity() * sizeof(Entry) + slots_.capacity() * sizeof(uint64_t);
}

void ValueCounter::Clear() {
  arena_.Clear();
  entries_ = {};
  slots_ = {};
  mask_ = 0;
}

std::vector<std::pair<std::string_view, uint64_t>> ValueCounter::Sorted(size_t limit) const {
  std::vector<std::pair<std::string_view, uint64_t>> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) out.emplace_back(std::string_view(e.data, e.size), e.count);
  auto by_count = [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  if (limit != 0 && limit < out.size()) {
    std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(limit), out.end(), by_count);
    out.resize(limit);
  } else {
    std::sort(out.begin(), out.end(), by_count);
  }
  return out;
}

}  // namespace odqa
