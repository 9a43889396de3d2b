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
#include <string>
#include <string_view>
#include <vector>

namespace odqa::ingest {

enum class MissingSentinel : uint8_t {
  kNone,
  kEmpty,
  kWhitespace,
  kNA,          // NA, case-insensitive
  kNSlashA,     // N/A, case-insensitive
  kAngleNA,     // <NA>
  kNullLiteral, // null, case-insensitive
  kCustom,      // configured extra token
};

inline constexpr int kSentinelKinds = 8;

std::string_view SentinelName(MissingSentinel sentinel);

/// Classifies missing-data tokens on the whitespace-trimmed cell text.
class MissingClassifier {
 public:
  MissingClassifier() = default;
  /// Extra tokens are matched case-insensitively after trimming.
  explicit MissingClassifier(std::vector<std::string> extra_tokens);

  MissingSentinel Classify(std::string_view raw) const;

 private:
  std::vector<std::string> extra_;
  size_t longest_extra_ = 0;
};

/// Shorthand for the default sentinel set.
MissingSentinel ClassifyMissing(std::string_view raw);

/// One parsed cell. `raw` is the unescaped field content and points into the
/// reader's buffer; it is valid only for the duration of the row callback.
struct CellValue {
  std::string_view raw;
  MissingSentinel sentinel = MissingSentinel::kNone;
  /// Bytes the cell occupied in the source file, quotes included.
  uint32_t disk_bytes = 0;

  bool present() const { return sentinel == MissingSentinel::kNone; }
  bool missing() const { return sentinel != MissingSentinel::kNone; }
};

std::string_view Trim(std::string_view s);

}  // namespace odqa::ingest
