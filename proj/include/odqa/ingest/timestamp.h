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

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace odqa::ingest {

inline constexpr int64_t kSecondsPerDay = 86400;

/// Wall-clock date and time with no zone attached.
struct LocalDateTime {
  int64_t days = 0;            // days since 1970-01-01
  int32_t seconds_of_day = 0;  // [0, 86400)

  int64_t local_seconds() const { return days * kSecondsPerDay + seconds_of_day; }
  std::chrono::year_month_day date() const;
  int hour() const { return seconds_of_day / 3600; }
  int minute() const { return (seconds_of_day / 60) % 60; }
  int second() const { return seconds_of_day % 60; }

  static LocalDateTime FromCivil(int year, unsigned month, unsigned day, int32_t seconds_of_day = 0);
  bool operator==(const LocalDateTime&) const = default;
};

/// "YYYY-MM-DD HH:MM:SS".
std::string FormatIso(const LocalDateTime& t);
/// Parses "YYYY-MM-DD" into days since epoch; nullopt when malformed.
std::optional<int64_t> ParseIsoDate(std::string_view text);

enum class ZoneStatus { kUnambiguous, kDstGapInvalid, kDstFoldAmbiguous };

std::string_view ZoneStatusName(ZoneStatus status);

struct ZoneTransition {
  int64_t utc = 0;  // instant of the change, seconds since epoch
  int32_t offset_before = 0;
  int32_t offset_after = 0;
};

/// Offsets for a single zone as a sorted transition table.
class ZoneRules {
 public:
  struct Resolution {
    ZoneStatus status = ZoneStatus::kUnambiguous;
    std::array<int64_t, 2> candidates{};
    int count = 0;
  };

  /// US Eastern rules (EST/EDT) for the inclusive year range. Covers the
  /// 1987-2006 (April/October) and 2007+ (March/November) regimes; earlier
  /// years use last-Sunday-of-April/October.
  static ZoneRules AmericaNewYork(int first_year = 1990, int last_year = 2040);
  static ZoneRules FixedOffset(int32_t offset_seconds);

  /// Throws Error(kConfig) unless transitions are strictly increasing and each
  /// offset_before equals the previous offset_after.
  ZoneRules(int32_t initial_offset, std::vector<ZoneTransition> transitions);

  int32_t OffsetAt(int64_t utc) const;
  Resolution Resolve(int64_t local_seconds) const;
  const std::vector<ZoneTransition>& transitions() const { return transitions_; }

 private:
  int32_t initial_offset_;
  std::vector<ZoneTransition> transitions_;
};

struct LocalTimestamp {
  LocalDateTime local;
  ZoneStatus zone_status = ZoneStatus::kUnambiguous;
  std::array<int64_t, 2> candidates{};
  uint8_t candidate_count = 0;

  std::span<const int64_t> utc_candidates() const { return {candidates.data(), candidate_count}; }
  /// Earliest UTC candidate; nullopt for gap times.
  std::optional<int64_t> earliest() const {
    if (candidate_count == 0) return std::nullopt;
    return candidates[0];
  }
};

/// A compiled timestamp pattern. Tokens: YYYY, MM, DD, HH (00-23),
/// hh (01-12), mm, ss, "AM|PM", and "[.fff]" (optional fractional seconds,
/// truncated). Everything else is a literal. Numeric fields are fixed width.
class TimestampFormat {
 public:
  static TimestampFormat Compile(std::string_view pattern);

  std::optional<LocalDateTime> Match(std::string_view text) const;
  std::string Print(const LocalDateTime& t) const;
  const std::string& pattern() const { return pattern_; }

 private:
  enum class Token : uint8_t { kLiteral, kYear, kMonth, kDay, kHour24, kHour12, kMinute, kSecond, kMeridiem, kFraction };
  struct Piece {
    Token token;
    char literal;
  };

  std::string pattern_;
  std::vector<Piece> pieces_;
  bool has_date_ = false;
};

/// Default order: portal export format first, then ISO, then date-only forms.
std::vector<std::string> DefaultTimestampFormats();

class TimestampParser {
 public:
  TimestampParser(std::vector<TimestampFormat> formats, ZoneRules zone);
  static TimestampParser Default();

  /// Tries formats in order; nullopt when none matches. Caller handles
  /// missing sentinels first.
  std::optional<LocalTimestamp> Parse(std::string_view raw) const;
  LocalTimestamp Resolve(const LocalDateTime& local) const;

  const ZoneRules& zone() const { return zone_; }
  const std::vector<TimestampFormat>& formats() const { return formats_; }

 private:
  std::vector<TimestampFormat> formats_;
  ZoneRules zone_;
};

}  // namespace odqa::ingest
