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

#include "odqa/ingest/timestamp.h"

#include <algorithm>
#include <cstdio>

#include "odqa/core/error.h"
#include "odqa/ingest/cell.h"

namespace odqa::ingest {

namespace chr = std::chrono;

std::chrono::year_month_day LocalDateTime::date() const {
  return chr::year_month_day{chr::sys_days{chr::days{days}}};
}

LocalDateTime LocalDateTime::FromCivil(int year, unsigned month, unsigned day, int32_t seconds_of_day) {
  const chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
  return LocalDateTime{chr::sys_days{ymd}.time_since_epoch().count(), seconds_of_day};
}

std::string FormatIso(const LocalDateTime& t) {
  const auto ymd = t.date();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), t.hour(), t.minute(),
                t.second());
  return buf;
}

std::optional<int64_t> ParseIsoDate(std::string_view text) {
  static const TimestampFormat kDate = TimestampFormat::Compile("YYYY-MM-DD");
  auto m = kDate.Match(Trim(text));
  if (!m) return std::nullopt;
  return m->days;
}

std::string_view ZoneStatusName(ZoneStatus status) {
  switch (status) {
    case ZoneStatus::kUnambiguous:
      return "unambiguous";
    case ZoneStatus::kDstGapInvalid:
      return "dst_gap_invalid";
    case ZoneStatus::kDstFoldAmbiguous:
      return "dst_fold_ambiguous";
  }
  return "unambiguous";
}

// ---------------------------------------------------------------- ZoneRules

namespace {

constexpr int32_t kEst = -5 * 3600;
constexpr int32_t kEdt = -4 * 3600;

int64_t DaysOf(chr::year_month_day ymd) { return chr::sys_days{ymd}.time_since_epoch().count(); }

int64_t NthSunday(int year, unsigned month, unsigned n) {
  const chr::year_month_weekday ymw{chr::year{year}, chr::month{month}, chr::Sunday[n]};
  return chr::sys_days{ymw}.time_since_epoch().count();
}

int64_t LastSunday(int year, unsigned month) {
  const chr::year_month_weekday_last ymwl{chr::year{year}, chr::month{month}, chr::weekday_last{chr::Sunday}};
  return chr::sys_days{ymwl}.time_since_epoch().count();
}

}  // namespace

ZoneRules::ZoneRules(int32_t initial_offset, std::vector<ZoneTransition> transitions)
    : initial_offset_(initial_offset), transitions_(std::move(transitions)) {
  int32_t current = initial_offset_;
  for (size_t i = 0; i < transitions_.size(); ++i) {
    const auto& t = transitions_[i];
    if (i > 0 && t.utc <= transitions_[i - 1].utc) ThrowConfig("zone transitions must be strictly increasing");
    if (t.offset_before != current) ThrowConfig("zone transition offsets are not continuous");
    current = t.offset_after;
  }
}

ZoneRules ZoneRules::AmericaNewYork(int first_year, int last_year) {
  if (first_year > last_year) ThrowConfig("zone year range is empty");
  std::vector<ZoneTransition> out;
  for (int y = first_year; y <= last_year; ++y) {
    int64_t start_day, end_day;
    if (y >= 2007) {
      start_day = NthSunday(y, 3, 2);
      end_day = NthSunday(y, 11, 1);
    } else if (y >= 1987) {
      start_day = NthSunday(y, 4, 1);
      end_day = LastSunday(y, 10);
    } else {
      start_day = LastSunday(y, 4);
      end_day = LastSunday(y, 10);
    }
    // 02:00 local standard time and 02:00 local daylight time respectively.
    out.push_back({start_day * kSecondsPerDay + 2 * 3600 - kEst, kEst, kEdt});
    out.push_back({end_day * kSecondsPerDay + 2 * 3600 - kEdt, kEdt, kEst});
  }
  return ZoneRules(kEst, std::move(out));
}

ZoneRules ZoneRules::FixedOffset(int32_t offset_seconds) { return ZoneRules(offset_seconds, {}); }

int32_t ZoneRules::OffsetAt(int64_t utc) const {
  auto it = std::upper_bound(transitions_.begin(), transitions_.end(), utc,
                             [](int64_t v, const ZoneTransition& t) { return v < t.utc; });
  if (it == transitions_.begin()) return initial_offset_;
  return std::prev(it)->offset_after;
}

ZoneRules::Resolution ZoneRules::Resolve(int64_t local_seconds) const {
  // Any offset in force within a day of the local time is a candidate; an
  // instant is valid when the zone agrees with the offset used to reach it.
  std::array<int32_t, 3> offsets{OffsetAt(local_seconds - 2 * kSecondsPerDay), OffsetAt(local_seconds),
                                 OffsetAt(local_seconds + 2 * kSecondsPerDay)};
  std::sort(offsets.begin(), offsets.end());
  Resolution r;
  std::array<int64_t, 3> found{};
  int n = 0;
  for (size_t i = 0; i < offsets.size(); ++i) {
    if (i > 0 && offsets[i] == offsets[i - 1]) continue;
    const int64_t utc = local_seconds - offsets[i];
    if (OffsetAt(utc) == offsets[i]) found[n++] = utc;
  }
  std::sort(found.begin(), found.begin() + n);
  if (n == 0) {
    r.status = ZoneStatus::kDstGapInvalid;
  } else if (n == 1) {
    r.status = ZoneStatus::kUnambiguous;
  } else {
    r.status = ZoneStatus::kDstFoldAmbiguous;
    n = 2;
  }
  r.count = n;
  for (int i = 0; i < n; ++i) r.candidates[i] = found[i];
  return r;
}

// ---------------------------------------------------------- TimestampFormat

TimestampFormat TimestampFormat::Compile(std::string_view pattern) {
  TimestampFormat f;
  f.pattern_ = std::string(pattern);
  bool year = false, month = false, day = false;
  size_t i = 0;
  auto starts = [&](std::string_view tok) { return pattern.substr(i).starts_with(tok); };
  while (i < pattern.size()) {
    if (starts("YYYY")) {
      f.pieces_.push_back({Token::kYear, 0});
      year = true;
      i += 4;
    } else if (starts("AM|PM")) {
      f.pieces_.push_back({Token::kMeridiem, 0});
      i += 5;
    } else if (starts("[.fff]")) {
      f.pieces_.push_back({Token::kFraction, 0});
      i += 6;
    } else if (starts("MM")) {
      f.pieces_.push_back({Token::kMonth, 0});
      month = true;
      i += 2;
    } else if (starts("DD")) {
      f.pieces_.push_back({Token::kDay, 0});
      day = true;
      i += 2;
    } else if (starts("HH")) {
      f.pieces_.push_back({Token::kHour24, 0});
      i += 2;
    } else if (starts("hh")) {
      f.pieces_.push_back({Token::kHour12, 0});
      i += 2;
    } else if (starts("mm")) {
      f.pieces_.push_back({Token::kMinute, 0});
      i += 2;
    } else if (starts("ss")) {
      f.pieces_.push_back({Token::kSecond, 0});
      i += 2;
    } else {
      f.pieces_.push_back({Token::kLiteral, pattern[i]});
      ++i;
    }
  }
  if (!(year && month && day)) ThrowConfig("timestamp format '" + f.pattern_ + "' needs YYYY, MM and DD");
  const bool h12 = std::any_of(f.pieces_.begin(), f.pieces_.end(), [](const Piece& p) { return p.token == Token::kHour12; });
  const bool mer = std::any_of(f.pieces_.begin(), f.pieces_.end(), [](const Piece& p) { return p.token == Token::kMeridiem; });
  if (h12 != mer) ThrowConfig("timestamp format '" + f.pattern_ + "': hh requires AM|PM and vice versa");
  f.has_date_ = true;
  return f;
}

namespace {

inline bool ReadFixed(std::string_view s, size_t& pos, int width, int& out) {
  if (pos + static_cast<size_t>(width) > s.size()) return false;
  int v = 0;
  for (int k = 0; k < width; ++k) {
    const unsigned d = static_cast<unsigned char>(s[pos + k]) - '0';
    if (d > 9) return false;
    v = v * 10 + static_cast<int>(d);
  }
  pos += static_cast<size_t>(width);
  out = v;
  return true;
}

}  // namespace

std::optional<LocalDateTime> TimestampFormat::Match(std::string_view s) const {
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  int pm = -1;
  size_t pos = 0;
  for (const Piece& p : pieces_) {
    switch (p.token) {
      case Token::kLiteral:
        if (pos >= s.size() || s[pos] != p.literal) return std::nullopt;
        ++pos;
        break;
      case Token::kYear:
        if (!ReadFixed(s, pos, 4, year)) return std::nullopt;
        break;
      case Token::kMonth:
        if (!ReadFixed(s, pos, 2, month)) return std::nullopt;
        break;
      case Token::kDay:
        if (!ReadFixed(s, pos, 2, day)) return std::nullopt;
        break;
      case Token::kHour24:
        if (!ReadFixed(s, pos, 2, hour) || hour > 23) return std::nullopt;
        break;
      case Token::kHour12:
        if (!ReadFixed(s, pos, 2, hour) || hour < 1 || hour > 12) return std::nullopt;
        break;
      case Token::kMinute:
        if (!ReadFixed(s, pos, 2, minute) || minute > 59) return std::nullopt;
        break;
      case Token::kSecond:
        if (!ReadFixed(s, pos, 2, second) || second > 59) return std::nullopt;
        break;
      case Token::kMeridiem: {
        if (pos + 2 > s.size()) return std::nullopt;
        const char a = s[pos], m = s[pos + 1];
        if ((m != 'M' && m != 'm')) return std::nullopt;
        if (a == 'A' || a == 'a') {
          pm = 0;
        } else if (a == 'P' || a == 'p') {
          pm = 1;
        } else {
          return std::nullopt;
        }
        pos += 2;
        break;
      }
      case Token::kFraction:
        if (pos < s.size() && s[pos] == '.') {
          size_t k = pos + 1;
          while (k < s.size() && static_cast<unsigned char>(s[k] - '0') <= 9) ++k;
          if (k == pos + 1) return std::nullopt;
          pos = k;
        }
        break;
    }
  }
  if (pos != s.size()) return std::nullopt;
  if (pm >= 0) hour = (hour % 12) + (pm == 1 ? 12 : 0);
  if (month < 1 || month > 12 || day < 1) return std::nullopt;
  const chr::year_month_day ymd{chr::year{year}, chr::month{static_cast<unsigned>(month)},
                                chr::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;
  return LocalDateTime{DaysOf(ymd), hour * 3600 + minute * 60 + second};
}

std::string TimestampFormat::Print(const LocalDateTime& t) const {
  const auto ymd = t.date();
  std::string out;
  char buf[8];
  auto put = [&](int v, int width) {
    std::snprintf(buf, sizeof buf, "%0*d", width, v);
    out += buf;
  };
  for (const Piece& p : pieces_) {
    switch (p.token) {
      case Token::kLiteral:
        out.push_back(p.literal);
        break;
      case Token::kYear:
        put(static_cast<int>(ymd.year()), 4);
        break;
      case Token::kMonth:
        put(static_cast<int>(static_cast<unsigned>(ymd.month())), 2);
        break;
      case Token::kDay:
        put(static_cast<int>(static_cast<unsigned>(ymd.day())), 2);
        break;
      case Token::kHour24:
        put(t.hour(), 2);
        break;
      case Token::kHour12: {
        const int h = t.hour() % 12;
        put(h == 0 ? 12 : h, 2);
        break;
      }
      case Token::kMinute:
        put(t.minute(), 2);
        break;
      case Token::kSecond:
        put(t.second(), 2);
        break;
      case Token::kMeridiem:
        out += t.hour() < 12 ? "AM" : "PM";
        break;
      case Token::kFraction:
        break;
    }
  }
  return out;
}

std::vector<std::string> DefaultTimestampFormats() {
  return {"MM/DD/YYYY hh:mm:ss AM|PM", "YYYY-MM-DD HH:mm:ss", "YYYY-MM-DDTHH:mm:ss[.fff]", "YYYY-MM-DD",
          "MM/DD/YYYY"};
}

// ---------------------------------------------------------- TimestampParser

TimestampParser::TimestampParser(std::vector<TimestampFormat> formats, ZoneRules zone)
    : formats_(std::move(formats)), zone_(std::move(zone)) {
  if (formats_.empty()) ThrowConfig("timestamp_formats must not be empty");
}

TimestampParser TimestampParser::Default() {
  std::vector<TimestampFormat> formats;
  for (const auto& p : DefaultTimestampFormats()) formats.push_back(TimestampFormat::Compile(p));
  return TimestampParser(std::move(formats), ZoneRules::AmericaNewYork());
}

LocalTimestamp TimestampParser::Resolve(const LocalDateTime& local) const {
  LocalTimestamp ts;
  ts.local = local;
  const auto r = zone_.Resolve(local.local_seconds());
  ts.zone_status = r.status;
  ts.candidate_count = static_cast<uint8_t>(r.count);
  ts.candidates = r.candidates;
  return ts;
}

std::optional<LocalTimestamp> TimestampParser::Parse(std::string_view raw) const {
  const std::string_view text = Trim(raw);
  for (const auto& format : formats_) {
    if (auto m = format.Match(text)) return Resolve(*m);
  }
  return std::nullopt;
}

}  // namespace odqa::ingest
