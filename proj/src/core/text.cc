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

#include "odqa/core/text.h"

#include <charconv>

#include "odqa/simd/scan.h"

namespace odqa {

namespace {

size_t DigitRun(std::string_view s, size_t from) {
  return simd::Active().digit_run(s.data() + from, s.size() - from);
}

}  // namespace

bool IsIntegerText(std::string_view s) {
  size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  if (i == s.size()) return false;
  return DigitRun(s, i) == s.size() - i;
}

bool IsDecimalText(std::string_view s) {
  size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  const size_t int_digits = DigitRun(s, i);
  i += int_digits;
  if (i == s.size()) return int_digits > 0;
  if (s[i] != '.') return false;
  ++i;
  const size_t frac_digits = DigitRun(s, i);
  i += frac_digits;
  return i == s.size() && (int_digits + frac_digits) > 0;
}

std::optional<double> ParseDecimal(std::string_view s) {
  if (!IsDecimalText(s)) return std::nullopt;
  if (s[0] == '+') s.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::pair<double, double>> ParseGeoPoint(std::string_view s) {
  if (s.size() < 5 || s.front() != '(' || s.back() != ')') return std::nullopt;
  s = s.substr(1, s.size() - 2);
  const size_t comma = s.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  std::string_view a = s.substr(0, comma);
  std::string_view b = s.substr(comma + 1);
  while (!b.empty() && b.front() == ' ') b.remove_prefix(1);
  auto x = ParseDecimal(a);
  auto y = ParseDecimal(b);
  if (!x || !y) return std::nullopt;
  return std::make_pair(*x, *y);
}

int CountDecimals(std::string_view s) {
  const size_t dot = s.find('.');
  if (dot == std::string_view::npos) return 0;
  return static_cast<int>(DigitRun(s, dot + 1));
}

std::string ToLowerAscii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string ToUpperAscii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

}  // namespace odqa
