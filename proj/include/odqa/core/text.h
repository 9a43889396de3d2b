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

#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace odqa {

/// Strict decimal grammar: [+-]? digits [. digits] | [+-]? . digits.
/// No exponent, no surrounding whitespace.
bool IsDecimalText(std::string_view s);
bool IsIntegerText(std::string_view s);
std::optional<double> ParseDecimal(std::string_view s);

/// "(lat, lon)" with optional spaces after the comma.
std::optional<std::pair<double, double>> ParseGeoPoint(std::string_view s);

/// Digits after the decimal point in the raw text; 0 when there is no point.
/// Counting stops at the first non-digit after the point.
int CountDecimals(std::string_view s);

std::string ToLowerAscii(std::string_view s);
std::string ToUpperAscii(std::string_view s);

}  // namespace odqa
