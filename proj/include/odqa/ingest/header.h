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

#include <string>
#include <string_view>
#include <vector>

#include "odqa/core/finding.h"

namespace odqa::ingest {

/// Lowercase, whitespace runs -> '_', other chars outside [a-z0-9_] -> '_',
/// leading/trailing '_' trimmed. A leading '@' is kept so portal-computed
/// columns such as "@computed_region_zip_codes" stay recognizable.
/// Throws Error(kStructural) "unnamed column at index i" when nothing is left.
std::string NormalizeHeader(std::string_view raw, size_t index);

/// Normalizes a whole header row and de-duplicates collisions with "_2",
/// "_3", ... suffixes, emitting one header_collision Finding per renamed column.
std::vector<std::string> NormalizeHeaders(const std::vector<std::string>& raw, FindingSink& sink);

}  // namespace odqa::ingest
