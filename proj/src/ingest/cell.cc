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

#include "odqa/ingest/cell.h"

#include <algorithm>

namespace odqa::ingest {

namespace {

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool IEquals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    char x = a[i], y = b[i];
    if (x >= 'A' && x <= 'Z') x = static_cast<char>(x - 'A' + 'a');
    if (y >= 'A' && y <= 'Z') y = static_cast<char>(y - 'A' + 'a');
    if (x != y) return false;
  }
  return true;
}

MissingSentinel ClassifyBuiltin(std::string_view raw, std::string_view* trimmed_out) {
  if (raw.empty()) return MissingSentinel::kEmpty;
  // Fast path: most cells are long, untrimmed, ordinary values.
  if (raw.size() > 6 && !IsSpace(raw.front()) && !IsSpace(raw.back())) {
    *trimmed_out = raw;
    return MissingSentinel::kNone;
  }
  const std::string_view t = Trim(raw);
  *trimmed_out = t;
  if (t.empty()) return MissingSentinel::kWhitespace;
  switch (t.size()) {
    case 2:
      if (IEquals(t, "na")) return MissingSentinel::kNA;
      break;
    case 3:
      if (IEquals(t, "n/a")) return MissingSentinel::kNSlashA;
      break;
    case 4:
      if (IEquals(t, "<na>")) return MissingSentinel::kAngleNA;
      if (IEquals(t, "null")) return MissingSentinel::kNullLiteral;
      break;
    default:
      break;
  }
  return MissingSentinel::kNone;
}

}  // namespace

std::string_view Trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && IsSpace(s[b])) ++b;
  while (e > b && IsSpace(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string_view SentinelName(MissingSentinel sentinel) {
  switch (sentinel) {
    case MissingSentinel::kNone:
      return "none";
    case MissingSentinel::kEmpty:
      return "empty";
    case MissingSentinel::kWhitespace:
      return "whitespace";
    case MissingSentinel::kNA:
      return "NA";
    case MissingSentinel::kNSlashA:
      return "N/A";
    case MissingSentinel::kAngleNA:
      return "angle_NA";
    case MissingSentinel::kNullLiteral:
      return "null_literal";
    case MissingSentinel::kCustom:
      return "custom";
  }
  return "none";
}

MissingClassifier::MissingClassifier(std::vector<std::string> extra_tokens) : extra_(std::move(extra_tokens)) {
  for (auto& token : extra_) {
    token = std::string(Trim(token));
    longest_extra_ = std::max(longest_extra_, token.size());
  }
  std::erase_if(extra_, [](const std::string& t) { return t.empty(); });
}

MissingSentinel MissingClassifier::Classify(std::string_view raw) const {
  std::string_view trimmed;
  const MissingSentinel builtin = ClassifyBuiltin(raw, &trimmed);
  if (builtin != MissingSentinel::kNone || extra_.empty()) return builtin;
  trimmed = Trim(raw);
  if (trimmed.size() > longest_extra_) return MissingSentinel::kNone;
  for (const auto& token : extra_) {
    if (IEquals(trimmed, token)) return MissingSentinel::kCustom;
  }
  return MissingSentinel::kNone;
}

MissingSentinel ClassifyMissing(std::string_view raw) {
  std::string_view trimmed;
  return ClassifyBuiltin(raw, &trimmed);
}

}  // namespace odqa::ingest
