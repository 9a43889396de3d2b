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

#include "odqa/ingest/header.h"

#include <unordered_set>

#include "odqa/core/error.h"

namespace odqa::ingest {

namespace {

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

}  // namespace

std::string NormalizeHeader(std::string_view raw, size_t index) {
  size_t b = 0, e = raw.size();
  while (b < e && IsSpace(raw[b])) ++b;
  while (e > b && IsSpace(raw[e - 1])) --e;
  raw = raw.substr(b, e - b);

  std::string out;
  out.reserve(raw.size());
  size_t i = 0;
  if (!raw.empty() && raw[0] == '@') {
    out.push_back('@');
    i = 1;
  }
  while (i < raw.size()) {
    const char c = raw[i];
    if (IsSpace(c)) {
      while (i < raw.size() && IsSpace(raw[i])) ++i;
      out.push_back('_');
      continue;
    }
    if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_') {
      out.push_back(c);
    } else {
      out.push_back('_');
    }
    ++i;
  }

  const size_t body = out.starts_with('@') ? 1 : 0;
  size_t lead = body;
  while (lead < out.size() && out[lead] == '_') ++lead;
  out.erase(body, lead - body);
  while (out.size() > body && out.back() == '_') out.pop_back();
  if (out.size() == body) ThrowStructural("unnamed column at index " + std::to_string(index));
  return out;
}

std::vector<std::string> NormalizeHeaders(const std::vector<std::string>& raw, FindingSink& sink) {
  std::vector<std::string> out;
  out.reserve(raw.size());
  std::unordered_set<std::string> taken;
  for (size_t i = 0; i < raw.size(); ++i) {
    std::string name = NormalizeHeader(raw[i], i);
    if (taken.count(name) != 0) {
      std::string candidate;
      for (int suffix = 2;; ++suffix) {
        candidate = name + "_" + std::to_string(suffix);
        if (taken.count(candidate) == 0) break;
      }
      sink.Emit(Finding::Make(RuleId::kHeaderCollision, "header '" + raw[i] + "' at index " +
                                                            std::to_string(i) + " renamed to '" +
                                                            candidate + "'")
                    .Field(candidate));
      name = std::move(candidate);
    }
    taken.insert(name);
    out.push_back(std::move(name));
  }
  return out;
}

}  // namespace odqa::ingest
