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

#include <stdexcept>
#include <string>

namespace odqa {

enum class ErrorKind {
  kIo,
  kConfig,
  kValidation,
  kStructural,
  kInternal,
};

const char* ErrorKindName(ErrorKind kind);

/// Fatal error. Data-quality problems are reported as Findings instead; an
/// Error always aborts the running command (exit status 2 from the CLI).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void ThrowIo(const std::string& message);
[[noreturn]] void ThrowConfig(const std::string& message);
[[noreturn]] void ThrowValidation(const std::string& message);
[[noreturn]] void ThrowStructural(const std::string& message);
[[noreturn]] void ThrowInternal(const std::string& message);

}  // namespace odqa
