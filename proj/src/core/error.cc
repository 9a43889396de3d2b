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

#include "odqa/core/error.h"

namespace odqa {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
      return "io error";
    case ErrorKind::kConfig:
      return "config error";
    case ErrorKind::kValidation:
      return "validation error";
    case ErrorKind::kStructural:
      return "structural error";
    case ErrorKind::kInternal:
      return "internal error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message), kind_(kind) {}

void ThrowIo(const std::string& message) { throw Error(ErrorKind::kIo, message); }
void ThrowConfig(const std::string& message) { throw Error(ErrorKind::kConfig, message); }
void ThrowValidation(const std::string& message) { throw Error(ErrorKind::kValidation, message); }
void ThrowStructural(const std::string& message) { throw Error(ErrorKind::kStructural, message); }
void ThrowInternal(const std::string& message) { throw Error(ErrorKind::kInternal, message); }

}  // namespace odqa
