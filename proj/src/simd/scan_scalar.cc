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

#include "odqa/simd/scan.h"

namespace odqa::simd::detail {

namespace {

size_t FindStructuralScalar(const char* data, size_t n, char delim) {
  for (size_t i = 0; i < n; ++i) {
    const char c = data[i];
    if (c == delim || c == '"' || c == '\n' || c == '\r') return i;
  }
  return n;
}

size_t FindByteScalar(const char* data, size_t n, char c) {
  for (size_t i = 0; i < n; ++i) {
    if (data[i] == c) return i;
  }
  return n;
}

size_t DigitRunScalar(const char* data, size_t n) {
  size_t i = 0;
  while (i < n && static_cast<unsigned char>(data[i] - '0') <= 9) ++i;
  return i;
}

}  // namespace

const ScanKernels kScalarKernels{Isa::kScalar, FindStructuralScalar, FindByteScalar, DigitRunScalar};

}  // namespace odqa::simd::detail
