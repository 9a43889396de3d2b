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

#include <cstddef>
#include <string_view>
#include <vector>

// Byte-scanning kernels used on the CSV hot path. Each kernel has a scalar
// reference implementation plus vector variants; all variants must return
// identical results for every input (see tests/unit/simd_scan_test.cc).

namespace odqa::simd {

enum class Isa { kScalar, kSse2, kAvx2, kNeon };

std::string_view IsaName(Isa isa);

struct ScanKernels {
  Isa isa;
  /// Index of the first byte equal to `delim`, '"', '\n' or '\r'; `n` if none.
  size_t (*find_structural)(const char* data, size_t n, char delim);
  /// Index of the first byte equal to `c`; `n` if none.
  size_t (*find_byte)(const char* data, size_t n, char c);
  /// Length of the leading run of ASCII digits.
  size_t (*digit_run)(const char* data, size_t n);
};

bool IsaAvailable(Isa isa);
std::vector<Isa> AvailableIsas();

/// Kernels for a specific ISA. Throws Error(kInternal) if not available on
/// this machine or not compiled in.
const ScanKernels& KernelsFor(Isa isa);

/// Best available ISA, or the one named by the ODQA_SIMD environment variable
/// (scalar|sse2|avx2|neon) when set and available.
Isa DetectIsa();

/// Process-wide kernel table, resolved once on first use.
const ScanKernels& Active();

namespace detail {
extern const ScanKernels kScalarKernels;
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
extern const ScanKernels kSse2Kernels;
extern const ScanKernels kAvx2Kernels;
#endif
#if defined(__aarch64__) && defined(__ARM_NEON)
extern const ScanKernels kNeonKernels;
#endif
}  // namespace detail

}  // namespace odqa::simd
