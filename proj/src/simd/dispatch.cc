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

#include <cstdlib>
#include <string>

#include "odqa/core/error.h"
#include "odqa/simd/scan.h"

namespace odqa::simd {

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kSse2:
      return "sse2";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "scalar";
}

bool IsaAvailable(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
    case Isa::kSse2:
      return __builtin_cpu_supports("sse2");
    case Isa::kAvx2:
      return __builtin_cpu_supports("avx2");
#endif
#if defined(__aarch64__) && defined(__ARM_NEON)
    case Isa::kNeon:
      return true;
#endif
    default:
      return false;
  }
}

std::vector<Isa> AvailableIsas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::kScalar, Isa::kSse2, Isa::kAvx2, Isa::kNeon}) {
    if (IsaAvailable(isa)) out.push_back(isa);
  }
  return out;
}

const ScanKernels& KernelsFor(Isa isa) {
  if (!IsaAvailable(isa)) ThrowInternal("SIMD variant '" + std::string(IsaName(isa)) + "' not available");
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
    case Isa::kSse2:
      return detail::kSse2Kernels;
    case Isa::kAvx2:
      return detail::kAvx2Kernels;
#endif
#if defined(__aarch64__) && defined(__ARM_NEON)
    case Isa::kNeon:
      return detail::kNeonKernels;
#endif
    default:
      return detail::kScalarKernels;
  }
}

Isa DetectIsa() {
  if (const char* forced = std::getenv("ODQA_SIMD")) {
    const std::string_view name(forced);
    for (Isa isa : AvailableIsas()) {
      if (IsaName(isa) == name) return isa;
    }
  }
  const auto isas = AvailableIsas();
  return isas.back();
}

const ScanKernels& Active() {
  static const ScanKernels& kernels = KernelsFor(DetectIsa());
  return kernels;
}

}  // namespace odqa::simd
