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

// Compiled with -mavx2; only reached after a runtime CPU check.
#include "odqa/simd/scan.h"

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)

#include <immintrin.h>

namespace odqa::simd::detail {

namespace {

inline size_t FirstSet(unsigned mask) { return static_cast<size_t>(__builtin_ctz(mask)); }

size_t FindStructuralAvx2(const char* data, size_t n, char delim) {
  const __m256i vd = _mm256_set1_epi8(delim);
  const __m256i vq = _mm256_set1_epi8('"');
  const __m256i vn = _mm256_set1_epi8('\n');
  const __m256i vr = _mm256_set1_epi8('\r');
  size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
    const __m256i hit =
        _mm256_or_si256(_mm256_or_si256(_mm256_cmpeq_epi8(b, vd), _mm256_cmpeq_epi8(b, vq)),
                        _mm256_or_si256(_mm256_cmpeq_epi8(b, vn), _mm256_cmpeq_epi8(b, vr)));
    const unsigned mask = static_cast<unsigned>(_mm256_movemask_epi8(hit));
    if (mask != 0) return i + FirstSet(mask);
  }
  for (; i < n; ++i) {
    const char c = data[i];
    if (c == delim || c == '"' || c == '\n' || c == '\r') return i;
  }
  return n;
}

size_t FindByteAvx2(const char* data, size_t n, char c) {
  const __m256i vc = _mm256_set1_epi8(c);
  size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
    const unsigned mask = static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(b, vc)));
    if (mask != 0) return i + FirstSet(mask);
  }
  for (; i < n; ++i) {
    if (data[i] == c) return i;
  }
  return n;
}

size_t DigitRunAvx2(const char* data, size_t n) {
  const __m256i lo = _mm256_set1_epi8('0' - 1);
  const __m256i hi = _mm256_set1_epi8('9' + 1);
  size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
    const __m256i digit = _mm256_and_si256(_mm256_cmpgt_epi8(b, lo), _mm256_cmpgt_epi8(hi, b));
    const unsigned mask = ~static_cast<unsigned>(_mm256_movemask_epi8(digit));
    if (mask != 0) return i + FirstSet(mask);
  }
  while (i < n && static_cast<unsigned char>(data[i] - '0') <= 9) ++i;
  return i;
}

}  // namespace

const ScanKernels kAvx2Kernels{Isa::kAvx2, FindStructuralAvx2, FindByteAvx2, DigitRunAvx2};

}  // namespace odqa::simd::detail

#endif
