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

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)

#include <emmintrin.h>

namespace odqa::simd::detail {

namespace {

inline size_t FirstSet(unsigned mask) { return static_cast<size_t>(__builtin_ctz(mask)); }

size_t FindStructuralSse2(const char* data, size_t n, char delim) {
  const __m128i vd = _mm_set1_epi8(delim);
  const __m128i vq = _mm_set1_epi8('"');
  const __m128i vn = _mm_set1_epi8('\n');
  const __m128i vr = _mm_set1_epi8('\r');
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const __m128i b = _mm_loadu_si128(reinterpret_cast<const __m128i*>(data + i));
    const __m128i hit = _mm_or_si128(_mm_or_si128(_mm_cmpeq_epi8(b, vd), _mm_cmpeq_epi8(b, vq)),
                                     _mm_or_si128(_mm_cmpeq_epi8(b, vn), _mm_cmpeq_epi8(b, vr)));
    const unsigned mask = static_cast<unsigned>(_mm_movemask_epi8(hit));
    if (mask != 0) return i + FirstSet(mask);
  }
  for (; i < n; ++i) {
    const char c = data[i];
    if (c == delim || c == '"' || c == '\n' || c == '\r') return i;
  }
  return n;
}

size_t FindByteSse2(const char* data, size_t n, char c) {
  const __m128i vc = _mm_set1_epi8(c);
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const __m128i b = _mm_loadu_si128(reinterpret_cast<const __m128i*>(data + i));
    const unsigned mask = static_cast<unsigned>(_mm_movemask_epi8(_mm_cmpeq_epi8(b, vc)));
    if (mask != 0) return i + FirstSet(mask);
  }
  for (; i < n; ++i) {
    if (data[i] == c) return i;
  }
  return n;
}

size_t DigitRunSse2(const char* data, size_t n) {
  // Signed compare: bytes >= 0x80 are negative and fail the lower bound.
  const __m128i lo = _mm_set1_epi8('0' - 1);
  const __m128i hi = _mm_set1_epi8('9' + 1);
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const __m128i b = _mm_loadu_si128(reinterpret_cast<const __m128i*>(data + i));
    const __m128i digit = _mm_and_si128(_mm_cmpgt_epi8(b, lo), _mm_cmplt_epi8(b, hi));
    const unsigned mask = ~static_cast<unsigned>(_mm_movemask_epi8(digit)) & 0xFFFFu;
    if (mask != 0) return i + FirstSet(mask);
  }
  while (i < n && static_cast<unsigned char>(data[i] - '0') <= 9) ++i;
  return i;
}

}  // namespace

const ScanKernels kSse2Kernels{Isa::kSse2, FindStructuralSse2, FindByteSse2, DigitRunSse2};

}  // namespace odqa::simd::detail

#endif
