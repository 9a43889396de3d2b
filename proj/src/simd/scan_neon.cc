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

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <cstdint>

namespace odqa::simd::detail {

namespace {

// Narrow a 0x00/0xFF byte mask to 4 bits per lane; returns the lane index of
// the first set lane, or 16 if none.
inline size_t FirstLane(uint8x16_t hit) {
  const uint8x8_t nibbles = vshrn_n_u16(vreinterpretq_u16_u8(hit), 4);
  const uint64_t bits = vget_lane_u64(vreinterpret_u64_u8(nibbles), 0);
  if (bits == 0) return 16;
  return static_cast<size_t>(__builtin_ctzll(bits) >> 2);
}

size_t FindStructuralNeon(const char* data, size_t n, char delim) {
  const uint8x16_t vd = vdupq_n_u8(static_cast<uint8_t>(delim));
  const uint8x16_t vq = vdupq_n_u8('"');
  const uint8x16_t vn = vdupq_n_u8('\n');
  const uint8x16_t vr = vdupq_n_u8('\r');
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const uint8x16_t b = vld1q_u8(reinterpret_cast<const uint8_t*>(data + i));
    const uint8x16_t hit = vorrq_u8(vorrq_u8(vceqq_u8(b, vd), vceqq_u8(b, vq)),
                                    vorrq_u8(vceqq_u8(b, vn), vceqq_u8(b, vr)));
    const size_t lane = FirstLane(hit);
    if (lane < 16) return i + lane;
  }
  for (; i < n; ++i) {
    const char c = data[i];
    if (c == delim || c == '"' || c == '\n' || c == '\r') return i;
  }
  return n;
}

size_t FindByteNeon(const char* data, size_t n, char c) {
  const uint8x16_t vc = vdupq_n_u8(static_cast<uint8_t>(c));
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const uint8x16_t b = vld1q_u8(reinterpret_cast<const uint8_t*>(data + i));
    const size_t lane = FirstLane(vceqq_u8(b, vc));
    if (lane < 16) return i + lane;
  }
  for (; i < n; ++i) {
    if (data[i] == c) return i;
  }
  return n;
}

size_t DigitRunNeon(const char* data, size_t n) {
  const uint8x16_t zero = vdupq_n_u8('0');
  const uint8x16_t nine = vdupq_n_u8(9);
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const uint8x16_t b = vld1q_u8(reinterpret_cast<const uint8_t*>(data + i));
    const uint8x16_t non_digit = vcgtq_u8(vsubq_u8(b, zero), nine);
    const size_t lane = FirstLane(non_digit);
    if (lane < 16) return i + lane;
  }
  while (i < n && static_cast<unsigned char>(data[i] - '0') <= 9) ++i;
  return i;
}

}  // namespace

const ScanKernels kNeonKernels{Isa::kNeon, FindStructuralNeon, FindByteNeon, DigitRunNeon};

}  // namespace odqa::simd::detail

#endif
