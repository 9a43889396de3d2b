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

#include <random>
#include <string>

#include "doctest.h"
#include "odqa/simd/scan.h"

using odqa::simd::Isa;
using odqa::simd::KernelsFor;

namespace {

std::string RandomBuffer(std::mt19937_64& rng, size_t n) {
  static const std::string kAlphabet = "abc,\"\n\r0123456789;\t \x80\xff\x2f\x3a";
  std::uniform_int_distribution<size_t> pick(0, kAlphabet.size() - 1);
  std::uniform_int_distribution<int> sparse(0, 99);
  std::string s(n, 'x');
  const int density = sparse(rng);
  for (auto& c : s) {
    if (sparse(rng) < density) c = kAlphabet[pick(rng)];
  }
  return s;
}

}  // namespace

TEST_CASE("scalar kernels on hand-checked inputs") {
  const auto& k = KernelsFor(Isa::kScalar);
  CHECK(k.find_structural("abc,def", 7, ',') == 3);
  CHECK(k.find_structural("abc\"def", 7, ',') == 3);
  CHECK(k.find_structural("abcdef", 6, ',') == 6);
  CHECK(k.find_structural("ab;cd", 5, ';') == 2);
  CHECK(k.find_byte("aaaa\"", 5, '"') == 4);
  CHECK(k.digit_run("40.8676", 7) == 2);
  CHECK(k.digit_run("86769186022511", 14) == 14);
  CHECK(k.digit_run("", 0) == 0);
}

TEST_CASE("every available variant matches the scalar reference") {
  const auto& ref = KernelsFor(Isa::kScalar);
  std::mt19937_64 rng(20240915);
  for (Isa isa : odqa::simd::AvailableIsas()) {
    CAPTURE(odqa::simd::IsaName(isa));
    const auto& k = KernelsFor(isa);
    for (int trial = 0; trial < 3000; ++trial) {
      const size_t n = static_cast<size_t>(trial % 131);
      const std::string s = RandomBuffer(rng, n);
      for (size_t off = 0; off <= std::min<size_t>(n, 7); ++off) {
        const char* p = s.data() + off;
        const size_t len = n - off;
        for (char delim : {',', ';', '\t'}) {
          REQUIRE(k.find_structural(p, len, delim) == ref.find_structural(p, len, delim));
        }
        REQUIRE(k.find_byte(p, len, '"') == ref.find_byte(p, len, '"'));
        REQUIRE(k.find_byte(p, len, '\n') == ref.find_byte(p, len, '\n'));
        REQUIRE(k.digit_run(p, len) == ref.digit_run(p, len));
      }
    }
    // Long digit runs cross several vector widths.
    std::string digits(100, '7');
    for (size_t stop = 0; stop <= digits.size(); ++stop) {
      std::string t = digits;
      if (stop < t.size()) t[stop] = '.';
      REQUIRE(k.digit_run(t.data(), t.size()) == stop);
    }
  }
}

TEST_CASE("dispatch resolves to an available variant") {
  const auto& active = odqa::simd::Active();
  CHECK(odqa::simd::IsaAvailable(active.isa));
}
