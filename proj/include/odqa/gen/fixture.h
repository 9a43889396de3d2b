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

#include <cstdint>
#include <string>

namespace odqa::gen {

/// Anomalies planted at distinct, randomly chosen rows. Every other row is
/// generated clean: parseable timestamps away from midnight and the DST
/// gap/fold, positive durations of at least two hours, valid zips and keys.
struct Injections {
  uint64_t negative_durations = 25;
  uint64_t zero_durations = 40;
  uint64_t sentinel_dates = 3;       // due_date = 1900-01-01
  uint64_t midnight_rows = 120;      // created or closed at 00:00:00
  uint64_t invalid_zips = 7;
  uint64_t duplicate_keys = 5;       // pairs sharing one unique_key
  uint64_t dst_gap_timestamps = 2;   // due_date inside 2022-03-13 02:xx
  uint64_t post_close_updates = 11;  // updated 31-200 days after closing

  uint64_t rows_needed() const;
  static Injections None() { return Injections{0, 0, 0, 0, 0, 0, 0, 0}; }
};

struct FixtureOptions {
  uint64_t rows = 10000;
  uint64_t seed = 311;
  Injections inject;
};

struct FixtureFiles {
  std::string data;        // requests.csv
  std::string dictionary;  // dictionary.csv
  std::string zips;        // zips.txt
  std::string config;      // config.json
  uint64_t rows = 0;
  uint64_t bytes = 0;
};

/// Writes a 311-shaped service-request table plus its data dictionary, zip
/// reference list and a ready-to-run config into `dir`. Output is a pure
/// function of the options.
FixtureFiles WriteFixture(const std::string& dir, const FixtureOptions& options);

/// Row count that makes the data file about `target_bytes` long.
uint64_t RowsForBytes(uint64_t target_bytes, uint64_t seed);

}  // namespace odqa::gen
