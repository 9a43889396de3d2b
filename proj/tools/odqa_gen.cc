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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "odqa/core/error.h"
#include "odqa/gen/fixture.h"

int main(int argc, char** argv) {
  CLI::App app{"odqa-gen: seeded 311-style fixture generator"};
  std::string out = "fixture";
  uint64_t rows = 10000;
  uint64_t size_mb = 0;
  uint64_t seed = 311;
  bool clean = false;
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--rows", rows, "data rows")->capture_default_str();
  app.add_option("--size-mb", size_mb, "approximate data file size; overrides --rows");
  app.add_option("--seed", seed, "generator seed")->capture_default_str();
  app.add_flag("--clean", clean, "inject no anomalies");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    odqa::gen::FixtureOptions options;
    options.seed = seed;
    options.rows = size_mb ? odqa::gen::RowsForBytes(size_mb << 20, seed) : rows;
    if (clean) options.inject = odqa::gen::Injections::None();
    const auto files = odqa::gen::WriteFixture(out, options);
    std::cerr << "wrote " << files.data << " (" << files.rows << " rows, " << files.bytes << " bytes)\n"
              << "wrote " << files.dictionary << "\nwrote " << files.zips << "\nwrote " << files.config << "\n";
  } catch (const odqa::Error& e) {
    std::cerr << "odqa-gen: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
