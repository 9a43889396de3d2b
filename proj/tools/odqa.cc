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
#include "odqa/app/config.h"
#include "odqa/app/pipeline.h"
#include "odqa/core/error.h"

namespace {

constexpr int kExitFatal = 2;

struct Args {
  std::string config;
  std::string out = "odqa-out";
  std::string threshold;
  std::string formats = "json,markdown,csv";
  std::string plan;
};

CLI::App* AddCommand(CLI::App& app, const std::string& name, const std::string& help, Args& args) {
  auto* sub = app.add_subcommand(name, help);
  sub->add_option("--config", args.config, "JSON config file")->required();
  sub->add_option("--out", args.out, "output directory")->capture_default_str();
  sub->add_option("--severity-threshold", args.threshold, "lowest severity that yields exit status 1")
      ->check(CLI::IsMember({"info", "warning", "error"}));
  sub->add_option("--format", args.formats, "comma-separated: json, markdown, csv")->capture_default_str();
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"odqa: data quality audit and storage reduction for 311-style CSV exports"};
  app.require_subcommand(1);
  Args args;
  AddCommand(app, "audit", "profile, dictionary, timestamp, domain and redundancy checks", args);
  AddCommand(app, "profile", "column profiles and missingness tiers only", args);
  AddCommand(app, "dict-check", "compare the file against the data dictionary", args);
  AddCommand(app, "reduce-plan", "propose drop/segregate/encode actions as plan.json", args);
  AddCommand(app, "reduce-apply", "apply a reviewed plan and write the reduced table", args)
      ->add_option("--plan", args.plan, "plan to apply (default: <out>/plan.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFatal;
  }

  const auto command = odqa::app::ParseCommand(app.get_subcommands().front()->get_name());
  try {
    const auto config = odqa::app::LoadConfig(args.config);
    odqa::app::RunOptions options;
    options.out_dir = args.out;
    options.formats = odqa::report::ParseFormats(args.formats);
    if (!args.threshold.empty()) options.threshold = odqa::ParseSeverity(args.threshold);
    options.plan_path = args.plan;
    options.log = &std::cerr;
    const auto result = odqa::app::RunPipeline(*command, config, options);
    for (const auto& path : result.outputs) std::cerr << "wrote " << path << "\n";
    std::cerr << result.report.findings_total() << " findings, exit status " << result.exit_status << "\n";
    return result.exit_status;
  } catch (const odqa::Error& e) {
    std::cerr << "odqa: " << odqa::ErrorKindName(e.kind()) << " error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "odqa: internal error: " << e.what() << "\n";
  }
  return kExitFatal;
}
