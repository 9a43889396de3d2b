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

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "odqa/app/config.h"
#include "odqa/report/report.h"

namespace odqa::app {

enum class Command { kAudit, kProfile, kReducePlan, kReduceApply, kDictCheck };

std::string_view CommandName(Command command);
std::optional<Command> ParseCommand(std::string_view name);

struct RunOptions {
  std::string out_dir = "odqa-out";
  unsigned formats = report::kJson | report::kMarkdown | report::kCsv;
  std::optional<Severity> threshold;  // overrides the config
  std::string plan_path;              // reduce-apply input; default <out>/plan.json
  std::ostream* log = nullptr;
};

struct RunResult {
  int exit_status = 0;
  report::AuditReport report;
  std::vector<std::string> outputs;
};

/// Runs one command end to end: a single streaming pass over the input with
/// every consumer the command needs, then post-pass checks, then rendering.
/// Fatal problems throw odqa::Error; data problems become findings.
RunResult RunPipeline(Command command, const Config& config, const RunOptions& options);

}  // namespace odqa::app
