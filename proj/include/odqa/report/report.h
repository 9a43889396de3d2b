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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "odqa/dictionary/dictionary.h"
#include "odqa/profile/profile.h"
#include "odqa/redundancy/redundancy.h"
#include "odqa/report/aggregate.h"
#include "odqa/rules/domain_rules.h"
#include "odqa/temporal/temporal.h"

namespace odqa::report {

struct DatasetInfo {
  std::string source;
  std::string sha256;
  uint64_t bytes = 0;
  uint64_t rows = 0;
  uint64_t rows_evaluated = 0;
  uint64_t ragged_rows = 0;
  uint64_t malformed_rows = 0;
  std::vector<std::string> fields;
};

struct AgencyShare {
  std::string field;
  size_t k = 6;
  uint64_t rows = 0;  // rows with the field present
  std::vector<std::pair<std::string, uint64_t>> top;
  double top_share = 0;
  bool approximate = false;
};

struct DomainSection {
  std::vector<rules::MembershipResult> membership;
  rules::GeoResult geo;
  rules::UniqueResult unique;
  std::vector<rules::PrecisionAuditResult> precision;
};

struct RedundancySection {
  std::vector<redundancy::PairMatchStats> pairs;
  std::vector<redundancy::ConcatStats> concatenations;
  std::vector<redundancy::DependencyStats> dependencies;
  redundancy::VerdictThresholds thresholds;
};

struct PlanSummary {
  std::string path;
  uint64_t baseline_bytes = 0;
  uint64_t estimated_total_saved = 0;
  size_t actions = 0;
};

/// Everything one command run produced. Sections a command did not compute
/// stay empty and are omitted from every rendering.
struct AuditReport {
  std::string command;
  DatasetInfo dataset;
  std::string config_sha256;
  Severity threshold = Severity::kError;
  std::vector<RuleSection> findings;
  std::optional<std::vector<profile::ColumnProfile>> profiles;
  std::optional<AgencyShare> agencies;
  std::optional<dictionary::DriftReport> drift;
  std::string dictionary_version;
  std::optional<temporal::TemporalSummary> temporal;
  std::optional<DomainSection> domain;
  std::optional<RedundancySection> redundancy;
  std::optional<PlanSummary> plan;

  uint64_t findings_total() const;
  int exit_status() const { return ExitStatusFor(findings, threshold); }
};

/// Share of the `k` most frequent values among all present values.
AgencyShare ComputeAgencyShare(const std::string& field, const dictionary::ObservedValues& observed, size_t k);

/// Quantile of a day histogram, nearest-rank; nullopt when empty.
std::optional<int64_t> HistogramQuantile(const temporal::DayHistogram& histogram, double q);

/// Canonical full-fidelity form. Deterministic: no clocks, sorted maps.
std::string ReportToJson(const AuditReport& report);
std::string ReportToMarkdown(const AuditReport& report);

enum Format : unsigned { kJson = 1, kMarkdown = 2, kCsv = 4 };
/// Parses "json,markdown,csv"; throws Error(kConfig) on unknown names.
unsigned ParseFormats(std::string_view list);

/// Writes the selected formats under `out_dir` with fixed names:
/// report.json, report.md, and for csv findings.csv, finding_counts.csv,
/// profiles.csv, pairs.csv, durations.csv, update_lags.csv, hours.csv.
/// Throws Error(kIo) when the directory or a file cannot be written.
std::vector<std::string> WriteReport(const AuditReport& report, const std::string& out_dir, unsigned formats);

void WriteText(const std::string& path, const std::string& text);

}  // namespace odqa::report
