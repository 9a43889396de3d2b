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

#include "odqa/app/pipeline.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "odqa/core/error.h"
#include "odqa/dictionary/dictionary.h"
#include "odqa/profile/profile.h"
#include "odqa/reduce/reduce.h"
#include "odqa/redundancy/redundancy.h"
#include "odqa/rules/domain_rules.h"
#include "odqa/temporal/temporal.h"

namespace odqa::app {

namespace {

struct Stages {
  bool profile = false;
  bool types = false;
  bool temporal = false;
  bool domain = false;
  bool redundancy = false;
};

Stages StagesFor(Command c) {
  switch (c) {
    case Command::kAudit:
      return {true, true, true, true, true};
    case Command::kProfile:
      return {true, false, false, false, false};
    case Command::kDictCheck:
      return {true, true, false, false, false};
    case Command::kReducePlan:
      return {true, false, false, false, true};
    case Command::kReduceApply:
      return {};
  }
  return {};
}

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowIo("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

report::DatasetInfo DatasetOf(const ingest::RawTable& t) {
  return {t.source, t.content_sha256, t.byte_size, t.row_count, t.rows_delivered, t.ragged_rows, t.malformed_rows,
          t.headers_norm};
}

void EmitTiers(const std::vector<profile::ColumnProfile>& profiles, FindingSink& sink) {
  if (profiles.empty() || profiles.front().total_rows == 0) return;
  for (const auto& t : profile::TierMissingness(profiles)) {
    sink.Emit(Finding::Make(RuleId::kMissingnessTier,
                            t.field + " is " + profile::FormatPct(t.blank_pct) + "% blank (" +
                                std::string(profile::TierName(t.tier)) + ")")
                  .Field(t.field)
                  .Measured(t.blank_pct, "percent"));
  }
}

dictionary::DriftReport CheckDictionary(const dictionary::DataDictionary& dict, const ingest::RawTable& table,
                                        const profile::Profiler& profiler, const Config& config, FindingSink& sink) {
  dictionary::DriftReport drift;
  const auto sets = dictionary::DetectUndocumented(table.headers_norm, dict);
  for (const auto& f : sets.undocumented) {
    if (dictionary::IsExperimentalField(f)) {
      drift.experimental_fields.push_back(f);
      sink.Emit(Finding::Make(RuleId::kExperimentalField, f + " is an undocumented computed-region column").Field(f));
    } else {
      drift.undocumented_fields.push_back(f);
      sink.Emit(Finding::Make(RuleId::kUndocumentedField, f + " is not declared in the data dictionary").Field(f));
    }
  }
  for (const auto& f : sets.unobserved) {
    drift.unobserved_fields.push_back(f);
    sink.Emit(Finding::Make(RuleId::kUnobservedField, f + " is declared but absent from the file").Field(f));
  }
  std::vector<std::string> domain_fields;
  for (const auto& f : dict.fields()) {
    if ((f.domain || f.domain_ref) && table.FieldIndex(f.name) >= 0) domain_fields.push_back(f.name);
  }
  dictionary::DomainCheckOptions options;
  options.case_fold = config.case_fold_domains;
  dictionary::CheckDomains(profiler.ObservedFor(domain_fields), dict, options, drift, sink);
  return drift;
}

rules::DomainRulesConfig DomainConfigFor(const Config& c) {
  rules::DomainRulesConfig d;
  for (const auto& [field, path] : c.references) d.references.push_back({field, dictionary::LoadReferenceList(path)});
  d.lat_field = c.fields.latitude;
  d.lon_field = c.fields.longitude;
  d.bounds = c.geo_bounds;
  d.key_field = c.fields.key;
  d.key_required = c.key_required;
  d.precision_fields = c.precision_fields;
  d.max_decimals = c.max_decimals;
  d.agency_field = c.fields.agency;
  return d;
}

// Sidecar joins need a unique key, so planning checks it even though the
// other domain rules are not part of the command.
rules::DomainRulesConfig KeyOnlyConfig(const Config& c) {
  rules::DomainRulesConfig d;
  d.lat_field.clear();
  d.lon_field.clear();
  d.precision_fields.clear();
  d.key_field = c.fields.key;
  d.key_required = true;
  d.agency_field = c.fields.agency;
  return d;
}

temporal::TemporalFields TemporalFieldsFor(const Config& c) {
  temporal::TemporalFields t;
  t.created = c.fields.created;
  t.closed = c.fields.closed;
  t.updated = c.fields.updated;
  t.agency = c.fields.agency;
  t.other_dates = c.fields.other_dates;
  return t;
}

void Log(const RunOptions& o, const std::string& line) {
  if (o.log) *o.log << line << "\n";
}

}  // namespace

std::string_view CommandName(Command command) {
  switch (command) {
    case Command::kAudit: return "audit";
    case Command::kProfile: return "profile";
    case Command::kReducePlan: return "reduce-plan";
    case Command::kReduceApply: return "reduce-apply";
    case Command::kDictCheck: return "dict-check";
  }
  return "audit";
}

std::optional<Command> ParseCommand(std::string_view name) {
  for (auto c : {Command::kAudit, Command::kProfile, Command::kReducePlan, Command::kReduceApply, Command::kDictCheck}) {
    if (CommandName(c) == name) return c;
  }
  return std::nullopt;
}

RunResult RunPipeline(Command command, const Config& config, const RunOptions& options) {
  report::Aggregator sink(config.severities, config.sample_cap);
  RunResult result;
  auto& rep = result.report;
  rep.command = std::string(CommandName(command));
  rep.config_sha256 = config.sha256;
  rep.threshold = options.threshold.value_or(config.severity_threshold);
  const auto ingest_options = config.IngestOptionsFor();

  if (command == Command::kReduceApply) {
    const std::string plan_path =
        options.plan_path.empty() ? (std::filesystem::path(options.out_dir) / "plan.json").string() : options.plan_path;
    const auto plan = reduce::PlanFromJson(ReadAll(plan_path));
    const auto applied =
        reduce::ApplyPlan(config.input, plan, options.out_dir, config.plan.acknowledge_lossy, sink, ingest_options);
    rep.dataset.source = config.input;
    rep.dataset.sha256 = plan.source_sha256;
    rep.dataset.bytes = applied.input_bytes;
    rep.dataset.rows = applied.rows_written + applied.rows_skipped;
    rep.dataset.rows_evaluated = applied.rows_written;
    rep.dataset.fields = plan.headers;
    rep.plan = report::PlanSummary{plan_path, plan.baseline_bytes, plan.estimated_total_saved, plan.actions.size()};
    const auto apply_path = (std::filesystem::path(options.out_dir) / "apply.json").string();
    report::WriteText(apply_path, reduce::ApplyResultToJson(applied));
    result.outputs.push_back(applied.main_path);
    for (const auto& a : applied.actions) {
      if (!a.sidecar.empty()) result.outputs.push_back(a.sidecar);
    }
    result.outputs.push_back(apply_path);
    rep.findings = sink.Sections();
    auto written = report::WriteReport(rep, options.out_dir, options.formats);
    result.outputs.insert(result.outputs.end(), written.begin(), written.end());
    result.exit_status = rep.exit_status();
    return result;
  }

  const Stages stages = StagesFor(command);
  dictionary::DataDictionary dict;
  if (command == Command::kDictCheck && config.dictionary.empty()) {
    ThrowConfig("missing required config key 'dictionary' for dict-check");
  }
  if (!config.dictionary.empty()) dict = dictionary::LoadDictionary(config.dictionary);
  const auto parser = config.BuildTimestampParser();

  std::vector<ingest::RowConsumer*> consumers;
  profile::Profiler profiler(config.profile);
  consumers.push_back(&profiler);
  std::optional<dictionary::TypeChecker> types;
  if (stages.types && !dict.empty()) consumers.push_back(&types.emplace(dict, parser, sink));
  std::optional<temporal::TemporalAuditor> temporal;
  if (stages.temporal) consumers.push_back(&temporal.emplace(TemporalFieldsFor(config), config.spikes, parser, sink));
  std::optional<rules::DomainAuditor> domain;
  if (stages.domain) {
    consumers.push_back(&domain.emplace(DomainConfigFor(config), sink));
  } else if (command == Command::kReducePlan) {
    consumers.push_back(&domain.emplace(KeyOnlyConfig(config), sink));
  }
  std::optional<redundancy::RedundancyAnalyzer> redundancy;
  if (stages.redundancy) consumers.push_back(&redundancy.emplace(config.redundancy, sink));

  Log(options, "reading " + config.input);
  const auto table = ingest::StreamRows(config.input, consumers, sink, ingest_options);
  rep.dataset = DatasetOf(table);

  rep.profiles = profiler.profiles();
  EmitTiers(profiler.profiles(), sink);
  if (profiler.agency_tracked()) {
    rep.agencies = report::ComputeAgencyShare(config.fields.agency, profiler.Observed(config.fields.agency),
                                              config.agency_top_k);
  }
  if (stages.types && !dict.empty()) {
    rep.drift = CheckDictionary(dict, table, profiler, config, sink);
    rep.drift->type_violations = types->violations();
    rep.dictionary_version = dict.version_label();
  }
  if (temporal) rep.temporal = temporal->summary();
  if (domain) rep.domain = report::DomainSection{domain->membership(), domain->geo(), domain->unique(), domain->precision()};
  if (redundancy) {
    rep.redundancy = report::RedundancySection{redundancy->pairs(), redundancy->concatenations(),
                                               redundancy->dependencies(), redundancy->thresholds()};
  }

  std::string plan_text;
  if (command == Command::kReducePlan) {
    reduce::PlanInputs in;
    in.table = &table;
    in.profiles = &profiler.profiles();
    in.pairs = &redundancy->pairs();
    in.concatenations = &redundancy->concatenations();
    in.dependencies = &redundancy->dependencies();
    in.dictionary = dict.empty() ? nullptr : &dict;
    in.thresholds = redundancy->thresholds();
    in.key_check = &domain->unique();
    const auto plan = reduce::BuildPlan(in, config.plan, sink);
    plan_text = reduce::PlanToJson(plan);
    rep.plan = report::PlanSummary{(std::filesystem::path(options.out_dir) / "plan.json").string(),
                                   plan.baseline_bytes, plan.estimated_total_saved, plan.actions.size()};
  }

  rep.findings = sink.Sections();
  result.outputs = report::WriteReport(rep, options.out_dir, options.formats);
  if (!plan_text.empty()) {
    report::WriteText(rep.plan->path, plan_text);
    result.outputs.push_back(rep.plan->path);
  }
  result.exit_status = rep.exit_status();
  return result;
}

}  // namespace odqa::app
