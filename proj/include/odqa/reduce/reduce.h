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
#include <vector>

#include "odqa/core/finding.h"
#include "odqa/dictionary/dictionary.h"
#include "odqa/ingest/csv.h"
#include "odqa/profile/profile.h"
#include "odqa/redundancy/redundancy.h"
#include "odqa/rules/domain_rules.h"

namespace odqa::reduce {

enum class ActionKind { kDrop, kSegregate, kEncode };

std::string_view ActionKindName(ActionKind kind);
std::optional<ActionKind> ParseActionKind(std::string_view name);

struct PlanAction {
  ActionKind kind = ActionKind::kDrop;
  std::string field;
  /// duplicate, concatenation, dependency, near_duplicate, sparse, categorical
  std::string basis;
  std::string justification;
  bool lossy = false;
  uint64_t estimated_bytes_saved = 0;
  /// Drop: the column it duplicates, or the determinant of a dependency.
  std::string reference;
  /// Drop of a concatenation column: template and the second part.
  std::string concat_template;
  std::string concat_part_b;
  /// Encode.
  uint64_t distinct = 0;
  int code_width = 0;
};

struct ReductionPlan {
  std::string source;
  std::string source_sha256;
  std::vector<std::string> headers;
  std::string key_field;
  uint64_t baseline_bytes = 0;
  uint64_t estimated_total_saved = 0;
  std::vector<PlanAction> actions;

  /// Throws Validation on an unknown field, a field dropped or segregated
  /// twice, an encode of a removed field, a lossy drop without
  /// acknowledgement, or a total that is not the sum of its actions.
  void Validate(const std::vector<std::string>& headers, bool acknowledge_lossy) const;
  const PlanAction* Find(std::string_view field, ActionKind kind) const;
};

struct PlanPolicy {
  bool drop_duplicates = true;
  bool drop_concatenations = true;
  bool drop_functional_dependents = true;
  /// Fields to drop because a configured pair shows them near-duplicate.
  std::vector<std::string> near_duplicate_drops;
  bool acknowledge_lossy = false;
  double sparse_threshold_pct = 99.0;
  uint64_t encode_cap = 10000;
  /// Encoded in addition to the dictionary's categorical fields.
  std::vector<std::string> encode_fields;
  /// Never dropped, segregated or encoded. The key is always protected.
  std::vector<std::string> protect;
  std::string key_field = "unique_key";
};

struct PlanInputs {
  const ingest::RawTable* table = nullptr;
  const std::vector<profile::ColumnProfile>* profiles = nullptr;
  const std::vector<redundancy::PairMatchStats>* pairs = nullptr;
  const std::vector<redundancy::ConcatStats>* concatenations = nullptr;
  const std::vector<redundancy::DependencyStats>* dependencies = nullptr;
  const dictionary::DataDictionary* dictionary = nullptr;
  /// When set, segregation also requires the key to be unique and never
  /// missing, since sidecars are joined back on it.
  const rules::UniqueResult* key_check = nullptr;
  redundancy::VerdictThresholds thresholds;
};

/// Digits needed for the largest 0-based code; at least 1.
int CodeWidth(uint64_t distinct);

/// Drops, then segregations, then encodings. Automatic drops that would lose
/// data are left out unless acknowledge_lossy; a configured lossy drop
/// without acknowledgement, or a field both dropped and encoded, throws
/// Config. Encodes that cannot pay for themselves emit encode_refused.
ReductionPlan BuildPlan(const PlanInputs& inputs, const PlanPolicy& policy, FindingSink& sink);

std::string PlanToJson(const ReductionPlan& plan);
/// Throws Validation on malformed documents.
ReductionPlan PlanFromJson(const std::string& text);

struct ValueDictionary {
  std::string field;
  std::vector<std::string> entries;

  int code_width() const { return CodeWidth(entries.size()); }
};

struct EncodedColumn {
  ValueDictionary dictionary;
  std::vector<std::optional<uint32_t>> codes;  // nullopt for missing cells
};

/// First-appearance codes; missing cells get no code.
EncodedColumn EncodeColumn(const std::vector<ingest::CellValue>& values);
std::vector<std::optional<std::string>> DecodeColumn(const EncodedColumn& column);

struct ActionMeasurement {
  std::string field;
  ActionKind kind = ActionKind::kDrop;
  uint64_t estimated_bytes_saved = 0;
  int64_t measured_bytes_saved = 0;
  std::string sidecar;  // path, if one was written
  uint64_t sidecar_bytes = 0;
};

struct ApplyResult {
  std::string main_path;
  uint64_t input_bytes = 0;
  uint64_t output_bytes = 0;
  uint64_t sidecar_bytes = 0;
  uint64_t rows_written = 0;
  uint64_t rows_skipped = 0;  // ragged or malformed in the source
  std::vector<ActionMeasurement> actions;

  int64_t measured_saved() const { return static_cast<int64_t>(input_bytes) - static_cast<int64_t>(output_bytes); }
};

/// Streams `source` once into `out_dir`: "<stem>.reduced.csv" without the
/// dropped and segregated columns and with encoded columns as codes, plus
/// "<field>.sidecar.csv", "<field>.dict.csv" and, for dependency drops,
/// "<field>.mapping.csv". The plan is validated before anything is written.
ApplyResult ApplyPlan(const std::string& source, const ReductionPlan& plan, const std::string& out_dir,
                      bool acknowledge_lossy, FindingSink& sink, const ingest::IngestOptions& options = {});

std::string ApplyResultToJson(const ApplyResult& result);

}  // namespace odqa::reduce
