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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "odqa/core/finding.h"
#include "odqa/ingest/csv.h"
#include "odqa/ingest/timestamp.h"

namespace odqa::dictionary {

enum class TypeClass { kText, kCategorical, kInteger, kDecimal, kTimestamp, kGeoPoint };

std::string_view TypeClassName(TypeClass type);
std::optional<TypeClass> ParseTypeClass(std::string_view token);

struct FieldDescriptor {
  std::string name;
  TypeClass type_class = TypeClass::kText;
  std::optional<std::vector<std::string>> domain;  // legal values, declaration order
  std::optional<std::string> domain_ref;           // path to a reference list
  bool required = false;
  bool documented = true;
  std::string notes;
};

class DataDictionary {
 public:
  DataDictionary() = default;
  /// Throws Error(kValidation) on duplicate names or domain/domain_ref overlap.
  DataDictionary(std::vector<FieldDescriptor> fields, std::string version_label);

  const std::vector<FieldDescriptor>& fields() const { return fields_; }
  const std::string& version_label() const { return version_label_; }
  const FieldDescriptor* Find(std::string_view name) const;
  bool empty() const { return fields_.empty(); }

 private:
  std::vector<FieldDescriptor> fields_;
  std::unordered_map<std::string, size_t> index_;
  std::string version_label_;
};

/// Dictionary CSV with header "name,type_class,domain,required,documented,
/// domain_ref,notes". Domain values are '|'-joined; booleans are yes/no.
/// Relative domain_ref paths are resolved against the dictionary's directory.
DataDictionary LoadDictionary(const std::string& path);

/// Newline-delimited tokens, '#' starts a comment, each line trimmed.
/// Throws Error(kIo) when unreadable.
std::unordered_set<std::string> LoadReferenceList(const std::string& path);

struct FieldSets {
  std::vector<std::string> undocumented;  // observed, not declared (file order)
  std::vector<std::string> experimental;  // subset of undocumented: "@computed_region*"
  std::vector<std::string> unobserved;    // declared, not observed (dictionary order)
};

bool IsExperimentalField(std::string_view name);

FieldSets DetectUndocumented(const std::vector<std::string>& headers_norm, const DataDictionary& dict);

/// Observed (value, count) pairs for one field, present cells only.
struct ObservedValues {
  std::vector<std::pair<std::string, uint64_t>> counts;
  bool approximate = false;
};

struct ValueDrift {
  std::map<std::string, uint64_t> undeclared;   // observed value -> count
  std::vector<std::string> unobserved_declared;  // sorted
  uint64_t declared_size = 0;
  bool from_reference = false;
  bool approximate = false;
};

struct DriftReport {
  std::vector<std::string> undocumented_fields;
  std::vector<std::string> experimental_fields;
  std::vector<std::string> unobserved_fields;
  std::map<std::string, ValueDrift> value_drift;
  std::map<std::string, uint64_t> type_violations;
};

struct DomainCheckOptions {
  bool case_fold = false;
  /// Loaded reference lists keyed by path; filled lazily when absent.
  std::unordered_map<std::string, std::unordered_set<std::string>>* reference_cache = nullptr;
};

/// Fills report.value_drift for every field with a domain or domain_ref that
/// has observations. An unreadable domain_ref yields a domain_ref_error
/// Finding and the field is skipped.
void CheckDomains(const std::map<std::string, ObservedValues>& observed, const DataDictionary& dict,
                  const DomainCheckOptions& options, DriftReport& report, FindingSink& sink);

/// True when a present cell parses under `type`.
bool ConformsTo(TypeClass type, std::string_view raw, const ingest::TimestampParser& timestamps);

/// Counts present cells failing their declared type; one type_violation
/// Finding per failing cell. Undeclared and experimental columns are skipped.
class TypeChecker : public ingest::RowConsumer {
 public:
  TypeChecker(const DataDictionary& dict, const ingest::TimestampParser& timestamps, FindingSink& sink);

  void Begin(const ingest::RawTable& table) override;
  void Consume(const ingest::Row& row) override;
  void Finish(const ingest::RawTable& table, FindingSink& sink) override;

  const std::map<std::string, uint64_t>& violations() const { return violations_; }

 private:
  const DataDictionary& dict_;
  const ingest::TimestampParser& timestamps_;
  const ingest::RawTable* table_ = nullptr;
  std::vector<std::pair<size_t, TypeClass>> checked_;
  std::vector<uint64_t> counts_;
  FindingSink& sink_;
  std::map<std::string, uint64_t> violations_;
};

}  // namespace odqa::dictionary
