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

#include "odqa/dictionary/dictionary.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "odqa/core/error.h"
#include "odqa/core/text.h"
#include "odqa/ingest/header.h"

namespace odqa::dictionary {

using ingest::Trim;

std::string_view TypeClassName(TypeClass type) {
  switch (type) {
    case TypeClass::kText:
      return "text";
    case TypeClass::kCategorical:
      return "categorical";
    case TypeClass::kInteger:
      return "integer";
    case TypeClass::kDecimal:
      return "decimal";
    case TypeClass::kTimestamp:
      return "timestamp";
    case TypeClass::kGeoPoint:
      return "geo_point";
  }
  return "text";
}

std::optional<TypeClass> ParseTypeClass(std::string_view token) {
  for (TypeClass t : {TypeClass::kText, TypeClass::kCategorical, TypeClass::kInteger, TypeClass::kDecimal,
                      TypeClass::kTimestamp, TypeClass::kGeoPoint}) {
    if (TypeClassName(t) == token) return t;
  }
  return std::nullopt;
}

DataDictionary::DataDictionary(std::vector<FieldDescriptor> fields, std::string version_label)
    : fields_(std::move(fields)), version_label_(std::move(version_label)) {
  for (size_t i = 0; i < fields_.size(); ++i) {
    const auto& f = fields_[i];
    if (f.domain && f.domain_ref) ThrowValidation("field '" + f.name + "' has both domain and domain_ref");
    if (!index_.emplace(f.name, i).second) ThrowValidation("duplicate dictionary field '" + f.name + "'");
  }
}

const FieldDescriptor* DataDictionary::Find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &fields_[it->second];
}

namespace {

bool ParseYesNo(std::string_view v, size_t row, std::string_view column) {
  v = Trim(v);
  if (v == "yes") return true;
  if (v == "no" || v.empty()) return false;
  ThrowValidation("dictionary row " + std::to_string(row) + ": " + std::string(column) + " must be yes/no, got '" +
                  std::string(v) + "'");
}

}  // namespace

DataDictionary LoadDictionary(const std::string& path) {
  ingest::IngestOptions options;
  options.key_field.clear();
  ingest::CsvRecordReader reader(path, options);
  ingest::CsvRecordReader::Record rec;
  if (reader.Next(rec) != ingest::CsvRecordReader::Status::kRecord) ThrowValidation("'" + path + "': missing header");

  const std::vector<std::string> expected = {"name", "type_class", "domain", "required", "documented", "domain_ref", "notes"};
  std::vector<int> col(expected.size(), -1);
  for (size_t i = 0; i < rec.fields.size(); ++i) {
    const std::string h(Trim(rec.fields[i]));
    for (size_t k = 0; k < expected.size(); ++k) {
      if (h == expected[k]) col[k] = static_cast<int>(i);
    }
  }
  for (size_t k = 0; k < 2; ++k) {
    if (col[k] < 0) ThrowValidation("'" + path + "': dictionary header lacks '" + expected[k] + "'");
  }
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  std::vector<FieldDescriptor> fields;
  size_t row = 1;
  for (;;) {
    const auto status = reader.Next(rec);
    if (status == ingest::CsvRecordReader::Status::kEof) break;
    ++row;
    if (status == ingest::CsvRecordReader::Status::kMalformed) {
      ThrowValidation("dictionary row " + std::to_string(row) + ": " + rec.error);
    }
    if (rec.fields.size() == 1 && Trim(rec.fields[0]).empty()) continue;
    auto get = [&](size_t k) -> std::string_view {
      const int c = col[k];
      return (c >= 0 && static_cast<size_t>(c) < rec.fields.size()) ? rec.fields[static_cast<size_t>(c)]
                                                                    : std::string_view{};
    };
    FieldDescriptor f;
    f.name = ingest::NormalizeHeader(get(0), row);
    const auto type_token = Trim(get(1));
    auto type = ParseTypeClass(type_token);
    if (!type) {
      ThrowValidation("dictionary row " + std::to_string(row) + " ('" + f.name + "'): unknown type_class '" +
                      std::string(type_token) + "'");
    }
    f.type_class = *type;
    const auto domain = Trim(get(2));
    if (!domain.empty()) {
      std::vector<std::string> values;
      std::set<std::string> seen;
      size_t start = 0;
      while (start <= domain.size()) {
        size_t bar = domain.find('|', start);
        if (bar == std::string_view::npos) bar = domain.size();
        std::string v(Trim(domain.substr(start, bar - start)));
        if (!v.empty() && seen.insert(v).second) values.push_back(std::move(v));
        start = bar + 1;
      }
      f.domain = std::move(values);
    }
    f.required = ParseYesNo(get(3), row, "required");
    f.documented = col[4] < 0 ? true : ParseYesNo(get(4), row, "documented");
    const auto ref = Trim(get(5));
    if (!ref.empty()) {
      std::filesystem::path p(ref);
      if (p.is_relative() && !base.empty()) p = base / p;
      f.domain_ref = p.string();
    }
    f.notes = std::string(get(6));
    if (f.domain && f.domain_ref) {
      ThrowValidation("dictionary row " + std::to_string(row) + " ('" + f.name + "'): domain and domain_ref are exclusive");
    }
    fields.push_back(std::move(f));
  }
  return DataDictionary(std::move(fields), std::filesystem::path(path).filename().string());
}

std::unordered_set<std::string> LoadReferenceList(const std::string& path) {
  std::ifstream in(path);
  if (!in) ThrowIo("cannot read reference list '" + path + "'");
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view v(line);
    const size_t hash = v.find('#');
    if (hash != std::string_view::npos) v = v.substr(0, hash);
    v = Trim(v);
    if (!v.empty()) out.emplace(v);
  }
  return out;
}

bool IsExperimentalField(std::string_view name) { return name.starts_with("@computed_region"); }

FieldSets DetectUndocumented(const std::vector<std::string>& headers_norm, const DataDictionary& dict) {
  FieldSets out;
  std::unordered_set<std::string> observed(headers_norm.begin(), headers_norm.end());
  for (const auto& h : headers_norm) {
    if (dict.Find(h) == nullptr) {
      out.undocumented.push_back(h);
      if (IsExperimentalField(h)) out.experimental.push_back(h);
    }
  }
  for (const auto& f : dict.fields()) {
    if (observed.count(f.name) == 0) out.unobserved.push_back(f.name);
  }
  return out;
}

void CheckDomains(const std::map<std::string, ObservedValues>& observed, const DataDictionary& dict,
                  const DomainCheckOptions& options, DriftReport& report, FindingSink& sink) {
  std::unordered_map<std::string, std::unordered_set<std::string>> local_cache;
  auto& cache = options.reference_cache != nullptr ? *options.reference_cache : local_cache;
  auto norm = [&](std::string_view v) { return options.case_fold ? ToLowerAscii(Trim(v)) : std::string(Trim(v)); };

  for (const auto& f : dict.fields()) {
    if (!f.domain && !f.domain_ref) continue;
    auto obs = observed.find(f.name);
    if (obs == observed.end()) continue;

    std::unordered_set<std::string> declared;
    ValueDrift drift;
    if (f.domain) {
      for (const auto& v : *f.domain) declared.insert(norm(v));
    } else {
      auto it = cache.find(*f.domain_ref);
      if (it == cache.end()) {
        try {
          it = cache.emplace(*f.domain_ref, LoadReferenceList(*f.domain_ref)).first;
        } catch (const Error& e) {
          sink.Emit(Finding::Make(RuleId::kDomainRefError, e.what()).Field(f.name));
          continue;
        }
      }
      if (options.case_fold) {
        for (const auto& v : it->second) declared.insert(ToLowerAscii(v));
      } else {
        declared = it->second;
      }
      drift.from_reference = true;
    }
    drift.declared_size = declared.size();
    drift.approximate = obs->second.approximate;

    std::unordered_set<std::string> seen;
    for (const auto& [value, count] : obs->second.counts) {
      std::string v = norm(value);
      if (declared.count(v) == 0) {
        drift.undeclared[v] += count;
      } else {
        seen.insert(std::move(v));
      }
    }
    for (const auto& v : declared) {
      if (seen.count(v) == 0) drift.unobserved_declared.push_back(v);
    }
    std::sort(drift.unobserved_declared.begin(), drift.unobserved_declared.end());

    for (const auto& [value, count] : drift.undeclared) {
      sink.Emit(Finding::Make(RuleId::kUndeclaredValue, "'" + value + "' is not in the declared domain of " + f.name)
                    .Field(f.name)
                    .Measured(static_cast<double>(count), "rows"));
    }
    if (drift.from_reference) {
      if (!drift.unobserved_declared.empty()) {
        sink.Emit(Finding::Make(RuleId::kUnobservedDeclared,
                                std::to_string(drift.unobserved_declared.size()) + " reference values for " + f.name +
                                    " never observed")
                      .Field(f.name)
                      .Measured(static_cast<double>(drift.unobserved_declared.size()), "values"));
      }
    } else {
      for (const auto& v : drift.unobserved_declared) {
        sink.Emit(Finding::Make(RuleId::kUnobservedDeclared, "declared value '" + v + "' of " + f.name + " never observed")
                      .Field(f.name));
      }
    }
    report.value_drift[f.name] = std::move(drift);
  }
}

bool ConformsTo(TypeClass type, std::string_view raw, const ingest::TimestampParser& timestamps) {
  const std::string_view v = Trim(raw);
  switch (type) {
    case TypeClass::kText:
    case TypeClass::kCategorical:
      return true;
    case TypeClass::kInteger:
      return IsIntegerText(v);
    case TypeClass::kDecimal:
      return IsDecimalText(v);
    case TypeClass::kTimestamp:
      return timestamps.Parse(v).has_value();
    case TypeClass::kGeoPoint:
      return ParseGeoPoint(v).has_value();
  }
  return true;
}

TypeChecker::TypeChecker(const DataDictionary& dict, const ingest::TimestampParser& timestamps, FindingSink& sink)
    : dict_(dict), timestamps_(timestamps), sink_(sink) {}

void TypeChecker::Begin(const ingest::RawTable& table) {
  table_ = &table;
  checked_.clear();
  for (size_t i = 0; i < table.headers_norm.size(); ++i) {
    const auto* f = dict_.Find(table.headers_norm[i]);
    if (f == nullptr) continue;
    if (f->type_class == TypeClass::kText || f->type_class == TypeClass::kCategorical) continue;
    checked_.emplace_back(i, f->type_class);
  }
  counts_.assign(checked_.size(), 0);
}

void TypeChecker::Consume(const ingest::Row& row) {
  for (size_t k = 0; k < checked_.size(); ++k) {
    const auto [col, type] = checked_[k];
    const auto& cell = row.cells[col];
    if (cell.missing() || ConformsTo(type, cell.raw, timestamps_)) continue;
    ++counts_[k];
    const auto& name = table_->headers_norm[col];
    sink_.Emit(Finding::Make(RuleId::kTypeViolation, "'" + std::string(cell.raw) + "' is not a valid " +
                                                         std::string(TypeClassName(type)) + " for " + name)
                   .Field(name)
                   .At(row.ordinal, std::string(row.key(*table_))));
  }
}

void TypeChecker::Finish(const ingest::RawTable& table, FindingSink&) {
  violations_.clear();
  for (size_t k = 0; k < checked_.size(); ++k) violations_[table.headers_norm[checked_[k].first]] = counts_[k];
}

}  // namespace odqa::dictionary
