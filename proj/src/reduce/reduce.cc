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

#include "odqa/reduce/reduce.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <set>

#include "json.hpp"
#include "odqa/core/error.h"
#include "odqa/core/value_counter.h"

namespace odqa::reduce {

namespace {

using Json = nlohmann::ordered_json;
using redundancy::Verdict;

uint64_t QuotedSize(std::string_view s) {
  std::string out;
  ingest::AppendCsvField(out, s);
  return out.size();
}

std::string Pct(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", rate * 100);
  return buf;
}

class Planner {
 public:
  Planner(const PlanInputs& in, const PlanPolicy& policy, FindingSink& sink) : in_(in), policy_(policy), sink_(sink) {
    protect_.insert(policy.protect.begin(), policy.protect.end());
    if (!policy.key_field.empty()) protect_.insert(policy.key_field);
    for (const auto& p : *in.profiles) profiles_[p.field] = &p;
  }

  ReductionPlan Build() {
    CheckConflicts();
    plan_.source = in_.table->source;
    plan_.source_sha256 = in_.table->content_sha256;
    plan_.headers = in_.table->headers_norm;
    plan_.key_field = policy_.key_field;
    plan_.baseline_bytes = in_.table->byte_size;
    if (policy_.drop_duplicates) DropDuplicates();
    if (policy_.drop_concatenations) DropConcatenations();
    if (policy_.drop_functional_dependents) DropDependents();
    DropNearDuplicates();
    Segregate();
    Encode();
    for (const auto& a : plan_.actions) plan_.estimated_total_saved += a.estimated_bytes_saved;
    plan_.Validate(in_.table->headers_norm, policy_.acknowledge_lossy);
    return plan_;
  }

 private:
  void CheckConflicts() const {
    for (const auto& f : policy_.near_duplicate_drops) {
      if (std::find(policy_.encode_fields.begin(), policy_.encode_fields.end(), f) != policy_.encode_fields.end()) {
        ThrowConfig("plan error: '" + f + "' is configured to be both dropped and encoded");
      }
      if (protect_.count(f)) ThrowConfig("plan error: '" + f + "' is protected and cannot be dropped");
    }
  }

  bool Removed(const std::string& f) const { return removed_.count(f) > 0; }
  bool Available(const std::string& f) const { return !Removed(f) && !protect_.count(f) && profiles_.count(f); }

  uint64_t RemovalBytes(const std::string& field) const {
    if (in_.table->headers_norm.size() < 2) return 0;
    const auto* p = profiles_.at(field);
    const int idx = in_.table->FieldIndex(field);
    return p->disk_bytes + p->total_rows + QuotedSize(in_.table->headers_raw[static_cast<size_t>(idx)]) + 1;
  }

  void AddRemoval(ActionKind kind, std::string basis, const std::string& field, std::string why, bool lossy,
                  std::string reference) {
    PlanAction a;
    a.kind = kind;
    a.basis = std::move(basis);
    a.field = field;
    a.justification = std::move(why);
    a.lossy = lossy;
    a.reference = std::move(reference);
    a.estimated_bytes_saved = RemovalBytes(field);
    removed_.insert(field);
    plan_.actions.push_back(std::move(a));
  }

  void DropDuplicates() {
    if (!in_.pairs) return;
    for (const auto& p : *in_.pairs) {
      if (redundancy::Classify(p, in_.thresholds) != Verdict::kDuplicate) continue;
      if (!Available(p.field_b) || Removed(p.field_a)) continue;
      const bool lossy = !p.identical();
      if (lossy && !policy_.acknowledge_lossy) continue;
      AddRemoval(ActionKind::kDrop, "duplicate", p.field_b,
                 "100% match with " + p.field_a + " on " + std::to_string(p.both_present) + " rows where both present" +
                     (lossy ? "; blank masks differ, lossy" : "; blank masks equal, lossless"),
                 lossy, p.field_a);
    }
  }

  void DropConcatenations() {
    if (!in_.concatenations) return;
    for (const auto& c : *in_.concatenations) {
      if (c.all_present == 0 || c.matches != c.all_present) continue;
      if (!Available(c.target) || Removed(c.part_a) || Removed(c.part_b)) continue;
      const bool lossy = !c.reconstructible();
      if (lossy && !policy_.acknowledge_lossy) continue;
      AddRemoval(ActionKind::kDrop, "concatenation", c.target,
                 "equals " + c.pattern + " over " + c.part_a + ", " + c.part_b + " on all " +
                     std::to_string(c.all_present) + " rows" +
                     (lossy ? "; blanks do not line up, lossy" : "; rebuildable from its parts, lossless"),
                 lossy, c.part_a);
      plan_.actions.back().concat_template = c.pattern;
      plan_.actions.back().concat_part_b = c.part_b;
    }
  }

  void DropDependents() {
    if (!in_.dependencies) return;
    for (const auto& d : *in_.dependencies) {
      if (!d.holds() || !Available(d.dependent) || Removed(d.determinant)) continue;
      const bool lossy = !d.reconstructible();
      if (lossy && !policy_.acknowledge_lossy) continue;
      AddRemoval(ActionKind::kDrop, "dependency", d.dependent,
                 "determined by " + d.determinant + " (" + std::to_string(d.mapping.size()) + " values)" +
                     (lossy ? "; blanks do not line up, lossy" : "; rebuildable from a mapping sidecar, lossless"),
                 lossy, d.determinant);
    }
  }

  void DropNearDuplicates() {
    for (const auto& f : policy_.near_duplicate_drops) {
      if (Removed(f)) continue;
      if (!profiles_.count(f)) ThrowConfig("plan error: near-duplicate drop of unknown field '" + f + "'");
      const redundancy::PairMatchStats* best = nullptr;
      for (const auto& p : in_.pairs ? *in_.pairs : std::vector<redundancy::PairMatchStats>{}) {
        if (p.field_a != f && p.field_b != f) continue;
        const Verdict v = redundancy::Classify(p, in_.thresholds);
        if (v != Verdict::kDuplicate && v != Verdict::kNearDuplicate) continue;
        if (Removed(p.field_a == f ? p.field_b : p.field_a)) continue;
        if (!best || *p.match_rate_both_present() > *best->match_rate_both_present()) best = &p;
      }
      if (!best) ThrowConfig("plan error: no duplicate or near-duplicate pair justifies dropping '" + f + "'");
      const std::string other = best->field_a == f ? best->field_b : best->field_a;
      const bool lossy = !best->identical();
      if (lossy && !policy_.acknowledge_lossy) {
        ThrowConfig("plan error: dropping '" + f + "' loses data (" + Pct(*best->match_rate_both_present()) +
                    " match with " + other + "); set acknowledge_lossy to accept");
      }
      AddRemoval(ActionKind::kDrop, "near_duplicate", f,
                 Pct(*best->match_rate_both_present()) + " match with " + other + " on " +
                     std::to_string(best->both_present) + " rows where both present" + (lossy ? "; lossy" : "; lossless"),
                 lossy, other);
    }
  }

  void Segregate() {
    const bool has_key = !policy_.key_field.empty() && in_.table->FieldIndex(policy_.key_field) >= 0;
    const auto* kc = in_.key_check;
    const bool key_ok = has_key && (kc == nullptr || (kc->duplicate_rows == 0 && kc->missing == 0));
    bool warned = false;
    for (const auto& p : *in_.profiles) {
      if (p.total_rows == 0 || p.blank_pct() < policy_.sparse_threshold_pct || !Available(p.field)) continue;
      if (!key_ok) {
        if (!warned) {
          const std::string why =
              !has_key ? "absent"
                       : "not unique (" + std::to_string(kc->duplicate_rows) + " duplicate rows, " +
                             std::to_string(kc->missing) + " missing)";
          sink_.Emit(Finding::Make(RuleId::kInsufficientData,
                                   "key field '" + policy_.key_field + "' " + why + "; sparse columns not segregated")
                         .Field(policy_.key_field));
          warned = true;
        }
        continue;
      }
      AddRemoval(ActionKind::kSegregate, "sparse", p.field,
                 FormatBlank(p.blank_pct()) + " blank; present values move to a sidecar keyed by " + policy_.key_field,
                 false, policy_.key_field);
    }
  }

  static std::string FormatBlank(double pct) { return profile::FormatPct(pct) + "%"; }

  void Encode() {
    std::vector<std::string> candidates;
    if (in_.dictionary) {
      for (const auto& f : in_.dictionary->fields()) {
        if (f.type_class == dictionary::TypeClass::kCategorical) candidates.push_back(f.name);
      }
    }
    for (const auto& f : policy_.encode_fields) {
      if (!profiles_.count(f)) ThrowConfig("plan error: encode of unknown field '" + f + "'");
      if (protect_.count(f)) ThrowConfig("plan error: '" + f + "' is protected and cannot be encoded");
      if (std::find(candidates.begin(), candidates.end(), f) == candidates.end()) candidates.push_back(f);
    }
    for (const auto& field : in_.table->headers_norm) {
      if (std::find(candidates.begin(), candidates.end(), field) == candidates.end()) continue;
      if (!Available(field)) continue;
      const auto& p = *profiles_.at(field);
      if (p.present_count == 0) continue;
      auto refuse = [&](const std::string& why) {
        sink_.Emit(Finding::Make(RuleId::kEncodeRefused, why + "; left as text").Field(field));
      };
      if (p.approximate || p.distinct_count > policy_.encode_cap) {
        refuse(std::string(p.approximate ? "~" : "") + std::to_string(p.distinct_count) +
               " distinct values exceed the encode cap of " + std::to_string(policy_.encode_cap));
        continue;
      }
      const int width = CodeWidth(p.distinct_count);
      if (p.present_disk_bytes <= p.present_count * static_cast<uint64_t>(width)) {
        refuse("average value length does not exceed the " + std::to_string(width) + "-digit code");
        continue;
      }
      PlanAction a;
      a.kind = ActionKind::kEncode;
      a.basis = "categorical";
      a.field = field;
      a.distinct = p.distinct_count;
      a.code_width = width;
      a.estimated_bytes_saved = p.present_disk_bytes - p.present_count * static_cast<uint64_t>(width);
      a.justification = std::to_string(p.distinct_count) + " distinct values; " + std::to_string(width) +
                        "-digit codes with a dictionary sidecar";
      plan_.actions.push_back(std::move(a));
    }
  }

  const PlanInputs& in_;
  const PlanPolicy& policy_;
  FindingSink& sink_;
  std::set<std::string> protect_;
  std::set<std::string> removed_;
  std::map<std::string, const profile::ColumnProfile*> profiles_;
  ReductionPlan plan_;
};

}  // namespace

std::string_view ActionKindName(ActionKind kind) {
  switch (kind) {
    case ActionKind::kDrop: return "drop";
    case ActionKind::kSegregate: return "segregate";
    case ActionKind::kEncode: return "encode";
  }
  return "unknown";
}

std::optional<ActionKind> ParseActionKind(std::string_view name) {
  for (auto k : {ActionKind::kDrop, ActionKind::kSegregate, ActionKind::kEncode}) {
    if (ActionKindName(k) == name) return k;
  }
  return std::nullopt;
}

int CodeWidth(uint64_t distinct) {
  uint64_t largest = distinct == 0 ? 0 : distinct - 1;
  int width = 1;
  while (largest >= 10) {
    largest /= 10;
    ++width;
  }
  return width;
}

void ReductionPlan::Validate(const std::vector<std::string>& source_headers, bool acknowledge_lossy) const {
  std::set<std::string> removed;
  std::set<std::string> encoded;
  uint64_t total = 0;
  for (const auto& a : actions) {
    if (std::find(source_headers.begin(), source_headers.end(), a.field) == source_headers.end()) {
      ThrowValidation("plan references unknown field '" + a.field + "'");
    }
    total += a.estimated_bytes_saved;
    if (a.kind == ActionKind::kEncode) {
      if (!encoded.insert(a.field).second) ThrowValidation("plan encodes '" + a.field + "' twice");
      continue;
    }
    if (!removed.insert(a.field).second) ThrowValidation("plan removes '" + a.field + "' more than once");
    if (a.lossy && !acknowledge_lossy) {
      ThrowValidation("plan drops '" + a.field + "' with data loss but lossy drops are not acknowledged");
    }
    if (a.kind == ActionKind::kSegregate &&
        std::find(source_headers.begin(), source_headers.end(), key_field) == source_headers.end()) {
      ThrowValidation("segregating '" + a.field + "' needs key field '" + key_field + "'");
    }
    if (!a.reference.empty() && a.kind == ActionKind::kDrop &&
        std::find(source_headers.begin(), source_headers.end(), a.reference) == source_headers.end()) {
      ThrowValidation("plan references unknown field '" + a.reference + "'");
    }
  }
  for (const auto& f : encoded) {
    if (removed.count(f)) ThrowValidation("plan encodes '" + f + "', which it also removes");
  }
  if (removed.count(key_field) && !key_field.empty()) ThrowValidation("plan removes the key field '" + key_field + "'");
  if (total != estimated_total_saved) ThrowValidation("plan total does not equal the sum of its actions");
}

const PlanAction* ReductionPlan::Find(std::string_view field, ActionKind kind) const {
  for (const auto& a : actions) {
    if (a.field == field && a.kind == kind) return &a;
  }
  return nullptr;
}

ReductionPlan BuildPlan(const PlanInputs& inputs, const PlanPolicy& policy, FindingSink& sink) {
  if (!inputs.table || !inputs.profiles) ThrowInternal("plan needs a table and its profiles");
  if (policy.sparse_threshold_pct <= 0 || policy.sparse_threshold_pct > 100) {
    ThrowConfig("sparse_threshold_pct must lie in (0, 100]");
  }
  if (policy.encode_cap == 0) ThrowConfig("encode_cap must be positive");
  return Planner(inputs, policy, sink).Build();
}

std::string PlanToJson(const ReductionPlan& plan) {
  Json j;
  j["format"] = "odqa-reduction-plan/1";
  j["source"] = plan.source;
  j["source_sha256"] = plan.source_sha256;
  j["headers"] = plan.headers;
  j["key_field"] = plan.key_field;
  j["baseline_bytes"] = plan.baseline_bytes;
  j["estimated_total_saved"] = plan.estimated_total_saved;
  Json actions = Json::array();
  for (const auto& a : plan.actions) {
    Json x;
    x["kind"] = ActionKindName(a.kind);
    x["field"] = a.field;
    x["basis"] = a.basis;
    x["justification"] = a.justification;
    x["lossy"] = a.lossy;
    x["estimated_bytes_saved"] = a.estimated_bytes_saved;
    if (!a.reference.empty()) x["reference"] = a.reference;
    if (!a.concat_template.empty()) {
      x["template"] = a.concat_template;
      x["part_b"] = a.concat_part_b;
    }
    if (a.kind == ActionKind::kEncode) {
      x["distinct"] = a.distinct;
      x["code_width"] = a.code_width;
    }
    actions.push_back(std::move(x));
  }
  j["actions"] = std::move(actions);
  return j.dump(2) + "\n";
}

ReductionPlan PlanFromJson(const std::string& text) {
  ReductionPlan plan;
  try {
    const Json j = Json::parse(text);
    if (j.value("format", "") != "odqa-reduction-plan/1") ThrowValidation("not a reduction plan document");
    plan.source = j.value("source", "");
    plan.source_sha256 = j.value("source_sha256", "");
    plan.headers = j.value("headers", std::vector<std::string>{});
    plan.key_field = j.value("key_field", "");
    plan.baseline_bytes = j.at("baseline_bytes").get<uint64_t>();
    plan.estimated_total_saved = j.at("estimated_total_saved").get<uint64_t>();
    for (const auto& x : j.at("actions")) {
      PlanAction a;
      const auto kind = ParseActionKind(x.at("kind").get<std::string>());
      if (!kind) ThrowValidation("unknown plan action '" + x.at("kind").get<std::string>() + "'");
      a.kind = *kind;
      a.field = x.at("field").get<std::string>();
      a.basis = x.value("basis", "");
      a.justification = x.value("justification", "");
      a.lossy = x.value("lossy", false);
      a.estimated_bytes_saved = x.value("estimated_bytes_saved", uint64_t{0});
      a.reference = x.value("reference", "");
      a.concat_template = x.value("template", "");
      a.concat_part_b = x.value("part_b", "");
      a.distinct = x.value("distinct", uint64_t{0});
      a.code_width = x.value("code_width", 0);
      plan.actions.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    ThrowValidation(std::string("malformed reduction plan: ") + e.what());
  }
  return plan;
}

EncodedColumn EncodeColumn(const std::vector<ingest::CellValue>& values) {
  EncodedColumn out;
  ValueCounter ids;
  out.codes.reserve(values.size());
  for (const auto& v : values) {
    if (v.missing()) {
      out.codes.push_back(std::nullopt);
      continue;
    }
    const size_t before = ids.size();
    const uint32_t id = ids.Add(v.raw);
    if (ids.size() != before) out.dictionary.entries.emplace_back(v.raw);
    out.codes.push_back(id);
  }
  return out;
}

std::vector<std::optional<std::string>> DecodeColumn(const EncodedColumn& column) {
  std::vector<std::optional<std::string>> out;
  out.reserve(column.codes.size());
  for (const auto& c : column.codes) {
    if (!c) {
      out.push_back(std::nullopt);
    } else {
      out.push_back(column.dictionary.entries.at(*c));
    }
  }
  return out;
}

ApplyResult ApplyPlan(const std::string& source, const ReductionPlan& plan, const std::string& out_dir,
                      bool acknowledge_lossy, FindingSink& sink, const ingest::IngestOptions& options) {
  ingest::TableReader reader(source, options, sink);
  const ingest::RawTable& table = reader.table();
  plan.Validate(table.headers_norm, acknowledge_lossy);

  enum class Role { kKeep, kRemove, kEncode };
  const size_t width = table.headers_norm.size();
  std::vector<Role> roles(width, Role::kKeep);
  const int key = plan.key_field.empty() ? -1 : table.FieldIndex(plan.key_field);

  struct Sidecar {
    size_t column;
    std::unique_ptr<ingest::CsvWriter> writer;
    std::unique_ptr<ValueCounter> seen;  // encode and mapping sidecars
    int determinant = -1;
    size_t action;
  };
  std::vector<Sidecar> sidecars;

  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  ApplyResult result;
  result.main_path = (dir / (std::filesystem::path(source).stem().string() + ".reduced.csv")).string();

  for (size_t i = 0; i < plan.actions.size(); ++i) {
    const auto& a = plan.actions[i];
    const auto col = static_cast<size_t>(table.FieldIndex(a.field));
    ActionMeasurement m;
    m.field = a.field;
    m.kind = a.kind;
    m.estimated_bytes_saved = a.estimated_bytes_saved;
    Sidecar s{col, nullptr, nullptr, -1, i};
    if (a.kind == ActionKind::kEncode) {
      roles[col] = Role::kEncode;
      m.sidecar = (dir / (a.field + ".dict.csv")).string();
      s.writer = std::make_unique<ingest::CsvWriter>(m.sidecar);
      s.writer->WriteRow({"code", "value"});
      s.seen = std::make_unique<ValueCounter>();
    } else {
      roles[col] = Role::kRemove;
      if (a.kind == ActionKind::kSegregate) {
        m.sidecar = (dir / (a.field + ".sidecar.csv")).string();
        s.writer = std::make_unique<ingest::CsvWriter>(m.sidecar);
        s.writer->WriteRow({plan.key_field, a.field});
      } else if (a.basis == "dependency" && !a.lossy) {
        m.sidecar = (dir / (a.field + ".mapping.csv")).string();
        s.writer = std::make_unique<ingest::CsvWriter>(m.sidecar);
        s.writer->WriteRow({a.reference, a.field});
        s.seen = std::make_unique<ValueCounter>();
        s.determinant = table.FieldIndex(a.reference);
      }
    }
    result.actions.push_back(std::move(m));
    if (result.actions.back().sidecar.empty()) continue;
    sidecars.push_back(std::move(s));
  }

  std::vector<int64_t> in_bytes(width, 0);
  std::vector<int64_t> out_bytes(width, 0);
  ingest::CsvWriter main(result.main_path, options.delimiter);
  std::vector<std::string_view> fields;
  fields.reserve(width);
  for (size_t c = 0; c < width; ++c) {
    if (roles[c] != Role::kRemove) fields.push_back(table.headers_raw[c]);
  }
  main.WriteRow(fields);

  std::vector<std::string> codes(width);
  std::vector<int> sidecar_of(width, -1);
  for (size_t s = 0; s < sidecars.size(); ++s) sidecar_of[sidecars[s].column] = static_cast<int>(s);

  ingest::Row row;
  while (reader.NextRow(row)) {
    fields.clear();
    for (size_t c = 0; c < width; ++c) {
      const auto& cell = row.cells[c];
      in_bytes[c] += cell.disk_bytes + 1;
      if (roles[c] == Role::kKeep) {
        fields.push_back(cell.raw);
        continue;
      }
      const int si = sidecar_of[c];
      if (roles[c] == Role::kEncode) {
        Sidecar& s = sidecars[static_cast<size_t>(si)];
        if (cell.missing()) {
          codes[c].clear();
        } else {
          const size_t before = s.seen->size();
          const uint32_t id = s.seen->Add(cell.raw);
          codes[c] = std::to_string(id);
          if (s.seen->size() != before) s.writer->WriteRow({std::string_view(codes[c]), cell.raw});
        }
        out_bytes[c] += static_cast<int64_t>(codes[c].size()) + 1;
        fields.push_back(codes[c]);
        continue;
      }
      if (si < 0) continue;
      Sidecar& s = sidecars[static_cast<size_t>(si)];
      if (s.seen) {
        const auto& det = row.cells[static_cast<size_t>(s.determinant)];
        if (det.present() && cell.present()) {
          const size_t before = s.seen->size();
          s.seen->Add(det.raw);
          if (s.seen->size() != before) s.writer->WriteRow({det.raw, cell.raw});
        }
      } else if (cell.present()) {
        s.writer->WriteRow({row.cells[static_cast<size_t>(key)].raw, cell.raw});
      }
    }
    main.WriteRow(fields);
    ++result.rows_written;
  }
  main.Close();

  result.input_bytes = table.byte_size;
  result.output_bytes = main.bytes_written();
  result.rows_skipped = table.ragged_rows + table.malformed_rows;
  for (auto& s : sidecars) {
    s.writer->Close();
    result.actions[s.action].sidecar_bytes = s.writer->bytes_written();
    result.sidecar_bytes += s.writer->bytes_written();
  }
  for (auto& m : result.actions) {
    const auto c = static_cast<size_t>(table.FieldIndex(m.field));
    if (m.kind == ActionKind::kEncode) {
      m.measured_bytes_saved = in_bytes[c] - out_bytes[c];
    } else {
      m.measured_bytes_saved = in_bytes[c] + static_cast<int64_t>(QuotedSize(table.headers_raw[c])) + 1;
    }
  }
  return result;
}

std::string ApplyResultToJson(const ApplyResult& result) {
  Json j;
  j["main"] = result.main_path;
  j["input_bytes"] = result.input_bytes;
  j["output_bytes"] = result.output_bytes;
  j["measured_saved"] = result.measured_saved();
  j["measured_saved_pct"] =
      result.input_bytes ? 100.0 * static_cast<double>(result.measured_saved()) / static_cast<double>(result.input_bytes) : 0.0;
  j["sidecar_bytes"] = result.sidecar_bytes;
  j["rows_written"] = result.rows_written;
  j["rows_skipped"] = result.rows_skipped;
  Json actions = Json::array();
  for (const auto& a : result.actions) {
    Json x;
    x["kind"] = ActionKindName(a.kind);
    x["field"] = a.field;
    x["estimated_bytes_saved"] = a.estimated_bytes_saved;
    x["measured_bytes_saved"] = a.measured_bytes_saved;
    if (!a.sidecar.empty()) {
      x["sidecar"] = a.sidecar;
      x["sidecar_bytes"] = a.sidecar_bytes;
    }
    actions.push_back(std::move(x));
  }
  j["actions"] = std::move(actions);
  return j.dump(2) + "\n";
}

}  // namespace odqa::reduce
