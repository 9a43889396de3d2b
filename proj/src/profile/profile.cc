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

#include "odqa/profile/profile.h"

#include <algorithm>
#include <cstdio>

#include "odqa/core/error.h"

namespace odqa::profile {

namespace {

constexpr uint32_t kNoAgency = UINT32_MAX;

bool ByCountDesc(const std::pair<std::string, uint64_t>& a, const std::pair<std::string, uint64_t>& b) {
  return a.second != b.second ? a.second > b.second : a.first < b.first;
}

}  // namespace

uint64_t ColumnProfile::missing_total() const {
  uint64_t total = 0;
  for (uint64_t c : missing_counts) total += c;
  return total;
}

double ColumnProfile::blank_pct() const {
  if (total_rows == 0) return 0;
  return 100.0 * static_cast<double>(missing_total()) / static_cast<double>(total_rows);
}

std::string_view TierName(Tier tier) {
  switch (tier) {
    case Tier::kMostlyEmpty: return "mostly_empty";
    case Tier::kPartiallyEmpty: return "partially_empty";
    case Tier::kFewNoneEmpty: return "few_none_empty";
  }
  return "unknown";
}

Tier TierFor(double blank_pct) {
  if (blank_pct >= 90.0) return Tier::kMostlyEmpty;
  if (blank_pct <= 2.0) return Tier::kFewNoneEmpty;
  return Tier::kPartiallyEmpty;
}

std::vector<MissingnessTier> TierMissingness(const std::vector<ColumnProfile>& profiles) {
  std::vector<MissingnessTier> out;
  out.reserve(profiles.size());
  for (const auto& p : profiles) {
    if (p.total_rows == 0) ThrowValidation("cannot tier field '" + p.field + "' with no rows");
    const double pct = p.blank_pct();
    out.push_back({p.field, pct, TierFor(pct)});
  }
  std::stable_sort(out.begin(), out.end(), [](const MissingnessTier& a, const MissingnessTier& b) {
    return a.blank_pct != b.blank_pct ? a.blank_pct > b.blank_pct : a.field < b.field;
  });
  return out;
}

Concentration ComputeConcentration(Frequencies frequencies, size_t k) {
  if (k == 0) ThrowValidation("concentration k must be positive");
  uint64_t total = 0;
  for (const auto& [value, count] : frequencies) total += count;
  if (total == 0) ThrowValidation("concentration share is undefined when every count is zero");
  std::sort(frequencies.begin(), frequencies.end(), ByCountDesc);
  Concentration out;
  out.cumulative.reserve(frequencies.size());
  uint64_t running = 0;
  for (const auto& [value, count] : frequencies) {
    running += count;
    out.cumulative.push_back(static_cast<double>(running) / static_cast<double>(total));
  }
  out.top_k_share = out.cumulative[std::min(k, out.cumulative.size()) - 1];
  out.sorted = std::move(frequencies);
  return out;
}

struct Profiler::Column {
  std::array<uint64_t, ingest::kSentinelKinds> missing{};
  uint64_t present = 0;
  uint64_t disk = 0;
  uint64_t present_disk = 0;
  std::unique_ptr<ValueCounter> exact = std::make_unique<ValueCounter>();
  std::unique_ptr<SpaceSaving> heavy;
  std::unique_ptr<HyperLogLog> hll;
  std::vector<uint64_t> agency_present;
};

Profiler::Profiler(ProfileOptions options) : options_(std::move(options)) {}
Profiler::~Profiler() = default;

void Profiler::Begin(const ingest::RawTable& table) {
  fields_ = table.headers_norm;
  columns_.clear();
  for (size_t i = 0; i < fields_.size(); ++i) columns_.push_back(std::make_unique<Column>());
  agency_index_ = options_.agency_field.empty() ? -1 : table.FieldIndex(options_.agency_field);
  agencies_.Clear();
  agency_names_.clear();
  exact_entries_ = 0;
  profiles_.clear();
}

uint32_t Profiler::AgencyId(const ingest::Row& row) {
  if (agency_index_ < 0) return kNoAgency;
  const auto& cell = row.cells[static_cast<size_t>(agency_index_)];
  if (cell.missing()) return kNoAgency;
  if (auto id = agencies_.Find(cell.raw)) return *id;
  if (agencies_.size() >= options_.max_agencies) {
    if (agency_names_.size() == options_.max_agencies) agency_names_.push_back("(other)");
    return static_cast<uint32_t>(options_.max_agencies);
  }
  const uint32_t id = agencies_.Add(cell.raw, 0);
  agency_names_.emplace_back(cell.raw);
  return id;
}

void Profiler::Consume(const ingest::Row& row) {
  const uint32_t agency = AgencyId(row);
  for (size_t i = 0; i < columns_.size(); ++i) {
    Column& col = *columns_[i];
    const ingest::CellValue& cell = row.cells[i];
    col.disk += cell.disk_bytes;
    if (cell.missing()) {
      ++col.missing[static_cast<size_t>(cell.sentinel)];
      continue;
    }
    ++col.present;
    col.present_disk += cell.disk_bytes;
    if (agency != kNoAgency) {
      if (col.agency_present.size() <= agency) col.agency_present.resize(agency + 1, 0);
      ++col.agency_present[agency];
    }
    if (col.exact) {
      const size_t before = col.exact->size();
      col.exact->Add(cell.raw);
      if (col.exact->size() != before) {
        ++exact_entries_;
        if (col.exact->size() > options_.distinct_cap) Demote(col);
      }
    } else {
      col.heavy->Add(cell.raw);
      col.hll->Add(cell.raw);
    }
  }
  if (exact_entries_ > options_.exact_entry_budget) EnforceBudget();
}

void Profiler::Demote(Column& column) {
  column.hll = std::make_unique<HyperLogLog>(options_.hll_precision);
  column.heavy = std::make_unique<SpaceSaving>(options_.heavy_hitters);
  for (uint32_t id = 0; id < column.exact->size(); ++id) column.hll->Add(column.exact->value(id));
  for (const auto& [value, count] : column.exact->Sorted(options_.heavy_hitters)) column.heavy->Seed(value, count);
  exact_entries_ -= column.exact->size();
  column.exact.reset();
}

void Profiler::EnforceBudget() {
  while (exact_entries_ > options_.exact_entry_budget) {
    Column* widest = nullptr;
    for (auto& col : columns_) {
      if (col->exact && (!widest || col->exact->size() > widest->exact->size())) widest = col.get();
    }
    if (!widest) return;
    Demote(*widest);
  }
}

void Profiler::Finish(const ingest::RawTable& table, FindingSink& sink) {
  const uint64_t total = table.rows_delivered;
  profiles_.clear();
  for (size_t i = 0; i < columns_.size(); ++i) {
    const Column& col = *columns_[i];
    ColumnProfile p;
    p.field = fields_[i];
    p.total_rows = total;
    p.present_count = col.present;
    p.missing_counts = col.missing;
    p.disk_bytes = col.disk;
    p.present_disk_bytes = col.present_disk;
    if (col.exact) {
      p.distinct_count = col.exact->size();
      for (const auto& [value, count] : col.exact->Sorted(options_.top_k)) p.top_values.emplace_back(value, count);
    } else {
      p.approximate = true;
      p.distinct_count = col.hll->Estimate();
      for (const auto& c : col.heavy->Top(options_.top_k)) p.top_values.emplace_back(c.value, c.count);
      sink.Emit(Finding::Make(RuleId::kApproximateProfile,
                              "distinct values exceeded the exact-count budget; top values are heavy-hitter "
                              "estimates and the distinct count is approximate")
                    .Field(p.field)
                    .Measured(static_cast<double>(p.distinct_count), "distinct_values"));
    }
    for (size_t a = 0; a < col.agency_present.size(); ++a) {
      if (col.agency_present[a] != 0) p.per_agency_present[agency_names_[a]] = col.agency_present[a];
    }
    profiles_.push_back(std::move(p));
  }
  if (!options_.agency_field.empty() && agency_index_ < 0) {
    sink.Emit(Finding::Make(RuleId::kMissingAgencyField, "agency field '" + options_.agency_field +
                                                             "' not found; per-agency usage omitted")
                  .Field(options_.agency_field));
  }
}

const ColumnProfile* Profiler::Find(std::string_view field) const {
  for (const auto& p : profiles_) {
    if (p.field == field) return &p;
  }
  return nullptr;
}

dictionary::ObservedValues Profiler::Observed(std::string_view field) const {
  dictionary::ObservedValues out;
  const auto it = std::find(fields_.begin(), fields_.end(), field);
  if (it == fields_.end()) return out;
  const Column& col = *columns_[static_cast<size_t>(it - fields_.begin())];
  if (col.exact) {
    for (const auto& [value, count] : col.exact->Sorted()) out.counts.emplace_back(value, count);
  } else {
    out.approximate = true;
    for (const auto& c : col.heavy->Top()) out.counts.emplace_back(c.value, c.count);
  }
  return out;
}

std::map<std::string, dictionary::ObservedValues> Profiler::ObservedFor(const std::vector<std::string>& fields) const {
  std::map<std::string, dictionary::ObservedValues> out;
  for (const auto& f : fields) {
    if (std::find(fields_.begin(), fields_.end(), f) != fields_.end()) out[f] = Observed(f);
  }
  return out;
}

std::string FormatPct(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", pct);
  return buf;
}

void WriteProfilesCsv(const std::vector<ColumnProfile>& profiles, const std::string& path) {
  ingest::CsvWriter out(path);
  out.WriteRow({"field", "total", "present", "blank_pct", "tier", "distinct"});
  for (const auto& p : profiles) {
    const std::string total = std::to_string(p.total_rows);
    const std::string present = std::to_string(p.present_count);
    const std::string pct = FormatPct(p.blank_pct());
    const std::string_view tier = p.total_rows ? TierName(TierFor(p.blank_pct())) : std::string_view{};
    const std::string distinct = std::to_string(p.distinct_count);
    out.WriteRow({p.field, total, present, pct, tier, distinct});
  }
  out.Close();
}

}  // namespace odqa::profile
