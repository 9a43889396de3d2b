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

#include "odqa/rules/domain_rules.h"

#include <algorithm>
#include <cstring>

#include "odqa/core/error.h"
#include "odqa/core/text.h"

namespace odqa::rules {

void GeoBounds::Validate() const {
  if (!(lat_min < lat_max) || !(lon_min < lon_max)) ThrowConfig("geo bounds must satisfy min < max");
  if (lat_min < -90 || lat_max > 90) ThrowConfig("latitude bounds must lie in [-90, 90]");
  if (lon_min < -180 || lon_max > 180) ThrowConfig("longitude bounds must lie in [-180, 180]");
}

bool GeoBounds::Contains(double lat, double lon) const {
  return lat >= lat_min && lat <= lat_max && lon >= lon_min && lon <= lon_max;
}

double MembershipResult::invalid_rate() const {
  return present == 0 ? 0.0 : static_cast<double>(invalid) / static_cast<double>(present);
}

int DecimalDigits(std::string_view raw) {
  const std::string_view s = ingest::Trim(raw);
  if (!IsDecimalText(s)) return -1;
  return CountDecimals(s);
}

DomainAuditor::DomainAuditor(DomainRulesConfig config, FindingSink& sink) : config_(std::move(config)), sink_(sink) {
  config_.bounds.Validate();
  if (config_.max_decimals <= 0) ThrowConfig("max_decimals must be positive");
  for (const auto& ref : config_.references) {
    if (ref.tokens.empty()) ThrowConfig("reference list for '" + ref.field + "' is empty");
  }
}

void DomainAuditor::Begin(const ingest::RawTable& table) {
  table_ = &table;
  agency_index_ = config_.agency_field.empty() ? -1 : table.FieldIndex(config_.agency_field);
  reference_index_.clear();
  membership_.clear();
  for (const auto& ref : config_.references) {
    reference_index_.push_back(table.FieldIndex(ref.field));
    membership_.emplace_back().field = ref.field;
  }
  lat_index_ = table.FieldIndex(config_.lat_field);
  lon_index_ = table.FieldIndex(config_.lon_field);
  geo_ = {};
  key_index_ = config_.key_field.empty() ? -1 : table.FieldIndex(config_.key_field);
  keys_.Clear();
  key_entries_.clear();
  unique_ = {};
  unique_.field = config_.key_field;
  precision_index_.clear();
  precision_.clear();
  for (const auto& f : config_.precision_fields) {
    precision_index_.push_back(table.FieldIndex(f));
    precision_.emplace_back().field = f;
  }
}

void DomainAuditor::Consume(const ingest::Row& row) {
  std::string_view agency;
  if (agency_index_ >= 0 && row.cells[static_cast<size_t>(agency_index_)].present()) {
    agency = row.cells[static_cast<size_t>(agency_index_)].raw;
  }
  auto key = [&] { return std::string(row.key(*table_)); };

  for (size_t r = 0; r < reference_index_.size(); ++r) {
    if (reference_index_[r] < 0) continue;
    const auto& cell = row.cells[static_cast<size_t>(reference_index_[r])];
    if (cell.missing()) continue;
    MembershipResult& m = membership_[r];
    ++m.present;
    if (!agency.empty()) ++m.present_by_agency[std::string(agency)];
    const std::string token(ingest::Trim(cell.raw));
    if (config_.references[r].tokens.count(token)) continue;
    ++m.invalid;
    ++m.invalid_values[token];
    if (!agency.empty()) ++m.invalid_by_agency[std::string(agency)];
    sink_.Emit(Finding::Make(RuleId::kInvalidValue, "'" + token + "' is not in the reference list")
                   .Field(m.field)
                   .At(row.ordinal, key())
                   .Agency(std::string(agency)));
  }

  if (lat_index_ >= 0 && lon_index_ >= 0) {
    const auto& la = row.cells[static_cast<size_t>(lat_index_)];
    const auto& lo = row.cells[static_cast<size_t>(lon_index_)];
    if (la.present() && lo.present()) {
      const auto lat = ParseDecimal(ingest::Trim(la.raw));
      const auto lon = ParseDecimal(ingest::Trim(lo.raw));
      if (lat && lon) {
        ++geo_.checked;
        if (!config_.bounds.Contains(*lat, *lon)) {
          ++geo_.out_of_bounds;
          sink_.Emit(Finding::Make(RuleId::kGeoOutOfBounds,
                                   "(" + std::string(ingest::Trim(la.raw)) + ", " + std::string(ingest::Trim(lo.raw)) +
                                       ") lies outside the configured bounds")
                         .Field(config_.lat_field)
                         .Field(config_.lon_field)
                         .At(row.ordinal, key())
                         .Agency(std::string(agency)));
        }
      }
    }
  }

  if (key_index_ >= 0) {
    const auto& cell = row.cells[static_cast<size_t>(key_index_)];
    if (cell.missing()) {
      ++unique_.missing;
      if (config_.key_required) {
        sink_.Emit(Finding::Make(RuleId::kMissingKey, "required key is missing")
                       .Field(config_.key_field)
                       .At(row.ordinal)
                       .Agency(std::string(agency)));
      }
    } else {
      ++unique_.checked;
      const std::string_view stored = keys_.Store(cell.raw);
      key_entries_.push_back({stored.data(), static_cast<uint32_t>(stored.size()), row.ordinal});
    }
  }

  for (size_t p = 0; p < precision_index_.size(); ++p) {
    if (precision_index_[p] < 0) continue;
    const auto& cell = row.cells[static_cast<size_t>(precision_index_[p])];
    if (cell.missing()) continue;
    const int digits = DecimalDigits(cell.raw);
    if (digits < 0) continue;
    ++precision_[p].decimal_digit_histogram[digits];
    if (digits > config_.max_decimals) ++precision_[p].flagged_count;
  }
}

void DomainAuditor::Finish(const ingest::RawTable& /*table*/, FindingSink& sink) {
  auto view = [](const KeyEntry& e) { return std::string_view(e.data, e.size); };
  std::sort(key_entries_.begin(), key_entries_.end(), [&](const KeyEntry& a, const KeyEntry& b) {
    const int c = view(a).compare(view(b));
    return c != 0 ? c < 0 : a.ordinal < b.ordinal;
  });
  for (size_t i = 0; i < key_entries_.size();) {
    size_t j = i + 1;
    while (j < key_entries_.size() && view(key_entries_[j]) == view(key_entries_[i])) ++j;
    if (j - i > 1) {
      ++unique_.duplicate_values;
      unique_.duplicate_rows += j - i - 1;
      const std::string value(view(key_entries_[i]));
      auto f = Finding::Make(RuleId::kDuplicateKey, "key '" + value + "' appears " + std::to_string(j - i) + " times")
                   .Field(config_.key_field)
                   .Measured(static_cast<double>(j - i), "rows");
      for (size_t k = i; k < j; ++k) f.At(key_entries_[k].ordinal, value);
      sink.Emit(std::move(f));
    }
    i = j;
  }
  key_entries_ = {};
  keys_.Clear();

  for (const auto& p : precision_) {
    if (p.flagged_count == 0) continue;
    std::string hist;
    for (const auto& [digits, count] : p.decimal_digit_histogram) {
      hist += (hist.empty() ? "" : ", ") + std::to_string(digits) + ":" + std::to_string(count);
    }
    sink.Emit(Finding::Make(RuleId::kPrecisionFlag, std::to_string(p.flagged_count) + " values carry more than " +
                                                        std::to_string(config_.max_decimals) +
                                                        " decimals; digits histogram {" + hist + "}")
                  .Field(p.field)
                  .Measured(static_cast<double>(p.flagged_count), "cells"));
  }
}

}  // namespace odqa::rules
