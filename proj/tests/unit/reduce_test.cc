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

#include <filesystem>
#include <map>
#include <random>
#include <sstream>

#include "../support/temp_dir.h"
#include "doctest.h"
#include "odqa/core/error.h"
#include "odqa/reduce/reduce.h"

using namespace odqa;
using namespace odqa::reduce;
using odqa::testing::ReadFile;
using odqa::testing::TempDir;

namespace {

struct Analysis {
  VectorSink sink;
  ingest::RawTable table;
  std::unique_ptr<profile::Profiler> profiler;
  std::unique_ptr<redundancy::RedundancyAnalyzer> redundancy;
  dictionary::DataDictionary dict;

  PlanInputs Inputs() const {
    PlanInputs in;
    in.table = &table;
    in.profiles = &profiler->profiles();
    in.pairs = &redundancy->pairs();
    in.concatenations = &redundancy->concatenations();
    in.dependencies = &redundancy->dependencies();
    in.dictionary = &dict;
    return in;
  }
};

std::unique_ptr<Analysis> Analyze(const std::string& path, std::vector<redundancy::PairSpec> pairs = {}) {
  auto a = std::make_unique<Analysis>();
  a->profiler = std::make_unique<profile::Profiler>();
  redundancy::RedundancyConfig rc;
  rc.pairs = std::move(pairs);
  a->redundancy = std::make_unique<redundancy::RedundancyAnalyzer>(rc, a->sink);
  ingest::RowConsumer* consumers[] = {a->profiler.get(), a->redundancy.get()};
  a->table = ingest::StreamRows(path, consumers, a->sink, {});
  std::vector<dictionary::FieldDescriptor> fields;
  for (const char* f : {"agency", "complaint_type", "borough", "park_borough"}) {
    fields.push_back({.name = f, .type_class = dictionary::TypeClass::kCategorical});
  }
  a->dict = dictionary::DataDictionary(fields, "test");
  return a;
}

// 311-shaped fixture with one instance of every reduction opportunity.
std::string ServiceRequests(int rows, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const char* agencies[][2] = {{"NYPD", "New York City Police Department"},
                               {"DOT", "Department of Transportation"},
                               {"DSNY", "Department of Sanitation"}};
  const char* boroughs[] = {"BROOKLYN", "QUEENS", "MANHATTAN", "BRONX", "STATEN ISLAND", "Unspecified"};
  std::string csv =
      "unique_key,agency,agency_name,complaint_type,borough,park_borough,taxi_company_borough,latitude,longitude,"
      "location,cross_street_1,intersection_street_1\n";
  for (int i = 0; i < rows; ++i) {
    const auto& ag = agencies[rng() % 3];
    const std::string borough = boroughs[rng() % 6];
    const std::string complaint = "Complaint Type " + std::to_string(i < 210 ? i : static_cast<int>(rng() % 210));
    const std::string taxi = i % 1667 == 5 ? boroughs[rng() % 5] : "";
    std::string lat, lon, loc;
    if (rng() % 10) {
      lat = "40." + std::to_string(100000 + rng() % 800000);
      lon = "-73." + std::to_string(100000 + rng() % 800000);
      loc = "\"(" + lat + ", " + lon + ")\"";
    }
    const std::string cross = "STREET " + std::to_string(rng() % 50);
    const std::string inter = rng() % 100 < 88 ? cross : "AVENUE " + std::to_string(rng() % 50);
    csv += std::to_string(40000000 + i) + "," + ag[0] + "," + ag[1] + "," + complaint + "," + borough + "," + borough +
           "," + taxi + "," + lat + "," + lon + "," + loc + "," + cross + "," + inter + "\n";
  }
  return csv;
}

std::vector<std::vector<std::string>> ReadCsv(const std::string& path) {
  VectorSink sink;
  ingest::TableReader reader(path, {}, sink);
  std::vector<std::vector<std::string>> rows;
  rows.emplace_back(reader.table().headers_raw.begin(), reader.table().headers_raw.end());
  ingest::Row row;
  while (reader.NextRow(row)) {
    std::vector<std::string> r;
    for (const auto& c : row.cells) r.emplace_back(c.raw);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

TEST_CASE("code width") {
  CHECK(CodeWidth(0) == 1);
  CHECK(CodeWidth(1) == 1);
  CHECK(CodeWidth(10) == 1);
  CHECK(CodeWidth(11) == 2);
  CHECK(CodeWidth(210) == 3);
  CHECK(CodeWidth(1000) == 3);
  CHECK(CodeWidth(1001) == 4);
}

TEST_CASE("encode_column") {
  std::vector<std::string> raw = {"NOISE", "HEAT", "NOISE", "", "N/A"};
  std::vector<ingest::CellValue> cells;
  for (const auto& r : raw) cells.push_back({r, ingest::ClassifyMissing(r), 0});
  const auto e = EncodeColumn(cells);
  CHECK(e.dictionary.entries == std::vector<std::string>{"NOISE", "HEAT"});
  CHECK(e.codes == std::vector<std::optional<uint32_t>>{0u, 1u, 0u, std::nullopt, std::nullopt});
  CHECK(e.dictionary.code_width() == 1);

  const std::string v = "Illegal Parking";
  std::vector<ingest::CellValue> many(300000, ingest::CellValue{v, ingest::MissingSentinel::kNone, 15});
  const auto m = EncodeColumn(many);
  CHECK(m.dictionary.entries.size() == 1);
  CHECK(m.dictionary.code_width() == 1);

  std::mt19937_64 rng(83);
  std::vector<std::string> storage;
  for (int i = 0; i < 5000; ++i) storage.push_back(rng() % 7 ? "v" + std::to_string(rng() % 300) : "");
  cells.clear();
  for (const auto& s : storage) cells.push_back({s, ingest::ClassifyMissing(s), 0});
  const auto decoded = DecodeColumn(EncodeColumn(cells));
  for (size_t i = 0; i < storage.size(); ++i) {
    if (storage[i].empty()) {
      CHECK_FALSE(decoded[i]);
    } else {
      CHECK(*decoded[i] == storage[i]);
    }
  }
}

TEST_CASE("build_plan on a service-request fixture") {
  TempDir dir;
  const auto path = dir.Write("sr.csv", ServiceRequests(10000, 1));
  auto a = Analyze(path, {{"borough", "park_borough", false}, {"cross_street_1", "intersection_street_1", false}});
  VectorSink sink;
  PlanPolicy policy;
  auto plan = BuildPlan(a->Inputs(), policy, sink);

  const auto* park = plan.Find("park_borough", ActionKind::kDrop);
  REQUIRE(park);
  CHECK_FALSE(park->lossy);
  CHECK(park->reference == "borough");
  CHECK(plan.Find("location", ActionKind::kDrop));
  CHECK(plan.Find("agency_name", ActionKind::kDrop));
  const auto* taxi = plan.Find("taxi_company_borough", ActionKind::kSegregate);
  REQUIRE(taxi);
  CHECK(a->profiler->Find("taxi_company_borough")->blank_pct() == doctest::Approx(99.94));
  const auto* complaint = plan.Find("complaint_type", ActionKind::kEncode);
  REQUIRE(complaint);
  CHECK(complaint->distinct == 210);
  CHECK(complaint->code_width == 3);
  CHECK_FALSE(plan.Find("park_borough", ActionKind::kEncode));
  CHECK_FALSE(plan.Find("intersection_street_1", ActionKind::kDrop));
  CHECK_FALSE(plan.Find("unique_key", ActionKind::kEncode));

  uint64_t sum = 0;
  for (const auto& act : plan.actions) sum += act.estimated_bytes_saved;
  CHECK(sum == plan.estimated_total_saved);
  CHECK(plan.baseline_bytes == a->table.byte_size);

  // Configured near-duplicate drop: refused without acknowledgement.
  policy.near_duplicate_drops = {"intersection_street_1"};
  CHECK_THROWS_WITH_AS(BuildPlan(a->Inputs(), policy, sink), doctest::Contains("acknowledge_lossy"), Error);
  policy.acknowledge_lossy = true;
  plan = BuildPlan(a->Inputs(), policy, sink);
  const auto* inter = plan.Find("intersection_street_1", ActionKind::kDrop);
  REQUIRE(inter);
  CHECK(inter->lossy);
  CHECK(inter->justification.find("lossy") != std::string::npos);
  CHECK_THROWS_AS(plan.Validate(plan.headers, false), Error);

  policy.encode_fields = {"intersection_street_1"};
  CHECK_THROWS_WITH_AS(BuildPlan(a->Inputs(), policy, sink), doctest::Contains("both dropped and encoded"), Error);
  policy.encode_fields.clear();
  policy.near_duplicate_drops = {"latitude"};
  CHECK_THROWS_WITH_AS(BuildPlan(a->Inputs(), policy, sink), doctest::Contains("justifies"), Error);
}

TEST_CASE("segregation needs a unique key") {
  TempDir dir;
  auto a = Analyze(dir.Write("sr.csv", ServiceRequests(4000, 5)));
  rules::UniqueResult unique;
  unique.field = "unique_key";
  PlanInputs in = a->Inputs();
  in.key_check = &unique;
  VectorSink sink;
  CHECK(BuildPlan(in, {}, sink).Find("taxi_company_borough", ActionKind::kSegregate));
  CHECK(sink.Count(RuleId::kInsufficientData) == 0);
  unique.duplicate_rows = 1;
  CHECK_FALSE(BuildPlan(in, {}, sink).Find("taxi_company_borough", ActionKind::kSegregate));
  REQUIRE(sink.Count(RuleId::kInsufficientData) == 1);
  CHECK(sink.findings().back().message().find("not unique (1 duplicate rows, 0 missing)") != std::string::npos);
}

TEST_CASE("encode refusals") {
  TempDir dir;
  std::string csv = "unique_key,borough,agency\n";
  for (int i = 0; i < 100; ++i) csv += std::to_string(i) + ",B" + std::to_string(i) + ",X\n";
  auto a = Analyze(dir.Write("e.csv", csv));
  VectorSink sink;
  PlanPolicy policy;
  policy.encode_cap = 50;
  auto plan = BuildPlan(a->Inputs(), policy, sink);
  CHECK(plan.actions.empty());
  // borough exceeds the cap; agency's one-byte values cannot beat a one-digit code.
  CHECK(sink.Count(RuleId::kEncodeRefused) == 2);
}

TEST_CASE("plan json round trip and validation") {
  TempDir dir;
  const auto path = dir.Write("sr.csv", ServiceRequests(2000, 2));
  auto a = Analyze(path, {{"borough", "park_borough", false}});
  VectorSink sink;
  const auto plan = BuildPlan(a->Inputs(), {}, sink);
  const auto text = PlanToJson(plan);
  const auto back = PlanFromJson(text);
  CHECK(PlanToJson(back) == text);
  REQUIRE(back.actions.size() == plan.actions.size());
  CHECK(back.actions[0].basis == plan.actions[0].basis);
  CHECK_THROWS_AS(PlanFromJson("{}"), Error);
  CHECK_THROWS_AS(PlanFromJson("not json"), Error);

  auto bad = plan;
  bad.actions.push_back({.kind = ActionKind::kDrop, .field = "no_such_field"});
  const auto out = dir.File("out");
  CHECK_THROWS_WITH_AS(ApplyPlan(path, bad, out, false, sink), doctest::Contains("unknown field"), Error);
  CHECK_FALSE(std::filesystem::exists(out));

  bad = plan;
  bad.actions.push_back(bad.actions[0]);
  bad.estimated_total_saved += bad.actions[0].estimated_bytes_saved;
  CHECK_THROWS_AS(bad.Validate(bad.headers, true), Error);
  bad = plan;
  bad.estimated_total_saved += 1;
  CHECK_THROWS_AS(bad.Validate(bad.headers, true), Error);
  bad = plan;
  bad.actions.push_back({.kind = ActionKind::kEncode, .field = "park_borough"});
  CHECK_THROWS_AS(bad.Validate(bad.headers, true), Error);
}

TEST_CASE("apply_plan with no actions reproduces the input") {
  TempDir dir;
  const auto input = ServiceRequests(3000, 3);
  const auto path = dir.Write("sr.csv", input);
  ReductionPlan plan;
  plan.key_field = "unique_key";
  VectorSink sink;
  const auto r = ApplyPlan(path, plan, dir.File("out"), false, sink);
  CHECK(ReadFile(r.main_path) == input);
  CHECK(r.measured_saved() == 0);
  CHECK(r.rows_written == 3000);
}

TEST_CASE("apply_plan: dropped column bytes match byte accounting") {
  TempDir dir;
  std::mt19937_64 rng(89);
  std::string csv = "k,pad,notes\n";
  uint64_t notes_bytes = 0;
  int rows = 0;
  for (; rows < 2000; ++rows) {
    const std::string notes = std::string(1 + rng() % 5, 'n');
    notes_bytes += notes.size() + 1;  // value and its delimiter
    csv += std::to_string(rows) + "," + std::string(30 + rng() % 20, 'p') + "," + notes + "\n";
  }
  notes_bytes += std::string("notes").size() + 1;
  const auto path = dir.Write("d.csv", csv);
  ReductionPlan plan;
  plan.key_field = "k";
  plan.actions.push_back({.kind = ActionKind::kDrop, .field = "notes", .estimated_bytes_saved = 0});
  VectorSink sink;
  const auto r = ApplyPlan(path, plan, dir.File("out"), false, sink);
  CHECK(r.measured_saved() == static_cast<int64_t>(notes_bytes));
  CHECK(r.actions[0].measured_bytes_saved == static_cast<int64_t>(notes_bytes));
  const double share = static_cast<double>(notes_bytes) / static_cast<double>(csv.size());
  CHECK(static_cast<double>(r.measured_saved()) / static_cast<double>(r.input_bytes) == doctest::Approx(share));
}

TEST_CASE("apply_plan estimates and measurements agree; encode never grows the file") {
  TempDir dir;
  const auto path = dir.Write("sr.csv", ServiceRequests(10000, 4));
  auto a = Analyze(path, {{"borough", "park_borough", false}});
  VectorSink sink;
  const auto plan = BuildPlan(a->Inputs(), {}, sink);
  const auto r = ApplyPlan(path, plan, dir.File("out"), false, sink);
  for (const auto& m : r.actions) {
    if (m.kind == ActionKind::kEncode) {
      CHECK(m.measured_bytes_saved >= static_cast<int64_t>(m.estimated_bytes_saved));
      CHECK(m.measured_bytes_saved >= 0);
    } else {
      CHECK(m.measured_bytes_saved == static_cast<int64_t>(m.estimated_bytes_saved));
    }
  }
  int64_t sum = 0;
  for (const auto& m : r.actions) sum += m.measured_bytes_saved;
  CHECK(sum == r.measured_saved());
  CHECK(std::filesystem::exists(dir.File("out/agency_name.mapping.csv")));
  CHECK(ReadFile(dir.File("out/agency_name.mapping.csv")).rfind("agency,agency_name\n", 0) == 0);

  // Byte-deterministic output.
  const auto again = ApplyPlan(path, plan, dir.File("out2"), false, sink);
  CHECK(ReadFile(again.main_path) == ReadFile(r.main_path));
  CHECK(ReadFile(dir.File("out2/complaint_type.dict.csv")) == ReadFile(dir.File("out/complaint_type.dict.csv")));
}

TEST_CASE("segregate and encode are lossless: reconstruction from main and sidecars") {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 8; ++trial) {
    TempDir dir;
    const int rows = 1 + static_cast<int>(rng() % 10000);
    std::string csv = "unique_key,kind,sparse,text\n";
    for (int i = 0; i < rows; ++i) {
      std::string kind = rng() % 9 ? "kind, number " + std::to_string(rng() % 40) : (rng() % 2 ? "" : "N/A");
      if (rng() % 50 == 0) kind = "quote \"" + std::to_string(rng() % 3) + "\"";
      std::string sparse = rng() % 200 == 0 ? "rare value " + std::to_string(rng() % 5) : "";
      auto q = [](const std::string& s) {
        if (s.find_first_of(",\"") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
        return out + "\"";
      };
      csv += "k" + std::to_string(i) + "," + q(kind) + "," + q(sparse) + ",free " + std::to_string(rng()) + "\n";
    }
    const auto path = dir.Write("in.csv", csv);
    ReductionPlan plan;
    plan.key_field = "unique_key";
    plan.actions.push_back({.kind = ActionKind::kSegregate, .field = "sparse"});
    plan.actions.push_back({.kind = ActionKind::kEncode, .field = "kind"});
    VectorSink sink;
    const auto r = ApplyPlan(path, plan, dir.File("out"), false, sink);

    // Independent reconstruction: join sidecar on key, decode via dictionary.
    std::map<std::string, std::string> dict;
    for (const auto& row : ReadCsv(dir.File("out/kind.dict.csv"))) dict[row[0]] = row[1];
    std::map<std::string, std::string> sparse;
    for (const auto& row : ReadCsv(dir.File("out/sparse.sidecar.csv"))) sparse[row[0]] = row[1];
    const auto main = ReadCsv(r.main_path);
    const auto original = ReadCsv(path);
    REQUIRE(main.size() == original.size());
    CHECK(main[0] == std::vector<std::string>{"unique_key", "kind", "text"});
    for (size_t i = 1; i < original.size(); ++i) {
      const auto& o = original[i];
      const auto& m = main[i];
      CHECK(m[0] == o[0]);
      CHECK(m[2] == o[3]);
      const std::string kind = m[1].empty() ? "" : dict.at(m[1]);
      CHECK(kind == (ingest::ClassifyMissing(o[1]) == ingest::MissingSentinel::kNone ? o[1] : ""));
      const auto it = sparse.find(o[0]);
      CHECK((it == sparse.end() ? "" : it->second) == o[2]);
    }
  }
}
