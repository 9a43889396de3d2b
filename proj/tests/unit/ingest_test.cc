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

#include <random>
#include <string>
#include <vector>

#include "../support/temp_dir.h"
#include "doctest.h"
#include "odqa/core/error.h"
#include "odqa/ingest/csv.h"
#include "odqa/ingest/header.h"
#include "odqa/ingest/timestamp.h"

using namespace odqa;
using namespace odqa::ingest;
using odqa::testing::TempDir;

TEST_CASE("normalize_header") {
  CHECK(NormalizeHeader("Complaint Type", 0) == "complaint_type");
  CHECK(NormalizeHeader("unique_key", 0) == "unique_key");
  CHECK(NormalizeHeader("Cross Street 1", 0) == "cross_street_1");
  CHECK(NormalizeHeader("  Park  Borough\t", 0) == "park_borough");
  CHECK(NormalizeHeader("Location (Lat/Long)", 0) == "location__lat_long");
  CHECK(NormalizeHeader("@computed_region_zip_codes", 0) == "@computed_region_zip_codes");
  CHECK_THROWS_WITH_AS(NormalizeHeader("   ", 4), doctest::Contains("unnamed column at index 4"), Error);
}

TEST_CASE("header collisions get numeric suffixes and a finding") {
  VectorSink sink;
  const auto names = NormalizeHeaders({"Borough", "borough", "BOROUGH", "borough_2"}, sink);
  CHECK(names == std::vector<std::string>{"borough", "borough_2", "borough_3", "borough_2_2"});
  CHECK(sink.Count(RuleId::kHeaderCollision) == 3);
}

TEST_CASE("classify_missing") {
  CHECK(ClassifyMissing("N/A") == MissingSentinel::kNSlashA);
  CHECK(ClassifyMissing("n/a") == MissingSentinel::kNSlashA);
  CHECK(ClassifyMissing("") == MissingSentinel::kEmpty);
  CHECK(ClassifyMissing("   ") == MissingSentinel::kWhitespace);
  CHECK(ClassifyMissing("NA") == MissingSentinel::kNA);
  CHECK(ClassifyMissing(" na ") == MissingSentinel::kNA);
  CHECK(ClassifyMissing("<NA>") == MissingSentinel::kAngleNA);
  CHECK(ClassifyMissing("NULL") == MissingSentinel::kNullLiteral);
  CHECK(ClassifyMissing("Noise - Residential") == MissingSentinel::kNone);
  CHECK(ClassifyMissing("NAN") == MissingSentinel::kNone);

  MissingClassifier custom({"Unspecified", " - "});
  CHECK(custom.Classify("unspecified") == MissingSentinel::kCustom);
  CHECK(custom.Classify("-") == MissingSentinel::kCustom);
  CHECK(custom.Classify("N/A") == MissingSentinel::kNSlashA);
  CHECK(custom.Classify("Unspecified Borough") == MissingSentinel::kNone);
}

TEST_CASE("classify_missing round trip: kind=missing iff sentinel != none") {
  std::mt19937_64 rng(7);
  const std::string alphabet = " \tNnAa/<>uUlL-x1";
  std::uniform_int_distribution<size_t> len(0, 8), pick(0, alphabet.size() - 1);
  for (int i = 0; i < 20000; ++i) {
    std::string s(len(rng), ' ');
    for (auto& c : s) c = alphabet[pick(rng)];
    CellValue cell{s, ClassifyMissing(s), 0};
    CHECK(cell.present() == (ClassifyMissing(s) == MissingSentinel::kNone));
    // Independent restatement of the rule.
    std::string t(Trim(s));
    for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const bool expect_missing = t.empty() || t == "na" || t == "n/a" || t == "<na>" || t == "null";
    CHECK(cell.missing() == expect_missing);
  }
}

TEST_CASE("parse_timestamp: zone status against tz database values") {
  const auto parser = TimestampParser::Default();

  auto winter = parser.Parse("2023-01-27 14:40:00");
  REQUIRE(winter);
  CHECK(winter->zone_status == ZoneStatus::kUnambiguous);
  REQUIRE(winter->candidate_count == 1);
  CHECK(winter->candidates[0] == 1674848400);  // tzdata

  auto gap = parser.Parse("2022-03-13 02:30:00");
  REQUIRE(gap);
  CHECK(gap->zone_status == ZoneStatus::kDstGapInvalid);
  CHECK(gap->utc_candidates().empty());

  auto fold = parser.Parse("2022-11-06 01:30:00");
  REQUIRE(fold);
  CHECK(fold->zone_status == ZoneStatus::kDstFoldAmbiguous);
  REQUIRE(fold->candidate_count == 2);
  CHECK(fold->candidates[0] == 1667712600);  // EDT, tzdata fold=0
  CHECK(fold->candidates[1] == 1667716200);  // EST, tzdata fold=1
  CHECK(fold->candidates[1] - fold->candidates[0] == 3600);

  auto portal = parser.Parse("01/27/2023 02:40:00 PM");
  REQUIRE(portal);
  CHECK(portal->candidates[0] == 1674848400);
  auto midnight = parser.Parse("05/01/2022 12:00:00 AM");
  REQUIRE(midnight);
  CHECK(midnight->local.seconds_of_day == 0);

  auto date_only = parser.Parse("1900-01-01");
  REQUIRE(date_only);
  CHECK(FormatIso(date_only->local) == "1900-01-01 00:00:00");

  CHECK_FALSE(parser.Parse("2022-02-30 10:00:00"));
  CHECK_FALSE(parser.Parse("13/01/2022 10:00:00 AM"));
  CHECK_FALSE(parser.Parse("yesterday"));
  CHECK_FALSE(parser.Parse("2022-01-01 24:00:00"));
}

TEST_CASE("built-in New York table equals the tz database, 1990-2040") {
  // 102 transitions; first, last and sum frozen from Python zoneinfo.
  const auto zone = ZoneRules::AmericaNewYork(1990, 2040);
  const auto& t = zone.transitions();
  REQUIRE(t.size() == 102);
  CHECK(t.front().utc == 638953200);
  CHECK(t.back().utc == 2235621600);
  int64_t sum = 0;
  for (const auto& x : t) sum += x.utc;
  CHECK(sum == 146534972400);
}

TEST_CASE("explicit zone transitions are validated") {
  CHECK_THROWS_AS(ZoneRules(-18000, {{100, -18000, -14400}, {50, -14400, -18000}}), Error);
  CHECK_THROWS_AS(ZoneRules(-18000, {{100, -14400, -18000}}), Error);
  ZoneRules custom(0, {{1000, 0, 3600}});
  CHECK(custom.Resolve(1000 + 1800).count == 0);  // gap [1000, 4600) local
  CHECK(custom.Resolve(500).count == 1);
}

TEST_CASE("timestamp print/parse round trip for unambiguous instants") {
  const auto parser = TimestampParser::Default();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int64_t> days(0, 365 * 60), secs(0, 86399);
  int checked = 0;
  for (int i = 0; i < 20000; ++i) {
    const LocalDateTime t{days(rng), static_cast<int32_t>(secs(rng))};
    const auto ts = parser.Resolve(t);
    if (ts.zone_status != ZoneStatus::kUnambiguous) continue;
    for (const auto& f : parser.formats()) {
      if (f.pattern().find("ss") == std::string::npos) continue;
      const auto back = parser.Parse(f.Print(t));
      REQUIRE(back);
      CHECK(back->candidates[0] == ts.candidates[0]);
    }
    ++checked;
  }
  CHECK(checked > 19000);
}

namespace {

struct Collected {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::vector<uint32_t>> disk;
};

class Collect : public RowConsumer {
 public:
  explicit Collect(Collected& out) : out_(out) {}
  void Consume(const Row& row) override {
    std::vector<std::string> cells;
    std::vector<uint32_t> disk;
    for (const auto& c : row.cells) {
      cells.emplace_back(c.raw);
      disk.push_back(c.disk_bytes);
    }
    out_.rows.push_back(std::move(cells));
    out_.disk.push_back(std::move(disk));
  }

 private:
  Collected& out_;
};

RawTable Run(const std::string& path, Collected& out, VectorSink& sink, size_t buffer = 1 << 20) {
  Collect c(out);
  RowConsumer* consumers[] = {&c};
  IngestOptions opt;
  opt.buffer_bytes = buffer;
  return StreamRows(path, consumers, sink, opt);
}

}  // namespace

TEST_CASE("stream_rows: clean three-row file") {
  TempDir dir;
  const auto p = dir.Write("a.csv", "Unique Key,Complaint Type\n1,Noise\n2,Heat\n3,Rodent\n");
  Collected out;
  VectorSink sink;
  const auto table = Run(p, out, sink);
  CHECK(out.rows.size() == 3);
  CHECK(sink.findings().empty());
  CHECK(table.row_count == 3);
  CHECK(table.byte_size == 50);
  CHECK(table.headers_norm == std::vector<std::string>{"unique_key", "complaint_type"});
  CHECK(table.content_sha256.size() == 64);
}

TEST_CASE("stream_rows: quoted comma, newline and doubled quotes stay intact") {
  TempDir dir;
  const auto p = dir.Write("q.csv",
                           "\xEF\xBB\xBFid,desc,x\r\n"
                           "1,\"Officers responded, and\nleft \"\"quietly\"\"\",z\r\n"
                           "2,plain,\"\"\r\n");
  Collected out;
  VectorSink sink;
  const auto table = Run(p, out, sink);
  REQUIRE(out.rows.size() == 2);
  CHECK(table.headers_norm[0] == "id");
  CHECK(out.rows[0][1] == "Officers responded, and\nleft \"quietly\"");
  CHECK(out.disk[0][1] == 42);
  CHECK(out.rows[1][2] == "");
  CHECK(out.disk[1][2] == 2);
  CHECK(sink.findings().empty());
}

TEST_CASE("stream_rows: ragged row is reported and excluded") {
  TempDir dir;
  std::string header, full, short_row;
  for (int i = 0; i < 41; ++i) {
    header += (i ? "," : "") + std::string("c") + std::to_string(i);
    full += (i ? "," : "") + std::to_string(i);
    if (i < 40) short_row += (i ? "," : "") + std::to_string(i);
  }
  const auto p = dir.Write("r.csv", header + "\n" + full + "\n" + short_row + "\n" + full + "\n");
  Collected out;
  VectorSink sink;
  const auto table = Run(p, out, sink);
  CHECK(out.rows.size() == 2);
  CHECK(sink.Count(RuleId::kRaggedRow) == 1);
  CHECK(table.ragged_rows == 1);
  CHECK(table.row_count == 3);
  CHECK(sink.findings()[0].first_row() == 2u);
}

TEST_CASE("stream_rows: malformed quoting skips the row with a byte offset") {
  TempDir dir;
  const auto p = dir.Write("m.csv", "a,b\n1,x\"y\n2,\"ok\"junk\n3,fine\n4,\"never closed\n");
  Collected out;
  VectorSink sink;
  const auto table = Run(p, out, sink);
  REQUIRE(out.rows.size() == 1);
  CHECK(out.rows[0][0] == "3");
  CHECK(sink.Count(RuleId::kMalformedQuote) == 3);
  CHECK(table.malformed_rows == 3);
  CHECK(sink.findings()[0].message().find("at byte 7") != std::string::npos);
}

TEST_CASE("stream_rows: unreadable file is a fatal io error") {
  Collected out;
  VectorSink sink;
  CHECK_THROWS_AS(Run("/nonexistent/file.csv", out, sink), Error);
}

namespace {

// Independent reference: character-at-a-time RFC 4180 state machine.
std::vector<std::vector<std::string>> NaiveParse(const std::string& s) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < s.size() && s[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') ++i;
      row.push_back(field);
      rows.push_back(row);
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (any) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

std::string RandomCell(std::mt19937_64& rng) {
  static const std::string alphabet = "ab ,\"\n\r0x";
  std::uniform_int_distribution<int> len(0, 12);
  std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
  std::string s(static_cast<size_t>(len(rng)), 'a');
  for (auto& c : s) c = alphabet[pick(rng)];
  return s;
}

}  // namespace

TEST_CASE("stream_rows matches a naive parser at every buffer size; lossless re-quoting") {
  TempDir dir;
  std::mt19937_64 rng(99);
  for (int file = 0; file < 25; ++file) {
    std::string content = "h1,h2,h3\n";
    std::vector<std::vector<std::string>> expected;
    uint64_t crlf = 0;
    for (int r = 0; r < 60; ++r) {
      std::vector<std::string> row;
      std::string line;
      for (int c = 0; c < 3; ++c) {
        row.push_back(RandomCell(rng));
        if (c) line += ',';
        AppendCsvField(line, row.back());
      }
      if (line.empty()) continue;  // a lone empty cell would be a blank line
      content += line + ((r % 3 == 0) ? "\r\n" : "\n");
      crlf += (r % 3 == 0);
      expected.push_back(row);
    }
    const auto p = dir.Write("f" + std::to_string(file) + ".csv", content);
    auto naive = NaiveParse(content);
    naive.erase(naive.begin());
    REQUIRE(naive == expected);

    for (size_t buffer : {64u, 97u, 1000u, 1u << 20}) {
      Collected out;
      VectorSink sink;
      const auto table = Run(p, out, sink, buffer);
      REQUIRE(sink.findings().empty());
      REQUIRE(out.rows == expected);

      // Re-quoting reproduces the byte count up to CRLF normalization.
      uint64_t bytes = std::string("h1,h2,h3\n").size();
      for (const auto& row : out.rows) {
        std::string line;
        for (size_t c = 0; c < row.size(); ++c) {
          if (c) line += ',';
          AppendCsvField(line, row[c]);
        }
        bytes += line.size() + 1;
      }
      CHECK(bytes + crlf == table.byte_size);
    }
  }
}

TEST_CASE("oversized record is reported and the reader recovers") {
  TempDir dir;
  std::string big(5000, 'x');
  const auto p = dir.Write("big.csv", "a,b\n1,\"" + big + "\"\n2,ok\n");
  Collected out;
  VectorSink sink;
  Collect c(out);
  RowConsumer* consumers[] = {&c};
  IngestOptions opt;
  opt.buffer_bytes = 64;
  opt.max_row_bytes = 1024;
  StreamRows(p, consumers, sink, opt);
  CHECK(sink.Count(RuleId::kMalformedQuote) == 1);
  REQUIRE(out.rows.size() == 1);
  CHECK(out.rows[0][1] == "ok");
}
