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
#include <cstdio>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odqa/core/digest.h"
#include "odqa/core/finding.h"
#include "odqa/ingest/cell.h"

namespace odqa::ingest {

struct IngestOptions {
  char delimiter = ',';
  size_t buffer_bytes = size_t{1} << 20;
  /// Records larger than this are reported as malformed and skipped, which
  /// bounds reader memory on files with a runaway quote.
  size_t max_row_bytes = size_t{64} << 20;
  MissingClassifier classifier;
  /// Normalized name of the key column used for row locators; optional.
  std::string key_field = "unique_key";
};

/// RFC 4180 record reader over a file: comma (configurable) delimiter,
/// double-quote quoting with "" escapes, LF or CRLF line ends, optional UTF-8
/// BOM. Holds one buffer of at least `buffer_bytes`, grown only to fit a
/// single oversized record.
class CsvRecordReader {
 public:
  enum class Status { kRecord, kMalformed, kEof };

  struct Record {
    std::vector<std::string_view> fields;  // unescaped; valid until next call
    std::vector<uint32_t> disk_bytes;      // per field, quotes included
    uint64_t byte_offset = 0;              // of the record's first byte
    std::string error;                     // set when kMalformed
  };

  CsvRecordReader(const std::string& path, const IngestOptions& options);
  ~CsvRecordReader();
  CsvRecordReader(const CsvRecordReader&) = delete;
  CsvRecordReader& operator=(const CsvRecordReader&) = delete;

  Status Next(Record& record);

  uint64_t bytes_read() const { return bytes_read_; }
  /// Hex SHA-256 of every byte read so far; complete once Next returned kEof.
  std::string ContentDigest();

 private:
  enum class Parse { kDone, kNeedMore, kError };
  struct FieldRef {
    bool in_scratch;
    size_t offset;
    size_t length;
    uint32_t disk;
  };

  Parse TryParse(Record& record, bool at_eof);
  bool Refill();
  void SkipLine(size_t from);

  std::FILE* file_ = nullptr;
  char delim_;
  size_t max_row_bytes_;
  std::vector<char> buf_;
  size_t pos_ = 0;
  size_t end_ = 0;
  uint64_t buf_file_offset_ = 0;
  uint64_t bytes_read_ = 0;
  bool eof_ = false;
  bool bom_checked_ = false;
  std::string scratch_;
  std::vector<FieldRef> refs_;
  std::string error_;
  size_t error_pos_ = 0;
  std::unique_ptr<Sha256> digest_;
};

struct RawTable {
  std::string source;
  std::vector<std::string> headers_raw;
  std::vector<std::string> headers_norm;
  uint64_t row_count = 0;  // data records, including ragged and malformed ones
  uint64_t rows_delivered = 0;
  uint64_t ragged_rows = 0;
  uint64_t malformed_rows = 0;
  uint64_t byte_size = 0;
  std::string content_sha256;
  int key_index = -1;

  /// -1 when absent.
  int FieldIndex(std::string_view name) const;
};

struct Row {
  uint64_t ordinal = 0;  // 1-based record number after the header
  uint64_t byte_offset = 0;
  std::span<const CellValue> cells;

  std::string_view key(const RawTable& table) const {
    return table.key_index >= 0 ? cells[static_cast<size_t>(table.key_index)].raw : std::string_view{};
  }
};

class RowConsumer {
 public:
  virtual ~RowConsumer() = default;
  virtual void Begin(const RawTable& /*table*/) {}
  virtual void Consume(const Row& row) = 0;
  virtual void Finish(const RawTable& /*table*/, FindingSink& /*sink*/) {}
};

/// Opens a file, reads and normalizes the header, then yields well-formed
/// rows. Ragged and malformed records produce Findings and are skipped.
class TableReader {
 public:
  TableReader(const std::string& path, IngestOptions options, FindingSink& sink);

  bool NextRow(Row& row);
  RawTable& table() { return table_; }
  const IngestOptions& options() const { return options_; }

 private:
  IngestOptions options_;
  FindingSink& sink_;
  CsvRecordReader reader_;
  RawTable table_;
  CsvRecordReader::Record record_;
  std::vector<CellValue> cells_;
  bool finished_ = false;
};

/// Single pass over `path`, delivering every well-formed row to each consumer
/// in file order. Returns the completed RawTable (row_count, byte_size and
/// digest filled in).
RawTable StreamRows(const std::string& path, std::span<RowConsumer* const> consumers, FindingSink& sink,
                    const IngestOptions& options);

bool NeedsQuoting(std::string_view value, char delim = ',');
void AppendCsvField(std::string& out, std::string_view value, char delim = ',');

/// Buffered RFC 4180 writer with minimal quoting and LF line ends.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path, char delim = ',');
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void WriteRow(std::span<const std::string_view> fields);
  void WriteRow(std::initializer_list<std::string_view> fields) {
    WriteRow(std::span<const std::string_view>(fields.begin(), fields.size()));
  }
  void Close();
  uint64_t bytes_written() const { return bytes_written_; }

 private:
  void Flush();

  std::string path_;
  std::FILE* file_ = nullptr;
  char delim_;
  std::string buf_;
  uint64_t bytes_written_ = 0;
};

}  // namespace odqa::ingest
