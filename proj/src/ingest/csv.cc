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

#include "odqa/ingest/csv.h"

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "odqa/core/digest.h"
#include "odqa/core/error.h"
#include "odqa/ingest/header.h"
#include "odqa/simd/scan.h"

namespace odqa::ingest {

CsvRecordReader::CsvRecordReader(const std::string& path, const IngestOptions& options)
    : delim_(options.delimiter),
      max_row_bytes_(std::max(options.max_row_bytes, size_t{64})),
      buf_(std::max(options.buffer_bytes, size_t{64})),
      digest_(std::make_unique<Sha256>()) {
  file_ = std::fopen(path.c_str(), "rb");
  if (file_ == nullptr) ThrowIo("cannot open '" + path + "': " + std::strerror(errno));
}

CsvRecordReader::~CsvRecordReader() {
  if (file_ != nullptr) std::fclose(file_);
}

std::string CsvRecordReader::ContentDigest() { return eof_ ? digest_->HexDigest() : std::string(); }

bool CsvRecordReader::Refill() {
  if (eof_) return false;
  if (pos_ > 0) {
    std::memmove(buf_.data(), buf_.data() + pos_, end_ - pos_);
    buf_file_offset_ += pos_;
    end_ -= pos_;
    error_pos_ = error_pos_ >= pos_ ? error_pos_ - pos_ : 0;
    pos_ = 0;
  }
  if (end_ == buf_.size()) {
    if (buf_.size() >= max_row_bytes_) return false;
    buf_.resize(std::min(buf_.size() * 2, max_row_bytes_));
  }
  const size_t n = std::fread(buf_.data() + end_, 1, buf_.size() - end_, file_);
  if (n == 0) {
    if (std::ferror(file_)) ThrowIo("read failed");
    eof_ = true;
    return true;
  }
  digest_->Update(buf_.data() + end_, n);
  bytes_read_ += n;
  if (!bom_checked_ && end_ + n >= 3) {
    bom_checked_ = true;
    if (buf_file_offset_ == 0 && pos_ == 0 && std::memcmp(buf_.data(), "\xEF\xBB\xBF", 3) == 0) pos_ = 3;
  }
  end_ += n;
  return true;
}

void CsvRecordReader::SkipLine(size_t from) {
  pos_ = std::max(pos_, from);
  for (;;) {
    const auto& k = simd::Active();
    const size_t i = k.find_byte(buf_.data() + pos_, end_ - pos_, '\n');
    if (pos_ + i < end_) {
      pos_ += i + 1;
      return;
    }
    pos_ = end_;
    if (!Refill() || (eof_ && pos_ == end_)) return;
  }
}

CsvRecordReader::Parse CsvRecordReader::TryParse(Record& record, bool at_eof) {
  const auto& kern = simd::Active();
  const char* b = buf_.data();
  refs_.clear();
  scratch_.clear();
  size_t p = pos_;
  auto fail = [&](size_t where, std::string msg) {
    error_ = std::move(msg);
    error_pos_ = where;
    return Parse::kError;
  };
  for (;;) {
    if (p < end_ && b[p] == '"') {
      size_t seg = p + 1;
      size_t q = p + 1;
      bool escaped = false;
      size_t scratch_off = 0;
      size_t close;
      for (;;) {
        const size_t k = kern.find_byte(b + q, end_ - q, '"');
        close = q + k;
        if (close == end_) {
          if (at_eof) return fail(p, "unterminated quoted field");
          return Parse::kNeedMore;
        }
        if (close + 1 == end_ && !at_eof) return Parse::kNeedMore;
        if (close + 1 < end_ && b[close + 1] == '"') {
          if (!escaped) {
            escaped = true;
            scratch_off = scratch_.size();
          }
          scratch_.append(b + seg, close + 1 - seg);
          seg = close + 2;
          q = close + 2;
          continue;
        }
        break;
      }
      FieldRef ref;
      if (escaped) {
        scratch_.append(b + seg, close - seg);
        ref = {true, scratch_off, scratch_.size() - scratch_off, 0};
      } else {
        ref = {false, p + 1, close - (p + 1), 0};
      }
      const size_t after = close + 1;
      ref.disk = static_cast<uint32_t>(after - p);
      refs_.push_back(ref);
      if (after == end_) {
        pos_ = end_;
        break;
      }
      const char c = b[after];
      if (c == delim_) {
        p = after + 1;
        continue;
      }
      if (c == '\n') {
        pos_ = after + 1;
        break;
      }
      if (c == '\r') {
        if (after + 1 == end_ && !at_eof) return Parse::kNeedMore;
        pos_ = (after + 1 < end_ && b[after + 1] == '\n') ? after + 2 : after + 1;
        break;
      }
      return fail(after, "unexpected character after closing quote");
    }

    const size_t k = kern.find_structural(b + p, end_ - p, delim_);
    const size_t e = p + k;
    if (e == end_) {
      if (!at_eof) return Parse::kNeedMore;
      refs_.push_back({false, p, e - p, static_cast<uint32_t>(e - p)});
      pos_ = end_;
      break;
    }
    const char c = b[e];
    if (c == '"') return fail(e, "quote inside unquoted field");
    refs_.push_back({false, p, e - p, static_cast<uint32_t>(e - p)});
    if (c == delim_) {
      p = e + 1;
      continue;
    }
    if (c == '\n') {
      pos_ = e + 1;
      break;
    }
    if (e + 1 == end_ && !at_eof) return Parse::kNeedMore;
    pos_ = (e + 1 < end_ && b[e + 1] == '\n') ? e + 2 : e + 1;
    break;
  }

  record.fields.clear();
  record.disk_bytes.clear();
  for (const auto& r : refs_) {
    record.fields.emplace_back(r.in_scratch ? scratch_.data() + r.offset : b + r.offset, r.length);
    record.disk_bytes.push_back(r.disk);
  }
  return Parse::kDone;
}

CsvRecordReader::Status CsvRecordReader::Next(Record& record) {
  if (!bom_checked_ && end_ == 0) Refill();
  for (;;) {
    if (pos_ == end_) {
      if (eof_) return Status::kEof;
      Refill();
      continue;
    }
    const size_t start = pos_;
    record.byte_offset = buf_file_offset_ + start;
    const Parse r = TryParse(record, eof_);
    if (r == Parse::kDone) return Status::kRecord;
    if (r == Parse::kError) {
      record.error = error_ + " at byte " + std::to_string(buf_file_offset_ + error_pos_);
      SkipLine(error_pos_);
      return Status::kMalformed;
    }
    const uint64_t record_offset = record.byte_offset;
    if (!Refill()) {
      // Buffer is at max_row_bytes and still holds a partial record.
      record.byte_offset = record_offset;
      record.error = "record exceeds " + std::to_string(max_row_bytes_) + " bytes at byte " +
                     std::to_string(record_offset);
      SkipLine(pos_);
      return Status::kMalformed;
    }
  }
}

// ------------------------------------------------------------- RawTable

int RawTable::FieldIndex(std::string_view name) const {
  for (size_t i = 0; i < headers_norm.size(); ++i) {
    if (headers_norm[i] == name) return static_cast<int>(i);
  }
  return -1;
}

// ------------------------------------------------------------- TableReader

TableReader::TableReader(const std::string& path, IngestOptions options, FindingSink& sink)
    : options_(std::move(options)), sink_(sink), reader_(path, options_) {
  table_.source = path;
  const auto status = reader_.Next(record_);
  if (status == CsvRecordReader::Status::kEof) ThrowStructural("'" + path + "': header row missing");
  if (status == CsvRecordReader::Status::kMalformed) ThrowStructural("'" + path + "': malformed header: " + record_.error);
  for (auto f : record_.fields) table_.headers_raw.emplace_back(f);
  table_.headers_norm = NormalizeHeaders(table_.headers_raw, sink_);
  table_.key_index = options_.key_field.empty() ? -1 : table_.FieldIndex(options_.key_field);
  cells_.resize(table_.headers_norm.size());
}

bool TableReader::NextRow(Row& row) {
  const size_t width = table_.headers_norm.size();
  for (;;) {
    const auto status = reader_.Next(record_);
    if (status == CsvRecordReader::Status::kEof) {
      if (!finished_) {
        finished_ = true;
        table_.byte_size = reader_.bytes_read();
        table_.content_sha256 = reader_.ContentDigest();
      }
      return false;
    }
    if (status == CsvRecordReader::Status::kMalformed) {
      ++table_.row_count;
      ++table_.malformed_rows;
      sink_.Emit(Finding::Make(RuleId::kMalformedQuote, record_.error)
                     .At(table_.row_count)
                     .Measured(static_cast<double>(record_.byte_offset), "byte_offset"));
      continue;
    }
    // Blank lines carry no data.
    if (width > 1 && record_.fields.size() == 1 && record_.disk_bytes[0] == 0) continue;
    ++table_.row_count;
    if (record_.fields.size() != width) {
      ++table_.ragged_rows;
      sink_.Emit(Finding::Make(RuleId::kRaggedRow, "ragged row: " + std::to_string(record_.fields.size()) +
                                                       " cells under a " + std::to_string(width) +
                                                       "-column header at byte " +
                                                       std::to_string(record_.byte_offset))
                     .At(table_.row_count)
                     .Measured(static_cast<double>(record_.fields.size()), "cells"));
      continue;
    }
    const auto& classifier = options_.classifier;
    for (size_t i = 0; i < width; ++i) {
      cells_[i].raw = record_.fields[i];
      cells_[i].disk_bytes = record_.disk_bytes[i];
      cells_[i].sentinel = classifier.Classify(record_.fields[i]);
    }
    ++table_.rows_delivered;
    row.ordinal = table_.row_count;
    row.byte_offset = record_.byte_offset;
    row.cells = cells_;
    return true;
  }
}

RawTable StreamRows(const std::string& path, std::span<RowConsumer* const> consumers, FindingSink& sink,
                    const IngestOptions& options) {
  TableReader reader(path, options, sink);
  for (auto* c : consumers) c->Begin(reader.table());
  Row row;
  while (reader.NextRow(row)) {
    for (auto* c : consumers) c->Consume(row);
  }
  for (auto* c : consumers) c->Finish(reader.table(), sink);
  return reader.table();
}

// ------------------------------------------------------------- writer

bool NeedsQuoting(std::string_view value, char delim) {
  for (char c : value) {
    if (c == delim || c == '"' || c == '\n' || c == '\r') return true;
  }
  return false;
}

void AppendCsvField(std::string& out, std::string_view value, char delim) {
  if (!NeedsQuoting(value, delim)) {
    out.append(value);
    return;
  }
  out.push_back('"');
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

CsvWriter::CsvWriter(const std::string& path, char delim) : path_(path), delim_(delim) {
  file_ = std::fopen(path.c_str(), "wb");
  if (file_ == nullptr) ThrowIo("cannot write '" + path + "': " + std::strerror(errno));
  buf_.reserve(size_t{1} << 20);
}

CsvWriter::~CsvWriter() {
  if (file_ != nullptr) {
    try {
      Close();
    } catch (...) {
    }
  }
}

void CsvWriter::WriteRow(std::span<const std::string_view> fields) {
  // A lone empty field would read back as a blank line, which is skipped.
  if (fields.size() == 1 && fields[0].empty()) buf_.append("\"\"");
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) buf_.push_back(delim_);
    AppendCsvField(buf_, fields[i], delim_);
  }
  buf_.push_back('\n');
  if (buf_.size() >= (size_t{1} << 20)) Flush();
}

void CsvWriter::Flush() {
  if (buf_.empty()) return;
  if (std::fwrite(buf_.data(), 1, buf_.size(), file_) != buf_.size()) ThrowIo("write failed: '" + path_ + "'");
  bytes_written_ += buf_.size();
  buf_.clear();
}

void CsvWriter::Close() {
  if (file_ == nullptr) return;
  Flush();
  std::FILE* f = file_;
  file_ = nullptr;
  if (std::fclose(f) != 0) ThrowIo("close failed: '" + path_ + "'");
}

}  // namespace odqa::ingest
