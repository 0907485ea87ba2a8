// Copyright 2026 The dprl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dprl/csv.hpp"

#include <cstdio>

#include "dprl/errors.hpp"

namespace dprl {

CsvWriter::CsvWriter(const std::filesystem::path& path, std::string_view kind)
    : out_(path), path_(path.string()) {
  if (!out_) {
    throw IoError("cannot write " + path_);
  }
  out_ << "# dprl kind=" << kind << " schema=" << kCsvSchemaVersion << "\n";
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::header(std::initializer_list<std::string_view> names) {
  bool first = true;
  for (std::string_view name : names) {
    if (!first) {
      out_ << ',';
    }
    out_ << name;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::header(const std::vector<std::string>& names) {
  bool first = true;
  for (const std::string& name : names) {
    if (!first) {
      out_ << ',';
    }
    out_ << name;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<std::string> cells) {
  row(std::vector<std::string>(cells));
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  bool first = true;
  for (const std::string& cell : cells) {
    if (!first) {
      out_ << ',';
    }
    out_ << cell;
    first = false;
  }
  out_ << '\n';
  if (!out_) {
    throw IoError("write failed: " + path_);
  }
}

std::string CsvWriter::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string CsvWriter::num(std::size_t v) {
  return std::to_string(v);
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) {
      return i;
    }
  }
  throw ParseError("csv: no column named " + std::string(name));
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  CsvTable table;
  std::string line;
  bool header_seen = false;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = s.find(',', start);
      if (comma == std::string::npos) {
        cells.push_back(s.substr(start));
        return cells;
      }
      cells.push_back(s.substr(start, comma - start));
      start = comma + 1;
    }
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (line[0] == '#') {
      const std::size_t kind_pos = line.find("kind=");
      if (kind_pos != std::string::npos) {
        const std::size_t end = line.find(' ', kind_pos);
        table.kind = line.substr(kind_pos + 5, end == std::string::npos
                                                    ? std::string::npos
                                                    : end - kind_pos - 5);
      }
      continue;
    }
    if (!header_seen) {
      table.header = split(line);
      header_seen = true;
    } else {
      table.rows.push_back(split(line));
    }
  }
  return table;
}

}  // namespace dprl
