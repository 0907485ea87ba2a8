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

#ifndef DPRL_CSV_HPP_
#define DPRL_CSV_HPP_

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace dprl {

/// Emitted CSV files start with "# dprl kind=<kind> schema=1" so downstream
/// consumers can pin the column layout. Number formatting is fixed, so a
/// deterministic computation yields byte-identical files.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::string_view kind);
  ~CsvWriter();

  void header(std::initializer_list<std::string_view> names);
  void header(const std::vector<std::string>& names);
  void row(std::initializer_list<std::string> cells);
  void row(const std::vector<std::string>& cells);

  static std::string num(double v);
  static std::string num(std::size_t v);

 private:
  std::ofstream out_;
  std::string path_;
};

struct CsvTable {
  std::string kind;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws ParseError
};

CsvTable read_csv(const std::filesystem::path& path);

constexpr int kCsvSchemaVersion = 1;

}  // namespace dprl

#endif  // DPRL_CSV_HPP_
