// Copyright 2026 The RiskCast Authors
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

#ifndef RISKCAST_CSV_H_
#define RISKCAST_CSV_H_

// Minimal RFC-4180 reader/writer: comma separated, double-quote quoting with
// "" escapes, quoted fields may span lines. CRLF and LF both accepted.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace riskcast {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based line where each row starts

  // Index of `name` in the header; throws SchemaError naming the column and
  // `source` when absent.
  std::size_t RequireColumn(std::string_view name, std::string_view source) const;
};

CsvTable ReadCsv(std::istream& in, std::string_view source = "<stream>");
CsvTable ReadCsvFile(const std::filesystem::path& path);

std::string CsvEscape(std::string_view field);
void WriteCsvRow(std::ostream& out, const std::vector<std::string>& fields);

// Shortest decimal text that parses back to exactly `value`.
std::string FormatDouble(double value);
// Whole-string decimal parse; returns false on any trailing garbage.
bool ParseDouble(std::string_view text, double& value);

}  // namespace riskcast

#endif  // RISKCAST_CSV_H_
