// core/src/csv.h

// Copyright 2026  The sqa authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace sqa::csv {

struct Row {
  int line = 0;  // 1-based line number of the row's first line in the file
  std::vector<std::string> fields;
};

// Reads a whole delimited-text file. Fields may be double-quoted; quoted
// fields may contain commas, embedded quotes (doubled) and newlines. CRLF
// line ends are accepted. The first returned row is the header.
std::vector<Row> ReadFile(const std::filesystem::path& path);

std::string EscapeField(const std::string& field);

void WriteRow(std::ostream& out, std::span<const std::string> fields);

}  // namespace sqa::csv
