// core/src/csv.cc

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

#include "csv.h"

#include <fstream>
#include <sstream>

#include "sqa/error.h"

namespace sqa::csv {

std::vector<Row> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open manifest '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::vector<Row> rows;
  size_t i = 0;
  int line = 1;
  while (i < text.size()) {
    Row row;
    row.line = line;
    std::string field;
    bool quoted = false;
    bool row_done = false;
    while (i <= text.size() && !row_done) {
      if (i == text.size()) {
        if (quoted) {
          throw Error(path.string() + ": line " + std::to_string(row.line) +
                      ": unterminated quoted field");
        }
        row.fields.push_back(std::move(field));
        row_done = true;
        break;
      }
      char c = text[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            quoted = false;
            ++i;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(c);
          ++i;
        }
      } else if (c == '"' && field.empty()) {
        quoted = true;
        ++i;
      } else if (c == ',') {
        row.fields.push_back(std::move(field));
        field.clear();
        ++i;
      } else if (c == '\n' || c == '\r') {
        row.fields.push_back(std::move(field));
        field.clear();
        if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
        ++i;
        ++line;
        row_done = true;
      } else {
        field.push_back(c);
        ++i;
      }
    }
    // Skip blank lines (a single empty field and nothing else).
    if (row.fields.size() == 1 && row.fields[0].empty()) continue;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string EscapeField(const std::string& field) {
  const bool needs_quote =
      field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quote) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

void WriteRow(std::ostream& out, std::span<const std::string> fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << EscapeField(fields[i]);
  }
  out << '\n';
}

}  // namespace sqa::csv
