// core/include/sqa/respparse.h

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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqa/types.h"

namespace sqa {

// Parsers are total: every input maps to exactly one status and never
// throws. Failed parses are excluded from correlation metrics downstream but
// counted as a failure rate; a model that answers a constant parses as ok and
// surfaces as a zero-variance error in the metrics instead.

enum class ParseStatus { kOk, kParseFailed, kRangeFailed };
std::string_view ParseStatusName(ParseStatus s);
std::optional<ParseStatus> ParseStatusFromName(std::string_view name);

struct NumberParse {
  ParseStatus status = ParseStatus::kParseFailed;
  double value = 0.0;  // meaningful only when status == kOk
};

// First decimal-number token, left to right; optional sign and decimal
// point, scientific notation rejected. Must lie in [1,5].
NumberParse ParseMos(std::string_view text);

// As ParseMos with [1,6] bounds; the token is rounded half-up to one decimal
// before the range check.
NumberParse ParseSim(std::string_view text);

struct AbParse {
  ParseStatus status = ParseStatus::kParseFailed;
  AbChoice choice = AbChoice::kA;
};

struct AbParseOptions {
  // Accept "first"/"second" as synonyms of "former"/"latter".
  bool allow_first_second = false;
};

// Case-insensitive keyword match: "former" -> A, "latter" -> B. Neither or
// both keywords present fails the parse.
AbParse ParseAb(std::string_view text, const AbParseOptions& options = {});

// First number token when it lies in [0,1]; used for judge replies.
std::optional<double> ParseScore01(std::string_view text);

// One typed prediction per answered example. The raw text is stored
// unmodified.
struct Prediction {
  std::string item_id;
  Task task = Task::kMos;
  std::string raw;
  std::optional<double> value;      // MOS/SIM
  std::optional<AbChoice> choice;   // AB
  std::optional<std::string> text;  // DESC (the description itself)
  ParseStatus status = ParseStatus::kParseFailed;
  int prompt_variant = 0;
  // Dataset-standard label when evaluated under average_standards.
  std::optional<std::string> standard;
  bool averaged = false;  // true for the per-item mean record
};

// Dispatches on task; DESC replies are ok when nonempty.
Prediction ParseResponse(const std::string& item_id, Task task,
                         const std::string& raw,
                         const AbParseOptions& ab_options = {});

// Line-delimited JSON records {item_id, task, raw, value, status, ...}.
void WritePredictions(const std::filesystem::path& path,
                      std::span<const Prediction> preds);
std::vector<Prediction> ReadPredictions(const std::filesystem::path& path);

}  // namespace sqa
