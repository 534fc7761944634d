// core/src/respparse.cc

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

#include "sqa/respparse.h"

#include <cctype>
#include <charconv>
#include <cmath>

#include "json.hpp"

#include "jsonl.h"
#include "sqa/error.h"

namespace sqa {

std::string_view ParseStatusName(ParseStatus s) {
  switch (s) {
    case ParseStatus::kOk: return "ok";
    case ParseStatus::kParseFailed: return "parse_failed";
    case ParseStatus::kRangeFailed: return "range_failed";
  }
  return "?";
}

std::optional<ParseStatus> ParseStatusFromName(std::string_view name) {
  if (name == "ok") return ParseStatus::kOk;
  if (name == "parse_failed") return ParseStatus::kParseFailed;
  if (name == "range_failed") return ParseStatus::kRangeFailed;
  return std::nullopt;
}

namespace {

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

// Finds the first decimal-number token: optional sign, digits with an
// optional decimal point ("3", "3.5", ".5", "-2."). Tokens carrying an
// exponent suffix are skipped entirely rather than half-read.
std::optional<double> FirstNumberToken(std::string_view text) {
  size_t i = 0;
  while (i < text.size()) {
    size_t start = i;
    bool has_sign = false;
    if (text[i] == '+' || text[i] == '-') {
      has_sign = true;
      ++i;
      if (i >= text.size()) break;
    }
    size_t digits_begin = i;
    while (i < text.size() && IsDigit(text[i])) ++i;
    size_t int_digits = i - digits_begin;
    size_t frac_digits = 0;
    if (i < text.size() && text[i] == '.') {
      ++i;
      size_t frac_begin = i;
      while (i < text.size() && IsDigit(text[i])) ++i;
      frac_digits = i - frac_begin;
    }
    if (int_digits + frac_digits == 0) {
      // No digits after this start; move past it.
      i = start + 1;
      continue;
    }
    // Scientific notation is rejected: skip the whole token.
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
      size_t j = i + 1;
      if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
      if (j < text.size() && IsDigit(text[j])) {
        while (j < text.size() && IsDigit(text[j])) ++j;
        i = j;
        continue;
      }
    }
    std::string token(text.substr(start, i - start));
    if (has_sign && token[0] == '+') token.erase(0, 1);  // from_chars: no '+'
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec == std::errc() && ptr == token.data() + token.size()) {
      return value;
    }
    // "3." style tokens: retry without the trailing dot.
    if (!token.empty() && token.back() == '.') {
      token.pop_back();
      auto [p2, e2] =
          std::from_chars(token.data(), token.data() + token.size(), value);
      if (e2 == std::errc() && p2 == token.data() + token.size()) return value;
    }
    i = start + 1;
  }
  return std::nullopt;
}

NumberParse ParseScore(std::string_view text, double lo, double hi,
                       bool round_one_decimal) {
  const auto token = FirstNumberToken(text);
  if (!token) return {ParseStatus::kParseFailed, 0.0};
  double value = *token;
  if (round_one_decimal) {
    // Half-up at one decimal.
    value = std::floor(value * 10.0 + 0.5) / 10.0;
  }
  if (value < lo || value > hi) return {ParseStatus::kRangeFailed, value};
  return {ParseStatus::kOk, value};
}

// Case-insensitive substring search.
bool ContainsWord(std::string_view text, std::string_view word) {
  if (word.size() > text.size()) return false;
  for (size_t i = 0; i + word.size() <= text.size(); ++i) {
    bool match = true;
    for (size_t j = 0; j < word.size(); ++j) {
      if (std::tolower(static_cast<unsigned char>(text[i + j])) !=
          std::tolower(static_cast<unsigned char>(word[j]))) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

}  // namespace

NumberParse ParseMos(std::string_view text) {
  return ParseScore(text, kMosMin, kMosMax, /*round_one_decimal=*/false);
}

NumberParse ParseSim(std::string_view text) {
  return ParseScore(text, kSimMin, kSimMax, /*round_one_decimal=*/true);
}

std::optional<double> ParseScore01(std::string_view text) {
  const auto token = FirstNumberToken(text);
  if (!token || *token < 0.0 || *token > 1.0) return std::nullopt;
  return token;
}

AbParse ParseAb(std::string_view text, const AbParseOptions& options) {
  bool a = ContainsWord(text, "former");
  bool b = ContainsWord(text, "latter");
  if (options.allow_first_second) {
    a = a || ContainsWord(text, "first");
    b = b || ContainsWord(text, "second");
  }
  if (a == b) return {ParseStatus::kParseFailed, AbChoice::kA};
  return {ParseStatus::kOk, a ? AbChoice::kA : AbChoice::kB};
}

Prediction ParseResponse(const std::string& item_id, Task task,
                         const std::string& raw,
                         const AbParseOptions& ab_options) {
  Prediction p;
  p.item_id = item_id;
  p.task = task;
  p.raw = raw;
  switch (task) {
    case Task::kMos: {
      const auto r = ParseMos(raw);
      p.status = r.status;
      if (r.status == ParseStatus::kOk) p.value = r.value;
      break;
    }
    case Task::kSim: {
      const auto r = ParseSim(raw);
      p.status = r.status;
      if (r.status == ParseStatus::kOk) p.value = r.value;
      break;
    }
    case Task::kAb: {
      const auto r = ParseAb(raw, ab_options);
      p.status = r.status;
      if (r.status == ParseStatus::kOk) p.choice = r.choice;
      break;
    }
    case Task::kDesc: {
      if (raw.empty()) {
        p.status = ParseStatus::kParseFailed;
      } else {
        p.status = ParseStatus::kOk;
        p.text = raw;
      }
      break;
    }
  }
  return p;
}

void WritePredictions(const std::filesystem::path& path,
                      std::span<const Prediction> preds) {
  std::vector<nlohmann::json> records;
  records.reserve(preds.size());
  for (const auto& p : preds) {
    nlohmann::json j{{"item_id", p.item_id},
                     {"task", TaskName(p.task)},
                     {"raw", p.raw},
                     {"status", ParseStatusName(p.status)},
                     {"prompt_variant", p.prompt_variant}};
    if (p.value) j["value"] = *p.value;
    if (p.choice) j["value"] = AbChoiceName(*p.choice);
    if (p.standard) j["standard"] = *p.standard;
    if (p.averaged) j["averaged"] = true;
    records.push_back(std::move(j));
  }
  jsonl::WriteLines(path, records);
}

std::vector<Prediction> ReadPredictions(const std::filesystem::path& path) {
  std::vector<Prediction> preds;
  for (const auto& j : jsonl::ReadLines(path)) {
    Prediction p;
    p.item_id = j.at("item_id").get<std::string>();
    const auto task = ParseTaskName(j.at("task").get<std::string>());
    if (!task) throw Error(path.string() + ": unknown task");
    p.task = *task;
    p.raw = j.value("raw", "");
    const auto status =
        ParseStatusFromName(j.at("status").get<std::string>());
    if (!status) throw Error(path.string() + ": unknown status");
    p.status = *status;
    p.prompt_variant = j.value("prompt_variant", 0);
    if (j.contains("standard")) p.standard = j["standard"].get<std::string>();
    p.averaged = j.value("averaged", false);
    if (j.contains("value")) {
      if (j["value"].is_number()) {
        p.value = j["value"].get<double>();
      } else {
        const auto choice =
            ParseAbChoiceName(j["value"].get<std::string>());
        if (!choice) throw Error(path.string() + ": bad AB value");
        p.choice = choice;
      }
    }
    if (p.task == Task::kDesc && p.status == ParseStatus::kOk) p.text = p.raw;
    preds.push_back(std::move(p));
  }
  return preds;
}

}  // namespace sqa
