// core/src/promptbank.cc

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

#include "sqa/promptbank.h"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "default_data.h"
#include "sqa/error.h"
#include "sqa/rng.h"

namespace sqa {

namespace {

constexpr int kVariantsPerTask = 3;

std::string ReplaceAll(std::string text, std::string_view needle,
                       std::string_view replacement) {
  size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    text.replace(pos, needle.size(), replacement);
    pos += replacement.size();
  }
  return text;
}

// Removes "according to {Dataset} standards" together with a preceding
// ", " or " " separator, collapsing the clause cleanly out of the sentence.
std::string StripDatasetClause(const std::string& text) {
  const size_t pos = text.find(kDatasetClause);
  if (pos == std::string::npos) return text;
  size_t begin = pos;
  size_t end = pos + kDatasetClause.size();
  if (begin >= 2 && text.compare(begin - 2, 2, ", ") == 0) {
    begin -= 2;
  } else if (begin >= 1 && text[begin - 1] == ' ') {
    begin -= 1;
  }
  return text.substr(0, begin) + text.substr(end);
}

}  // namespace

PromptBank PromptBank::Default() {
  return FromJsonText(std::string(DefaultPromptsJson()));
}

PromptBank PromptBank::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open prompt file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return FromJsonText(buf.str());
}

PromptBank PromptBank::FromJsonText(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad prompt file: ") + e.what());
  }
  if (!doc.contains("prompts") || !doc["prompts"].is_array()) {
    throw Error("bad prompt file: missing 'prompts' array");
  }
  PromptBank bank;
  for (const auto& entry : doc["prompts"]) {
    const auto task = ParseTaskName(entry.value("task", ""));
    if (!task) {
      throw Error("bad prompt file: unknown task '" +
                  entry.value("task", "") + "'");
    }
    if (!entry.contains("variants") || !entry["variants"].is_array()) {
      throw Error("bad prompt file: task " +
                  std::string(TaskName(*task)) + " has no variants");
    }
    auto& variants = bank.variants_[*task];
    for (const auto& v : entry["variants"]) {
      PromptTemplate t;
      t.task = *task;
      t.text = v.get<std::string>();
      t.variant_index = static_cast<int>(variants.size());
      variants.push_back(std::move(t));
    }
  }
  bank.Validate();
  return bank;
}

void PromptBank::Validate() const {
  for (Task task : {Task::kMos, Task::kSim, Task::kAb, Task::kDesc}) {
    const auto it = variants_.find(task);
    const size_t n = it == variants_.end() ? 0 : it->second.size();
    if (n != kVariantsPerTask) {
      throw Error("prompt bank must hold exactly 3 variants for task " +
                  std::string(TaskName(task)) + ", got " + std::to_string(n));
    }
    if (task == Task::kMos) continue;
    for (const auto& v : it->second) {
      if (v.text.find(kDatasetPlaceholder) != std::string::npos) {
        throw Error("only MOS prompts may carry " +
                    std::string(kDatasetPlaceholder) + "; found one in task " +
                    std::string(TaskName(task)));
      }
    }
  }
}

const std::vector<PromptTemplate>& PromptBank::Variants(Task task) const {
  const auto it = variants_.find(task);
  if (it == variants_.end() || it->second.empty()) {
    throw Error("prompt bank has no variants for task " +
                std::string(TaskName(task)));
  }
  return it->second;
}

const PromptTemplate& PromptBank::Select(Task task, uint64_t seed) const {
  const auto& variants = Variants(task);
  Rng rng(SubstreamSeed(seed, "prompt-choice"));
  return variants[rng.UniformIndex(variants.size())];
}

std::string RenderPrompt(const PromptTemplate& tmpl,
                         std::optional<Dataset> dataset, bool strict) {
  const bool has_placeholder =
      tmpl.text.find(kDatasetPlaceholder) != std::string::npos;
  if (!has_placeholder) return tmpl.text;
  if (dataset) {
    return ReplaceAll(tmpl.text, kDatasetPlaceholder, DatasetName(*dataset));
  }
  if (strict) {
    throw Error("unresolved " + std::string(kDatasetPlaceholder) +
                " placeholder: no dataset given");
  }
  const std::string stripped = StripDatasetClause(tmpl.text);
  if (stripped.find(kDatasetPlaceholder) != std::string::npos) {
    throw Error("cannot strip " + std::string(kDatasetPlaceholder) +
                " outside the standard clause");
  }
  return stripped;
}

std::vector<std::string> ExpandStandards(const PromptTemplate& tmpl,
                                         std::span<const Dataset> datasets) {
  if (tmpl.task != Task::kMos) {
    throw Error("expand_standards requires a MOS template");
  }
  if (tmpl.text.find(kDatasetPlaceholder) == std::string::npos) {
    throw Error("expand_standards requires a template with " +
                std::string(kDatasetPlaceholder));
  }
  std::vector<std::string> prompts;
  prompts.reserve(datasets.size());
  for (Dataset d : datasets) {
    prompts.push_back(RenderPrompt(tmpl, d));
  }
  return prompts;
}

}  // namespace sqa
