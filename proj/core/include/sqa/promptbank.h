// core/include/sqa/promptbank.h

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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqa/types.h"

namespace sqa {

// Placeholder substituted with a dataset name when dataset-specific prompting
// is enabled, and the clause that carries it in the shipped MOS prompts.
inline constexpr std::string_view kDatasetPlaceholder = "{Dataset}";
inline constexpr std::string_view kDatasetClause =
    "according to {Dataset} standards";

struct PromptTemplate {
  Task task = Task::kMos;
  std::string text;
  int variant_index = 0;  // in {0,1,2}
};

// Task-specific prompt sets: exactly three variants with similar meanings per
// task. Only MOS variants may carry the {Dataset} placeholder. The bank is
// immutable after load.
class PromptBank {
 public:
  // The built-in bank (mirrors data/prompts.json).
  static PromptBank Default();

  // Loads and validates a prompt file: {"prompts": [{"task": ..,
  // "variants": [a, b, c]}, ...]}.
  static PromptBank Load(const std::filesystem::path& path);
  static PromptBank FromJsonText(const std::string& text);

  const std::vector<PromptTemplate>& Variants(Task task) const;

  // Uniform choice among the task's variants, deterministic per seed. The
  // selection stream is independent of the data-split streams.
  const PromptTemplate& Select(Task task, uint64_t seed) const;

 private:
  std::map<Task, std::vector<PromptTemplate>> variants_;
  void Validate() const;
};

// Substitutes the dataset into the template. Without a dataset, a strict
// render of a placeholder-carrying template fails; a non-strict render drops
// the dataset clause instead (the "w/o specific prompt" mode).
std::string RenderPrompt(const PromptTemplate& tmpl,
                         std::optional<Dataset> dataset, bool strict = true);

// One rendered prompt per dataset, order-preserving; the per-prompt
// predictions are averaged downstream. MOS templates only.
std::vector<std::string> ExpandStandards(const PromptTemplate& tmpl,
                                         std::span<const Dataset> datasets);

}  // namespace sqa
