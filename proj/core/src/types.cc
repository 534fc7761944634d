// core/src/types.cc

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

#include "sqa/types.h"

namespace sqa {

std::string_view DatasetName(Dataset d) {
  switch (d) {
    case Dataset::kNisqa: return "NISQA";
    case Dataset::kBvcc: return "BVCC";
    case Dataset::kSomos: return "SOMOS";
  }
  return "?";
}

std::string_view SplitName(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "?";
}

std::string_view TaskName(Task t) {
  switch (t) {
    case Task::kMos: return "MOS";
    case Task::kSim: return "SIM";
    case Task::kAb: return "AB";
    case Task::kDesc: return "DESC";
  }
  return "?";
}

std::string_view AbChoiceName(AbChoice c) {
  return c == AbChoice::kA ? "A" : "B";
}

std::optional<Dataset> ParseDatasetName(std::string_view name) {
  if (name == "NISQA") return Dataset::kNisqa;
  if (name == "BVCC") return Dataset::kBvcc;
  if (name == "SOMOS") return Dataset::kSomos;
  return std::nullopt;
}

std::optional<Split> ParseSplitName(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "valid") return Split::kValid;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

std::optional<Task> ParseTaskName(std::string_view name) {
  if (name == "MOS") return Task::kMos;
  if (name == "SIM") return Task::kSim;
  if (name == "AB") return Task::kAb;
  if (name == "DESC") return Task::kDesc;
  return std::nullopt;
}

std::optional<AbChoice> ParseAbChoiceName(std::string_view name) {
  if (name == "A") return AbChoice::kA;
  if (name == "B") return AbChoice::kB;
  return std::nullopt;
}

}  // namespace sqa
