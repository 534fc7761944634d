// core/include/sqa/cli.h

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
#include <vector>

#include "sqa/adapters.h"
#include "sqa/taskbuild.h"
#include "sqa/types.h"

namespace sqa {

// Run orchestration: one config drives build -> eval -> score -> report.
// All randomness flows from the single seed through named substreams, and
// every output file embeds the hash of the resolved config that produced it.

struct BackendSpec {
  std::string name = "oracle";
  BackendParams params;
};

struct JudgeSpec {
  std::string name = "binmatch";
  BackendParams params;
};

struct RunConfig {
  Task task = Task::kMos;
  uint64_t seed = 0;
  std::filesystem::path out_dir = "runs/out";
  std::filesystem::path audio_root;

  std::map<Dataset, std::filesystem::path> mos_manifests;
  std::filesystem::path sim_manifest;
  std::filesystem::path dim_manifest;

  std::optional<Dataset> dataset;  // MOS dataset under evaluation
  std::string subset;              // optional row label (e.g. a test subset)

  PromptMode prompt_mode = PromptMode::kSingle;
  std::filesystem::path prompts_file;    // empty: built-in bank
  std::filesystem::path bin_table_file;  // empty: built-in table

  BackendSpec backend;
  JudgeSpec judge;

  double threshold = 0.5;        // AB conditional-accuracy MOS gap
  double failure_ceiling = 0.5;  // abort eval past this failure rate
  double resplit_ratio = 0.9;

  AbPairOptions ab;
  SimAssemblyOptions sim;
  bool assemble_sim_audio = false;

  GenerationParams generation;  // request seed is taken from `seed`
  RetryPolicy retry;
};

RunConfig LoadRunConfig(const std::filesystem::path& path);
RunConfig RunConfigFromJsonText(const std::string& text);

// Canonical JSON of the resolved config (sorted keys) and its hash; the hash
// is stamped into every file a command writes.
std::string CanonicalConfigJson(const RunConfig& config);
std::string ConfigHash(const RunConfig& config);

// File layout inside config.out_dir.
std::filesystem::path TaskFilePath(const RunConfig& config, Split split);
std::filesystem::path PredictionFilePath(const RunConfig& config, Split split);
std::filesystem::path ReportBasePath(const RunConfig& config, Split split);

struct BuildSummary {
  std::map<Split, int> counts;
  std::filesystem::path manifest_path;
};

// Constructs the task datasets for all three splits and writes a build
// manifest recording counts, seed, checksums and the published reference
// counts for audit.
BuildSummary CmdBuild(const RunConfig& config);

struct EvalSummary {
  int n_items = 0;
  int n_requests = 0;
  int n_ok = 0;
  int n_failed = 0;
  std::filesystem::path prediction_path;
};

// Runs the backend over a built task file. Resumable: records with ok status
// in an existing prediction file are kept, everything else is recomputed.
// Aborts when the failure rate crosses config.failure_ceiling.
EvalSummary CmdEval(const RunConfig& config, Split split);

// Joins predictions with truths and writes <out_base>.json/.tsv/.txt
// metric reports (utterance-level always; system-level when system ids are
// present; A/B and judge sections per task).
std::filesystem::path CmdScore(const RunConfig& config,
                               const std::filesystem::path& predictions,
                               const std::filesystem::path& truths,
                               const std::filesystem::path& out_base);

// Combines score reports of one task into a table per dataset and level.
// Rows sharing a dataset (e.g. the NISQA test subsets) are averaged into one
// row. Mixing tasks is an error.
void CmdReport(std::span<const std::filesystem::path> report_files,
               const std::filesystem::path& out_base);

}  // namespace sqa
