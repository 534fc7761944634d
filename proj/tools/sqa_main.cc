// tools/sqa_main.cc

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

// Command line driver: build task datasets, evaluate a backend over them,
// score predictions and combine reports.
//
//   sqa build  --config run.json [overrides]
//   sqa eval   --config run.json --split test [overrides]
//   sqa score  --config run.json --pred p.jsonl --truth t.jsonl --out base
//   sqa report r1.json r2.json ... --out combined

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sqa/cli.h"
#include "sqa/error.h"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string task;
  std::string dataset;
  std::string backend;
  std::string prompt_mode;
  std::string out_dir;
  std::string subset;
  long long seed = -1;
  double threshold = -1.0;
  std::vector<std::string> backend_params;
};

void AddCommonOptions(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Run config JSON file")
      ->required();
  cmd->add_option("--task", args.task, "Override task: MOS|SIM|AB|DESC");
  cmd->add_option("--dataset", args.dataset,
                  "Override dataset: NISQA|BVCC|SOMOS");
  cmd->add_option("--backend", args.backend,
                  "Override backend: mock|oracle|http|subprocess");
  cmd->add_option("--prompt-mode", args.prompt_mode,
                  "Override prompt mode: single|dataset_specific|"
                  "average_standards");
  cmd->add_option("--seed", args.seed, "Override seed");
  cmd->add_option("--out", args.out_dir, "Override output directory");
  cmd->add_option("--subset", args.subset, "Override subset label");
  cmd->add_option("--threshold", args.threshold,
                  "Override AB conditional threshold");
  cmd->add_option("--backend-param", args.backend_params,
                  "Backend parameter override, key=value (repeatable)");
}

sqa::RunConfig ResolveConfig(const CommonArgs& args) {
  sqa::RunConfig config = sqa::LoadRunConfig(args.config_path);
  if (!args.task.empty()) {
    const auto task = sqa::ParseTaskName(args.task);
    if (!task) throw sqa::Error("unknown task '" + args.task + "'");
    config.task = *task;
  }
  if (!args.dataset.empty()) {
    const auto dataset = sqa::ParseDatasetName(args.dataset);
    if (!dataset) throw sqa::Error("unknown dataset '" + args.dataset + "'");
    config.dataset = dataset;
  }
  if (!args.backend.empty()) config.backend.name = args.backend;
  if (!args.prompt_mode.empty()) {
    const auto mode = sqa::ParsePromptModeName(args.prompt_mode);
    if (!mode) throw sqa::Error("unknown prompt mode '" + args.prompt_mode + "'");
    config.prompt_mode = *mode;
  }
  if (args.seed >= 0) config.seed = static_cast<uint64_t>(args.seed);
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;
  if (!args.subset.empty()) config.subset = args.subset;
  if (args.threshold >= 0.0) config.threshold = args.threshold;
  for (const auto& kv : args.backend_params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw sqa::Error("bad --backend-param '" + kv + "', expected key=value");
    }
    config.backend.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (config.prompt_mode == sqa::PromptMode::kAverageStandards &&
      config.task != sqa::Task::kMos) {
    throw sqa::Error("average_standards prompt mode is only valid for MOS");
  }
  return config;
}

sqa::Split ResolveSplit(const std::string& name) {
  const auto split = sqa::ParseSplitName(name);
  if (!split) throw sqa::Error("unknown split '" + name + "'");
  return *split;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speech quality assessment harness"};
  app.require_subcommand(1);

  CommonArgs build_args, eval_args, score_args;
  std::string eval_split = "test";
  std::string score_pred, score_truth, score_out;
  std::vector<std::string> report_files;
  std::string report_out;

  auto* build = app.add_subcommand("build", "Construct task datasets");
  AddCommonOptions(build, build_args);

  auto* eval = app.add_subcommand("eval", "Run a backend over a task dataset");
  AddCommonOptions(eval, eval_args);
  eval->add_option("--split", eval_split, "Split to evaluate (default test)");

  auto* score = app.add_subcommand("score", "Score predictions against truths");
  AddCommonOptions(score, score_args);
  score->add_option("--pred", score_pred, "Prediction file")->required();
  score->add_option("--truth", score_truth, "Truth (task) file")->required();
  score->add_option("--out", score_out, "Output base path")->required();

  auto* report = app.add_subcommand("report", "Combine score reports");
  report->add_option("reports", report_files, "Report JSON files")->required();
  report->add_option("--out", report_out, "Output base path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      const auto config = ResolveConfig(build_args);
      const auto summary = sqa::CmdBuild(config);
      for (const auto& [split, count] : summary.counts) {
        std::printf("built %s %s: %d examples\n",
                    std::string(sqa::TaskName(config.task)).c_str(),
                    std::string(sqa::SplitName(split)).c_str(), count);
      }
      std::printf("build manifest: %s\n", summary.manifest_path.string().c_str());
    } else if (eval->parsed()) {
      const auto config = ResolveConfig(eval_args);
      const auto summary = sqa::CmdEval(config, ResolveSplit(eval_split));
      std::printf("eval: %d items, %d requests, %d ok, %d failed -> %s\n",
                  summary.n_items, summary.n_requests, summary.n_ok,
                  summary.n_failed, summary.prediction_path.string().c_str());
    } else if (score->parsed()) {
      const auto config = ResolveConfig(score_args);
      const auto path = sqa::CmdScore(config, score_pred, score_truth, score_out);
      std::printf("report: %s\n", path.string().c_str());
    } else if (report->parsed()) {
      std::vector<std::filesystem::path> files(report_files.begin(),
                                               report_files.end());
      sqa::CmdReport(files, report_out);
      std::printf("combined report: %s.tsv\n", report_out.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
