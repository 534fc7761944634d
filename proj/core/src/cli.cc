// core/src/cli.cc

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

#include "sqa/cli.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "jsonl.h"
#include "numfmt.h"
#include "sqa/corpus.h"
#include "sqa/error.h"
#include "sqa/metrics.h"
#include "sqa/respparse.h"
#include "sqa/rng.h"

namespace sqa {

namespace {

using nlohmann::json;

// Published split sizes, reported next to the built counts for audit.
const std::map<Split, int> kAbReferenceCounts = {
    {Split::kTrain, 13820}, {Split::kValid, 2260}, {Split::kTest, 2212}};
const std::map<Split, int> kDescReferenceCounts = {
    {Split::kTrain, 10899}, {Split::kValid, 2635}, {Split::kTest, 712}};
const std::map<Split, int> kSimReferenceCounts = {{Split::kTrain, 22389},
                                                  {Split::kValid, 2532}};

std::string HexU64(uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string FileChecksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot checksum '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return HexU64(Fnv1a(buf.str()));
}

std::string LowerTaskName(Task task) {
  std::string name(TaskName(task));
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return name;
}

BackendParams ParamsFromJson(const json& j) {
  BackendParams params;
  for (const auto& [key, value] : j.items()) {
    if (value.is_string()) {
      params[key] = value.get<std::string>();
    } else {
      params[key] = value.dump();
    }
  }
  return params;
}

json ParamsToJson(const BackendParams& params) {
  json j = json::object();
  for (const auto& [key, value] : params) j[key] = value;
  return j;
}

void AtomicWrite(const std::filesystem::path& path, const std::string& bytes) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

RunConfig RunConfigFromJsonText(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("bad config: ") + e.what());
  }
  RunConfig c;
  if (j.contains("task")) {
    const auto task = ParseTaskName(j["task"].get<std::string>());
    if (!task) throw Error("bad config: unknown task");
    c.task = *task;
  }
  if (!j.contains("seed")) throw Error("bad config: seed is required");
  c.seed = j["seed"].get<uint64_t>();
  c.out_dir = j.value("out_dir", c.out_dir.string());
  c.audio_root = j.value("audio_root", std::string());
  if (j.contains("manifests")) {
    const auto& m = j["manifests"];
    if (m.contains("mos")) {
      for (const auto& [name, path] : m["mos"].items()) {
        const auto dataset = ParseDatasetName(name);
        if (!dataset) throw Error("bad config: unknown dataset '" + name + "'");
        c.mos_manifests[*dataset] = path.get<std::string>();
      }
    }
    c.sim_manifest = m.value("sim", std::string());
    c.dim_manifest = m.value("dimensions", std::string());
  }
  if (j.contains("dataset") && !j["dataset"].get<std::string>().empty()) {
    const auto dataset = ParseDatasetName(j["dataset"].get<std::string>());
    if (!dataset) throw Error("bad config: unknown dataset");
    c.dataset = dataset;
  }
  c.subset = j.value("subset", std::string());
  if (j.contains("prompt_mode")) {
    const auto mode = ParsePromptModeName(j["prompt_mode"].get<std::string>());
    if (!mode) throw Error("bad config: unknown prompt_mode");
    c.prompt_mode = *mode;
  }
  c.prompts_file = j.value("prompts_file", std::string());
  c.bin_table_file = j.value("bin_table_file", std::string());
  if (j.contains("backend")) {
    c.backend.name = j["backend"].value("name", c.backend.name);
    if (j["backend"].contains("params")) {
      c.backend.params = ParamsFromJson(j["backend"]["params"]);
    }
  }
  if (j.contains("judge")) {
    c.judge.name = j["judge"].value("name", c.judge.name);
    if (j["judge"].contains("params")) {
      c.judge.params = ParamsFromJson(j["judge"]["params"]);
    }
  }
  c.threshold = j.value("threshold", c.threshold);
  c.failure_ceiling = j.value("failure_ceiling", c.failure_ceiling);
  c.resplit_ratio = j.value("resplit_ratio", c.resplit_ratio);
  if (j.contains("ab")) {
    c.ab.per_text_cap = j["ab"].value("per_text_cap", c.ab.per_text_cap);
  }
  if (j.contains("sim_assembly")) {
    const auto& s = j["sim_assembly"];
    c.assemble_sim_audio = s.value("assemble", false);
    c.sim.silence_s = s.value("silence_s", c.sim.silence_s);
    c.sim.max_each_s = s.value("max_each_s", c.sim.max_each_s);
    c.sim.target_rate = s.value("target_rate", c.sim.target_rate);
  }
  if (j.contains("generation")) {
    const auto& g = j["generation"];
    c.generation.max_new_tokens =
        g.value("max_new_tokens", c.generation.max_new_tokens);
    c.generation.temperature = g.value("temperature", c.generation.temperature);
  }
  if (j.contains("retry")) {
    c.retry.max_attempts = j["retry"].value("max_attempts", c.retry.max_attempts);
    c.retry.initial_backoff_ms =
        j["retry"].value("initial_backoff_ms", c.retry.initial_backoff_ms);
  }
  if (c.prompt_mode == PromptMode::kAverageStandards && c.task != Task::kMos) {
    throw Error("average_standards prompt mode is only valid for MOS");
  }
  if (c.generation.max_new_tokens <= 0) {
    throw Error("bad config: max_new_tokens must be > 0");
  }
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return RunConfigFromJsonText(buf.str());
}

std::string CanonicalConfigJson(const RunConfig& c) {
  json mos = json::object();
  for (const auto& [dataset, path] : c.mos_manifests) {
    mos[std::string(DatasetName(dataset))] = path.string();
  }
  const json j{
      {"task", TaskName(c.task)},
      {"seed", c.seed},
      {"out_dir", c.out_dir.string()},
      {"audio_root", c.audio_root.string()},
      {"manifests",
       {{"mos", mos},
        {"sim", c.sim_manifest.string()},
        {"dimensions", c.dim_manifest.string()}}},
      {"dataset", c.dataset ? std::string(DatasetName(*c.dataset)) : ""},
      {"subset", c.subset},
      {"prompt_mode", PromptModeName(c.prompt_mode)},
      {"prompts_file", c.prompts_file.string()},
      {"bin_table_file", c.bin_table_file.string()},
      {"backend",
       {{"name", c.backend.name}, {"params", ParamsToJson(c.backend.params)}}},
      {"judge",
       {{"name", c.judge.name}, {"params", ParamsToJson(c.judge.params)}}},
      {"threshold", c.threshold},
      {"failure_ceiling", c.failure_ceiling},
      {"resplit_ratio", c.resplit_ratio},
      {"ab", {{"per_text_cap", c.ab.per_text_cap}}},
      {"sim_assembly",
       {{"assemble", c.assemble_sim_audio},
        {"silence_s", c.sim.silence_s},
        {"max_each_s", c.sim.max_each_s},
        {"target_rate", c.sim.target_rate}}},
      {"generation",
       {{"max_new_tokens", c.generation.max_new_tokens},
        {"temperature", c.generation.temperature}}},
      {"retry",
       {{"max_attempts", c.retry.max_attempts},
        {"initial_backoff_ms", c.retry.initial_backoff_ms}}},
  };
  return j.dump();
}

std::string ConfigHash(const RunConfig& config) {
  return "fnv1a:" + HexU64(Fnv1a(CanonicalConfigJson(config)));
}

std::filesystem::path TaskFilePath(const RunConfig& config, Split split) {
  return config.out_dir / (LowerTaskName(config.task) + "_" +
                           std::string(SplitName(split)) + ".jsonl");
}

std::filesystem::path PredictionFilePath(const RunConfig& config, Split split) {
  return config.out_dir / ("pred_" + LowerTaskName(config.task) + "_" +
                           std::string(SplitName(split)) + ".jsonl");
}

std::filesystem::path ReportBasePath(const RunConfig& config, Split split) {
  return config.out_dir / ("report_" + LowerTaskName(config.task) + "_" +
                           std::string(SplitName(split)));
}

// ---------------------------------------------------------------------------
// build
// ---------------------------------------------------------------------------

namespace {

std::vector<RatedUtterance> OfSplit(std::span<const RatedUtterance> utts,
                                    Split split) {
  std::vector<RatedUtterance> out;
  for (const auto& u : utts) {
    if (u.split == split) out.push_back(u);
  }
  return out;
}

std::vector<SimPair> OfSplit(std::span<const SimPair> pairs, Split split) {
  std::vector<SimPair> out;
  for (const auto& p : pairs) {
    if (p.split == split) out.push_back(p);
  }
  return out;
}

const std::filesystem::path& MosManifestFor(const RunConfig& config,
                                            Dataset dataset) {
  const auto it = config.mos_manifests.find(dataset);
  if (it == config.mos_manifests.end()) {
    throw Error("config has no MOS manifest for " +
                std::string(DatasetName(dataset)));
  }
  return it->second;
}

}  // namespace

BuildSummary CmdBuild(const RunConfig& config) {
  std::filesystem::create_directories(config.out_dir);
  const PromptBank bank = config.prompts_file.empty()
                              ? PromptBank::Default()
                              : PromptBank::Load(config.prompts_file);
  const BinTable bins = config.bin_table_file.empty()
                            ? BinTable::Default()
                            : BinTable::Load(config.bin_table_file);

  BuildSummary summary;
  json manifest;
  manifest["task"] = TaskName(config.task);
  manifest["seed"] = config.seed;
  manifest["config_hash"] = ConfigHash(config);

  std::map<Split, std::vector<TaskExample>> built;

  switch (config.task) {
    case Task::kMos: {
      if (!config.dataset) throw Error("MOS build needs a dataset");
      const auto utts =
          LoadMosManifest(MosManifestFor(config, *config.dataset),
                          *config.dataset);
      ExampleBuildOptions options;
      options.prompt_mode = config.prompt_mode;
      for (Split split : {Split::kTrain, Split::kValid, Split::kTest}) {
        built[split] =
            BuildMosExamples(OfSplit(utts, split), bank, config.seed, options);
      }
      break;
    }
    case Task::kAb: {
      const auto utts = LoadMosManifest(MosManifestFor(config, Dataset::kSomos),
                                        Dataset::kSomos);
      for (Split split : {Split::kTrain, Split::kValid, Split::kTest}) {
        const auto pairs =
            BuildAbPairs(OfSplit(utts, split), config.seed, config.ab);
        built[split] = BuildAbExamples(pairs, bank, config.seed);
      }
      manifest["reference_counts"] = {
          {"train", kAbReferenceCounts.at(Split::kTrain)},
          {"valid", kAbReferenceCounts.at(Split::kValid)},
          {"test", kAbReferenceCounts.at(Split::kTest)}};
      break;
    }
    case Task::kSim: {
      if (config.sim_manifest.empty()) throw Error("SIM build needs a manifest");
      auto pairs = LoadSimManifest(config.sim_manifest);
      auto train = OfSplit(pairs, Split::kTrain);
      auto valid = OfSplit(pairs, Split::kValid);
      const auto test = OfSplit(pairs, Split::kTest);
      // The original corpus ships without a validation split; restructure by
      // re-dividing the training set. A manifest that already has one is
      // taken as-is.
      if (valid.empty() && !train.empty()) {
        auto resplit =
            ResplitVoxsim(std::move(train), config.resplit_ratio, config.seed);
        train = std::move(resplit.train);
        valid = std::move(resplit.valid);
        manifest["resplit"] = {{"ratio", config.resplit_ratio},
                               {"train", train.size()},
                               {"valid", valid.size()}};
      }
      manifest["reference_counts"] = {
          {"train", kSimReferenceCounts.at(Split::kTrain)},
          {"valid", kSimReferenceCounts.at(Split::kValid)}};

      std::map<Split, std::vector<SimPair>> by_split{
          {Split::kTrain, std::move(train)},
          {Split::kValid, std::move(valid)},
          {Split::kTest, test}};
      for (auto& [split, split_pairs] : by_split) {
        if (config.assemble_sim_audio) {
          const auto audio_dir = config.out_dir / "audio";
          std::filesystem::create_directories(audio_dir);
          std::vector<SimPair> rewritten;
          rewritten.reserve(split_pairs.size());
          for (const auto& p : split_pairs) {
            const WaveData joined =
                AssembleSimAudio(p, config.audio_root, config.sim);
            const auto out_path = audio_dir / (p.id + ".wav");
            WriteWav(out_path, joined);
            rewritten.push_back(p);
          }
          auto examples = BuildSimExamples(rewritten, bank, config.seed);
          for (auto& ex : examples) {
            ex.audio_refs = {(audio_dir / (ex.id + ".wav")).string()};
          }
          built[split] = std::move(examples);
        } else {
          built[split] = BuildSimExamples(split_pairs, bank, config.seed);
        }
      }
      break;
    }
    case Task::kDesc: {
      const auto utts = LoadMosManifest(MosManifestFor(config, Dataset::kNisqa),
                                        Dataset::kNisqa);
      if (config.dim_manifest.empty()) {
        throw Error("DESC build needs a dimension manifest");
      }
      const auto dims = LoadDimensionManifest(config.dim_manifest);
      for (Split split : {Split::kTrain, Split::kValid, Split::kTest}) {
        built[split] = BuildDescExamples(OfSplit(utts, split), dims, bins, bank,
                                         config.seed);
      }
      manifest["reference_counts"] = {
          {"train", kDescReferenceCounts.at(Split::kTrain)},
          {"valid", kDescReferenceCounts.at(Split::kValid)},
          {"test", kDescReferenceCounts.at(Split::kTest)}};
      break;
    }
  }

  json files = json::object();
  json counts = json::object();
  for (const auto& [split, examples] : built) {
    const auto path = TaskFilePath(config, split);
    WriteTaskFile(path, examples);
    summary.counts[split] = static_cast<int>(examples.size());
    counts[std::string(SplitName(split))] = examples.size();
    files[path.filename().string()] = {{"count", examples.size()},
                                       {"fnv1a", FileChecksum(path)}};
  }
  manifest["counts"] = counts;
  manifest["files"] = files;

  summary.manifest_path = config.out_dir / "build_manifest.json";
  AtomicWrite(summary.manifest_path, manifest.dump(2) + "\n");
  return summary;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

namespace {

struct WorkItem {
  size_t example_index = 0;
  std::string prompt;
  std::optional<std::string> standard;  // dataset name in average mode
};

std::string ResumeKey(const std::string& item_id,
                      const std::optional<std::string>& standard) {
  return item_id + "\x1f" + standard.value_or("");
}

Prediction BackendFailure(const TaskExample& ex, const WorkItem& work,
                          const std::string& message) {
  Prediction p;
  p.item_id = ex.id;
  p.task = ex.task;
  p.raw = "";
  p.status = ParseStatus::kParseFailed;
  p.prompt_variant = ex.prompt_variant;
  p.standard = work.standard;
  (void)message;
  return p;
}

json PredictionToJson(const Prediction& p, const std::string& error) {
  json j{{"item_id", p.item_id},
         {"task", TaskName(p.task)},
         {"raw", p.raw},
         {"status", ParseStatusName(p.status)},
         {"prompt_variant", p.prompt_variant}};
  if (p.value) j["value"] = *p.value;
  if (p.choice) j["value"] = AbChoiceName(*p.choice);
  if (p.standard) j["standard"] = *p.standard;
  if (p.averaged) j["averaged"] = true;
  if (!error.empty()) j["error"] = error;
  return j;
}

}  // namespace

EvalSummary CmdEval(const RunConfig& config, Split split) {
  const auto task_path = TaskFilePath(config, split);
  if (!std::filesystem::exists(task_path)) {
    throw Error("task dataset not built: '" + task_path.string() + "'");
  }
  auto examples = ReadTaskFile(task_path);
  const auto pred_path = PredictionFilePath(config, split);

  // Resolve audio refs against the audio root so backends see real paths.
  if (!config.audio_root.empty()) {
    for (auto& ex : examples) {
      for (auto& ref : ex.audio_refs) {
        if (!std::filesystem::path(ref).is_absolute()) {
          ref = (config.audio_root / ref).string();
        }
      }
    }
  }

  const auto backend =
      MakeBackend(config.backend.name, config.backend.params, examples);

  // Expand work items; in average mode each item is asked once per standard.
  const std::vector<Dataset> standards{Dataset::kNisqa, Dataset::kBvcc,
                                       Dataset::kSomos};
  std::vector<WorkItem> work;
  for (size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    if (config.task == Task::kMos &&
        config.prompt_mode == PromptMode::kAverageStandards) {
      PromptTemplate tmpl{Task::kMos, ex.prompt, ex.prompt_variant};
      const auto prompts = ExpandStandards(tmpl, standards);
      for (size_t s = 0; s < standards.size(); ++s) {
        work.push_back(
            {i, prompts[s], std::string(DatasetName(standards[s]))});
      }
    } else {
      work.push_back({i, ex.prompt, std::nullopt});
    }
  }

  // Resume: keep ok records from a previous (possibly interrupted) run.
  std::unordered_map<std::string, Prediction> resumed;
  if (std::filesystem::exists(pred_path)) {
    for (auto& p : ReadPredictions(pred_path)) {
      if (p.averaged || p.status != ParseStatus::kOk) continue;
      resumed[ResumeKey(p.item_id, p.standard)] = std::move(p);
    }
  }

  std::vector<Prediction> results(work.size());
  std::vector<std::string> errors(work.size());
  std::vector<char> done(work.size(), 0);

  std::mutex mu;
  size_t flushed = 0;
  int failures = 0;
  bool aborted = false;
  std::ofstream incremental(pred_path, std::ios::binary | std::ios::trunc);
  if (!incremental) {
    throw Error("cannot write predictions '" + pred_path.string() + "'");
  }

  std::atomic<size_t> next{0};
  const int capacity = std::max(1, backend->MaxInFlight());
  const size_t worker_count =
      std::min<size_t>(static_cast<size_t>(capacity), std::max<size_t>(1, work.size()));

  auto run_one = [&](size_t w) {
    const WorkItem& item = work[w];
    const TaskExample& ex = examples[item.example_index];
    const auto key = ResumeKey(ex.id, item.standard);
    const auto it = resumed.find(key);
    if (it != resumed.end()) {
      results[w] = it->second;
      return;
    }
    GenerationRequest request;
    request.audio_refs = ex.audio_refs;
    request.prompt = item.prompt;
    request.params = config.generation;
    request.params.seed = config.seed;
    try {
      const std::string raw = GenerateWithRetry(*backend, request, config.retry);
      Prediction p = ParseResponse(ex.id, ex.task, raw);
      p.prompt_variant = ex.prompt_variant;
      p.standard = item.standard;
      results[w] = std::move(p);
    } catch (const BackendError& e) {
      results[w] = BackendFailure(ex, item, e.what());
      errors[w] = e.what();
    }
  };

  auto worker = [&] {
    for (;;) {
      const size_t w = next.fetch_add(1);
      if (w >= work.size()) return;
      {
        std::unique_lock lock(mu);
        if (aborted) return;
      }
      run_one(w);
      std::unique_lock lock(mu);
      done[w] = 1;
      // Flush the contiguous prefix so an interrupted run leaves a clean,
      // resumable file behind.
      while (flushed < work.size() && done[flushed]) {
        incremental << PredictionToJson(results[flushed], errors[flushed]).dump()
                    << "\n";
        if (results[flushed].status != ParseStatus::kOk) ++failures;
        ++flushed;
      }
      incremental.flush();
      if (flushed >= 20 &&
          static_cast<double>(failures) / static_cast<double>(flushed) >
              config.failure_ceiling) {
        aborted = true;
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(worker_count);
  for (size_t t = 0; t < worker_count; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  incremental.close();

  if (aborted) {
    throw Error("eval aborted: failure rate exceeded ceiling of " +
                FormatReal(config.failure_ceiling) + " (" +
                std::to_string(failures) + "/" + std::to_string(flushed) +
                " failed); partial predictions kept for resume");
  }

  // Final file: all per-prompt records in work order, then (in average mode)
  // one averaged record per item.
  std::ostringstream out;
  for (size_t w = 0; w < work.size(); ++w) {
    out << PredictionToJson(results[w], errors[w]).dump() << "\n";
  }
  EvalSummary summary;
  summary.n_items = static_cast<int>(examples.size());
  summary.n_requests = static_cast<int>(work.size());
  for (size_t w = 0; w < work.size(); ++w) {
    if (results[w].status == ParseStatus::kOk) {
      ++summary.n_ok;
    } else {
      ++summary.n_failed;
    }
  }

  if (config.task == Task::kMos &&
      config.prompt_mode == PromptMode::kAverageStandards) {
    const auto averaged =
        AveragePrompts(results, static_cast<int>(standards.size()));
    std::unordered_map<std::string, const AveragedPrediction*> by_id;
    for (const auto& a : averaged.items) by_id[a.item_id] = &a;
    for (const auto& ex : examples) {
      const auto it = by_id.find(ex.id);
      if (it == by_id.end()) continue;  // all prompts failed for this item
      Prediction avg;
      avg.item_id = ex.id;
      avg.task = Task::kMos;
      avg.raw = "";
      avg.value = it->second->value;
      avg.status = ParseStatus::kOk;
      avg.prompt_variant = ex.prompt_variant;
      avg.averaged = true;
      json j = PredictionToJson(avg, "");
      j["n_used"] = it->second->n_used;
      j["partial"] = it->second->partial;
      out << j.dump() << "\n";
    }
  }

  AtomicWrite(pred_path, out.str());
  summary.prediction_path = pred_path;
  return summary;
}

// ---------------------------------------------------------------------------
// score
// ---------------------------------------------------------------------------

namespace {

struct FailureTally {
  int total = 0;
  int ok = 0;
  int parse_failed = 0;
  int range_failed = 0;

  double rate() const {
    return total == 0 ? 0.0
                      : static_cast<double>(total - ok) /
                            static_cast<double>(total);
  }
};

json TallyToJson(const FailureTally& t) {
  return {{"total", t.total},
          {"ok", t.ok},
          {"parse_failed", t.parse_failed},
          {"range_failed", t.range_failed},
          {"failure_rate", t.rate()}};
}

json MetricReportToJson(const MetricReport& r) {
  return {{"level", LevelName(r.level)},
          {"lcc", r.lcc},
          {"srcc", r.srcc},
          {"mse", r.mse},
          {"n", r.n}};
}

std::string Fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::filesystem::path CmdScore(const RunConfig& config,
                               const std::filesystem::path& predictions,
                               const std::filesystem::path& truths,
                               const std::filesystem::path& out_base) {
  const auto examples = ReadTaskFile(truths);
  const auto preds = ReadPredictions(predictions);
  if (examples.empty()) throw Error("score: empty truth file");

  std::unordered_map<std::string, const TaskExample*> truth_by_id;
  for (const auto& ex : examples) truth_by_id[ex.id] = &ex;

  FailureTally tally;
  bool have_averaged = false;
  for (const auto& p : preds) {
    if (p.averaged) {
      have_averaged = true;
      continue;
    }
    ++tally.total;
    switch (p.status) {
      case ParseStatus::kOk: ++tally.ok; break;
      case ParseStatus::kParseFailed: ++tally.parse_failed; break;
      case ParseStatus::kRangeFailed: ++tally.range_failed; break;
    }
    if (p.task != examples[0].task) {
      throw Error("score: prediction task does not match truth task");
    }
  }

  json report;
  report["task"] = TaskName(examples[0].task);
  report["config_hash"] = ConfigHash(config);
  report["dataset"] = config.dataset
                          ? std::string(DatasetName(*config.dataset))
                          : (examples[0].task == Task::kSim
                                 ? std::string("VoxSim")
                                 : std::string());
  if (!config.subset.empty()) report["subset"] = config.subset;
  report["n_items"] = examples.size();
  report["failures"] = TallyToJson(tally);
  report["averaged"] = have_averaged;

  std::ostringstream tsv;
  std::ostringstream txt;
  tsv << "# config " << ConfigHash(config) << "\n";
  txt << "config " << ConfigHash(config) << "\n";
  const std::string label = report["dataset"].get<std::string>().empty()
                                ? std::string(TaskName(examples[0].task))
                                : report["dataset"].get<std::string>();

  switch (examples[0].task) {
    case Task::kMos:
    case Task::kSim: {
      // In average mode the per-item mean records are scored; otherwise the
      // per-prompt records (one per item) are.
      std::vector<ScorePair> pairs;
      std::unordered_set<std::string> joined;
      for (const auto& p : preds) {
        if (p.averaged != have_averaged) continue;
        if (p.status != ParseStatus::kOk || !p.value) continue;
        const auto it = truth_by_id.find(p.item_id);
        if (it == truth_by_id.end()) {
          throw Error("score: prediction for unknown item '" + p.item_id + "'");
        }
        if (!joined.insert(p.item_id).second) continue;
        ScorePair sp;
        sp.item_id = p.item_id;
        sp.predicted = *p.value;
        sp.truth = std::get<double>(it->second->truth);
        sp.system_id = it->second->system_id;
        pairs.push_back(std::move(sp));
      }
      if (pairs.empty()) throw Error("score: empty overlap");
      const MetricReport utt = UtteranceLevel(pairs);
      report["utterance"] = MetricReportToJson(utt);

      bool all_have_systems = true;
      for (const auto& sp : pairs) {
        if (!sp.system_id) {
          all_have_systems = false;
          break;
        }
      }
      std::optional<MetricReport> sys;
      if (all_have_systems) {
        std::unordered_set<std::string> distinct;
        for (const auto& sp : pairs) distinct.insert(*sp.system_id);
        if (distinct.size() >= 2) {
          sys = SystemLevel(pairs);
          report["system"] = MetricReportToJson(*sys);
        } else {
          report["system_unavailable"] = "fewer than 2 systems";
        }
      } else {
        report["system_unavailable"] = "no system labels";
      }

      tsv << "dataset\tutt_lcc\tutt_srcc\tutt_mse\tsys_lcc\tsys_srcc\tsys_mse"
             "\tn_utt\tn_sys\n";
      tsv << label << "\t" << FormatReal(utt.lcc) << "\t" << FormatReal(utt.srcc)
          << "\t" << FormatReal(utt.mse) << "\t";
      if (sys) {
        tsv << FormatReal(sys->lcc) << "\t" << FormatReal(sys->srcc) << "\t"
            << FormatReal(sys->mse) << "\t" << utt.n << "\t" << sys->n << "\n";
      } else {
        tsv << "-\t-\t-\t" << utt.n << "\t-\n";
      }

      txt << label << " " << TaskName(examples[0].task)
          << "  utterance-level: LCC " << Fixed3(utt.lcc) << "  SRCC "
          << Fixed3(utt.srcc) << "  MSE " << Fixed3(utt.mse) << "  (n=" << utt.n
          << ")\n";
      if (sys) {
        txt << label << " " << TaskName(examples[0].task)
            << "  system-level:    LCC " << Fixed3(sys->lcc) << "  SRCC "
            << Fixed3(sys->srcc) << "  MSE " << Fixed3(sys->mse)
            << "  (n=" << sys->n << ")\n";
      } else {
        txt << label << " " << TaskName(examples[0].task)
            << "  system-level:    unavailable ("
            << report["system_unavailable"].get<std::string>() << ")\n";
      }
      break;
    }
    case Task::kAb: {
      std::vector<AbItem> items;
      items.reserve(examples.size());
      for (const auto& ex : examples) {
        const auto& t = std::get<AbTruth>(ex.truth);
        items.push_back({ex.id, t.better, t.delta_mos});
      }
      const auto acc = ComputeAbAccuracy(preds, items, config.threshold);
      report["ab"] = {{"overall", acc.overall},
                      {"conditional", acc.conditional},
                      {"n_overall", acc.n_overall},
                      {"n_conditional", acc.n_conditional},
                      {"threshold", acc.threshold}};
      tsv << "dataset\tacc\tacc_cond\tn\tn_cond\tthreshold\n";
      tsv << label << "\t" << FormatReal(acc.overall) << "\t"
          << FormatReal(acc.conditional) << "\t" << acc.n_overall << "\t"
          << acc.n_conditional << "\t" << FormatReal(acc.threshold) << "\n";
      txt << label << " AB  Acc " << Fixed3(acc.overall) << " ("
          << Fixed3(acc.conditional) << ")  [conditional: MOS gap > "
          << FormatReal(acc.threshold) << ", n=" << acc.n_overall << "/"
          << acc.n_conditional << "]\n";
      break;
    }
    case Task::kDesc: {
      const auto judge = MakeJudge(config.judge.name, config.judge.params);
      std::vector<JudgeOutcome> outcomes;
      for (const auto& p : preds) {
        if (p.status != ParseStatus::kOk || !p.text) continue;
        const auto it = truth_by_id.find(p.item_id);
        if (it == truth_by_id.end()) {
          throw Error("score: prediction for unknown item '" + p.item_id + "'");
        }
        const auto& desc = std::get<QualityDescription>(it->second->truth);
        outcomes.push_back(
            judge->Judge({p.item_id, *p.text, desc.dimensions}));
      }
      if (outcomes.empty()) throw Error("score: empty overlap");
      const auto summary = JudgeMean(outcomes);
      report["judge"] = {{"judge", judge->name()},
                         {"mean", summary.mean},
                         {"n_ok", summary.n_ok},
                         {"n_failed", summary.n_failed}};
      tsv << "dataset\tjudge\tscore\tn_ok\tn_failed\n";
      tsv << label << "\t" << judge->name() << "\t" << FormatReal(summary.mean)
          << "\t" << summary.n_ok << "\t" << summary.n_failed << "\n";
      txt << label << " DESC  correlation score " << Fixed3(summary.mean)
          << " by " << judge->name() << " (n=" << summary.n_ok << ", failed "
          << summary.n_failed << ")\n";
      break;
    }
  }

  txt << "failure rate " << Fixed3(tally.rate()) << " (" << (tally.total - tally.ok)
      << "/" << tally.total << " non-ok)\n";

  AtomicWrite(out_base.string() + ".json", report.dump(2) + "\n");
  AtomicWrite(out_base.string() + ".tsv", tsv.str());
  AtomicWrite(out_base.string() + ".txt", txt.str());
  return out_base.string() + ".json";
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

namespace {

struct ReportRow {
  std::string dataset;
  std::vector<json> sources;
};

double MeanField(const std::vector<json>& sources, const char* section,
                 const char* field) {
  double sum = 0.0;
  int n = 0;
  for (const auto& s : sources) {
    if (!s.contains(section)) continue;
    sum += s[section][field].get<double>();
    ++n;
  }
  return n == 0 ? 0.0 : sum / n;
}

int CountWith(const std::vector<json>& sources, const char* section) {
  int n = 0;
  for (const auto& s : sources) n += s.contains(section);
  return n;
}

}  // namespace

void CmdReport(std::span<const std::filesystem::path> report_files,
               const std::filesystem::path& out_base) {
  if (report_files.empty()) throw Error("report: no input reports");

  std::vector<json> reports;
  std::string task;
  for (const auto& path : report_files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open report '" + path.string() + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw Error("bad report '" + path.string() + "': " + e.what());
    }
    const std::string this_task = j.value("task", "");
    if (task.empty()) {
      task = this_task;
    } else if (task != this_task) {
      throw Error("report: cannot mix " + task + " and " + this_task +
                  " reports in one table");
    }
    reports.push_back(std::move(j));
  }

  // One row per dataset; several reports of one dataset (e.g. the NISQA test
  // subsets) are averaged into a single row.
  std::vector<ReportRow> rows;
  for (auto& j : reports) {
    const std::string dataset = j.value("dataset", "");
    auto it = std::find_if(rows.begin(), rows.end(), [&](const ReportRow& r) {
      return r.dataset == dataset;
    });
    if (it == rows.end()) {
      rows.push_back({dataset, {}});
      it = rows.end() - 1;
    }
    it->sources.push_back(std::move(j));
  }

  std::ostringstream tsv;
  std::ostringstream txt;
  tsv << "# sources";
  for (const auto& j : reports) {
    tsv << " " << j.value("config_hash", "?");
  }
  tsv << "\n";
  txt << "task " << task << "\n";

  if (task == "MOS" || task == "SIM") {
    tsv << "dataset\tutt_lcc\tutt_srcc\tutt_mse\tsys_lcc\tsys_srcc\tsys_mse"
           "\tn_reports\n";
    for (const auto& row : rows) {
      const bool has_sys = CountWith(row.sources, "system") > 0;
      tsv << row.dataset << "\t" << FormatReal(MeanField(row.sources, "utterance", "lcc"))
          << "\t" << FormatReal(MeanField(row.sources, "utterance", "srcc")) << "\t"
          << FormatReal(MeanField(row.sources, "utterance", "mse")) << "\t";
      if (has_sys) {
        tsv << FormatReal(MeanField(row.sources, "system", "lcc")) << "\t"
            << FormatReal(MeanField(row.sources, "system", "srcc")) << "\t"
            << FormatReal(MeanField(row.sources, "system", "mse"));
      } else {
        tsv << "-\t-\t-";
      }
      tsv << "\t" << row.sources.size() << "\n";

      txt << row.dataset;
      if (row.sources.size() > 1) {
        txt << " (mean of " << row.sources.size() << " subsets)";
      }
      txt << "  utterance: LCC " << Fixed3(MeanField(row.sources, "utterance", "lcc"))
          << " SRCC " << Fixed3(MeanField(row.sources, "utterance", "srcc"))
          << " MSE " << Fixed3(MeanField(row.sources, "utterance", "mse"));
      if (has_sys) {
        txt << "  |  system: LCC " << Fixed3(MeanField(row.sources, "system", "lcc"))
            << " SRCC " << Fixed3(MeanField(row.sources, "system", "srcc"))
            << " MSE " << Fixed3(MeanField(row.sources, "system", "mse"));
      } else {
        txt << "  |  system: unavailable";
      }
      txt << "\n";
    }
  } else if (task == "AB") {
    tsv << "dataset\tacc\tacc_cond\tn_reports\n";
    for (const auto& row : rows) {
      const double acc = MeanField(row.sources, "ab", "overall");
      const double cond = MeanField(row.sources, "ab", "conditional");
      tsv << row.dataset << "\t" << FormatReal(acc) << "\t" << FormatReal(cond)
          << "\t" << row.sources.size() << "\n";
      txt << row.dataset << "  Acc " << Fixed3(acc) << " (" << Fixed3(cond)
          << ")\n";
    }
  } else if (task == "DESC") {
    tsv << "dataset\tscore\tn_reports\n";
    for (const auto& row : rows) {
      const double score = MeanField(row.sources, "judge", "mean");
      tsv << row.dataset << "\t" << FormatReal(score) << "\t"
          << row.sources.size() << "\n";
      txt << row.dataset << "  correlation score " << Fixed3(score) << "\n";
    }
  } else {
    throw Error("report: unknown task '" + task + "'");
  }

  AtomicWrite(out_base.string() + ".tsv", tsv.str());
  AtomicWrite(out_base.string() + ".txt", txt.str());
}

}  // namespace sqa
