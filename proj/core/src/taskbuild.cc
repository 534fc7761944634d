// core/src/taskbuild.cc

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

#include "sqa/taskbuild.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "json.hpp"

#include "default_data.h"
#include "jsonl.h"
#include "sqa/error.h"
#include "sqa/rng.h"

namespace sqa {

// ---------------------------------------------------------------------------
// A/B pairs
// ---------------------------------------------------------------------------

std::vector<AbPair> BuildAbPairs(std::span<const RatedUtterance> utts,
                                 uint64_t seed,
                                 const AbPairOptions& options) {
  // Same-text groups never cross splits.
  std::map<std::pair<Split, std::string>, std::vector<const RatedUtterance*>>
      groups;
  for (const auto& u : utts) {
    if (!u.transcript || u.transcript->empty()) {
      throw Error("A/B pairing needs transcripts; utterance '" + u.id +
                  "' has none");
    }
    groups[{u.split, *u.transcript}].push_back(&u);
  }

  const uint64_t pairing_seed = SubstreamSeed(seed, "pairing");
  std::vector<AbPair> pairs;
  for (const auto& [key, members] : groups) {
    std::vector<std::pair<const RatedUtterance*, const RatedUtterance*>>
        candidates;
    for (size_t i = 0; i < members.size(); ++i) {
      for (size_t j = i + 1; j < members.size(); ++j) {
        if (members[i]->mos != members[j]->mos) {
          candidates.emplace_back(members[i], members[j]);
        }
      }
    }
    if (candidates.empty()) continue;

    // A per-group stream keyed by split+text keeps the subsample independent
    // of how many other groups exist.
    Rng rng(MixSeed(pairing_seed, Fnv1a(std::string(SplitName(key.first)) +
                                        "\x1f" + key.second)));
    rng.Shuffle(candidates);
    if (options.per_text_cap > 0 &&
        candidates.size() > static_cast<size_t>(options.per_text_cap)) {
      candidates.resize(static_cast<size_t>(options.per_text_cap));
    }
    for (const auto& [first, second] : candidates) {
      const bool swap = rng.UniformIndex(2) == 1;
      const RatedUtterance* a = swap ? second : first;
      const RatedUtterance* b = swap ? first : second;
      AbPair p;
      p.id = "ab:" + a->id + ":" + b->id;
      p.utt_a = *a;
      p.utt_b = *b;
      p.better = a->mos > b->mos ? AbChoice::kA : AbChoice::kB;
      p.delta_mos = std::abs(a->mos - b->mos);
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// SIM audio assembly
// ---------------------------------------------------------------------------

namespace {

WaveData TruncateFrames(const WaveData& wave, size_t max_frames) {
  if (wave.frames() <= max_frames) return wave;
  WaveData out;
  out.sample_rate = wave.sample_rate;
  out.channels = wave.channels;
  out.samples.assign(wave.samples.begin(),
                     wave.samples.begin() +
                         static_cast<std::ptrdiff_t>(max_frames * wave.channels));
  return out;
}

}  // namespace

WaveData AssembleSimAudio(const WaveData& a, const WaveData& b,
                          const SimAssemblyOptions& options) {
  if (a.frames() == 0 || b.frames() == 0) {
    throw Error("assemble_sim_audio: zero-length input");
  }
  if (a.channels != b.channels) {
    throw Error("assemble_sim_audio: channel count mismatch");
  }
  const WaveData* pa = &a;
  const WaveData* pb = &b;
  WaveData ra, rb;
  if (a.sample_rate != b.sample_rate) {
    ra = Resample(a, options.target_rate);
    rb = Resample(b, options.target_rate);
    pa = &ra;
    pb = &rb;
  }
  const int rate = pa->sample_rate;
  const auto max_frames =
      static_cast<size_t>(std::llround(options.max_each_s * rate));
  const auto silence_frames =
      static_cast<size_t>(std::llround(options.silence_s * rate));

  const WaveData ta = TruncateFrames(*pa, max_frames);
  const WaveData tb = TruncateFrames(*pb, max_frames);

  WaveData out;
  out.sample_rate = rate;
  out.channels = ta.channels;
  out.samples.reserve(ta.samples.size() +
                      silence_frames * static_cast<size_t>(out.channels) +
                      tb.samples.size());
  out.samples.insert(out.samples.end(), ta.samples.begin(), ta.samples.end());
  out.samples.insert(out.samples.end(),
                     silence_frames * static_cast<size_t>(out.channels), 0);
  out.samples.insert(out.samples.end(), tb.samples.begin(), tb.samples.end());
  return out;
}

WaveData AssembleSimAudio(const SimPair& pair,
                          const std::filesystem::path& audio_root,
                          const SimAssemblyOptions& options) {
  const WaveData a = ReadWav(audio_root / pair.audio_a);
  const WaveData b = ReadWav(audio_root / pair.audio_b);
  return AssembleSimAudio(a, b, options);
}

// ---------------------------------------------------------------------------
// Quality descriptions
// ---------------------------------------------------------------------------

std::string_view DimName(Dim d) {
  switch (d) {
    case Dim::kNoisiness: return "noisiness";
    case Dim::kDistortion: return "distortion";
    case Dim::kDiscontinuity: return "discontinuity";
    case Dim::kOverall: return "overall";
  }
  return "?";
}

BinTable BinTable::Default() {
  return FromJsonText(std::string(DefaultBinTableJson()));
}

BinTable BinTable::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open bin table '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return FromJsonText(buf.str());
}

BinTable BinTable::FromJsonText(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad bin table: ") + e.what());
  }
  if (!doc.contains("dimensions") || !doc["dimensions"].is_object()) {
    throw Error("bad bin table: missing 'dimensions' object");
  }
  BinTable table;
  for (Dim d : kAllDims) {
    const std::string key(DimName(d));
    if (!doc["dimensions"].contains(key)) {
      throw Error("bad bin table: missing dimension '" + key + "'");
    }
    for (const auto& jb : doc["dimensions"][key]) {
      Bin bin;
      bin.lo = jb.at("lo").get<double>();
      bin.hi = jb.at("hi").get<double>();
      bin.phrases = jb.at("phrases").get<std::vector<std::string>>();
      table.bins_[static_cast<int>(d)].push_back(std::move(bin));
    }
  }
  table.Validate();
  return table;
}

void BinTable::Validate() const {
  for (Dim d : kAllDims) {
    const auto& bins = bins_[static_cast<int>(d)];
    if (bins.empty()) {
      throw Error("bin table: dimension '" + std::string(DimName(d)) +
                  "' has no bins");
    }
    if (bins.front().lo != kMosMin || bins.back().hi != kMosMax) {
      throw Error("bin table: dimension '" + std::string(DimName(d)) +
                  "' must cover [1,5]");
    }
    for (size_t i = 0; i < bins.size(); ++i) {
      if (!(bins[i].lo < bins[i].hi)) {
        throw Error("bin table: empty or inverted bin");
      }
      if (i > 0 && bins[i].lo != bins[i - 1].hi) {
        throw Error("bin table: bins of dimension '" +
                    std::string(DimName(d)) +
                    "' must be contiguous and non-overlapping");
      }
      if (bins[i].phrases.empty()) {
        throw Error("bin table: bin without phrases");
      }
      for (const auto& p : bins[i].phrases) {
        if (p.empty()) throw Error("bin table: empty phrase");
      }
    }
  }
}

const std::vector<Bin>& BinTable::bins(Dim d) const {
  return bins_[static_cast<int>(d)];
}

int BinTable::BinIndexFor(Dim d, double score) const {
  const auto& bins = bins_[static_cast<int>(d)];
  if (score < bins.front().lo || score > bins.back().hi) {
    throw Error("score " + std::to_string(score) + " outside bin coverage for '" +
                std::string(DimName(d)) + "'");
  }
  for (size_t i = 0; i + 1 < bins.size(); ++i) {
    if (score < bins[i].hi) return static_cast<int>(i);
  }
  return static_cast<int>(bins.size()) - 1;  // top bin is closed above
}

const Bin& BinTable::BinFor(Dim d, double score) const {
  return bins_[static_cast<int>(d)][static_cast<size_t>(BinIndexFor(d, score))];
}

bool BinTable::MentionsAllDimensions(const std::string& text) const {
  for (Dim d : kAllDims) {
    bool found = false;
    for (const auto& bin : bins_[static_cast<int>(d)]) {
      for (const auto& phrase : bin.phrases) {
        if (text.find(phrase) != std::string::npos) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) return false;
  }
  return true;
}

DescriptionResult DescribeQuality(const DimensionRating& dims,
                                  const BinTable& bins,
                                  ParaphraseService* paraphraser) {
  const std::string& noise = bins.BinFor(Dim::kNoisiness, dims.noisiness).phrases[0];
  const std::string& dist = bins.BinFor(Dim::kDistortion, dims.distortion).phrases[0];
  const std::string& cont =
      bins.BinFor(Dim::kDiscontinuity, dims.discontinuity).phrases[0];
  const std::string& overall = bins.BinFor(Dim::kOverall, dims.overall).phrases[0];

  const std::string text = "The audio recording has " + dist + " and is " +
                           cont + ", with " + noise +
                           ". The overall quality of the recording is " +
                           overall + ".";

  DescriptionResult result;
  result.description.utterance_id = dims.utterance_id;
  result.description.dimensions = dims;
  result.description.text = text;
  if (paraphraser != nullptr) {
    try {
      std::string rewritten = paraphraser->Rewrite(text);
      if (rewritten.empty()) {
        result.paraphrase_fell_back = true;
      } else {
        result.description.text = std::move(rewritten);
      }
    } catch (const std::exception&) {
      result.paraphrase_fell_back = true;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Prompt-ready task examples
// ---------------------------------------------------------------------------

std::string_view PromptModeName(PromptMode m) {
  switch (m) {
    case PromptMode::kSingle: return "single";
    case PromptMode::kDatasetSpecific: return "dataset_specific";
    case PromptMode::kAverageStandards: return "average_standards";
  }
  return "?";
}

std::optional<PromptMode> ParsePromptModeName(std::string_view name) {
  if (name == "single") return PromptMode::kSingle;
  if (name == "dataset_specific") return PromptMode::kDatasetSpecific;
  if (name == "average_standards") return PromptMode::kAverageStandards;
  return std::nullopt;
}

namespace {

// Per-item variant choice: deterministic in (seed, item id) and insensitive
// to collection order.
const PromptTemplate& PickPrompt(const PromptBank& bank, Task task,
                                 uint64_t seed, const std::string& item_id) {
  return bank.Select(task, MixSeed(seed, Fnv1a(item_id)));
}

}  // namespace

std::vector<TaskExample> BuildMosExamples(std::span<const RatedUtterance> utts,
                                          const PromptBank& bank,
                                          uint64_t seed,
                                          const ExampleBuildOptions& options) {
  std::vector<TaskExample> examples;
  examples.reserve(utts.size());
  for (const auto& u : utts) {
    const PromptTemplate& tmpl = PickPrompt(bank, Task::kMos, seed, u.id);
    TaskExample ex;
    ex.task = Task::kMos;
    ex.id = u.id;
    ex.audio_refs = {u.audio};
    ex.prompt_variant = tmpl.variant_index;
    switch (options.prompt_mode) {
      case PromptMode::kSingle:
        ex.prompt = RenderPrompt(tmpl, std::nullopt, /*strict=*/false);
        break;
      case PromptMode::kDatasetSpecific:
        ex.prompt = RenderPrompt(tmpl, u.dataset);
        break;
      case PromptMode::kAverageStandards:
        // Keep the placeholder; the evaluator expands one prompt per
        // standard and averages the parsed scores.
        ex.prompt = tmpl.text;
        break;
    }
    ex.truth = u.mos;
    ex.system_id = u.system_id;
    ex.dataset = u.dataset;
    examples.push_back(std::move(ex));
  }
  return examples;
}

std::vector<TaskExample> BuildSimExamples(std::span<const SimPair> pairs,
                                          const PromptBank& bank,
                                          uint64_t seed) {
  std::vector<TaskExample> examples;
  examples.reserve(pairs.size());
  for (const auto& p : pairs) {
    const PromptTemplate& tmpl = PickPrompt(bank, Task::kSim, seed, p.id);
    TaskExample ex;
    ex.task = Task::kSim;
    ex.id = p.id;
    ex.audio_refs = {p.audio_a, p.audio_b};
    ex.prompt = tmpl.text;
    ex.prompt_variant = tmpl.variant_index;
    ex.truth = p.sim;
    examples.push_back(std::move(ex));
  }
  return examples;
}

std::vector<TaskExample> BuildAbExamples(std::span<const AbPair> pairs,
                                         const PromptBank& bank,
                                         uint64_t seed) {
  std::vector<TaskExample> examples;
  examples.reserve(pairs.size());
  for (const auto& p : pairs) {
    const PromptTemplate& tmpl = PickPrompt(bank, Task::kAb, seed, p.id);
    TaskExample ex;
    ex.task = Task::kAb;
    ex.id = p.id;
    ex.audio_refs = {p.utt_a.audio, p.utt_b.audio};
    ex.prompt = tmpl.text;
    ex.prompt_variant = tmpl.variant_index;
    ex.truth = AbTruth{p.better, p.delta_mos};
    examples.push_back(std::move(ex));
  }
  return examples;
}

std::vector<TaskExample> BuildDescExamples(
    std::span<const RatedUtterance> utts,
    std::span<const DimensionRating> dims, const BinTable& bins,
    const PromptBank& bank, uint64_t seed, ParaphraseService* paraphraser) {
  std::unordered_map<std::string, const DimensionRating*> by_id;
  by_id.reserve(dims.size());
  for (const auto& d : dims) by_id[d.utterance_id] = &d;

  std::vector<TaskExample> examples;
  for (const auto& u : utts) {
    const auto it = by_id.find(u.id);
    if (it == by_id.end()) continue;  // no ratings for this utterance
    const PromptTemplate& tmpl = PickPrompt(bank, Task::kDesc, seed, u.id);
    TaskExample ex;
    ex.task = Task::kDesc;
    ex.id = u.id;
    ex.audio_refs = {u.audio};
    ex.prompt = tmpl.text;
    ex.prompt_variant = tmpl.variant_index;
    ex.truth = DescribeQuality(*it->second, bins, paraphraser).description;
    ex.dataset = u.dataset;
    ex.system_id = u.system_id;
    examples.push_back(std::move(ex));
  }
  return examples;
}

// ---------------------------------------------------------------------------
// Task file serialization
// ---------------------------------------------------------------------------

namespace {

nlohmann::json TruthToJson(const TaskExample& ex) {
  switch (ex.task) {
    case Task::kMos:
    case Task::kSim:
      return std::get<double>(ex.truth);
    case Task::kAb: {
      const auto& t = std::get<AbTruth>(ex.truth);
      return {{"better", AbChoiceName(t.better)}, {"delta_mos", t.delta_mos}};
    }
    case Task::kDesc: {
      const auto& d = std::get<QualityDescription>(ex.truth);
      return {{"text", d.text},
              {"dimensions",
               {{"noisiness", d.dimensions.noisiness},
                {"distortion", d.dimensions.distortion},
                {"discontinuity", d.dimensions.discontinuity},
                {"overall", d.dimensions.overall}}}};
    }
  }
  throw Error("unknown task");
}

TruthValue TruthFromJson(Task task, const std::string& id,
                         const nlohmann::json& j) {
  switch (task) {
    case Task::kMos:
    case Task::kSim:
      return j.get<double>();
    case Task::kAb: {
      AbTruth t;
      const auto better = ParseAbChoiceName(j.at("better").get<std::string>());
      if (!better) throw Error("bad AB truth for item '" + id + "'");
      t.better = *better;
      t.delta_mos = j.at("delta_mos").get<double>();
      return t;
    }
    case Task::kDesc: {
      QualityDescription d;
      d.utterance_id = id;
      d.text = j.at("text").get<std::string>();
      const auto& dims = j.at("dimensions");
      d.dimensions.utterance_id = id;
      d.dimensions.noisiness = dims.at("noisiness").get<double>();
      d.dimensions.distortion = dims.at("distortion").get<double>();
      d.dimensions.discontinuity = dims.at("discontinuity").get<double>();
      d.dimensions.overall = dims.at("overall").get<double>();
      return d;
    }
  }
  throw Error("unknown task");
}

}  // namespace

void WriteTaskFile(const std::filesystem::path& path,
                   std::span<const TaskExample> examples) {
  std::vector<nlohmann::json> records;
  records.reserve(examples.size());
  for (const auto& ex : examples) {
    nlohmann::json j{{"task", TaskName(ex.task)},
                     {"id", ex.id},
                     {"audio_refs", ex.audio_refs},
                     {"prompt", ex.prompt},
                     {"prompt_variant", ex.prompt_variant},
                     {"truth", TruthToJson(ex)}};
    if (ex.system_id) j["system_id"] = *ex.system_id;
    if (ex.dataset) j["dataset"] = DatasetName(*ex.dataset);
    records.push_back(std::move(j));
  }
  jsonl::WriteLines(path, records);
}

std::vector<TaskExample> ReadTaskFile(const std::filesystem::path& path) {
  std::vector<TaskExample> examples;
  for (const auto& j : jsonl::ReadLines(path)) {
    TaskExample ex;
    const auto task = ParseTaskName(j.at("task").get<std::string>());
    if (!task) {
      throw Error(path.string() + ": unknown task '" +
                  j.at("task").get<std::string>() + "'");
    }
    ex.task = *task;
    ex.id = j.at("id").get<std::string>();
    ex.audio_refs = j.at("audio_refs").get<std::vector<std::string>>();
    ex.prompt = j.at("prompt").get<std::string>();
    ex.prompt_variant = j.value("prompt_variant", 0);
    ex.truth = TruthFromJson(ex.task, ex.id, j.at("truth"));
    if (j.contains("system_id")) {
      ex.system_id = j["system_id"].get<std::string>();
    }
    if (j.contains("dataset")) {
      const auto d = ParseDatasetName(j["dataset"].get<std::string>());
      if (!d) throw Error(path.string() + ": unknown dataset");
      ex.dataset = d;
    }
    const size_t want_refs = (ex.task == Task::kSim || ex.task == Task::kAb) ? 2 : 1;
    if (ex.audio_refs.empty() ||
        (want_refs == 1 && ex.audio_refs.size() != 1) ||
        (want_refs == 2 && ex.audio_refs.size() > 2)) {
      throw Error(path.string() + ": item '" + ex.id +
                  "': audio_refs count does not match task");
    }
    examples.push_back(std::move(ex));
  }
  return examples;
}

}  // namespace sqa
