// core/include/sqa/taskbuild.h

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
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sqa/audio.h"
#include "sqa/promptbank.h"
#include "sqa/types.h"

namespace sqa {

// ---------------------------------------------------------------------------
// A/B pairs
// ---------------------------------------------------------------------------

// A forced-choice comparison of two same-text utterances; `better` points to
// the higher-MOS member and the two MOS values are always distinct.
struct AbPair {
  std::string id;
  RatedUtterance utt_a;
  RatedUtterance utt_b;
  AbChoice better = AbChoice::kA;
  double delta_mos = 0.0;  // |mos_a - mos_b| > 0
};

struct AbPairOptions {
  // Candidate pairs per same-text group are subsampled to this cap with the
  // seeded pairing stream. <= 0 means keep all candidates.
  int per_text_cap = 20;
};

// Mines same-transcript, distinct-MOS pairs within each split. Pairs never
// cross splits; A/B order is randomized; deterministic per seed. Text groups
// with fewer than two distinct-MOS members yield no pairs.
std::vector<AbPair> BuildAbPairs(std::span<const RatedUtterance> utts,
                                 uint64_t seed,
                                 const AbPairOptions& options = {});

// ---------------------------------------------------------------------------
// SIM audio assembly
// ---------------------------------------------------------------------------

struct SimAssemblyOptions {
  double silence_s = 2.0;    // inserted between the two samples
  double max_each_s = 14.0;  // each input is truncated to this length
  int target_rate = 16000;   // used only when input rates differ
};

// Joins the two sides of a pair into one buffer:
//   trunc(a, max_each_s) + silence(silence_s) + trunc(b, max_each_s).
// Inputs are truncated before concatenation; the silence is never truncated.
// Mismatched sample rates are resampled to options.target_rate first.
WaveData AssembleSimAudio(const WaveData& a, const WaveData& b,
                          const SimAssemblyOptions& options = {});

WaveData AssembleSimAudio(const SimPair& pair,
                          const std::filesystem::path& audio_root,
                          const SimAssemblyOptions& options = {});

// ---------------------------------------------------------------------------
// Quality descriptions
// ---------------------------------------------------------------------------

enum class Dim { kNoisiness, kDistortion, kDiscontinuity, kOverall };
inline constexpr Dim kAllDims[] = {Dim::kNoisiness, Dim::kDistortion,
                                   Dim::kDiscontinuity, Dim::kOverall};
std::string_view DimName(Dim d);

struct Bin {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::string> phrases;
};

// Maps each dimension score to a graded phrase. Bins must tile [1,5]
// contiguously without overlap for every dimension. Shipped as an editable
// data file; the built-in table mirrors data/bin_table.json.
class BinTable {
 public:
  static BinTable Default();
  static BinTable Load(const std::filesystem::path& path);
  static BinTable FromJsonText(const std::string& text);

  const std::vector<Bin>& bins(Dim d) const;
  // Index of the bin holding `score` (bins are [lo,hi), top bin closed).
  int BinIndexFor(Dim d, double score) const;
  const Bin& BinFor(Dim d, double score) const;

  // True when, for every dimension, at least one phrase from its inventory
  // occurs in the text.
  bool MentionsAllDimensions(const std::string& text) const;

 private:
  std::vector<Bin> bins_[4];
  void Validate() const;
};

struct QualityDescription {
  std::string utterance_id;
  std::string text;
  DimensionRating dimensions;
};

// Optional rewrite service used to diversify template descriptions (an
// instruction-tuned LLM in the original setting). Absent or failing
// paraphrasers fall back to the deterministic template.
class ParaphraseService {
 public:
  virtual ~ParaphraseService() = default;
  virtual std::string Rewrite(const std::string& text) = 0;
};

struct DescriptionResult {
  QualityDescription description;
  bool paraphrase_fell_back = false;
};

// Renders the four bin phrases into a fixed sentence template. Without a
// paraphraser this is a pure function of (dims, bins); with one, the template
// is rewritten and a failed rewrite falls back to the template with the
// warning flag set.
DescriptionResult DescribeQuality(const DimensionRating& dims,
                                  const BinTable& bins,
                                  ParaphraseService* paraphraser = nullptr);

// ---------------------------------------------------------------------------
// Prompt-ready task examples
// ---------------------------------------------------------------------------

struct AbTruth {
  AbChoice better = AbChoice::kA;
  double delta_mos = 0.0;
};

// MOS and SIM truths are scores; AB carries the choice plus the MOS gap
// (needed for conditional accuracy); DESC carries the reference description.
using TruthValue = std::variant<double, AbTruth, QualityDescription>;

struct TaskExample {
  Task task = Task::kMos;
  std::string id;
  std::vector<std::string> audio_refs;  // 1 for MOS/DESC, 2 for SIM/AB
                                        // (1 when pre-assembled)
  std::string prompt;
  int prompt_variant = 0;
  TruthValue truth;
  std::optional<std::string> system_id;  // kept for system-level scoring
  std::optional<Dataset> dataset;
};

enum class PromptMode { kSingle, kDatasetSpecific, kAverageStandards };
std::string_view PromptModeName(PromptMode m);
std::optional<PromptMode> ParsePromptModeName(std::string_view name);

struct ExampleBuildOptions {
  // kSingle strips the dataset clause; kDatasetSpecific substitutes the
  // item's dataset; kAverageStandards leaves the placeholder in place so the
  // evaluator can expand it per standard. MOS only; other tasks ignore it.
  PromptMode prompt_mode = PromptMode::kSingle;
};

std::vector<TaskExample> BuildMosExamples(std::span<const RatedUtterance> utts,
                                          const PromptBank& bank,
                                          uint64_t seed,
                                          const ExampleBuildOptions& = {});
std::vector<TaskExample> BuildSimExamples(std::span<const SimPair> pairs,
                                          const PromptBank& bank,
                                          uint64_t seed);
std::vector<TaskExample> BuildAbExamples(std::span<const AbPair> pairs,
                                         const PromptBank& bank,
                                         uint64_t seed);
// DESC items join NISQA utterances with their dimension ratings on
// utterance id; utterances without ratings are skipped.
std::vector<TaskExample> BuildDescExamples(
    std::span<const RatedUtterance> utts,
    std::span<const DimensionRating> dims, const BinTable& bins,
    const PromptBank& bank, uint64_t seed,
    ParaphraseService* paraphraser = nullptr);

// Line-delimited JSON serialization of built task sets.
void WriteTaskFile(const std::filesystem::path& path,
                   std::span<const TaskExample> examples);
std::vector<TaskExample> ReadTaskFile(const std::filesystem::path& path);

}  // namespace sqa
