// tests/taskbuild_test.cc

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

#include <cmath>
#include <set>

#include "doctest.h"

#include "sqa/error.h"
#include "sqa/rng.h"
#include "testutil.h"

using namespace sqa;
using namespace sqa::test;

namespace {

RatedUtterance SomosUtt(const std::string& id, const std::string& text,
                        double mos, Split split = Split::kTrain) {
  RatedUtterance u;
  u.id = id;
  u.audio = "wav/" + id + ".wav";
  u.transcript = text;
  u.system_id = "sys_" + id;
  u.mos = mos;
  u.dataset = Dataset::kSomos;
  u.split = split;
  return u;
}

WaveData MakeWave(double seconds, int rate = 16000, int channels = 1,
                  int16_t fill = 1000) {
  WaveData w;
  w.sample_rate = rate;
  w.channels = channels;
  const auto frames = static_cast<size_t>(std::llround(seconds * rate));
  w.samples.assign(frames * channels, fill);
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// A/B pairs
// ---------------------------------------------------------------------------

TEST_CASE("ab pairs: equal MOS yields nothing, distinct MOS yields one pair") {
  const std::vector<RatedUtterance> same{SomosUtt("a", "hello", 3.0),
                                         SomosUtt("b", "hello", 3.0)};
  CHECK(BuildAbPairs(same, 1).empty());

  const std::vector<RatedUtterance> diff{SomosUtt("a", "hello", 4.1),
                                         SomosUtt("b", "hello", 2.9)};
  const auto pairs = BuildAbPairs(diff, 1);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].delta_mos == doctest::Approx(1.2).epsilon(1e-12));
  const auto& better = pairs[0].better == AbChoice::kA ? pairs[0].utt_a
                                                       : pairs[0].utt_b;
  CHECK(better.mos == 4.1);
  CHECK(pairs[0].utt_a.transcript == pairs[0].utt_b.transcript);
}

TEST_CASE("ab pairs: different texts never pair, splits never mix") {
  std::vector<RatedUtterance> utts{
      SomosUtt("a", "one", 3.0, Split::kTrain),
      SomosUtt("b", "two", 4.0, Split::kTrain),
      SomosUtt("c", "one", 4.5, Split::kTest),
  };
  // "a" and "c" share a text but sit in different splits; "b" has its own.
  CHECK(BuildAbPairs(utts, 5).empty());
}

TEST_CASE("ab pairs: invariants hold over a full synthetic corpus") {
  Rng rng(404);
  std::vector<RatedUtterance> utts;
  int id = 0;
  for (int text = 0; text < 40; ++text) {
    const int members = 2 + static_cast<int>(rng.UniformIndex(5));
    for (int m = 0; m < members; ++m) {
      const Split split = text % 3 == 0 ? Split::kTest : Split::kTrain;
      auto u = SomosUtt("u" + std::to_string(id++),
                        "sentence " + std::to_string(text),
                        OneDecimalScore(rng, 1.0, 5.0), split);
      utts.push_back(std::move(u));
    }
  }
  const auto pairs = BuildAbPairs(utts, 99);
  REQUIRE(!pairs.empty());
  std::set<std::string> ids;
  int a_first = 0;
  for (const auto& p : pairs) {
    REQUIRE(p.utt_a.transcript.has_value());
    CHECK(p.utt_a.transcript == p.utt_b.transcript);
    CHECK(p.utt_a.mos != p.utt_b.mos);
    CHECK(p.delta_mos == std::abs(p.utt_a.mos - p.utt_b.mos));
    CHECK(p.delta_mos > 0.0);
    const double better_mos = p.better == AbChoice::kA ? p.utt_a.mos : p.utt_b.mos;
    CHECK(better_mos == std::max(p.utt_a.mos, p.utt_b.mos));
    CHECK(p.utt_a.split == p.utt_b.split);
    CHECK(ids.insert(p.id).second);  // unique ids
    a_first += p.utt_a.id < p.utt_b.id;
  }
  // A/B order is randomized: both orders occur.
  CHECK(a_first > 0);
  CHECK(a_first < static_cast<int>(pairs.size()));

  // Deterministic per seed.
  const auto again = BuildAbPairs(utts, 99);
  REQUIRE(again.size() == pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) CHECK(again[i].id == pairs[i].id);
}

TEST_CASE("ab pairs: per-text cap limits candidates") {
  std::vector<RatedUtterance> utts;
  for (int i = 0; i < 10; ++i) {
    utts.push_back(SomosUtt("u" + std::to_string(i), "same text",
                            1.0 + 0.4 * i));
  }
  // 10 distinct-MOS members -> 45 candidate pairs.
  AbPairOptions uncapped;
  uncapped.per_text_cap = 0;
  CHECK(BuildAbPairs(utts, 7, uncapped).size() == 45);
  AbPairOptions capped;
  capped.per_text_cap = 12;
  CHECK(BuildAbPairs(utts, 7, capped).size() == 12);
}

TEST_CASE("ab pairs: missing transcripts are an error") {
  auto utt = SomosUtt("a", "x", 3.0);
  utt.transcript.reset();
  const std::vector<RatedUtterance> utts{utt};
  CHECK_THROWS_WITH_AS((void)BuildAbPairs(utts, 1),
                       doctest::Contains("transcript"), Error);
}

// ---------------------------------------------------------------------------
// SIM audio assembly
// ---------------------------------------------------------------------------

TEST_CASE("assemble: 3s + 4s gives exactly 9s at the common rate") {
  const auto joined = AssembleSimAudio(MakeWave(3.0), MakeWave(4.0));
  CHECK(joined.sample_rate == 16000);
  CHECK(joined.frames() == 9 * 16000);
}

TEST_CASE("assemble: inputs beyond 14s are truncated, silence is not") {
  const auto joined = AssembleSimAudio(MakeWave(20.0), MakeWave(5.0));
  CHECK(joined.frames() == static_cast<size_t>((14 + 2 + 5) * 16000));
  // Both sides longer than the cap: output tops out at 14+2+14.
  const auto both = AssembleSimAudio(MakeWave(17.5), MakeWave(30.0));
  CHECK(both.frames() == static_cast<size_t>(30 * 16000));
}

TEST_CASE("assemble: the separator is all-zero and exactly round(2s * rate)") {
  const auto a = MakeWave(1.0, 16000, 1, 500);
  const auto b = MakeWave(1.5, 16000, 1, -700);
  const auto joined = AssembleSimAudio(a, b);
  const size_t a_frames = 16000;
  const size_t silence_frames = 2 * 16000;
  REQUIRE(joined.frames() == a_frames + silence_frames + 24000);
  for (size_t i = 0; i < silence_frames; ++i) {
    REQUIRE(joined.samples[a_frames + i] == 0);
  }
  CHECK(joined.samples[a_frames - 1] == 500);
  CHECK(joined.samples[a_frames + silence_frames] == -700);
}

TEST_CASE("assemble: duration law over random durations including > 14s") {
  Rng rng(606);
  for (int iter = 0; iter < 50; ++iter) {
    const double la = 0.5 + 19.5 * rng.Uniform01();
    const double lb = 0.5 + 19.5 * rng.Uniform01();
    const int rate = 16000;
    const auto joined = AssembleSimAudio(MakeWave(la, rate), MakeWave(lb, rate));
    const double expected =
        std::min(la, 14.0) + 2.0 + std::min(lb, 14.0);
    const auto expected_frames = static_cast<long long>(
        std::llround(std::min(la, 14.0) * rate) -
        std::llround(la * rate) * 0);  // see below
    (void)expected_frames;
    CHECK(std::abs(static_cast<double>(joined.frames()) - expected * rate) <=
          1.5);  // within one sample of exact (plus input rounding)
    CHECK(joined.frames() <= static_cast<size_t>(30 * rate + 1));
  }
}

TEST_CASE("assemble: custom silence and cap, zero-length and channel errors") {
  SimAssemblyOptions options;
  options.silence_s = 0.5;
  options.max_each_s = 2.0;
  const auto joined =
      AssembleSimAudio(MakeWave(3.0), MakeWave(1.0), options);
  CHECK(joined.frames() == static_cast<size_t>((2.0 + 0.5 + 1.0) * 16000));

  CHECK_THROWS_WITH_AS(
      (void)AssembleSimAudio(MakeWave(0.0), MakeWave(1.0)),
      doctest::Contains("zero-length"), Error);
  CHECK_THROWS_WITH_AS(
      (void)AssembleSimAudio(MakeWave(1.0, 16000, 1), MakeWave(1.0, 16000, 2)),
      doctest::Contains("channel count"), Error);
}

TEST_CASE("assemble: mismatched rates resample to the configured target") {
  SimAssemblyOptions options;
  options.target_rate = 8000;
  const auto joined =
      AssembleSimAudio(MakeWave(1.0, 16000), MakeWave(1.0, 24000), options);
  CHECK(joined.sample_rate == 8000);
  CHECK(std::abs(static_cast<double>(joined.frames()) - 4.0 * 8000) <= 2.0);
}

TEST_CASE("wav io round trip and resampling") {
  TempDir dir;
  auto wave = MakeWave(0.25, 16000, 2, 123);
  wave.samples[10] = -32768;
  wave.samples[11] = 32767;
  WriteWav(dir.file("x.wav"), wave);
  const auto loaded = ReadWav(dir.file("x.wav"));
  CHECK(loaded.sample_rate == wave.sample_rate);
  CHECK(loaded.channels == wave.channels);
  CHECK(loaded.samples == wave.samples);

  const auto up = Resample(MakeWave(1.0, 8000), 16000);
  CHECK(up.sample_rate == 16000);
  CHECK(std::abs(static_cast<double>(up.frames()) - 16000.0) <= 1.0);

  CHECK_THROWS_AS((void)ReadWav(dir.file("missing.wav")), Error);
  WriteFileBytes(dir.file("junk.wav"), "not a wav at all");
  CHECK_THROWS_AS((void)ReadWav(dir.file("junk.wav")), Error);
}

TEST_CASE("assemble from a pair reads relative to the audio root") {
  TempDir dir;
  std::filesystem::create_directories(dir.file("wav"));
  WriteWav(dir.file("wav/a.wav"), MakeWave(1.0));
  WriteWav(dir.file("wav/b.wav"), MakeWave(2.0));
  SimPair pair;
  pair.id = "p";
  pair.audio_a = "wav/a.wav";
  pair.audio_b = "wav/b.wav";
  pair.sim = 4.0;
  const auto joined = AssembleSimAudio(pair, dir.path());
  CHECK(joined.frames() == static_cast<size_t>(5 * 16000));
}

// ---------------------------------------------------------------------------
// Quality descriptions
// ---------------------------------------------------------------------------

TEST_CASE("bin table: coverage, boundaries, validation failures") {
  const BinTable bins = BinTable::Default();
  CHECK(bins.BinIndexFor(Dim::kOverall, 1.0) == 0);
  CHECK(bins.BinIndexFor(Dim::kOverall, 5.0) == 4);  // top bin closed
  CHECK(bins.BinIndexFor(Dim::kOverall, 1.8) == 1);  // lower edges belong up
  CHECK(bins.BinIndexFor(Dim::kNoisiness, 2.5) == 1);
  CHECK_THROWS_WITH_AS((void)bins.BinIndexFor(Dim::kOverall, 5.5),
                       doctest::Contains("outside bin coverage"), Error);
  CHECK_THROWS_AS((void)bins.BinIndexFor(Dim::kOverall, 0.5), Error);

  CHECK_THROWS_WITH_AS(
      (void)BinTable::FromJsonText(R"({"dimensions": {
        "noisiness": [{"lo": 1.0, "hi": 5.0, "phrases": ["x"]}],
        "distortion": [{"lo": 1.0, "hi": 5.0, "phrases": ["x"]}],
        "discontinuity": [{"lo": 1.0, "hi": 4.0, "phrases": ["x"]}],
        "overall": [{"lo": 1.0, "hi": 5.0, "phrases": ["x"]}]}})"),
      doctest::Contains("cover [1,5]"), Error);
  CHECK_THROWS_WITH_AS(
      (void)BinTable::FromJsonText(R"({"dimensions": {
        "noisiness": [{"lo": 1.0, "hi": 3.0, "phrases": ["x"]},
                      {"lo": 3.5, "hi": 5.0, "phrases": ["y"]}],
        "distortion": [{"lo": 1.0, "hi": 5.0, "phrases": ["x"]}],
        "discontinuity": [{"lo": 1.0, "hi": 5.0, "phrases": ["x"]}],
        "overall": [{"lo": 1.0, "hi": 5.0, "phrases": ["x"]}]}})"),
      doctest::Contains("contiguous"), Error);
}

TEST_CASE("the shipped bin table matches the built-in one") {
  const auto path =
      std::filesystem::path(SQA_SOURCE_DIR) / "data/bin_table.json";
  const BinTable from_file = BinTable::Load(path);
  const BinTable built_in = BinTable::Default();
  for (Dim d : kAllDims) {
    const auto& a = from_file.bins(d);
    const auto& b = built_in.bins(d);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].lo == b[i].lo);
      CHECK(a[i].hi == b[i].hi);
      CHECK(a[i].phrases == b[i].phrases);
    }
  }
}

TEST_CASE("bin phrases never collide across bins of one dimension") {
  // The bin-match judge relies on full-phrase containment being unambiguous.
  const BinTable bins = BinTable::Default();
  for (Dim d : kAllDims) {
    const auto& all = bins.bins(d);
    for (size_t i = 0; i < all.size(); ++i) {
      for (const auto& pi : all[i].phrases) {
        for (size_t j = 0; j < all.size(); ++j) {
          if (i == j) continue;
          for (const auto& pj : all[j].phrases) {
            CHECK(pi.find(pj) == std::string::npos);
          }
        }
      }
    }
  }
}

TEST_CASE("describe_quality: boundary bins assert the extreme phrases") {
  const BinTable bins = BinTable::Default();
  DimensionRating top{"u", 5.0, 5.0, 5.0, 5.0};
  auto result = DescribeQuality(top, bins);
  for (Dim d : kAllDims) {
    CHECK(result.description.text.find(bins.bins(d).back().phrases[0]) !=
          std::string::npos);
  }
  CHECK(bins.MentionsAllDimensions(result.description.text));

  DimensionRating bottom{"u", 1.0, 1.0, 1.0, 1.0};
  result = DescribeQuality(bottom, bins);
  for (Dim d : kAllDims) {
    CHECK(result.description.text.find(bins.bins(d).front().phrases[0]) !=
          std::string::npos);
  }
}

TEST_CASE("describe_quality reproduces the reference mid-range sentence") {
  const BinTable bins = BinTable::Default();
  const DimensionRating dims{"u7", 2.5, 2.0, 3.0, 3.0};
  const auto result = DescribeQuality(dims, bins);
  CHECK(result.description.text ==
        "The audio recording has a noticeable distortion and is somewhat "
        "disjointed, with background noise present. The overall quality of "
        "the recording is average.");
  CHECK_FALSE(result.paraphrase_fell_back);
  CHECK(result.description.utterance_id == "u7");
}

TEST_CASE("describe_quality is pure without a paraphraser") {
  const BinTable bins = BinTable::Default();
  Rng rng(13);
  for (int iter = 0; iter < 50; ++iter) {
    DimensionRating dims{"u", OneDecimalScore(rng, 1, 5), OneDecimalScore(rng, 1, 5),
                         OneDecimalScore(rng, 1, 5), OneDecimalScore(rng, 1, 5)};
    CHECK(DescribeQuality(dims, bins).description.text ==
          DescribeQuality(dims, bins).description.text);
  }
}

TEST_CASE("raising only the overall score never lowers its bin") {
  const BinTable bins = BinTable::Default();
  Rng rng(21);
  for (int iter = 0; iter < 300; ++iter) {
    const double lo = 1.0 + 4.0 * rng.Uniform01();
    const double hi = lo + (5.0 - lo) * rng.Uniform01();
    CHECK(bins.BinIndexFor(Dim::kOverall, hi) >=
          bins.BinIndexFor(Dim::kOverall, lo));
  }
}

namespace {

class UpcasePara : public ParaphraseService {
 public:
  std::string Rewrite(const std::string& text) override {
    std::string out = text;
    if (!out.empty()) out[0] = 'P';
    return out;
  }
};

class BrokenPara : public ParaphraseService {
 public:
  std::string Rewrite(const std::string&) override {
    throw std::runtime_error("service down");
  }
};

}  // namespace

TEST_CASE("paraphraser rewrites; failures fall back with the warning flag") {
  const BinTable bins = BinTable::Default();
  const DimensionRating dims{"u", 3.0, 3.0, 3.0, 3.0};

  UpcasePara upcase;
  auto rewritten = DescribeQuality(dims, bins, &upcase);
  CHECK(rewritten.description.text[0] == 'P');
  CHECK_FALSE(rewritten.paraphrase_fell_back);

  BrokenPara broken;
  auto fallback = DescribeQuality(dims, bins, &broken);
  CHECK(fallback.paraphrase_fell_back);
  CHECK(fallback.description.text ==
        DescribeQuality(dims, bins).description.text);
}

// ---------------------------------------------------------------------------
// Task examples
// ---------------------------------------------------------------------------

TEST_CASE("task examples: prompt choice is deterministic per seed and id") {
  const PromptBank bank = PromptBank::Default();
  const auto utts = SyntheticUtterances(20, Dataset::kBvcc, Split::kTest, 55);
  const auto a = BuildMosExamples(utts, bank, 1234);
  const auto b = BuildMosExamples(utts, bank, 1234);
  REQUIRE(a.size() == b.size());
  std::set<int> variants;
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].prompt == b[i].prompt);
    CHECK(a[i].prompt_variant == b[i].prompt_variant);
    variants.insert(a[i].prompt_variant);
  }
  CHECK(variants.size() > 1);  // different items draw different variants
}

TEST_CASE("task examples: prompt modes render MOS prompts accordingly") {
  const PromptBank bank = PromptBank::Default();
  const auto utts = SyntheticUtterances(5, Dataset::kBvcc, Split::kTest, 55);

  ExampleBuildOptions dataset_specific;
  dataset_specific.prompt_mode = PromptMode::kDatasetSpecific;
  for (const auto& ex : BuildMosExamples(utts, bank, 1, dataset_specific)) {
    CHECK(ex.prompt.find("according to BVCC standards") != std::string::npos);
    CHECK(std::get<double>(ex.truth) >= 1.0);
    CHECK(ex.system_id.has_value());
    CHECK(ex.dataset == Dataset::kBvcc);
    CHECK(ex.audio_refs.size() == 1);
  }

  ExampleBuildOptions single;
  single.prompt_mode = PromptMode::kSingle;
  for (const auto& ex : BuildMosExamples(utts, bank, 1, single)) {
    CHECK(ex.prompt.find("according to") == std::string::npos);
    CHECK(ex.prompt.find("{Dataset}") == std::string::npos);
  }

  ExampleBuildOptions average;
  average.prompt_mode = PromptMode::kAverageStandards;
  for (const auto& ex : BuildMosExamples(utts, bank, 1, average)) {
    CHECK(ex.prompt.find("{Dataset}") != std::string::npos);
  }
}

TEST_CASE("task examples: AB schema carries two refs and a choice truth") {
  const PromptBank bank = PromptBank::Default();
  const std::vector<RatedUtterance> utts{SomosUtt("a", "hello", 4.1),
                                         SomosUtt("b", "hello", 2.9)};
  const auto pairs = BuildAbPairs(utts, 3);
  const auto examples = BuildAbExamples(pairs, bank, 3);
  REQUIRE(examples.size() == 1);
  CHECK(examples[0].task == Task::kAb);
  CHECK(examples[0].audio_refs.size() == 2);
  const auto& truth = std::get<AbTruth>(examples[0].truth);
  CHECK(truth.delta_mos == doctest::Approx(1.2));
  CHECK((truth.better == AbChoice::kA || truth.better == AbChoice::kB));
}

TEST_CASE("task examples: DESC joins dimensions and skips unmatched rows") {
  const PromptBank bank = PromptBank::Default();
  const BinTable bins = BinTable::Default();
  auto utts = SyntheticUtterances(4, Dataset::kNisqa, Split::kTest, 9);
  std::vector<DimensionRating> dims;
  for (size_t i = 0; i + 1 < utts.size(); ++i) {  // last one has no ratings
    dims.push_back({utts[i].id, 2.5, 2.0, 3.0, 3.0});
  }
  const auto examples = BuildDescExamples(utts, dims, bins, bank, 4);
  REQUIRE(examples.size() == 3);
  for (const auto& ex : examples) {
    const auto& desc = std::get<QualityDescription>(ex.truth);
    CHECK(bins.MentionsAllDimensions(desc.text));
    CHECK(desc.dimensions.noisiness == 2.5);
  }
}

TEST_CASE("task files round trip every truth payload") {
  TempDir dir;
  const PromptBank bank = PromptBank::Default();
  const BinTable bins = BinTable::Default();

  std::vector<TaskExample> examples;
  {
    const auto utts = SyntheticUtterances(3, Dataset::kBvcc, Split::kTest, 8);
    auto mos = BuildMosExamples(utts, bank, 2);
    examples.insert(examples.end(), mos.begin(), mos.end());
  }
  {
    std::vector<SimPair> pairs(2);
    pairs[0] = {"s0", "a0.wav", "b0.wav", 4.3, Split::kTest};
    pairs[1] = {"s1", "a1.wav", "b1.wav", 1.0, Split::kTest};
    auto sim = BuildSimExamples(pairs, bank, 2);
    examples.insert(examples.end(), sim.begin(), sim.end());
  }
  {
    const std::vector<RatedUtterance> utts{SomosUtt("x", "t", 4.0),
                                           SomosUtt("y", "t", 2.0)};
    auto ab = BuildAbExamples(BuildAbPairs(utts, 2), bank, 2);
    examples.insert(examples.end(), ab.begin(), ab.end());
  }
  {
    auto utts = SyntheticUtterances(1, Dataset::kNisqa, Split::kTest, 8);
    const std::vector<DimensionRating> dims{{utts[0].id, 5, 5, 5, 5}};
    auto desc = BuildDescExamples(utts, dims, bins, bank, 2);
    examples.insert(examples.end(), desc.begin(), desc.end());
  }

  // One file per task kind, as the build command writes them.
  for (Task task : {Task::kMos, Task::kSim, Task::kAb, Task::kDesc}) {
    std::vector<TaskExample> of_task;
    for (const auto& ex : examples) {
      if (ex.task == task) of_task.push_back(ex);
    }
    const auto path = dir.file(std::string(TaskName(task)) + ".jsonl");
    WriteTaskFile(path, of_task);
    const auto loaded = ReadTaskFile(path);
    REQUIRE(loaded.size() == of_task.size());
    for (size_t i = 0; i < loaded.size(); ++i) {
      CHECK(loaded[i].id == of_task[i].id);
      CHECK(loaded[i].task == of_task[i].task);
      CHECK(loaded[i].audio_refs == of_task[i].audio_refs);
      CHECK(loaded[i].prompt == of_task[i].prompt);
      CHECK(loaded[i].prompt_variant == of_task[i].prompt_variant);
      CHECK(loaded[i].system_id == of_task[i].system_id);
      if (task == Task::kMos || task == Task::kSim) {
        CHECK(std::get<double>(loaded[i].truth) ==
              std::get<double>(of_task[i].truth));
      } else if (task == Task::kAb) {
        CHECK(std::get<AbTruth>(loaded[i].truth).better ==
              std::get<AbTruth>(of_task[i].truth).better);
        CHECK(std::get<AbTruth>(loaded[i].truth).delta_mos ==
              std::get<AbTruth>(of_task[i].truth).delta_mos);
      } else {
        CHECK(std::get<QualityDescription>(loaded[i].truth).text ==
              std::get<QualityDescription>(of_task[i].truth).text);
      }
    }
  }
}
