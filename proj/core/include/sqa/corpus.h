// core/include/sqa/corpus.h

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
#include <span>
#include <vector>

#include "sqa/types.h"

namespace sqa {

// Manifest ingestion for the rating corpora. One canonical delimited-text
// schema per task; per-dataset raw formats are expected to be converted to
// it by thin import scripts. Loaded collections are immutable value types
// and safe to share across threads.
//
// MOS manifest header:       id,audio,transcript,system_id,mos,split
// SIM manifest header:       id,audio_a,audio_b,sim,split
// Dimension manifest header: utterance_id,noisiness,distortion,discontinuity,overall
//
// An empty field means the value is absent. BVCC and SOMOS rows must carry a
// system id; NISQA rows need not (the corpus has no system labels).

std::vector<RatedUtterance> LoadMosManifest(const std::filesystem::path& path,
                                            Dataset dataset);
void WriteMosManifest(const std::filesystem::path& path,
                      std::span<const RatedUtterance> utts);

std::vector<SimPair> LoadSimManifest(const std::filesystem::path& path);
void WriteSimManifest(const std::filesystem::path& path,
                      std::span<const SimPair> pairs);

std::vector<DimensionRating> LoadDimensionManifest(
    const std::filesystem::path& path);
void WriteDimensionManifest(const std::filesystem::path& path,
                            std::span<const DimensionRating> dims);

struct SimResplit {
  std::vector<SimPair> train;
  std::vector<SimPair> valid;
};

// Re-divides a training-only SIM collection into train/valid. Pair order is
// shuffled with a seeded generator and cut at round(ratio * N); the result is
// a partition of the input and is deterministic for a fixed seed. All input
// pairs must carry split=train; ratio must lie in (0,1).
SimResplit ResplitVoxsim(std::vector<SimPair> pairs, double ratio,
                         uint64_t seed);

// Groups utterances by system id for system-level evaluation. Every
// utterance must carry a system id; keys are sorted.
std::map<std::string, std::vector<RatedUtterance>> GroupBySystem(
    std::span<const RatedUtterance> utts);

}  // namespace sqa
