// core/include/sqa/types.h

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

#include <optional>
#include <string>
#include <string_view>

namespace sqa {

enum class Dataset { kNisqa, kBvcc, kSomos };
enum class Split { kTrain, kValid, kTest };
enum class Task { kMos, kSim, kAb, kDesc };
enum class AbChoice { kA, kB };

std::string_view DatasetName(Dataset d);  // "NISQA" / "BVCC" / "SOMOS"
std::string_view SplitName(Split s);      // "train" / "valid" / "test"
std::string_view TaskName(Task t);        // "MOS" / "SIM" / "AB" / "DESC"
std::string_view AbChoiceName(AbChoice c);  // "A" / "B"

std::optional<Dataset> ParseDatasetName(std::string_view name);
std::optional<Split> ParseSplitName(std::string_view name);
std::optional<Task> ParseTaskName(std::string_view name);
std::optional<AbChoice> ParseAbChoiceName(std::string_view name);

// Score ranges of the rating scales.
inline constexpr double kMosMin = 1.0;
inline constexpr double kMosMax = 5.0;
inline constexpr double kSimMin = 1.0;
inline constexpr double kSimMax = 6.0;

// One audio sample with a mean-opinion-score ground truth. BVCC and SOMOS
// records always carry a system id; NISQA has no system labels.
struct RatedUtterance {
  std::string id;
  std::string audio;  // path relative to the configured audio root
  std::optional<std::string> transcript;
  std::optional<std::string> system_id;
  double mos = 0.0;  // in [1,5]
  Dataset dataset = Dataset::kNisqa;
  Split split = Split::kTrain;
};

// Per-aspect quality ratings for one utterance, each on [1,5].
struct DimensionRating {
  std::string utterance_id;
  double noisiness = 0.0;
  double distortion = 0.0;
  double discontinuity = 0.0;
  double overall = 0.0;
};

// Two utterances with a speaker-similarity ground truth on [1,6].
struct SimPair {
  std::string id;
  std::string audio_a;
  std::string audio_b;
  double sim = 0.0;
  Split split = Split::kTrain;
};

}  // namespace sqa
