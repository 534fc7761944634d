// core/include/sqa/audio.h

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
#include <vector>

namespace sqa {

// In-memory 16-bit PCM audio, interleaved when multichannel.
struct WaveData {
  int sample_rate = 0;
  int channels = 1;
  std::vector<int16_t> samples;

  size_t frames() const {
    return channels > 0 ? samples.size() / channels : 0;
  }
  double seconds() const {
    return sample_rate > 0 ? static_cast<double>(frames()) / sample_rate : 0.0;
  }
};

// Reads a RIFF/WAVE file holding 16-bit PCM data. Chunks other than
// fmt/data are skipped.
WaveData ReadWav(const std::filesystem::path& path);

void WriteWav(const std::filesystem::path& path, const WaveData& wave);

// Linear-interpolation resampler; returns the input unchanged when the rate
// already matches.
WaveData Resample(const WaveData& wave, int target_rate);

}  // namespace sqa
