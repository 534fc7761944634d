// core/include/sqa/rng.h

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
#include <string_view>
#include <utility>
#include <vector>

namespace sqa {

// Deterministic pseudo-random stream (splitmix64). All randomness in the
// harness flows through this class so that a run is reproducible from its
// seed on any platform; standard-library distributions are avoided because
// their output is implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t Next();

  // Uniform in [0,1) with 53 random bits.
  double Uniform01();

  // Unbiased uniform in {0, ..., n-1}; n must be > 0.
  uint64_t UniformIndex(uint64_t n);

  // Standard normal via Box-Muller; draws two values per pair and caches
  // the spare.
  double Gaussian();
  double Gaussian(double mean, double stddev) { return mean + stddev * Gaussian(); }

  template <typename T>
  void Shuffle(std::vector<T>& v) {
    if (v.empty()) return;
    for (uint64_t i = v.size() - 1; i > 0; --i) {
      std::swap(v[i], v[UniformIndex(i + 1)]);
    }
  }

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a over bytes; also used for file checksums and config hashes.
uint64_t Fnv1a(std::string_view bytes);

uint64_t MixSeed(uint64_t a, uint64_t b);

// Seed for a named child stream of a master seed. Named substreams keep the
// different uses of randomness (splitting, pairing, prompt choice, oracle
// noise) independent of each other.
uint64_t SubstreamSeed(uint64_t master_seed, std::string_view name);

}  // namespace sqa
