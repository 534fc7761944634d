// tests/testutil.h

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

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "sqa/metrics.h"
#include "sqa/rng.h"
#include "sqa/types.h"

namespace sqa::test {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<uint64_t> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("sqa_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void WriteFileBytes(const std::filesystem::path& path,
                           const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// ---------------------------------------------------------------------------
// Independent metric oracles. These deliberately use different formulas and
// summation orders than the library so the two paths cross-check each other.
// ---------------------------------------------------------------------------

// Pearson via the raw-moment formula, summed right to left.
inline double OraclePearson(std::span<const double> x,
                            std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (size_t k = x.size(); k-- > 0;) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    syy += y[k] * y[k];
    sxy += x[k] * y[k];
  }
  const double cov = n * sxy - sx * sy;
  const double vx = n * sxx - sx * sx;
  const double vy = n * syy - sy * sy;
  return cov / std::sqrt(vx * vy);
}

// O(n^2) average ranks: rank_i = #less + (#equal + 1) / 2.
inline std::vector<double> BruteAverageRanks(std::span<const double> v) {
  std::vector<double> ranks(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    int less = 0, equal = 0;
    for (size_t j = 0; j < v.size(); ++j) {
      less += v[j] < v[i];
      equal += v[j] == v[i];
    }
    ranks[i] = less + (equal + 1) / 2.0;
  }
  return ranks;
}

inline double BruteSrcc(std::span<const double> pred,
                        std::span<const double> truth) {
  const auto rp = BruteAverageRanks(pred);
  const auto rt = BruteAverageRanks(truth);
  return OraclePearson(rp, rt);
}

// Right-to-left summation order, unlike the library's pairwise scheme.
inline double OracleMse(std::span<const double> pred,
                        std::span<const double> truth) {
  double s = 0;
  for (size_t k = pred.size(); k-- > 0;) {
    const double d = pred[k] - truth[k];
    s += d * d;
  }
  return s / static_cast<double>(pred.size());
}

inline bool HasVariance(std::span<const double> v) {
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i] != v[0]) return true;
  }
  return false;
}

inline std::vector<ScorePair> MakePairs(std::span<const double> pred,
                                        std::span<const double> truth) {
  std::vector<ScorePair> pairs(pred.size());
  for (size_t i = 0; i < pred.size(); ++i) {
    pairs[i] = {"item" + std::to_string(i), pred[i], truth[i], {}};
  }
  return pairs;
}

// One-decimal score in [lo, hi], the precision real rating corpora carry.
inline double OneDecimalScore(Rng& rng, double lo, double hi) {
  const auto steps = static_cast<uint64_t>((hi - lo) * 10 + 0.5);
  return lo + static_cast<double>(rng.UniformIndex(steps + 1)) / 10.0;
}

// Synthetic rated utterances; one-decimal MOS, optional system labels.
inline std::vector<RatedUtterance> SyntheticUtterances(
    int n, Dataset dataset, Split split, uint64_t seed, int num_systems = 8,
    bool with_transcripts = false) {
  Rng rng(seed);
  std::vector<RatedUtterance> utts;
  utts.reserve(n);
  for (int i = 0; i < n; ++i) {
    RatedUtterance u;
    u.id = std::string(SplitName(split)) + "_u" + std::to_string(i);
    u.audio = "wav/" + u.id + ".wav";
    u.mos = OneDecimalScore(rng, kMosMin, kMosMax);
    u.dataset = dataset;
    u.split = split;
    if (dataset != Dataset::kNisqa) {
      u.system_id = "sys" + std::to_string(rng.UniformIndex(num_systems));
    }
    if (with_transcripts) {
      u.transcript = "text " + std::to_string(rng.UniformIndex(40));
    }
    utts.push_back(std::move(u));
  }
  return utts;
}

}  // namespace sqa::test
