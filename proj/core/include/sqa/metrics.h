// core/include/sqa/metrics.h

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
#include <span>
#include <string>
#include <vector>

#include "sqa/respparse.h"
#include "sqa/types.h"

namespace sqa {

// One scored item: a parsed prediction joined with its ground truth.
struct ScorePair {
  std::string item_id;
  double predicted = 0.0;
  double truth = 0.0;
  std::optional<std::string> system_id;
};

enum class Level { kUtterance, kSystem };
std::string_view LevelName(Level level);

struct MetricReport {
  Level level = Level::kUtterance;
  double lcc = 0.0;
  double srcc = 0.0;
  double mse = 0.0;
  int n = 0;  // items at this level (utterances or systems)
};

// Pearson product-moment correlation. Needs >= 2 items and nonzero variance
// on both sides; zero variance raises ZeroVarianceError rather than
// returning 0 or NaN.
double Lcc(std::span<const ScorePair> pairs);

// Spearman rank correlation: Pearson over average ranks, ties receiving the
// mean of their rank positions. The tie-free 1 - 6*sum(d^2)/(n(n^2-1))
// shortcut agrees with this definition only without ties and is not used.
double Srcc(std::span<const ScorePair> pairs);

// Mean squared error; needs >= 1 item.
double Mse(std::span<const ScorePair> pairs);

MetricReport UtteranceLevel(std::span<const ScorePair> pairs);

// Per-system means of predicted and truth first, then the three metrics over
// the system means. Every item must carry a system id and there must be at
// least two systems.
MetricReport SystemLevel(std::span<const ScorePair> pairs);

// Ground-truth side of one A/B item.
struct AbItem {
  std::string item_id;
  AbChoice better = AbChoice::kA;
  double delta_mos = 0.0;
};

struct AbAccuracyReport {
  double overall = 0.0;      // over ok predictions
  double conditional = 0.0;  // over pairs with delta_mos > threshold
  int n_overall = 0;
  int n_conditional = 0;
  double threshold = 0.5;
};

// Fraction of ok-status predictions matching `better`, plus the same
// fraction restricted to pairs whose MOS gap exceeds the threshold.
AbAccuracyReport ComputeAbAccuracy(std::span<const Prediction> preds,
                                   std::span<const AbItem> items,
                                   double threshold = 0.5);

struct AveragedPrediction {
  std::string item_id;
  double value = 0.0;
  int n_used = 0;
  bool partial = false;  // fewer ok predictions than prompts issued
};

struct AverageResult {
  std::vector<AveragedPrediction> items;
  int n_dropped = 0;  // items with zero ok predictions
};

// Arithmetic mean of the ok predictions per item (the multi-standard
// averaging mode). `expected_per_item` marks partial coverage; <= 0 disables
// the flag.
AverageResult AveragePrompts(std::span<const Prediction> preds,
                             int expected_per_item = 0);

// Judge scoring output for one description (see adapters). Declared here so
// the aggregation lives with the other metrics.
struct JudgeVerdict {
  std::string item_id;
  double score = 0.0;  // in [0,1]
  std::string rationale;
};

struct JudgeOutcome {
  std::string item_id;
  bool failed = false;
  JudgeVerdict verdict;
};

struct JudgeSummary {
  double mean = 0.0;  // over non-failed verdicts
  int n_ok = 0;
  int n_failed = 0;
};

JudgeSummary JudgeMean(std::span<const JudgeOutcome> outcomes);

}  // namespace sqa
