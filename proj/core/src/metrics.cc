// core/src/metrics.cc

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

#include "sqa/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "sqa/error.h"

namespace sqa {

std::string_view LevelName(Level level) {
  return level == Level::kUtterance ? "utterance" : "system";
}

namespace {

// Pairwise (cascade) summation: O(log n) error growth instead of O(n),
// which matters at corpus sizes around 25k items.
double PairwiseSum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const size_t half = v.size() / 2;
  return PairwiseSum(v.first(half)) + PairwiseSum(v.subspan(half));
}

double Mean(std::span<const double> v) {
  return PairwiseSum(v) / static_cast<double>(v.size());
}

// Pearson correlation of two equal-length vectors. Computed via the ratio
// form sign * sqrt((sxy/sxx) * (sxy/syy)) so that bitwise-identical (or
// exactly negated) inputs give exactly +/-1.0.
double Pearson(std::span<const double> x, std::span<const double> y) {
  const size_t n = x.size();
  if (n < 2) throw Error("correlation needs at least 2 items");
  const double mx = Mean(x);
  const double my = Mean(y);
  std::vector<double> xy(n), xx(n), yy(n);
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    xy[i] = dx * dy;
    xx[i] = dx * dx;
    yy[i] = dy * dy;
  }
  const double sxy = PairwiseSum(xy);
  const double sxx = PairwiseSum(xx);
  const double syy = PairwiseSum(yy);
  if (sxx == 0.0 || syy == 0.0) {
    throw ZeroVarianceError("correlation undefined: zero variance on one side");
  }
  if (sxy == 0.0) return 0.0;
  const double r2 = (sxy / sxx) * (sxy / syy);
  const double r = std::copysign(std::sqrt(r2), sxy);
  return std::clamp(r, -1.0, 1.0);
}

// Average ranks, ties receiving the mean of the positions they occupy.
std::vector<double> AverageRanks(std::span<const double> values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share the mean 1-based rank.
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

void SplitColumns(std::span<const ScorePair> pairs, std::vector<double>& pred,
                  std::vector<double>& truth) {
  pred.resize(pairs.size());
  truth.resize(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (!std::isfinite(pairs[i].predicted) || !std::isfinite(pairs[i].truth)) {
      throw Error("non-finite score for item '" + pairs[i].item_id + "'");
    }
    pred[i] = pairs[i].predicted;
    truth[i] = pairs[i].truth;
  }
}

}  // namespace

double Lcc(std::span<const ScorePair> pairs) {
  std::vector<double> pred, truth;
  SplitColumns(pairs, pred, truth);
  return Pearson(pred, truth);
}

double Srcc(std::span<const ScorePair> pairs) {
  std::vector<double> pred, truth;
  SplitColumns(pairs, pred, truth);
  if (pred.size() < 2) throw Error("correlation needs at least 2 items");
  const auto rp = AverageRanks(pred);
  const auto rt = AverageRanks(truth);
  return Pearson(rp, rt);
}

double Mse(std::span<const ScorePair> pairs) {
  if (pairs.empty()) throw Error("mse needs at least 1 item");
  std::vector<double> sq(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    const double d = pairs[i].predicted - pairs[i].truth;
    sq[i] = d * d;
  }
  return Mean(sq);
}

MetricReport UtteranceLevel(std::span<const ScorePair> pairs) {
  MetricReport r;
  r.level = Level::kUtterance;
  r.lcc = Lcc(pairs);
  r.srcc = Srcc(pairs);
  r.mse = Mse(pairs);
  r.n = static_cast<int>(pairs.size());
  return r;
}

MetricReport SystemLevel(std::span<const ScorePair> pairs) {
  std::map<std::string, std::vector<const ScorePair*>> systems;
  for (const auto& p : pairs) {
    if (!p.system_id) {
      throw Error("system-level metrics: item '" + p.item_id +
                  "' has no system id");
    }
    systems[*p.system_id].push_back(&p);
  }
  if (systems.size() < 2) {
    throw Error("system-level metrics need at least 2 systems, got " +
                std::to_string(systems.size()));
  }
  std::vector<ScorePair> means;
  means.reserve(systems.size());
  for (const auto& [system_id, items] : systems) {
    std::vector<double> pred(items.size()), truth(items.size());
    for (size_t i = 0; i < items.size(); ++i) {
      pred[i] = items[i]->predicted;
      truth[i] = items[i]->truth;
    }
    ScorePair mean;
    mean.item_id = system_id;
    mean.system_id = system_id;
    mean.predicted = Mean(pred);
    mean.truth = Mean(truth);
    means.push_back(std::move(mean));
  }
  MetricReport r;
  r.level = Level::kSystem;
  r.lcc = Lcc(means);
  r.srcc = Srcc(means);
  r.mse = Mse(means);
  r.n = static_cast<int>(means.size());
  return r;
}

AbAccuracyReport ComputeAbAccuracy(std::span<const Prediction> preds,
                                   std::span<const AbItem> items,
                                   double threshold) {
  if (threshold < 0.0) throw Error("ab accuracy: threshold must be >= 0");
  std::unordered_map<std::string, const AbItem*> by_id;
  by_id.reserve(items.size());
  for (const auto& it : items) by_id[it.item_id] = &it;

  AbAccuracyReport report;
  report.threshold = threshold;
  int correct_overall = 0;
  int correct_conditional = 0;
  for (const auto& p : preds) {
    if (p.status != ParseStatus::kOk || !p.choice) continue;
    const auto it = by_id.find(p.item_id);
    if (it == by_id.end()) continue;
    const bool correct = *p.choice == it->second->better;
    ++report.n_overall;
    correct_overall += correct;
    if (it->second->delta_mos > threshold) {
      ++report.n_conditional;
      correct_conditional += correct;
    }
  }
  if (report.n_overall == 0) {
    throw Error("ab accuracy: no overlapping ok predictions");
  }
  report.overall = static_cast<double>(correct_overall) / report.n_overall;
  report.conditional =
      report.n_conditional == 0
          ? 0.0
          : static_cast<double>(correct_conditional) / report.n_conditional;
  return report;
}

AverageResult AveragePrompts(std::span<const Prediction> preds,
                             int expected_per_item) {
  // Group ok predictions per item, preserving first-seen item order.
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<double>> ok_values;
  std::unordered_map<std::string, bool> seen;
  for (const auto& p : preds) {
    if (p.averaged) continue;  // never average an average
    if (!seen[p.item_id]) {
      seen[p.item_id] = true;
      order.push_back(p.item_id);
    }
    if (p.status == ParseStatus::kOk && p.value) {
      ok_values[p.item_id].push_back(*p.value);
    }
  }
  AverageResult result;
  for (const auto& id : order) {
    const auto it = ok_values.find(id);
    if (it == ok_values.end() || it->second.empty()) {
      ++result.n_dropped;
      continue;
    }
    AveragedPrediction avg;
    avg.item_id = id;
    avg.n_used = static_cast<int>(it->second.size());
    avg.value = Mean(it->second);
    avg.partial = expected_per_item > 0 && avg.n_used < expected_per_item;
    result.items.push_back(std::move(avg));
  }
  return result;
}

JudgeSummary JudgeMean(std::span<const JudgeOutcome> outcomes) {
  JudgeSummary summary;
  std::vector<double> scores;
  for (const auto& o : outcomes) {
    if (o.failed) {
      ++summary.n_failed;
      continue;
    }
    scores.push_back(o.verdict.score);
    ++summary.n_ok;
  }
  if (scores.empty()) {
    throw Error("judge mean: all verdicts failed");
  }
  summary.mean = Mean(scores);
  return summary;
}

}  // namespace sqa
