// core/src/sslbaseline.cc

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

#include "sqa/sslbaseline.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "sqa/error.h"
#include "sqa/metrics.h"
#include "sqa/rng.h"

namespace sqa {

void ValidateFeatures(const LayeredFeatures& feats) {
  if (feats.layers.empty()) {
    throw Error("features of '" + feats.utterance_id + "' have no layers");
  }
  const int t = feats.layers[0].rows;
  const int d = feats.layers[0].cols;
  if (t <= 0 || d <= 0) throw Error("empty feature matrix");
  for (const auto& layer : feats.layers) {
    if (layer.rows != t || layer.cols != d) {
      throw Error("layers of '" + feats.utterance_id +
                  "' differ in shape");
    }
  }
}

std::vector<double> Softmax(std::span<const double> logits) {
  if (logits.empty()) throw Error("softmax of empty logits");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> w(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    w[i] = std::exp(logits[i] - m);
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return w;
}

Mat CombineLayers(const LayeredFeatures& feats, const LayerWeights& weights) {
  ValidateFeatures(feats);
  if (static_cast<int>(weights.logits.size()) != feats.num_layers()) {
    throw Error("layer count mismatch: " +
                std::to_string(weights.logits.size()) + " logits vs " +
                std::to_string(feats.num_layers()) + " layers");
  }
  const auto w = Softmax(weights.logits);
  Mat out(feats.frames(), feats.dim());
  for (size_t l = 0; l < feats.layers.size(); ++l) {
    const auto& layer = feats.layers[l];
    for (size_t i = 0; i < out.data.size(); ++i) {
      out.data[i] += w[l] * layer.data[i];
    }
  }
  return out;
}

namespace {

// Per-layer time means; the downstream heads only ever see the time-mean of
// the combined sequence, and mean(sum_l w_l X_l) == sum_l w_l mean(X_l).
std::vector<std::vector<double>> LayerMeans(const LayeredFeatures& feats) {
  ValidateFeatures(feats);
  std::vector<std::vector<double>> mu(feats.layers.size());
  const int t = feats.frames();
  const int d = feats.dim();
  for (size_t l = 0; l < feats.layers.size(); ++l) {
    mu[l].assign(d, 0.0);
    for (int r = 0; r < t; ++r) {
      for (int c = 0; c < d; ++c) {
        mu[l][c] += feats.layers[l].at(r, c);
      }
    }
    for (int c = 0; c < d; ++c) mu[l][c] /= t;
  }
  return mu;
}

std::vector<double> CombineMeans(const std::vector<std::vector<double>>& mu,
                                 std::span<const double> w) {
  std::vector<double> x(mu[0].size(), 0.0);
  for (size_t l = 0; l < mu.size(); ++l) {
    for (size_t c = 0; c < x.size(); ++c) x[c] += w[l] * mu[l][c];
  }
  return x;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Backprop through softmax: dL/dlogit_l = w_l * (g_l - sum_k w_k g_k) where
// g_l = dL/dweight_l.
std::vector<double> SoftmaxBackward(std::span<const double> w,
                                    std::span<const double> g) {
  double dot = 0.0;
  for (size_t i = 0; i < w.size(); ++i) dot += w[i] * g[i];
  std::vector<double> d(w.size());
  for (size_t i = 0; i < w.size(); ++i) d[i] = w[i] * (g[i] - dot);
  return d;
}

std::vector<double> MatVec(const Mat& m, std::span<const double> v) {
  std::vector<double> out(m.rows, 0.0);
  for (int r = 0; r < m.rows; ++r) {
    double s = 0.0;
    for (int c = 0; c < m.cols; ++c) s += m.at(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

std::vector<double> MatTVec(const Mat& m, std::span<const double> v) {
  std::vector<double> out(m.cols, 0.0);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) out[c] += m.at(r, c) * v[r];
  }
  return out;
}

}  // namespace

double PredictMos(const LayeredFeatures& feats, const LayerWeights& weights,
                  const MosHead& head, bool clamp) {
  const Mat combined = CombineLayers(feats, weights);
  if (static_cast<int>(head.weight.size()) != combined.cols) {
    throw Error("head dimension mismatch: " +
                std::to_string(head.weight.size()) + " vs " +
                std::to_string(combined.cols));
  }
  std::vector<double> x(combined.cols, 0.0);
  for (int r = 0; r < combined.rows; ++r) {
    for (int c = 0; c < combined.cols; ++c) x[c] += combined.at(r, c);
  }
  for (double& v : x) v /= combined.rows;
  double pred = head.bias + Dot(head.weight, x);
  if (clamp) pred = std::clamp(pred, kMosMin, kMosMax);
  return pred;
}

double SimFromEmbeddings(std::span<const double> emb_a,
                         std::span<const double> emb_b) {
  if (emb_a.size() != emb_b.size() || emb_a.empty()) {
    throw Error("embedding dimension mismatch");
  }
  const double na = std::sqrt(Dot(emb_a, emb_a));
  const double nb = std::sqrt(Dot(emb_b, emb_b));
  if (na == 0.0 || nb == 0.0) throw Error("zero-norm embedding");
  const double cos = Dot(emb_a, emb_b) / (na * nb);
  return 2.5 * (cos + 1.0) + 1.0;
}

// ---------------------------------------------------------------------------
// Extractor registry
// ---------------------------------------------------------------------------

namespace {

std::mutex g_extractor_mutex;
std::map<std::string, ExtractorFactory>& ExtractorRegistry() {
  static auto* registry = new std::map<std::string, ExtractorFactory>();
  return *registry;
}

class SyntheticExtractor : public FeatureExtractor {
 public:
  SyntheticExtractor(int layers, int frames, int dim)
      : layers_(layers), frames_(frames), dim_(dim) {
    if (layers <= 0 || frames <= 0 || dim <= 0) {
      throw Error("synthetic extractor needs positive shape");
    }
  }
  std::string name() const override { return "synthetic"; }
  LayeredFeatures Extract(const std::string& audio_ref) override {
    LayeredFeatures feats;
    feats.utterance_id = audio_ref;
    Rng rng(MixSeed(0x5351415f53594eULL, Fnv1a(audio_ref)));
    feats.layers.reserve(layers_);
    for (int l = 0; l < layers_; ++l) {
      Mat m(frames_, dim_);
      for (double& v : m.data) v = rng.Gaussian();
      feats.layers.push_back(std::move(m));
    }
    return feats;
  }

 private:
  int layers_, frames_, dim_;
};

int ExtractorParamInt(const ExtractorParams& params, const std::string& key,
                      int dflt) {
  const auto it = params.find(key);
  return it == params.end() ? dflt : std::stoi(it->second);
}

}  // namespace

void RegisterExtractor(const std::string& name, ExtractorFactory factory) {
  std::lock_guard lock(g_extractor_mutex);
  ExtractorRegistry()[name] = std::move(factory);
}

std::unique_ptr<FeatureExtractor> MakeExtractor(const std::string& name,
                                                const ExtractorParams& params) {
  if (name == "synthetic") {
    return MakeSyntheticExtractor(ExtractorParamInt(params, "layers", 3),
                                  ExtractorParamInt(params, "frames", 4),
                                  ExtractorParamInt(params, "dim", 8));
  }
  std::lock_guard lock(g_extractor_mutex);
  const auto it = ExtractorRegistry().find(name);
  if (it == ExtractorRegistry().end()) {
    throw Error("unknown feature extractor '" + name + "'");
  }
  return it->second(params);
}

std::unique_ptr<FeatureExtractor> MakeSyntheticExtractor(int layers,
                                                         int frames, int dim) {
  return std::make_unique<SyntheticExtractor>(layers, frames, dim);
}

// ---------------------------------------------------------------------------
// Losses and gradients
// ---------------------------------------------------------------------------

MosGrad MosLossGrad(const LayeredFeatures& feats, const LayerWeights& weights,
                    const MosHead& head, double target) {
  ValidateFeatures(feats);
  if (static_cast<int>(weights.logits.size()) != feats.num_layers()) {
    throw Error("layer count mismatch");
  }
  if (static_cast<int>(head.weight.size()) != feats.dim()) {
    throw Error("head dimension mismatch");
  }
  const auto mu = LayerMeans(feats);
  const auto w = Softmax(weights.logits);
  const auto x = CombineMeans(mu, w);
  const double pred = head.bias + Dot(head.weight, x);
  const double err = pred - target;

  MosGrad grad;
  grad.loss = err * err;
  const double dpred = 2.0 * err;
  grad.d_bias = dpred;
  grad.d_weight.resize(x.size());
  for (size_t c = 0; c < x.size(); ++c) grad.d_weight[c] = dpred * x[c];
  // dL/dweight_l = dpred * (head.weight . mu_l)
  std::vector<double> g(mu.size());
  for (size_t l = 0; l < mu.size(); ++l) {
    g[l] = dpred * Dot(head.weight, mu[l]);
  }
  grad.d_logits = SoftmaxBackward(w, g);
  return grad;
}

SimGrad SimLossGrad(const LayeredFeatures& feats_a,
                    const LayeredFeatures& feats_b,
                    const LayerWeights& weights, const Mat& embed,
                    double target) {
  ValidateFeatures(feats_a);
  ValidateFeatures(feats_b);
  if (feats_a.dim() != feats_b.dim() || embed.cols != feats_a.dim()) {
    throw Error("embedding head dimension mismatch");
  }
  if (static_cast<int>(weights.logits.size()) != feats_a.num_layers() ||
      feats_a.num_layers() != feats_b.num_layers()) {
    throw Error("layer count mismatch");
  }
  const auto mu_a = LayerMeans(feats_a);
  const auto mu_b = LayerMeans(feats_b);
  const auto w = Softmax(weights.logits);
  const auto xa = CombineMeans(mu_a, w);
  const auto xb = CombineMeans(mu_b, w);
  const auto ea = MatVec(embed, xa);
  const auto eb = MatVec(embed, xb);
  const double na = std::sqrt(Dot(ea, ea));
  const double nb = std::sqrt(Dot(eb, eb));
  if (na == 0.0 || nb == 0.0) throw Error("zero-norm embedding");
  const double cos = Dot(ea, eb) / (na * nb);
  const double score = 2.5 * (cos + 1.0) + 1.0;
  const double err = score - target;

  SimGrad grad;
  grad.loss = err * err;
  const double dcos = 2.0 * err * 2.5;
  const size_t e = ea.size();
  std::vector<double> dea(e), deb(e);
  for (size_t i = 0; i < e; ++i) {
    dea[i] = dcos * (eb[i] / (na * nb) - cos * ea[i] / (na * na));
    deb[i] = dcos * (ea[i] / (na * nb) - cos * eb[i] / (nb * nb));
  }
  grad.d_embed = Mat(embed.rows, embed.cols);
  for (int r = 0; r < embed.rows; ++r) {
    for (int c = 0; c < embed.cols; ++c) {
      grad.d_embed.at(r, c) = dea[r] * xa[c] + deb[r] * xb[c];
    }
  }
  const auto dxa = MatTVec(embed, dea);
  const auto dxb = MatTVec(embed, deb);
  std::vector<double> g(mu_a.size());
  for (size_t l = 0; l < mu_a.size(); ++l) {
    g[l] = Dot(dxa, mu_a[l]) + Dot(dxb, mu_b[l]);
  }
  grad.d_logits = SoftmaxBackward(w, g);
  return grad;
}

// ---------------------------------------------------------------------------
// Joint training
// ---------------------------------------------------------------------------

namespace {

struct AdamState {
  std::vector<double> m, v;
  explicit AdamState(size_t n) : m(n, 0.0), v(n, 0.0) {}
};

void AdamStep(std::span<double> param, std::span<const double> grad,
              AdamState& state, int t, const TrainConfig& cfg) {
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  for (size_t i = 0; i < param.size(); ++i) {
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grad[i];
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    param[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.adam_eps);
  }
}

struct TrainItem {
  Task task = Task::kMos;
  size_t index = 0;  // into mos_train or sim_train
};

// Cache of per-layer time means per audio ref.
class MeanCache {
 public:
  explicit MeanCache(FeatureExtractor& extractor) : extractor_(extractor) {}

  const std::vector<std::vector<double>>& Get(const std::string& ref) {
    auto it = cache_.find(ref);
    if (it != cache_.end()) return it->second;
    LayeredFeatures feats = extractor_.Extract(ref);
    ValidateFeatures(feats);
    auto mu = LayerMeans(feats);
    if (layers_ == 0) {
      layers_ = static_cast<int>(mu.size());
      dim_ = static_cast<int>(mu[0].size());
    } else if (static_cast<int>(mu.size()) != layers_ ||
               static_cast<int>(mu[0].size()) != dim_) {
      throw Error("extractor returned inconsistent shapes for '" + ref + "'");
    }
    return cache_.emplace(ref, std::move(mu)).first->second;
  }

  int layers() const { return layers_; }
  int dim() const { return dim_; }

 private:
  FeatureExtractor& extractor_;
  std::unordered_map<std::string, std::vector<std::vector<double>>> cache_;
  int layers_ = 0;
  int dim_ = 0;
};

// The gradient functions take LayeredFeatures; training runs on cached
// layer means wrapped as single-frame features (the math only ever sees the
// time means, so a 1 x D "sequence" per layer is equivalent).
LayeredFeatures MeansAsFeatures(const std::vector<std::vector<double>>& mu,
                                const std::string& id) {
  LayeredFeatures feats;
  feats.utterance_id = id;
  feats.layers.reserve(mu.size());
  for (const auto& m : mu) {
    Mat layer(1, static_cast<int>(m.size()));
    layer.data = m;
    feats.layers.push_back(std::move(layer));
  }
  return feats;
}

double MeanOf(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

JointTrainResult JointTrain(const TrainData& data, FeatureExtractor& extractor,
                            const TrainConfig& config) {
  if (data.mos_train.empty() && data.sim_train.empty()) {
    throw Error("joint_train: empty training set");
  }
  if (config.epochs <= 0) throw Error("joint_train: epochs must be > 0");
  if (config.batch_size <= 0) throw Error("joint_train: bad batch size");

  MeanCache cache(extractor);
  // Touch one item to learn the feature shape.
  if (!data.mos_train.empty()) {
    cache.Get(data.mos_train[0].audio);
  } else {
    cache.Get(data.sim_train[0].audio_a);
  }
  const int num_layers = cache.layers();
  const int dim = cache.dim();

  SslParams params;
  params.layer_weights[Task::kMos] =
      LayerWeights{Task::kMos, std::vector<double>(num_layers, 0.0)};
  params.layer_weights[Task::kSim] =
      LayerWeights{Task::kSim, std::vector<double>(num_layers, 0.0)};

  // One head per dataset present, bias seeded with the dataset's mean target.
  std::map<Dataset, std::pair<double, int>> target_sums;
  for (const auto& u : data.mos_train) {
    auto& [sum, count] = target_sums[u.dataset];
    sum += u.mos;
    ++count;
  }
  for (const auto& [dataset, sum_count] : target_sums) {
    MosHead head;
    head.dataset = dataset;
    head.weight.assign(dim, 0.0);
    head.bias = sum_count.first / sum_count.second;
    params.heads[dataset] = std::move(head);
  }

  Rng init_rng(SubstreamSeed(config.seed, "init"));
  params.embed = Mat(config.embed_dim, dim);
  const double init_scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (double& v : params.embed.data) v = init_scale * init_rng.Gaussian();

  // Adam state per tensor.
  AdamState adam_mos_logits(num_layers), adam_sim_logits(num_layers);
  AdamState adam_embed(params.embed.data.size());
  std::map<Dataset, AdamState> adam_weight, adam_bias;
  for (const auto& [dataset, head] : params.heads) {
    adam_weight.emplace(dataset, AdamState(head.weight.size()));
    adam_bias.emplace(dataset, AdamState(1));
  }

  std::vector<TrainItem> items;
  for (size_t i = 0; i < data.mos_train.size(); ++i) {
    items.push_back({Task::kMos, i});
  }
  for (size_t i = 0; i < data.sim_train.size(); ++i) {
    items.push_back({Task::kSim, i});
  }

  JointTrainResult result;
  result.record.best_epoch = 0;
  result.record.best_selection = -1e300;
  int adam_t = 0;

  const uint64_t shuffle_seed = SubstreamSeed(config.seed, "train-shuffle");
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Rng rng(MixSeed(shuffle_seed, static_cast<uint64_t>(epoch)));
    rng.Shuffle(items);

    for (size_t start = 0; start < items.size();
         start += static_cast<size_t>(config.batch_size)) {
      const size_t end = std::min(
          items.size(), start + static_cast<size_t>(config.batch_size));
      const double inv_batch = 1.0 / static_cast<double>(end - start);

      std::vector<double> g_mos_logits(num_layers, 0.0);
      std::vector<double> g_sim_logits(num_layers, 0.0);
      std::vector<double> g_embed(params.embed.data.size(), 0.0);
      std::map<Dataset, std::vector<double>> g_weight;
      std::map<Dataset, double> g_bias;
      for (const auto& [dataset, head] : params.heads) {
        g_weight[dataset].assign(head.weight.size(), 0.0);
        g_bias[dataset] = 0.0;
      }

      for (size_t k = start; k < end; ++k) {
        const TrainItem& item = items[k];
        if (item.task == Task::kMos) {
          const auto& u = data.mos_train[item.index];
          const auto feats = MeansAsFeatures(cache.Get(u.audio), u.id);
          const auto grad =
              MosLossGrad(feats, params.layer_weights[Task::kMos],
                          params.heads.at(u.dataset), u.mos);
          for (int l = 0; l < num_layers; ++l) {
            g_mos_logits[l] += inv_batch * grad.d_logits[l];
          }
          auto& gw = g_weight[u.dataset];
          for (size_t c = 0; c < gw.size(); ++c) {
            gw[c] += inv_batch * grad.d_weight[c];
          }
          g_bias[u.dataset] += inv_batch * grad.d_bias;
        } else {
          const auto& p = data.sim_train[item.index];
          const auto fa = MeansAsFeatures(cache.Get(p.audio_a), p.id + ":a");
          const auto fb = MeansAsFeatures(cache.Get(p.audio_b), p.id + ":b");
          const auto grad = SimLossGrad(fa, fb, params.layer_weights[Task::kSim],
                                        params.embed, p.sim);
          for (int l = 0; l < num_layers; ++l) {
            g_sim_logits[l] += inv_batch * grad.d_logits[l];
          }
          for (size_t i = 0; i < g_embed.size(); ++i) {
            g_embed[i] += inv_batch * grad.d_embed.data[i];
          }
        }
      }

      ++adam_t;
      AdamStep(params.layer_weights[Task::kMos].logits, g_mos_logits,
               adam_mos_logits, adam_t, config);
      AdamStep(params.layer_weights[Task::kSim].logits, g_sim_logits,
               adam_sim_logits, adam_t, config);
      AdamStep(params.embed.data, g_embed, adam_embed, adam_t, config);
      for (auto& [dataset, head] : params.heads) {
        AdamStep(head.weight, g_weight[dataset], adam_weight.at(dataset),
                 adam_t, config);
        double bias[1] = {head.bias};
        double gb[1] = {g_bias[dataset]};
        AdamStep(bias, gb, adam_bias.at(dataset), adam_t, config);
        head.bias = bias[0];
      }
    }

    // Validation pass.
    EpochEval eval;
    eval.epoch = epoch;
    std::vector<double> selection_values;
    std::map<Dataset, std::vector<ScorePair>> mos_streams;
    std::vector<double> mos_sq_errors;
    for (const auto& u : data.mos_valid) {
      const auto feats = MeansAsFeatures(cache.Get(u.audio), u.id);
      const auto head_it = params.heads.find(u.dataset);
      if (head_it == params.heads.end()) continue;  // dataset unseen in train
      const double pred = PredictMos(feats, params.layer_weights[Task::kMos],
                                     head_it->second);
      mos_streams[u.dataset].push_back({u.id, pred, u.mos, u.system_id});
      const double err = pred - u.mos;
      mos_sq_errors.push_back(err * err);
    }
    for (const auto& [dataset, pairs] : mos_streams) {
      const std::string stream = "MOS/" + std::string(DatasetName(dataset));
      if (pairs.size() < 2) continue;
      try {
        const double lcc = Lcc(pairs);
        eval.stream_lcc[stream] = lcc;
        selection_values.push_back(lcc);
      } catch (const ZeroVarianceError&) {
        // Degenerate epoch; the stream contributes nothing.
      }
    }
    if (!mos_sq_errors.empty()) eval.mos_valid_mse = MeanOf(mos_sq_errors);

    if (!data.sim_valid.empty()) {
      std::vector<ScorePair> sim_pairs;
      for (const auto& p : data.sim_valid) {
        const auto ea = MatVec(params.embed,
                               CombineMeans(cache.Get(p.audio_a),
                                            Softmax(params.layer_weights[Task::kSim].logits)));
        const auto eb = MatVec(params.embed,
                               CombineMeans(cache.Get(p.audio_b),
                                            Softmax(params.layer_weights[Task::kSim].logits)));
        sim_pairs.push_back({p.id, SimFromEmbeddings(ea, eb), p.sim, {}});
      }
      if (sim_pairs.size() >= 2) {
        try {
          const double lcc = Lcc(sim_pairs);
          eval.stream_lcc["SIM"] = lcc;
          selection_values.push_back(lcc);
        } catch (const ZeroVarianceError&) {
        }
      }
    }

    eval.selection =
        selection_values.empty() ? -1e300 : MeanOf(selection_values);
    result.record.epochs.push_back(eval);

    if (eval.selection > result.record.best_selection) {
      result.record.best_selection = eval.selection;
      result.record.best_epoch = epoch;
      result.params = params;
    }
  }

  if (result.record.best_epoch == 0) {
    // No epoch produced a usable validation metric; keep the final state.
    result.record.best_epoch = config.epochs;
    result.params = params;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

void SaveCheckpoint(const std::filesystem::path& path, const SslParams& params,
                    const SelectionRecord& record) {
  nlohmann::json j;
  for (const auto& [task, w] : params.layer_weights) {
    j["layer_logits"][std::string(TaskName(task))] = w.logits;
  }
  for (const auto& [dataset, head] : params.heads) {
    j["heads"][std::string(DatasetName(dataset))] = {
        {"weight", head.weight}, {"bias", head.bias}};
  }
  j["embed"] = {{"rows", params.embed.rows},
                {"cols", params.embed.cols},
                {"data", params.embed.data}};
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& e : record.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"stream_lcc", e.stream_lcc},
                      {"mos_valid_mse", e.mos_valid_mse},
                      {"selection", e.selection}});
  }
  j["record"] = {{"epochs", epochs},
                 {"best_epoch", record.best_epoch},
                 {"best_selection", record.best_selection}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

std::pair<SslParams, SelectionRecord> LoadCheckpoint(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad checkpoint: " + std::string(e.what()));
  }
  SslParams params;
  for (const auto& [task_name, logits] : j.at("layer_logits").items()) {
    const auto task = ParseTaskName(task_name);
    if (!task) throw Error("bad checkpoint: unknown task " + task_name);
    params.layer_weights[*task] =
        LayerWeights{*task, logits.get<std::vector<double>>()};
  }
  if (j.contains("heads")) {
    for (const auto& [dataset_name, head_json] : j.at("heads").items()) {
      const auto dataset = ParseDatasetName(dataset_name);
      if (!dataset) throw Error("bad checkpoint: unknown dataset " + dataset_name);
      MosHead head;
      head.dataset = *dataset;
      head.weight = head_json.at("weight").get<std::vector<double>>();
      head.bias = head_json.at("bias").get<double>();
      params.heads[*dataset] = std::move(head);
    }
  }
  const auto& embed = j.at("embed");
  params.embed.rows = embed.at("rows").get<int>();
  params.embed.cols = embed.at("cols").get<int>();
  params.embed.data = embed.at("data").get<std::vector<double>>();

  SelectionRecord record;
  const auto& rec = j.at("record");
  record.best_epoch = rec.at("best_epoch").get<int>();
  record.best_selection = rec.at("best_selection").get<double>();
  for (const auto& e : rec.at("epochs")) {
    EpochEval eval;
    eval.epoch = e.at("epoch").get<int>();
    eval.mos_valid_mse = e.at("mos_valid_mse").get<double>();
    eval.selection = e.at("selection").get<double>();
    eval.stream_lcc =
        e.at("stream_lcc").get<std::map<std::string, double>>();
    record.epochs.push_back(std::move(eval));
  }
  return {std::move(params), std::move(record)};
}

}  // namespace sqa
