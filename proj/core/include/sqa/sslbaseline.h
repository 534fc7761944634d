// core/include/sqa/sslbaseline.h

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
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqa/types.h"

namespace sqa {

// Multipurpose SSL probe: learned per-task layer weighting over a pluggable
// feature extractor, dataset-specific linear MOS heads, and a linear speaker
// embedding head whose cosine similarity maps onto the [1,6] SIM scale. The
// SSL model itself (and a full speaker-embedding network) sits behind the
// FeatureExtractor interface; this module owns only the downstream math.

// Minimal dense row-major matrix.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}
  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const {
    return data[static_cast<size_t>(r) * cols + c];
  }
};

// L feature sequences of identical T x D shape, one per SSL layer.
struct LayeredFeatures {
  std::string utterance_id;
  std::vector<Mat> layers;

  int num_layers() const { return static_cast<int>(layers.size()); }
  int frames() const { return layers.empty() ? 0 : layers[0].rows; }
  int dim() const { return layers.empty() ? 0 : layers[0].cols; }
};

// Throws unless all layers share one T x D shape and L >= 1.
void ValidateFeatures(const LayeredFeatures& feats);

struct LayerWeights {
  Task task = Task::kMos;
  std::vector<double> logits;  // length L; weights are softmax(logits)
};

std::vector<double> Softmax(std::span<const double> logits);

// Frame-wise convex combination sum_l softmax(logits)_l * layer_l.
Mat CombineLayers(const LayeredFeatures& feats, const LayerWeights& weights);

struct MosHead {
  Dataset dataset = Dataset::kNisqa;
  std::vector<double> weight;  // length D
  double bias = 0.0;
};

// Time-mean of the combined features followed by the head's affine map.
// Unclamped during training; pass clamp=true for inference reporting.
double PredictMos(const LayeredFeatures& feats, const LayerWeights& weights,
                  const MosHead& head, bool clamp = false);

// Cosine similarity mapped linearly onto [1,6]: -1 -> 1, 0 -> 3.5, +1 -> 6.
double SimFromEmbeddings(std::span<const double> emb_a,
                         std::span<const double> emb_b);

// ---------------------------------------------------------------------------
// Feature extractors
// ---------------------------------------------------------------------------

class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual std::string name() const = 0;
  // Must be deterministic per utterance.
  virtual LayeredFeatures Extract(const std::string& audio_ref) = 0;
};

using ExtractorParams = std::map<std::string, std::string>;
using ExtractorFactory =
    std::function<std::unique_ptr<FeatureExtractor>(const ExtractorParams&)>;

void RegisterExtractor(const std::string& name, ExtractorFactory factory);
std::unique_ptr<FeatureExtractor> MakeExtractor(
    const std::string& name, const ExtractorParams& params = {});

// Built-in "synthetic" extractor: deterministic Gaussian features keyed by
// the audio ref (params: layers, frames, dim). Lets the full pipeline run
// without any pretrained SSL model.
std::unique_ptr<FeatureExtractor> MakeSyntheticExtractor(int layers = 3,
                                                         int frames = 4,
                                                         int dim = 8);

// ---------------------------------------------------------------------------
// Joint training
// ---------------------------------------------------------------------------

struct SslParams {
  std::map<Task, LayerWeights> layer_weights;  // MOS and SIM streams
  std::map<Dataset, MosHead> heads;
  Mat embed;  // embedding head, embed_dim x D
};

// Per-item losses and analytic gradients; these are the training building
// blocks and are checked against finite differences in the tests.
struct MosGrad {
  double loss = 0.0;
  std::vector<double> d_logits;
  std::vector<double> d_weight;
  double d_bias = 0.0;
};
MosGrad MosLossGrad(const LayeredFeatures& feats, const LayerWeights& weights,
                    const MosHead& head, double target);

struct SimGrad {
  double loss = 0.0;
  std::vector<double> d_logits;
  Mat d_embed;
};
SimGrad SimLossGrad(const LayeredFeatures& feats_a,
                    const LayeredFeatures& feats_b,
                    const LayerWeights& weights, const Mat& embed,
                    double target);

struct TrainConfig {
  int epochs = 20;
  double lr = 0.05;
  int batch_size = 16;
  uint64_t seed = 0;
  int embed_dim = 16;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
};

struct TrainData {
  std::vector<RatedUtterance> mos_train;
  std::vector<RatedUtterance> mos_valid;
  std::vector<SimPair> sim_train;
  std::vector<SimPair> sim_valid;
};

struct EpochEval {
  int epoch = 0;  // 1-based
  // Utterance-level validation LCC per stream ("MOS/BVCC", "SIM", ...).
  std::map<std::string, double> stream_lcc;
  double mos_valid_mse = 0.0;  // pooled over all MOS validation items
  double selection = 0.0;      // mean of available stream LCCs
};

struct SelectionRecord {
  std::vector<EpochEval> epochs;
  int best_epoch = 0;  // 1-based epoch whose parameters were returned
  double best_selection = 0.0;
};

struct JointTrainResult {
  SslParams params;
  SelectionRecord record;
};

// Joint MOS+SIM training on mixed shuffled batches with Adam; one validation
// pass per epoch; returns the parameters of the epoch with the best
// selection value (mean utterance-level validation LCC across streams).
// Deterministic per (data, extractor, config.seed).
JointTrainResult JointTrain(const TrainData& data, FeatureExtractor& extractor,
                            const TrainConfig& config = {});

void SaveCheckpoint(const std::filesystem::path& path, const SslParams& params,
                    const SelectionRecord& record);
std::pair<SslParams, SelectionRecord> LoadCheckpoint(
    const std::filesystem::path& path);

}  // namespace sqa
