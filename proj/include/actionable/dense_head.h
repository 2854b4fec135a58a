// Copyright 2026 The Actionable Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ACTIONABLE_DENSE_HEAD_H_
#define ACTIONABLE_DENSE_HEAD_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "actionable/util.h"
#include "json.hpp"

namespace actionable {

// Classifier head over a frozen sentence embedding:
//   dropout -> dense(hidden) ReLU -> dense(1) sigmoid.
struct DenseHead {
  size_t d = 0;
  size_t hidden = 64;
  std::vector<double> w1;  // hidden x d, row-major
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // hidden (the single output row)
  double b2 = 0.0;

  static DenseHead Zeros(size_t d, size_t hidden = 64);
  // Glorot-uniform weights, zero biases.
  static DenseHead GlorotInit(size_t d, Rng &rng, size_t hidden = 64);

  bool AllFinite() const;
};

// Inverted-dropout multipliers: 0 with probability `rate`, else 1/(1-rate).
std::vector<double> DropoutMask(size_t d, double rate, Rng &rng);

// Intermediate values of one forward pass, kept for backprop.
struct ForwardTrace {
  std::vector<double> input;   // x after the dropout mask
  std::vector<double> hidden;  // post-ReLU activations
  double logit = 0.0;
  double probability = 0.0;
};

// Inference: dropout is the identity. Throws Error(kDimensionMismatch).
double Forward(std::span<const double> x, const DenseHead &head);

// Training-mode pass with an explicit mask (empty mask = no dropout).
double Forward(std::span<const double> x, const DenseHead &head,
               std::span<const double> mask, ForwardTrace *trace = nullptr);

inline constexpr double kProbabilityClip = 1e-7;

// Binary cross-entropy with p clipped to [1e-7, 1 - 1e-7].
double BceLoss(double p, int y);

struct HeadGradients {
  std::vector<double> w1;
  std::vector<double> b1;
  std::vector<double> w2;
  double b2 = 0.0;
};

struct BatchItem {
  std::span<const double> x;
  int y = 0;
};

// Exact gradients of the mean batch BCE. `masks` is either empty (no
// dropout) or holds one mask per batch item, matching the forward pass.
HeadGradients Backward(std::span<const BatchItem> batch, const DenseHead &head,
                       std::span<const std::vector<double>> masks = {});

// Mean BCE over a batch under the given masks (used by gradient checks).
double BatchLoss(std::span<const BatchItem> batch, const DenseHead &head,
                 std::span<const std::vector<double>> masks = {});

struct AdamHyper {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  uint64_t t = 0;

  explicit AdamState(size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

// One bias-corrected Adam update applied in place.
void AdamStep(std::span<double> params, std::span<const double> grads,
              AdamState &state, const AdamHyper &hyper);

enum class ThresholdMode { kFixed, kValidationMedian };

std::string_view ThresholdModeName(ThresholdMode mode);

struct TrainConfig {
  size_t epochs = 10;
  size_t batch_size = 32;
  double dropout_rate = 0.2;
  AdamHyper adam;
  uint64_t seed = 42;
  ThresholdMode threshold_mode = ThresholdMode::kFixed;
  double threshold = 0.5;
  size_t hidden = 64;

  void Validate() const;
};

struct EpochRecord {
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

using History = std::vector<EpochRecord>;

struct HeadExample {
  std::string id;
  int label = 0;
};

using EmbeddingTable = std::unordered_map<std::string, std::vector<double>>;

struct TrainResult {
  DenseHead head;
  History history;
  double threshold = 0.5;
};

// Mini-batch Adam on mean BCE. Training loss/accuracy per epoch are running
// means over the epoch's batches (dropout active, accuracy at p >= 0.5);
// validation figures use inference mode after the epoch. An empty
// validation set yields NaN validation figures.
// Throws Error(kMissingEmbedding) naming the first example without a vector.
TrainResult Train(std::span<const HeadExample> train_set,
                  std::span<const HeadExample> val_set,
                  const EmbeddingTable &embeddings, const TrainConfig &cfg);

// 1 iff p >= threshold.
int Classify(double p, double threshold);

double Median(std::vector<double> values);

// {"format_version":1,"d","W1","b1","W2","b2","threshold"}
nlohmann::ordered_json HeadToJson(const DenseHead &head, double threshold);
DenseHead HeadFromJson(const nlohmann::ordered_json &j, double *threshold = nullptr);

}  // namespace actionable

#endif  // ACTIONABLE_DENSE_HEAD_H_
