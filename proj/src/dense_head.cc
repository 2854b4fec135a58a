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

#include "actionable/dense_head.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "actionable/error.h"

namespace actionable {

using json = nlohmann::ordered_json;

namespace {

// Kept strictly inside (0, 1): large |z| would otherwise round to 0 or 1.
double Sigmoid(double z) {
  constexpr double kLo = std::numeric_limits<double>::denorm_min();
  const double kHi = std::nextafter(1.0, 0.0);
  if (z >= 0) return std::min(1.0 / (1.0 + std::exp(-z)), kHi);
  const double e = std::exp(z);
  return std::max(e / (1.0 + e), kLo);
}

void CheckDim(std::span<const double> x, const DenseHead &head) {
  if (x.size() != head.d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "input has " + std::to_string(x.size()) +
                    " values, head expects " + std::to_string(head.d));
  }
}

}  // namespace

DenseHead DenseHead::Zeros(size_t d, size_t hidden) {
  DenseHead h;
  h.d = d;
  h.hidden = hidden;
  h.w1.assign(hidden * d, 0.0);
  h.b1.assign(hidden, 0.0);
  h.w2.assign(hidden, 0.0);
  return h;
}

DenseHead DenseHead::GlorotInit(size_t d, Rng &rng, size_t hidden) {
  DenseHead h = Zeros(d, hidden);
  const double limit1 = std::sqrt(6.0 / static_cast<double>(d + hidden));
  for (double &w : h.w1) w = rng.Uniform(-limit1, limit1);
  const double limit2 = std::sqrt(6.0 / static_cast<double>(hidden + 1));
  for (double &w : h.w2) w = rng.Uniform(-limit2, limit2);
  return h;
}

bool DenseHead::AllFinite() const {
  auto finite = [](const std::vector<double> &v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x); });
  };
  return finite(w1) && finite(b1) && finite(w2) && std::isfinite(b2);
}

std::vector<double> DropoutMask(size_t d, double rate, Rng &rng) {
  std::vector<double> mask(d, 1.0);
  if (rate <= 0.0) return mask;
  const double keep_scale = 1.0 / (1.0 - rate);
  for (double &m : mask) m = rng.Bernoulli(rate) ? 0.0 : keep_scale;
  return mask;
}

double Forward(std::span<const double> x, const DenseHead &head) {
  return Forward(x, head, {}, nullptr);
}

double Forward(std::span<const double> x, const DenseHead &head,
               std::span<const double> mask, ForwardTrace *trace) {
  CheckDim(x, head);
  if (!mask.empty() && mask.size() != head.d) {
    throw Error(ErrorCode::kDimensionMismatch, "dropout mask size");
  }
  thread_local std::vector<double> input;
  thread_local std::vector<double> hidden;
  input.assign(x.begin(), x.end());
  if (!mask.empty()) {
    for (size_t k = 0; k < head.d; ++k) input[k] *= mask[k];
  }
  hidden.assign(head.hidden, 0.0);
  double logit = head.b2;
  for (size_t j = 0; j < head.hidden; ++j) {
    const double *row = head.w1.data() + j * head.d;
    double a = head.b1[j];
    for (size_t k = 0; k < head.d; ++k) a += row[k] * input[k];
    hidden[j] = a > 0.0 ? a : 0.0;
    logit += head.w2[j] * hidden[j];
  }
  const double p = Sigmoid(logit);
  if (trace) {
    trace->input = input;
    trace->hidden = hidden;
    trace->logit = logit;
    trace->probability = p;
  }
  return p;
}

double BceLoss(double p, int y) {
  const double c = std::clamp(p, kProbabilityClip, 1.0 - kProbabilityClip);
  return y == 1 ? -std::log(c) : -std::log(1.0 - c);
}

HeadGradients Backward(std::span<const BatchItem> batch, const DenseHead &head,
                       std::span<const std::vector<double>> masks) {
  if (!masks.empty() && masks.size() != batch.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "one mask per batch item");
  }
  HeadGradients g;
  g.w1.assign(head.w1.size(), 0.0);
  g.b1.assign(head.hidden, 0.0);
  g.w2.assign(head.hidden, 0.0);
  if (batch.empty()) return g;

  const double scale = 1.0 / static_cast<double>(batch.size());
  ForwardTrace trace;
  for (size_t i = 0; i < batch.size(); ++i) {
    std::span<const double> mask;
    if (!masks.empty()) mask = masks[i];
    Forward(batch[i].x, head, mask, &trace);
    // d(BCE)/d(logit) = p - y.
    const double delta = (trace.probability - batch[i].y) * scale;
    g.b2 += delta;
    for (size_t j = 0; j < head.hidden; ++j) {
      g.w2[j] += delta * trace.hidden[j];
      if (trace.hidden[j] <= 0.0) continue;
      const double da = delta * head.w2[j];
      g.b1[j] += da;
      double *row = g.w1.data() + j * head.d;
      for (size_t k = 0; k < head.d; ++k) row[k] += da * trace.input[k];
    }
  }
  return g;
}

double BatchLoss(std::span<const BatchItem> batch, const DenseHead &head,
                 std::span<const std::vector<double>> masks) {
  if (batch.empty()) return 0.0;
  double sum = 0.0;
  for (size_t i = 0; i < batch.size(); ++i) {
    std::span<const double> mask;
    if (!masks.empty()) mask = masks[i];
    sum += BceLoss(Forward(batch[i].x, head, mask), batch[i].y);
  }
  return sum / static_cast<double>(batch.size());
}

void AdamStep(std::span<double> params, std::span<const double> grads,
              AdamState &state, const AdamHyper &hyper) {
  if (params.size() != grads.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "params and grads differ");
  }
  if (state.m.size() != params.size()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(hyper.beta1, t);
  const double c2 = 1.0 - std::pow(hyper.beta2, t);
  for (size_t i = 0; i < params.size(); ++i) {
    state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * grads[i];
    state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * grads[i] * grads[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= hyper.learning_rate * m_hat / (std::sqrt(v_hat) + hyper.epsilon);
  }
}

std::string_view ThresholdModeName(ThresholdMode mode) {
  return mode == ThresholdMode::kFixed ? "fixed" : "validation_median";
}

void TrainConfig::Validate() const {
  if (epochs < 1) throw Error(ErrorCode::kInvalidArgument, "epochs must be >= 1");
  if (batch_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "dropout_rate must be in [0, 1)");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must be in (0, 1)");
  }
  if (hidden < 1) throw Error(ErrorCode::kInvalidArgument, "hidden must be >= 1");
}

int Classify(double p, double threshold) { return p >= threshold ? 1 : 0; }

double Median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

struct ResolvedSet {
  std::vector<std::span<const double>> x;
  std::vector<int> y;
};

ResolvedSet Resolve(std::span<const HeadExample> set,
                    const EmbeddingTable &embeddings, size_t &d) {
  ResolvedSet out;
  for (const HeadExample &ex : set) {
    auto it = embeddings.find(ex.id);
    if (it == embeddings.end()) {
      throw Error(ErrorCode::kMissingEmbedding, "no embedding for '" + ex.id + "'");
    }
    if (d == 0) d = it->second.size();
    if (it->second.size() != d) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embedding for '" + ex.id + "' has inconsistent dimension");
    }
    out.x.emplace_back(it->second);
    out.y.push_back(ex.label);
  }
  return out;
}

}  // namespace

TrainResult Train(std::span<const HeadExample> train_set,
                  std::span<const HeadExample> val_set,
                  const EmbeddingTable &embeddings, const TrainConfig &cfg) {
  cfg.Validate();
  if (train_set.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty training set");
  }
  size_t d = 0;
  const ResolvedSet train = Resolve(train_set, embeddings, d);
  const ResolvedSet val = Resolve(val_set, embeddings, d);
  if (d == 0) throw Error(ErrorCode::kDimensionMismatch, "zero-length embeddings");

  Rng init_rng(DeriveSeed(cfg.seed, 0));
  Rng rng(DeriveSeed(cfg.seed, 1));
  TrainResult result;
  DenseHead &head = result.head;
  head = DenseHead::GlorotInit(d, init_rng, cfg.hidden);
  AdamState s_w1, s_b1, s_w2, s_b2;

  std::vector<size_t> order(train.x.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<BatchItem> batch;
  std::vector<std::vector<double>> masks;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.Shuffle(order);
    double loss_sum = 0.0;
    size_t correct = 0;
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t stop = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      masks.clear();
      for (size_t k = start; k < stop; ++k) {
        batch.push_back(BatchItem{train.x[order[k]], train.y[order[k]]});
        masks.push_back(DropoutMask(d, cfg.dropout_rate, rng));
      }
      for (size_t i = 0; i < batch.size(); ++i) {
        const double p = Forward(batch[i].x, head, masks[i]);
        loss_sum += BceLoss(p, batch[i].y);
        correct += Classify(p, 0.5) == batch[i].y ? 1 : 0;
      }
      HeadGradients g = Backward(batch, head, masks);
      AdamStep(head.w1, g.w1, s_w1, cfg.adam);
      AdamStep(head.b1, g.b1, s_b1, cfg.adam);
      AdamStep(head.w2, g.w2, s_w2, cfg.adam);
      AdamStep(std::span<double>(&head.b2, 1), std::span<const double>(&g.b2, 1),
               s_b2, cfg.adam);
    }
    EpochRecord rec;
    rec.train_loss = loss_sum / static_cast<double>(order.size());
    rec.train_accuracy =
        static_cast<double>(correct) / static_cast<double>(order.size());
    if (val.x.empty()) {
      rec.val_loss = nan;
      rec.val_accuracy = nan;
    } else {
      double vloss = 0.0;
      size_t vcorrect = 0;
      for (size_t i = 0; i < val.x.size(); ++i) {
        const double p = Forward(val.x[i], head);
        vloss += BceLoss(p, val.y[i]);
        vcorrect += Classify(p, 0.5) == val.y[i] ? 1 : 0;
      }
      rec.val_loss = vloss / static_cast<double>(val.x.size());
      rec.val_accuracy =
          static_cast<double>(vcorrect) / static_cast<double>(val.x.size());
    }
    result.history.push_back(rec);
  }

  result.threshold = cfg.threshold;
  if (cfg.threshold_mode == ThresholdMode::kValidationMedian && !val.x.empty()) {
    std::vector<double> probs;
    probs.reserve(val.x.size());
    for (const auto &x : val.x) probs.push_back(Forward(x, head));
    result.threshold =
        std::clamp(Median(std::move(probs)), kProbabilityClip, 1.0 - kProbabilityClip);
  }
  return result;
}

json HeadToJson(const DenseHead &head, double threshold) {
  json w1 = json::array();
  for (size_t j = 0; j < head.hidden; ++j) {
    w1.push_back(std::vector<double>(head.w1.begin() + j * head.d,
                                     head.w1.begin() + (j + 1) * head.d));
  }
  return json{{"format_version", 1},
              {"d", head.d},
              {"W1", std::move(w1)},
              {"b1", head.b1},
              {"W2", json::array({head.w2})},
              {"b2", json::array({head.b2})},
              {"threshold", threshold}};
}

DenseHead HeadFromJson(const json &j, double *threshold) {
  if (j.value("format_version", 0) != 1) {
    throw Error(ErrorCode::kParse, "unsupported head format_version");
  }
  const auto d = j.at("d").get<size_t>();
  const auto &w1 = j.at("W1");
  DenseHead head = DenseHead::Zeros(d, w1.size());
  for (size_t r = 0; r < w1.size(); ++r) {
    auto row = w1[r].get<std::vector<double>>();
    if (row.size() != d) throw Error(ErrorCode::kParse, "W1 row width != d");
    std::copy(row.begin(), row.end(), head.w1.begin() + r * d);
  }
  head.b1 = j.at("b1").get<std::vector<double>>();
  const auto &w2 = j.at("W2");
  if (w2.size() != 1) throw Error(ErrorCode::kParse, "W2 must have one row");
  head.w2 = w2[0].get<std::vector<double>>();
  const auto &b2 = j.at("b2");
  head.b2 = b2.is_array() ? b2.at(0).get<double>() : b2.get<double>();
  if (head.b1.size() != head.hidden || head.w2.size() != head.hidden) {
    throw Error(ErrorCode::kParse, "head shapes inconsistent");
  }
  if (!head.AllFinite()) throw Error(ErrorCode::kParse, "non-finite weights");
  if (threshold) *threshold = j.at("threshold").get<double>();
  return head;
}

}  // namespace actionable
