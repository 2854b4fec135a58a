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

#include <cmath>
#include <string>
#include <vector>

#include "actionable/dense_head.h"
#include "actionable/error.h"
#include "actionable/util.h"
#include "doctest.h"

namespace actionable {
namespace {

DenseHead SmallRandomHead(size_t d, size_t hidden, Rng &rng, double scale) {
  DenseHead h = DenseHead::Zeros(d, hidden);
  for (double &w : h.w1) w = rng.Uniform(-scale, scale);
  for (double &b : h.b1) b = rng.Uniform(-scale, scale);
  for (double &w : h.w2) w = rng.Uniform(-scale, scale);
  h.b2 = rng.Uniform(-scale, scale);
  return h;
}

std::vector<double> RandomVec(size_t d, Rng &rng) {
  std::vector<double> v(d);
  for (double &x : v) x = rng.Uniform(-1, 1);
  return v;
}

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

TEST_CASE("forward examples") {
  const DenseHead zero = DenseHead::Zeros(3);
  CHECK(Forward(std::vector<double>{1, -2, 3}, zero) == 0.5);

  DenseHead h = DenseHead::Zeros(2);
  h.w1[0] = 1;
  h.w1[1] = -1;
  h.w2[0] = 1;
  const std::vector<double> x = {2, 1};
  ForwardTrace trace;
  const double p = Forward(x, h, {}, &trace);
  CHECK(trace.hidden[0] == 1.0);
  CHECK(p == doctest::Approx(0.731059).epsilon(1e-6));
  CHECK(p == doctest::Approx(Sigmoid(1.0)).epsilon(1e-15));
  CHECK(Forward(x, h) == p);  // inference ignores dropout entirely

  CHECK_THROWS_AS(Forward(std::vector<double>{1.0}, h), Error);
}

TEST_CASE("bce_loss examples") {
  CHECK(BceLoss(0.5, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(BceLoss(1.0, 1) == doctest::Approx(-std::log(1 - 1e-7)).epsilon(1e-12));
  CHECK(BceLoss(1.0, 1) == doctest::Approx(1e-7).epsilon(1e-6));
  CHECK(BceLoss(0.25, 0) == doctest::Approx(0.287682).epsilon(1e-6));
  CHECK(std::isfinite(BceLoss(0.0, 1)));
  CHECK(BceLoss(0.0, 1) == doctest::Approx(-std::log(1e-7)).epsilon(1e-12));
}

TEST_CASE("backward examples") {
  const DenseHead zero = DenseHead::Zeros(4);
  const std::vector<double> x = {0.3, -0.1, 0.7, 0.2};
  const BatchItem one[] = {{x, 1}};
  const HeadGradients g = Backward(one, zero);
  CHECK(g.b2 == -0.5);

  Rng rng(1);
  const DenseHead h = SmallRandomHead(4, 8, rng, 0.5);
  const auto x2 = RandomVec(4, rng);
  const BatchItem batch[] = {{x, 1}, {x2, 0}};
  const HeadGradients gb = Backward(batch, h);
  const double expected_b2 = ((Forward(x, h) - 1) + (Forward(x2, h) - 0)) / 2;
  CHECK(gb.b2 == doctest::Approx(expected_b2).epsilon(1e-14));

  const BatchItem dup[] = {{x, 1}, {x, 1}, {x, 1}};
  const BatchItem single[] = {{x, 1}};
  const HeadGradients a = Backward(dup, h), b = Backward(single, h);
  CHECK(a.b2 == doctest::Approx(b.b2).epsilon(1e-15));
  for (size_t i = 0; i < a.w1.size(); ++i) CHECK(a.w1[i] == doctest::Approx(b.w1[i]).epsilon(1e-14));
  for (size_t i = 0; i < a.w2.size(); ++i) CHECK(a.w2[i] == doctest::Approx(b.w2[i]).epsilon(1e-14));
}

// Central differences over randomly chosen coordinates of every tensor.
double MaxGradientRelativeError(size_t d, uint64_t seed, bool with_masks) {
  Rng rng(seed);
  DenseHead h = SmallRandomHead(d, 64, rng, 0.3);
  std::vector<std::vector<double>> xs;
  std::vector<BatchItem> batch;
  for (int i = 0; i < 8; ++i) xs.push_back(RandomVec(d, rng));
  for (int i = 0; i < 8; ++i) batch.push_back({xs[i], static_cast<int>(i % 2)});
  std::vector<std::vector<double>> masks;
  if (with_masks) {
    for (int i = 0; i < 8; ++i) masks.push_back(DropoutMask(d, 0.2, rng));
  }
  const HeadGradients g = Backward(batch, h, masks);

  const double step = 1e-5;
  double worst = 0.0;
  auto check = [&](double &param, double analytic) {
    const double saved = param;
    param = saved + step;
    const double up = BatchLoss(batch, h, masks);
    param = saved - step;
    const double down = BatchLoss(batch, h, masks);
    param = saved;
    const double numeric = (up - down) / (2 * step);
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
  };
  for (int k = 0; k < 120; ++k) {
    const size_t i = rng.Below(h.w1.size());
    check(h.w1[i], g.w1[i]);
  }
  for (int k = 0; k < 30; ++k) {
    const size_t i = rng.Below(h.b1.size());
    check(h.b1[i], g.b1[i]);
  }
  for (int k = 0; k < 30; ++k) {
    const size_t i = rng.Below(h.w2.size());
    check(h.w2[i], g.w2[i]);
  }
  check(h.b2, g.b2);
  return worst;
}

TEST_CASE("gradient check against central differences") {
  for (uint64_t seed : {1, 2, 3}) {
    CHECK(MaxGradientRelativeError(16, seed, false) < 1e-4);
    CHECK(MaxGradientRelativeError(16, seed, true) < 1e-4);
  }
  CHECK(MaxGradientRelativeError(5, 9, false) < 1e-4);
}

TEST_CASE("adam_step examples") {
  const AdamHyper hyper;
  std::vector<double> params = {1.0, -2.0, 3.0};
  const std::vector<double> before = params;
  AdamState state(3);
  AdamStep(params, std::vector<double>{0, 0, 0}, state, hyper);
  CHECK(params == before);

  AdamState fresh(3);
  const std::vector<double> g = {0.5, -3.0, 1e-3};
  AdamStep(params, g, fresh, hyper);
  for (size_t i = 0; i < 3; ++i) {
    const double delta = params[i] - before[i];
    CHECK(delta == doctest::Approx(-hyper.learning_rate * g[i] /
                                   (std::abs(g[i]) + hyper.epsilon))
                       .epsilon(1e-9));
    CHECK(std::abs(delta) == doctest::Approx(hyper.learning_rate).epsilon(1e-4));
  }
  const std::vector<double> m1 = fresh.m;
  AdamStep(params, std::vector<double>{0, 0, 0}, fresh, hyper);
  for (size_t i = 0; i < 3; ++i) CHECK(fresh.m[i] == doctest::Approx(m1[i] * 0.9).epsilon(1e-15));
  AdamStep(params, std::vector<double>{0, 0, 0}, fresh, hyper);
  for (size_t i = 0; i < 3; ++i) CHECK(fresh.m[i] == doctest::Approx(m1[i] * 0.81).epsilon(1e-15));
  CHECK(fresh.t == 3);
}

TEST_CASE("inverted dropout expectation") {
  Rng rng(5);
  const size_t d = 8;
  const auto x = RandomVec(d, rng);
  const int n = 10000;
  const double rate = 0.2;
  std::vector<double> sum(d, 0.0), sq(d, 0.0);
  for (int k = 0; k < n; ++k) {
    const auto mask = DropoutMask(d, rate, rng);
    for (size_t i = 0; i < d; ++i) {
      CHECK((mask[i] == 0.0 || mask[i] == doctest::Approx(1 / (1 - rate))));
      const double v = x[i] * mask[i];
      sum[i] += v;
      sq[i] += v * v;
    }
  }
  for (size_t i = 0; i < d; ++i) {
    const double mean = sum[i] / n;
    const double var = sq[i] / n - mean * mean;
    const double se = std::sqrt(var / n);
    CHECK(std::abs(mean - x[i]) <= 3 * se + 1e-12);
  }
}

TEST_CASE("property: output range, classify monotone, logit scaling") {
  Rng rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    DenseHead h = SmallRandomHead(6, 16, rng, 3.0);
    const auto a = RandomVec(6, rng), b = RandomVec(6, rng);
    const double pa = Forward(a, h), pb = Forward(b, h);
    CHECK(pa > 0.0);
    CHECK(pa < 1.0);
    const double t = rng.Uniform(0.01, 0.99);
    if (pa <= pb) CHECK(Classify(pa, t) <= Classify(pb, t));
    const double c = rng.Uniform(0.1, 10.0);
    for (double &w : h.w2) w *= c;
    h.b2 *= c;
    const double qa = Forward(a, h), qb = Forward(b, h);
    if (pa < pb) CHECK(qa <= qb);
    if (pa > pb) CHECK(qa >= qb);
  }
}

TEST_CASE("classify examples") {
  CHECK(Classify(0.7, 0.5) == 1);
  CHECK(Classify(0.5, 0.5) == 1);
  CHECK(Classify(0.49, 0.5) == 0);
}

struct Clusters {
  std::vector<HeadExample> examples;
  EmbeddingTable table;
};

// Two Gaussian clusters centred at +mu and -mu.
Clusters TwoClusters(size_t d, size_t n, uint64_t seed, const std::string &prefix) {
  Rng rng(seed);
  Clusters c;
  for (size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    std::vector<double> v(d);
    for (double &x : v) {
      // Box-Muller on the portable uniform source.
      const double u1 = 1.0 - rng.Uniform(), u2 = rng.Uniform();
      const double z = std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2);
      x = (label ? 0.5 : -0.5) + 0.5 * z;
    }
    const std::string id = prefix + std::to_string(i);
    c.table[id] = v;
    c.examples.push_back({id, label});
  }
  return c;
}

TEST_CASE("train: separable clusters") {
  Clusters train = TwoClusters(16, 200, 1, "t");
  Clusters val = TwoClusters(16, 40, 2, "v");
  train.table.insert(val.table.begin(), val.table.end());
  TrainConfig cfg;
  const TrainResult r = Train(train.examples, val.examples, train.table, cfg);
  REQUIRE(r.history.size() == 10);
  CHECK(r.history.back().train_accuracy >= 0.99);
  CHECK(r.history.back().train_loss < r.history.front().train_loss);
  CHECK(r.history.back().val_accuracy >= 0.95);
  CHECK(r.threshold == 0.5);
  CHECK(r.head.AllFinite());

  size_t correct = 0;
  for (const auto &e : train.examples) {
    correct += Classify(Forward(train.table.at(e.id), r.head), r.threshold) == e.label;
  }
  CHECK(correct >= 198);

  const TrainResult again = Train(train.examples, val.examples, train.table, cfg);
  CHECK(HeadToJson(again.head, again.threshold).dump() ==
        HeadToJson(r.head, r.threshold).dump());
  for (size_t e = 0; e < r.history.size(); ++e) {
    CHECK(again.history[e].train_loss == r.history[e].train_loss);
    CHECK(again.history[e].val_loss == r.history[e].val_loss);
  }

  TrainConfig three = cfg;
  three.epochs = 3;
  CHECK(Train(train.examples, val.examples, train.table, three).history.size() == 3);
}

TEST_CASE("train: threshold modes and empty validation") {
  Clusters train = TwoClusters(8, 60, 3, "t");
  Clusters val = TwoClusters(8, 21, 4, "v");
  train.table.insert(val.table.begin(), val.table.end());
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.threshold_mode = ThresholdMode::kValidationMedian;
  const TrainResult r = Train(train.examples, val.examples, train.table, cfg);
  std::vector<double> probs;
  for (const auto &e : val.examples) probs.push_back(Forward(train.table.at(e.id), r.head));
  CHECK(r.threshold == Median(probs));

  cfg.threshold_mode = ThresholdMode::kFixed;
  const TrainResult no_val = Train(train.examples, {}, train.table, cfg);
  CHECK(std::isnan(no_val.history[0].val_loss));
  CHECK(std::isnan(no_val.history[0].val_accuracy));
}

TEST_CASE("train: errors") {
  Clusters train = TwoClusters(4, 10, 5, "t");
  std::vector<HeadExample> with_missing = train.examples;
  with_missing.push_back({"ghost", 1});
  try {
    Train(with_missing, {}, train.table, TrainConfig{});
    FAIL("expected MissingEmbedding");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kMissingEmbedding);
    CHECK(std::string(e.what()).find("ghost") != std::string::npos);
  }
  EmbeddingTable ragged = train.table;
  ragged["t0"] = {1.0};
  try {
    Train(train.examples, {}, ragged, TrainConfig{});
    FAIL("expected DimensionMismatch");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
  TrainConfig bad;
  bad.dropout_rate = 1.0;
  CHECK_THROWS_AS(bad.Validate(), Error);
  bad = TrainConfig{};
  bad.epochs = 0;
  CHECK_THROWS_AS(bad.Validate(), Error);
  bad = TrainConfig{};
  bad.threshold = 1.0;
  CHECK_THROWS_AS(bad.Validate(), Error);
}

TEST_CASE("median") {
  CHECK(Median({3, 1, 2}) == 2);
  CHECK(Median({4, 1, 2, 3}) == 2.5);
}

TEST_CASE("head json round trip") {
  Rng rng(7);
  const DenseHead h = DenseHead::GlorotInit(5, rng, 64);
  const auto j = HeadToJson(h, 0.37);
  CHECK(j["format_version"] == 1);
  CHECK(j["d"] == 5);
  CHECK(j["W1"].size() == 64);
  CHECK(j["W1"][0].size() == 5);
  CHECK(j["W2"].size() == 1);
  CHECK(j["b2"].size() == 1);
  double threshold = 0;
  const DenseHead back = HeadFromJson(j, &threshold);
  CHECK(threshold == 0.37);
  CHECK(back.w1 == h.w1);
  CHECK(back.w2 == h.w2);
  CHECK(back.b2 == h.b2);
  auto broken = j;
  broken["W1"][3] = nlohmann::ordered_json::array({1.0});
  CHECK_THROWS_AS(HeadFromJson(broken), Error);

  // Glorot bound for the first layer.
  const double limit = std::sqrt(6.0 / (5 + 64));
  for (double w : h.w1) CHECK(std::abs(w) <= limit);
}

}  // namespace
}  // namespace actionable
