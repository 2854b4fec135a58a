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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "actionable/error.h"
#include "actionable/tfidf_forest.h"
#include "actionable/util.h"

namespace actionable {

using json = nlohmann::ordered_json;

double GiniImpurity(size_t negatives, size_t positives) {
  const size_t n = negatives + positives;
  if (n == 0) throw Error(ErrorCode::kDegenerateNode, "empty node");
  const double p0 = static_cast<double>(negatives) / static_cast<double>(n);
  const double p1 = static_cast<double>(positives) / static_cast<double>(n);
  return 1.0 - (p0 * p0 + p1 * p1);
}

namespace {

double WeightedGini(size_t neg, size_t pos, size_t total) {
  const size_t n = neg + pos;
  if (n == 0) return 0.0;
  return static_cast<double>(n) / static_cast<double>(total) *
         GiniImpurity(neg, pos);
}

struct Scratch {
  std::vector<std::pair<double, int>> column;
};

// At a fixed node, Gini gain is monotone in
//   (l_neg^2 + l_pos^2) / l_n + (r_neg^2 + r_pos^2) / r_n,
// kept here as an exact fraction so equal gains compare equal.
struct ExactScore {
  unsigned __int128 num = 0;
  unsigned __int128 den = 1;

  bool operator>(const ExactScore &o) const { return num * o.den > o.num * den; }
};

ExactScore Score(size_t l_neg, size_t l_pos, size_t r_neg, size_t r_pos) {
  using u128 = unsigned __int128;
  const u128 ln = l_neg + l_pos, rn = r_neg + r_pos;
  const u128 lsq = u128(l_neg) * l_neg + u128(l_pos) * l_pos;
  const u128 rsq = u128(r_neg) * r_neg + u128(r_pos) * r_pos;
  return {lsq * rn + rsq * ln, ln * rn};
}

struct BestSplit {
  SplitCandidate split;
  ExactScore score;
};

// Evaluates every threshold of one feature. Returns false when the feature
// is constant over the samples.
bool ScanFeature(std::span<const SparseVector> x, std::span<const int> y,
                 std::span<const size_t> samples, uint32_t feature,
                 double parent_gini, size_t total_pos, Scratch &scratch,
                 std::optional<BestSplit> &best) {
  auto &col = scratch.column;
  col.clear();
  for (size_t s : samples) col.emplace_back(x[s].Get(feature), y[s]);
  std::sort(col.begin(), col.end());
  if (col.front().first == col.back().first) return false;

  const size_t n = col.size();
  const size_t total_neg = n - total_pos;
  size_t left_pos = 0;
  for (size_t i = 0; i + 1 < n; ++i) {
    if (col[i].second == 1) ++left_pos;
    if (col[i].first == col[i + 1].first) continue;
    const size_t left_neg = i + 1 - left_pos;
    const size_t right_neg = total_neg - left_neg;
    const size_t right_pos = total_pos - left_pos;
    const ExactScore score = Score(left_neg, left_pos, right_neg, right_pos);
    if (!best || score > best->score) {
      const double gain = parent_gini - WeightedGini(left_neg, left_pos, n) -
                          WeightedGini(right_neg, right_pos, n);
      best = BestSplit{{static_cast<int32_t>(feature),
                        0.5 * (col[i].first + col[i + 1].first), gain},
                       score};
    }
  }
  return true;
}

size_t CountPositives(std::span<const int> y, std::span<const size_t> samples) {
  size_t pos = 0;
  for (size_t s : samples) pos += y[s] == 1 ? 1 : 0;
  return pos;
}

class TreeBuilder {
 public:
  TreeBuilder(std::span<const SparseVector> x, std::span<const int> y,
              size_t num_features, const ForestParams &params,
              size_t per_node, uint64_t seed)
      : x_(x), y_(y), params_(params), per_node_(per_node), rng_(seed),
        perm_(num_features) {
    std::iota(perm_.begin(), perm_.end(), 0u);
  }

  Tree Build() {
    std::vector<size_t> samples(x_.size());
    for (size_t &s : samples) s = rng_.Below(x_.size());
    std::sort(samples.begin(), samples.end());
    Tree tree;
    Grow(tree, std::move(samples), 0);
    return tree;
  }

 private:
  int32_t Grow(Tree &tree, std::vector<size_t> samples, size_t depth) {
    const auto id = static_cast<int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    const size_t n = samples.size();
    const size_t pos = CountPositives(y_, samples);
    tree.nodes[id].positive_fraction =
        static_cast<double>(pos) / static_cast<double>(n);

    const bool pure = pos == 0 || pos == n;
    const bool depth_cap = params_.max_depth && depth >= *params_.max_depth;
    if (pure || depth_cap || n < params_.min_samples_split) return id;

    std::optional<SplitCandidate> best = ChooseSplit(samples, pos);
    if (!best) return id;

    std::vector<size_t> left, right;
    for (size_t s : samples) {
      (x_[s].Get(static_cast<uint32_t>(best->feature)) <= best->threshold
           ? left
           : right)
          .push_back(s);
    }
    samples.clear();
    samples.shrink_to_fit();
    const int32_t l = Grow(tree, std::move(left), depth + 1);
    const int32_t r = Grow(tree, std::move(right), depth + 1);
    TreeNode &node = tree.nodes[id];
    node.feature = best->feature;
    node.threshold = best->threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  // Draws features in seeded random order until `per_node_` non-constant
  // ones have been evaluated or the features run out.
  std::optional<SplitCandidate> ChooseSplit(const std::vector<size_t> &samples,
                                            size_t pos) {
    const double parent = GiniImpurity(samples.size() - pos, pos);
    std::vector<uint32_t> drawn;
    size_t usable = 0;
    std::optional<BestSplit> probe;
    for (size_t k = 0; k < perm_.size() && usable < per_node_; ++k) {
      const size_t j = k + rng_.Below(perm_.size() - k);
      std::swap(perm_[k], perm_[j]);
      const uint32_t f = perm_[k];
      probe.reset();
      if (ScanFeature(x_, y_, samples, f, parent, pos, scratch_, probe)) {
        drawn.push_back(f);
        ++usable;
      }
    }
    if (drawn.empty()) return std::nullopt;
    std::sort(drawn.begin(), drawn.end());
    return FindBestSplit(x_, y_, samples, drawn);
  }

  std::span<const SparseVector> x_;
  std::span<const int> y_;
  const ForestParams &params_;
  size_t per_node_;
  Rng rng_;
  std::vector<uint32_t> perm_;
  Scratch scratch_;
};

void CollectDepth(const Tree &tree, int32_t node, size_t depth, size_t &max) {
  max = std::max(max, depth);
  const TreeNode &n = tree.nodes[node];
  if (n.is_leaf()) return;
  CollectDepth(tree, n.left, depth + 1, max);
  CollectDepth(tree, n.right, depth + 1, max);
}

}  // namespace

std::optional<SplitCandidate> FindBestSplit(std::span<const SparseVector> x,
                                            std::span<const int> y,
                                            std::span<const size_t> samples,
                                            std::span<const uint32_t> features) {
  if (samples.empty()) return std::nullopt;
  std::vector<uint32_t> sorted(features.begin(), features.end());
  std::sort(sorted.begin(), sorted.end());
  const size_t pos = CountPositives(y, samples);
  const double parent = GiniImpurity(samples.size() - pos, pos);
  Scratch scratch;
  std::optional<BestSplit> best;
  for (uint32_t f : sorted) {
    ScanFeature(x, y, samples, f, parent, pos, scratch, best);
  }
  if (!best) return std::nullopt;
  return best->split;
}

double Tree::Predict(const SparseVector &x) const {
  int32_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode &n = nodes[i];
    i = x.Get(static_cast<uint32_t>(n.feature)) <= n.threshold ? n.left : n.right;
  }
  return nodes[i].positive_fraction;
}

size_t Tree::Depth() const {
  size_t max = 0;
  if (!nodes.empty()) CollectDepth(*this, 0, 0, max);
  return max;
}

double Forest::Predict(const SparseVector &x) const {
  if (trees.empty()) return 0.0;
  double sum = 0.0;
  for (const Tree &t : trees) sum += t.Predict(x);
  return sum / static_cast<double>(trees.size());
}

Forest TrainForest(std::span<const SparseVector> x, std::span<const int> y,
                   size_t num_features, const ForestParams &params,
                   uint64_t seed) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument, "X and y sizes differ");
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two samples");
  }
  if (params.n_trees == 0) {
    throw Error(ErrorCode::kInvalidArgument, "n_trees must be >= 1");
  }
  const size_t pos = static_cast<size_t>(std::count(y.begin(), y.end(), 1));
  if (pos == 0 || pos == y.size()) {
    throw Error(ErrorCode::kSingleClass, "training labels contain one class");
  }
  for (const SparseVector &v : x) {
    if (!v.entries.empty() && v.entries.back().first >= num_features) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "feature index beyond num_features");
    }
  }

  Forest forest;
  forest.num_features = num_features;
  forest.seed = seed;
  forest.feature_subsample =
      params.feature_subsample > 0
          ? std::min(params.feature_subsample, num_features)
          : static_cast<size_t>(
                std::ceil(std::sqrt(static_cast<double>(num_features))));
  forest.feature_subsample = std::max<size_t>(forest.feature_subsample, 1);
  for (size_t t = 0; t < params.n_trees; ++t) {
    TreeBuilder builder(x, y, num_features, params, forest.feature_subsample,
                        DeriveSeed(seed, t));
    forest.trees.push_back(builder.Build());
  }
  return forest;
}

json Forest::ToJson() const {
  json trees_json = json::array();
  for (const Tree &t : trees) {
    json nodes = json::array();
    for (const TreeNode &n : t.nodes) {
      if (n.is_leaf()) {
        nodes.push_back(json{{"p", n.positive_fraction}});
      } else {
        nodes.push_back(json{{"f", n.feature}, {"t", n.threshold},
                             {"l", n.left}, {"r", n.right}});
      }
    }
    trees_json.push_back(std::move(nodes));
  }
  return json{{"num_features", num_features},
              {"feature_subsample", feature_subsample},
              {"seed", seed},
              {"trees", std::move(trees_json)}};
}

Forest Forest::FromJson(const json &j) {
  Forest f;
  f.num_features = j.at("num_features").get<size_t>();
  f.feature_subsample = j.at("feature_subsample").get<size_t>();
  f.seed = j.at("seed").get<uint64_t>();
  for (const json &nodes : j.at("trees")) {
    Tree t;
    for (const json &n : nodes) {
      TreeNode node;
      if (n.contains("p")) {
        node.positive_fraction = n["p"].get<double>();
      } else {
        node.feature = n.at("f").get<int32_t>();
        node.threshold = n.at("t").get<double>();
        node.left = n.at("l").get<int32_t>();
        node.right = n.at("r").get<int32_t>();
      }
      t.nodes.push_back(node);
    }
    const auto size = static_cast<int32_t>(t.nodes.size());
    if (size == 0) throw Error(ErrorCode::kParse, "empty tree");
    for (int32_t i = 0; i < size; ++i) {
      const TreeNode &node = t.nodes[i];
      if (!node.is_leaf() && (node.left <= i || node.left >= size ||
                              node.right <= i || node.right >= size)) {
        throw Error(ErrorCode::kParse, "tree child index out of range");
      }
    }
    f.trees.push_back(std::move(t));
  }
  return f;
}

json ForestModelToJson(const TfidfModel &tfidf, const Forest &forest) {
  return json{{"format_version", 1},
              {"tfidf", tfidf.ToJson()},
              {"forest", forest.ToJson()}};
}

}  // namespace actionable
