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

#ifndef ACTIONABLE_TFIDF_FOREST_H_
#define ACTIONABLE_TFIDF_FOREST_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace actionable {

// Sparse vector with strictly increasing indices.
struct SparseVector {
  std::vector<std::pair<uint32_t, double>> entries;

  double Get(uint32_t index) const;
  double Norm() const;
};

using Document = std::vector<std::string>;

// Smooth TF-IDF: idf(t) = ln((1 + N) / (1 + df(t))) + 1. Vocabulary indices
// follow the lexicographic order of the terms.
struct TfidfModel {
  std::map<std::string, uint32_t> vocabulary;
  std::vector<double> idf;  // indexed by column
  size_t doc_count = 0;

  size_t size() const { return idf.size(); }

  // Raw counts times idf, L2-normalised. Unknown terms are ignored; a
  // document with no known terms maps to the zero vector.
  SparseVector Transform(std::span<const std::string> doc) const;

  nlohmann::ordered_json ToJson() const;
  static TfidfModel FromJson(const nlohmann::ordered_json &j);
};

// Throws Error(kEmptyCorpus) unless at least one document has a term.
TfidfModel FitVocabulary(std::span<const Document> train_docs);

// 1 - sum p_i^2 over (negative, positive) counts.
// Throws Error(kDegenerateNode) when both counts are zero.
double GiniImpurity(size_t negatives, size_t positives);

struct TreeNode {
  // Internal nodes: feature/threshold/children; go left when x <= threshold.
  int32_t feature = -1;
  double threshold = 0.0;
  int32_t left = -1;
  int32_t right = -1;
  // Leaves: fraction of positive training samples.
  double positive_fraction = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double Predict(const SparseVector &x) const;
  size_t Depth() const;
};

struct ForestParams {
  size_t n_trees = 100;
  std::optional<size_t> max_depth;  // unbounded when empty
  size_t min_samples_split = 2;
  // Features drawn per node; 0 means ceil(sqrt(num_features)).
  size_t feature_subsample = 0;
};

struct Forest {
  std::vector<Tree> trees;
  size_t num_features = 0;
  size_t feature_subsample = 0;
  uint64_t seed = 0;

  // Mean of per-tree leaf fractions.
  double Predict(const SparseVector &x) const;

  nlohmann::ordered_json ToJson() const;
  static Forest FromJson(const nlohmann::ordered_json &j);
};

struct SplitCandidate {
  int32_t feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Exhaustive best Gini-gain split over `features` for the samples at a
// node. Thresholds are midpoints between consecutive distinct values. Ties
// go to the lowest feature index, then the lowest threshold. Returns
// nothing when no feature takes two distinct values.
std::optional<SplitCandidate> FindBestSplit(std::span<const SparseVector> x,
                                            std::span<const int> y,
                                            std::span<const size_t> samples,
                                            std::span<const uint32_t> features);

// Bootstrap-sampled CART trees. Throws Error(kSingleClass) unless both
// labels occur, Error(kInvalidArgument) on size mismatch or |X| < 2.
Forest TrainForest(std::span<const SparseVector> x, std::span<const int> y,
                   size_t num_features, const ForestParams &params,
                   uint64_t seed);

// {"format_version":1, "tfidf":{...}, "forest":{...}}
nlohmann::ordered_json ForestModelToJson(const TfidfModel &tfidf, const Forest &forest);

}  // namespace actionable

#endif  // ACTIONABLE_TFIDF_FOREST_H_
