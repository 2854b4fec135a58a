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

#ifndef ACTIONABLE_PIPELINE_H_
#define ACTIONABLE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "actionable/dataset_builder.h"
#include "actionable/dense_head.h"
#include "actionable/embedding_client.h"
#include "actionable/eval_metrics.h"
#include "actionable/tfidf_forest.h"
#include "json.hpp"

namespace actionable {

// A trained text classifier: maps raw sentences to probabilities.
class TextModel {
 public:
  virtual ~TextModel() = default;

  virtual std::string kind() const = 0;  // "forest" | "dense_head"
  virtual double threshold() const = 0;
  virtual std::vector<double> PredictProba(
      std::span<const std::string> texts) = 0;
  virtual nlohmann::ordered_json ToJson() const = 0;
};

class ForestTextModel : public TextModel {
 public:
  ForestTextModel(TfidfModel tfidf, Forest forest)
      : tfidf_(std::move(tfidf)), forest_(std::move(forest)) {}

  std::string kind() const override { return "forest"; }
  double threshold() const override { return 0.5; }
  std::vector<double> PredictProba(std::span<const std::string> texts) override;
  nlohmann::ordered_json ToJson() const override;

  const TfidfModel &tfidf() const { return tfidf_; }
  const Forest &forest() const { return forest_; }

 private:
  TfidfModel tfidf_;
  Forest forest_;
};

class DenseTextModel : public TextModel {
 public:
  DenseTextModel(DenseHead head, double threshold, BackendConfig backend)
      : head_(std::move(head)), threshold_(threshold),
        client_(std::make_unique<EmbeddingClient>(std::move(backend))) {}

  std::string kind() const override { return "dense_head"; }
  double threshold() const override { return threshold_; }
  std::vector<double> PredictProba(std::span<const std::string> texts) override;
  nlohmann::ordered_json ToJson() const override;

  const DenseHead &head() const { return head_; }

 private:
  DenseHead head_;
  double threshold_;
  std::unique_ptr<EmbeddingClient> client_;
};

// Tokens fed to the TF-IDF vectoriser: lowercased rule-tokenizer output.
Document DocumentTokens(std::string_view text);

std::vector<std::string> SplitTexts(const LabeledDataset &ds, Split split);
std::vector<int> SplitLabels(const LabeledDataset &ds, Split split);

// Fits TF-IDF and the forest on the train split.
std::unique_ptr<ForestTextModel> TrainForestModel(const LabeledDataset &ds,
                                                  const ForestParams &params,
                                                  uint64_t seed);

struct DenseTraining {
  std::unique_ptr<DenseTextModel> model;
  History history;
};

// Embeds the train/val splits through `backend` and trains the head.
DenseTraining TrainDenseModel(const LabeledDataset &ds,
                              const BackendConfig &backend,
                              const TrainConfig &cfg);

// Accuracy on every non-empty split; precision/recall/F1 on `split`.
MetricsReport Evaluate(TextModel &model, const LabeledDataset &ds, Split split);

// Reads a model document written by TextModel::ToJson(). `endpoint`, when
// non-empty, overrides the remote endpoint stored with a dense model.
std::unique_ptr<TextModel> LoadModel(const std::filesystem::path &path,
                                     const std::string &endpoint = {});

}  // namespace actionable

#endif  // ACTIONABLE_PIPELINE_H_
