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

#include "actionable/pipeline.h"

#include "actionable/error.h"
#include "actionable/text_segment.h"
#include "actionable/util.h"

namespace actionable {

using json = nlohmann::ordered_json;

Document DocumentTokens(std::string_view text) {
  Document doc;
  for (Token &t : Tokenize(text)) doc.push_back(std::move(t.lower));
  return doc;
}

std::vector<std::string> SplitTexts(const LabeledDataset &ds, Split split) {
  std::vector<std::string> out;
  for (size_t i : ds.Indices(split)) out.push_back(ds.examples[i].text);
  return out;
}

std::vector<int> SplitLabels(const LabeledDataset &ds, Split split) {
  std::vector<int> out;
  for (size_t i : ds.Indices(split)) out.push_back(ds.examples[i].label);
  return out;
}

std::vector<double> ForestTextModel::PredictProba(
    std::span<const std::string> texts) {
  std::vector<double> out;
  out.reserve(texts.size());
  for (const std::string &t : texts) {
    const Document doc = DocumentTokens(t);
    out.push_back(forest_.Predict(tfidf_.Transform(doc)));
  }
  return out;
}

json ForestTextModel::ToJson() const {
  return ForestModelToJson(tfidf_, forest_);
}

std::vector<double> DenseTextModel::PredictProba(
    std::span<const std::string> texts) {
  const std::vector<EmbeddingVector> vecs = client_->Embed(texts);
  std::vector<double> out;
  out.reserve(vecs.size());
  for (const EmbeddingVector &v : vecs) out.push_back(Forward(v, head_));
  return out;
}

json DenseTextModel::ToJson() const {
  json j = HeadToJson(head_, threshold_);
  const BackendConfig &b = client_->config();
  json emb{{"backend", b.kind == BackendKind::kStub ? "stub" : "remote"}};
  if (b.kind == BackendKind::kStub) {
    emb["dim"] = b.dim;
    emb["seed"] = b.seed;
  } else {
    emb["endpoint"] = b.endpoint;
  }
  j["embedding"] = emb;
  return j;
}

std::unique_ptr<ForestTextModel> TrainForestModel(const LabeledDataset &ds,
                                                  const ForestParams &params,
                                                  uint64_t seed) {
  const std::vector<std::string> texts = SplitTexts(ds, Split::kTrain);
  const std::vector<int> labels = SplitLabels(ds, Split::kTrain);
  std::vector<Document> docs;
  docs.reserve(texts.size());
  for (const std::string &t : texts) docs.push_back(DocumentTokens(t));
  TfidfModel tfidf = FitVocabulary(docs);
  std::vector<SparseVector> x;
  x.reserve(docs.size());
  for (const Document &d : docs) x.push_back(tfidf.Transform(d));
  Forest forest = TrainForest(x, labels, tfidf.size(), params, seed);
  return std::make_unique<ForestTextModel>(std::move(tfidf), std::move(forest));
}

DenseTraining TrainDenseModel(const LabeledDataset &ds,
                              const BackendConfig &backend,
                              const TrainConfig &cfg) {
  EmbeddingClient client(backend);
  std::vector<HeadExample> train_set, val_set;
  std::vector<std::string> texts;
  for (size_t i : ds.Indices(Split::kTrain)) {
    train_set.push_back({ds.examples[i].text, ds.examples[i].label});
    texts.push_back(ds.examples[i].text);
  }
  for (size_t i : ds.Indices(Split::kVal)) {
    val_set.push_back({ds.examples[i].text, ds.examples[i].label});
    texts.push_back(ds.examples[i].text);
  }
  const std::vector<EmbeddingVector> vecs = client.Embed(texts);
  EmbeddingTable table;
  for (size_t i = 0; i < texts.size(); ++i) table.emplace(texts[i], vecs[i]);

  TrainResult trained = Train(train_set, val_set, table, cfg);
  DenseTraining out;
  out.history = std::move(trained.history);
  out.model = std::make_unique<DenseTextModel>(std::move(trained.head),
                                               trained.threshold, backend);
  return out;
}

MetricsReport Evaluate(TextModel &model, const LabeledDataset &ds, Split split) {
  MetricsReport report;
  report.model = model.kind();
  report.threshold = model.threshold();
  std::optional<Metrics> chosen;
  for (Split s : {Split::kTrain, Split::kVal, Split::kTest}) {
    const std::vector<std::string> texts = SplitTexts(ds, s);
    if (texts.empty()) continue;
    const std::vector<int> truth = SplitLabels(ds, s);
    const std::vector<double> probs = model.PredictProba(texts);
    std::vector<int> preds;
    preds.reserve(probs.size());
    for (double p : probs) preds.push_back(Classify(p, report.threshold));
    const Metrics m = ComputeMetrics(Confusion(preds, truth));
    switch (s) {
      case Split::kTrain: report.train_accuracy = m.accuracy; break;
      case Split::kVal: report.val_accuracy = m.accuracy; break;
      case Split::kTest: report.test_accuracy = m.accuracy; break;
    }
    if (s == split) chosen = m;
  }
  if (!chosen) {
    throw Error(ErrorCode::kInvalidArgument,
                "split '" + std::string(SplitName(split)) + "' is empty");
  }
  report.metrics = *chosen;
  return report;
}

std::unique_ptr<TextModel> LoadModel(const std::filesystem::path &path,
                                     const std::string &endpoint) {
  json j = json::parse(ReadFile(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kParse, path.string() + ": not a JSON object");
  }
  if (j.value("format_version", 0) != 1) {
    throw Error(ErrorCode::kParse, path.string() + ": unsupported format_version");
  }
  try {
    if (j.contains("forest")) {
      return std::make_unique<ForestTextModel>(TfidfModel::FromJson(j.at("tfidf")),
                                               Forest::FromJson(j.at("forest")));
    }
    if (j.contains("W1")) {
      double threshold = 0.5;
      DenseHead head = HeadFromJson(j, &threshold);
      BackendConfig backend;
      const json emb = j.value("embedding", json::object());
      const std::string kind = emb.value("backend", "stub");
      if (kind == "remote") {
        backend.kind = BackendKind::kRemote;
        backend.endpoint =
            endpoint.empty() ? emb.value("endpoint", std::string()) : endpoint;
      } else {
        backend.dim = emb.value("dim", head.d);
        backend.seed = emb.value("seed", uint64_t{1});
      }
      return std::make_unique<DenseTextModel>(std::move(head), threshold,
                                              std::move(backend));
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  throw Error(ErrorCode::kParse, path.string() + ": unknown model document");
}

}  // namespace actionable
