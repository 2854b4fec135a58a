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
#include <set>

#include "actionable/error.h"
#include "actionable/tfidf_forest.h"

namespace actionable {

using json = nlohmann::ordered_json;

double SparseVector::Get(uint32_t index) const {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), index,
      [](const std::pair<uint32_t, double> &e, uint32_t i) { return e.first < i; });
  if (it == entries.end() || it->first != index) return 0.0;
  return it->second;
}

double SparseVector::Norm() const {
  double sum = 0.0;
  for (const auto &[i, v] : entries) sum += v * v;
  return std::sqrt(sum);
}

TfidfModel FitVocabulary(std::span<const Document> train_docs) {
  std::map<std::string, size_t> df;
  for (const Document &doc : train_docs) {
    std::set<std::string> seen(doc.begin(), doc.end());
    for (const std::string &t : seen) ++df[t];
  }
  if (df.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no terms in training documents");
  }
  TfidfModel model;
  model.doc_count = train_docs.size();
  const double n = static_cast<double>(model.doc_count);
  for (const auto &[term, count] : df) {
    model.vocabulary.emplace(term, static_cast<uint32_t>(model.idf.size()));
    model.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) +
                        1.0);
  }
  return model;
}

SparseVector TfidfModel::Transform(std::span<const std::string> doc) const {
  std::map<uint32_t, double> counts;
  for (const std::string &t : doc) {
    auto it = vocabulary.find(t);
    if (it != vocabulary.end()) counts[it->second] += 1.0;
  }
  SparseVector v;
  double sum = 0.0;
  for (const auto &[i, c] : counts) {
    const double w = c * idf[i];
    v.entries.emplace_back(i, w);
    sum += w * w;
  }
  if (sum > 0.0) {
    const double norm = std::sqrt(sum);
    for (auto &e : v.entries) e.second /= norm;
  }
  return v;
}

json TfidfModel::ToJson() const {
  json vocab = json::object();
  for (const auto &[term, index] : vocabulary) vocab[term] = index;
  return json{{"doc_count", doc_count}, {"vocabulary", vocab}, {"idf", idf}};
}

TfidfModel TfidfModel::FromJson(const json &j) {
  TfidfModel m;
  m.doc_count = j.at("doc_count").get<size_t>();
  m.idf = j.at("idf").get<std::vector<double>>();
  for (const auto &[term, index] : j.at("vocabulary").items()) {
    const auto i = index.get<uint32_t>();
    if (i >= m.idf.size()) {
      throw Error(ErrorCode::kParse, "vocabulary index out of range: " + term);
    }
    m.vocabulary.emplace(term, i);
  }
  if (m.vocabulary.size() != m.idf.size()) {
    throw Error(ErrorCode::kParse, "vocabulary and idf sizes differ");
  }
  return m;
}

}  // namespace actionable
