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
#include <set>
#include <string>
#include <vector>

#include "actionable/dataset_builder.h"
#include "actionable/error.h"
#include "actionable/util.h"
#include "doctest.h"
#include "json.hpp"

namespace actionable {
namespace {

FilterConfig Defaults() {
  FilterConfig cfg;
  cfg.lexicon = Lexicon::Default();
  return cfg;
}

Sentence MakeSentence(const std::string &text, const std::string &id, size_t index) {
  Sentence s;
  s.text = text;
  s.tokens = Tokenize(text);
  s.origin = {id, index};
  return s;
}

// `pos` sentences that pass every filter, `neg` rejected at F1.
std::vector<Sentence> Mixed(size_t pos, size_t neg) {
  std::vector<Sentence> out;
  for (size_t i = 0; i < pos; ++i) {
    out.push_back(MakeSentence("Send me report " + std::to_string(i), "p", i));
  }
  for (size_t i = 0; i < neg; ++i) {
    out.push_back(MakeSentence("I like the guitar " + std::to_string(i), "n", i));
  }
  return out;
}

std::vector<LabeledExample> Labeled(size_t pos, size_t neg) {
  std::vector<LabeledExample> out;
  for (size_t i = 0; i < pos + neg; ++i) {
    LabeledExample e;
    e.text = "x" + std::to_string(i);
    e.label = i < pos ? 1 : 0;
    out.push_back(e);
  }
  return out;
}

TEST_CASE("weak_label examples") {
  FilterVerdict v;
  v.passed = true;
  CHECK(WeakLabel(v) == 1);
  v.passed = false;
  v.rejected_by = FilterStage::kActionVerb;
  CHECK(WeakLabel(v) == 0);
  v.rejected_by = FilterStage::kNegation;
  CHECK(WeakLabel(v) == 0);
}

TEST_CASE("build_dataset: 100 positives, 900 negatives, balance 1") {
  const auto sentences = Mixed(100, 900);
  const BuildResult r = BuildDatasetFromSentences(sentences, Defaults(), 1.0, 42);
  CHECK(r.positives_found == 100);
  CHECK(r.negatives_found == 900);
  CHECK_FALSE(r.negatives_short);
  CHECK(r.dataset.examples.size() == 200);
  size_t pos = 0;
  for (const auto &e : r.dataset.examples) {
    pos += e.label;
    CHECK(e.label == WeakLabel(e.trace));
  }
  CHECK(pos == 100);
  CHECK(r.funnel.total == 1000);
  CHECK(r.funnel.passed == 100);
  CHECK(r.funnel.rejected.at(FilterStage::kActionVerb) == 900);

  const BuildResult half = BuildDatasetFromSentences(sentences, Defaults(), 0.5, 42);
  CHECK(half.dataset.examples.size() == 150);
  const BuildResult odd = BuildDatasetFromSentences(Mixed(3, 10), Defaults(), 0.5, 42);
  CHECK(odd.dataset.examples.size() == 4);  // floor(1.5) negatives
}

TEST_CASE("build_dataset: no negatives available keeps positives and flags") {
  const BuildResult r = BuildDatasetFromSentences(Mixed(7, 0), Defaults(), 1.0, 1);
  CHECK(r.dataset.examples.size() == 7);
  CHECK(r.negatives_short);
}

TEST_CASE("build_dataset: errors") {
  try {
    BuildDatasetFromSentences(Mixed(0, 5), Defaults(), 1.0, 1);
    FAIL("expected EmptyDataset");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kEmptyDataset);
  }
  CHECK_THROWS_AS(BuildDatasetFromSentences(Mixed(3, 3), Defaults(), 0.0, 1), Error);
}

TEST_CASE("build_dataset: determinism and seed sensitivity") {
  const auto sentences = Mixed(50, 300);
  const auto a = BuildDatasetFromSentences(sentences, Defaults(), 1.0, 9);
  const auto b = BuildDatasetFromSentences(sentences, Defaults(), 1.0, 9);
  const auto c = BuildDatasetFromSentences(sentences, Defaults(), 1.0, 10);
  CHECK(DatasetToJsonl(a.dataset) == DatasetToJsonl(b.dataset));
  CHECK(DatasetToJsonl(a.dataset) != DatasetToJsonl(c.dataset));
}

TEST_CASE("build_dataset from messages runs segmentation") {
  std::vector<EmailMessage> corpus = {
      {"m1", "Send me the report today. I like jazz music a lot.", "m1"},
      {"m2", "Please call him tomorrow morning.", "m2"}};
  const auto r = BuildDataset(corpus, Defaults(), 1.0, 3);
  CHECK(r.funnel.total == 3);
  CHECK(r.positives_found == 2);
  std::set<std::string> origins;
  for (const auto &e : r.dataset.examples) origins.insert(e.origin);
  CHECK(origins.count("m1#0") == 1);
  CHECK(origins.count("m2#0") == 1);
}

TEST_CASE("split examples") {
  auto counts = [](const std::vector<Split> &a) {
    std::array<size_t, 3> c{};
    for (Split s : a) ++c[static_cast<int>(s)];
    return c;
  };
  const auto ten = AssignSplits(Labeled(5, 5), {0.8, 0.0, 0.2}, 1);
  CHECK(counts(ten) == std::array<size_t, 3>{8, 0, 2});

  const auto examples = Labeled(50, 50);
  const auto hundred = AssignSplits(examples, {0.72, 0.08, 0.20}, 1);
  CHECK(counts(hundred) == std::array<size_t, 3>{72, 8, 20});
  std::array<size_t, 3> pos{};
  for (size_t i = 0; i < examples.size(); ++i) pos[static_cast<int>(hundred[i])] += examples[i].label;
  CHECK(std::abs(static_cast<long>(pos[0]) - 36) <= 1);
  CHECK(std::abs(static_cast<long>(pos[1]) - 4) <= 1);
  CHECK(std::abs(static_cast<long>(pos[2]) - 10) <= 1);

  try {
    AssignSplits(examples, {0.5, 0.6, 0.2}, 1);
    FAIL("expected RatioError");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kRatio);
  }
  CHECK_THROWS_AS(AssignSplits(examples, {1.2, -0.2, 0.0}, 1), Error);
}

TEST_CASE("apportion: largest remainder") {
  const double w[] = {0.72, 0.08, 0.20};
  CHECK(Apportion(10, w) == std::vector<size_t>{7, 1, 2});
  CHECK(Apportion(0, w) == std::vector<size_t>{0, 0, 0});
  const double thirds[] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(Apportion(2, thirds) == std::vector<size_t>{1, 1, 0});
}

TEST_CASE("property: splits partition and respect ratio per stratum") {
  Rng rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    const size_t pos = rng.Below(300);
    const size_t neg = rng.Below(300);
    double a = rng.Uniform(), b = rng.Uniform() * (1 - a);
    const SplitRatios ratios{a, b, 1.0 - a - b};
    const auto examples = Labeled(pos, neg);
    const uint64_t seed = rng.NextU64();
    const auto assign = AssignSplits(examples, ratios, seed);
    REQUIRE(assign.size() == examples.size());
    CHECK(assign == AssignSplits(examples, ratios, seed));

    const double r[3] = {ratios.train, ratios.val, ratios.test};
    std::array<double, 3> total{}, cell_pos{}, cell_neg{};
    for (size_t i = 0; i < assign.size(); ++i) {
      const int s = static_cast<int>(assign[i]);
      total[s] += 1;
      (examples[i].label ? cell_pos : cell_neg)[s] += 1;
    }
    const double n = static_cast<double>(pos + neg);
    for (int s = 0; s < 3; ++s) {
      CAPTURE(trial);
      CHECK(std::abs(total[s] - r[s] * n) <= 1.0 + 1e-9);
      CHECK(std::abs(cell_pos[s] - r[s] * pos) <= 1.0 + 1e-9);
      CHECK(std::abs(cell_neg[s] - r[s] * neg) <= 1.0 + 1e-9);
      // Stratified fraction for larger splits.
      if (total[s] >= 200 && n > 0) {
        CHECK(std::abs(cell_pos[s] / total[s] - pos / n) <= 0.02);
      }
    }
  }
}

TEST_CASE("jsonl round trip") {
  auto r = BuildDatasetFromSentences(Mixed(20, 40), Defaults(), 1.0, 2);
  r.dataset.split_assignment = AssignSplits(r.dataset.examples, {}, 2);
  const std::string text = DatasetToJsonl(r.dataset);
  CHECK(text.back() == '\n');
  const size_t first_nl = text.find('\n');
  const std::string first = text.substr(0, first_nl);
  CHECK(first.find("{\"text\":") == 0);
  CHECK(first.find("\"label\"") < first.find("\"split\""));
  CHECK(first.find("\"rejected_by\"") < first.find("\"matched_verbs\""));
  const LabeledDataset back = DatasetFromJsonl(text);
  CHECK(DatasetToJsonl(back) == text);
  CHECK(back.split_assignment == r.dataset.split_assignment);

  CHECK_THROWS_AS(DatasetFromJsonl("{\"text\":\"a\",\"label\":1,\"split\":\"train\","
                                   "\"origin\":\"o\",\"rejected_by\":\"F2_length\","
                                   "\"matched_verbs\":[]}\n"),
                  Error);
  CHECK_THROWS_AS(DatasetFromJsonl("not json\n"), Error);
}

TEST_CASE("funnel json counts every stage") {
  FunnelReport f;
  f.total = 10;
  f.passed = 4;
  f.rejected[FilterStage::kActionVerb] = 6;
  const auto j = nlohmann::json::parse(FunnelToJson(f));
  CHECK(j["total"] == 10);
  CHECK(j["passed"] == 4);
  CHECK(j["rejected"]["F1_action_verb"] == 6);
  CHECK(j["rejected"]["F4_negation"] == 0);
}

}  // namespace
}  // namespace actionable
