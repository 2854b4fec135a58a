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

#ifndef ACTIONABLE_DATASET_BUILDER_H_
#define ACTIONABLE_DATASET_BUILDER_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "actionable/corpus_ingest.h"
#include "actionable/filter_pipeline.h"
#include "actionable/text_segment.h"

namespace actionable {

enum class Split { kTrain, kVal, kTest };

std::string_view SplitName(Split split);
std::optional<Split> ParseSplit(std::string_view name);

struct LabeledExample {
  std::string text;
  int label = 0;
  std::string origin;
  FilterVerdict trace;
};

struct SplitRatios {
  double train = 0.72;
  double val = 0.08;
  double test = 0.20;
};

struct LabeledDataset {
  std::vector<LabeledExample> examples;
  uint64_t seed = 0;
  std::vector<Split> split_assignment;  // parallel to examples when assigned

  // Indices of examples assigned to `split`, in dataset order.
  std::vector<size_t> Indices(Split split) const;
};

// Per-filter rejection counts over every sentence seen by the cascade.
struct FunnelReport {
  size_t total = 0;
  size_t passed = 0;
  std::map<FilterStage, size_t> rejected;
};

struct BuildResult {
  LabeledDataset dataset;
  FunnelReport funnel;
  size_t positives_found = 0;
  size_t negatives_found = 0;
  // Set when fewer negatives were available than the balance asked for.
  bool negatives_short = false;
};

int WeakLabel(const FilterVerdict &verdict);

// Filters every sentence, labels it, keeps all positives and a seeded
// uniform sample of floor(balance * positives) negatives, then shuffles.
// Throws Error(kEmptyDataset) when no positives are found.
BuildResult BuildDatasetFromSentences(std::span<const Sentence> sentences,
                                      const FilterConfig &cfg, double balance,
                                      uint64_t seed);

BuildResult BuildDataset(std::span<const EmailMessage> corpus,
                         const FilterConfig &cfg, double balance,
                         uint64_t seed);

// Seeded assignment stratified by label. Every (label, split) cell is
// within one example of ratio * stratum size and every split total within
// one of ratio * N. Throws Error(kRatio) for negative ratios or ratios not
// summing to 1.
std::vector<Split> AssignSplits(std::span<const LabeledExample> examples,
                                const SplitRatios &ratios, uint64_t seed);

// Largest-remainder apportionment of `total` items over `weights`.
std::vector<size_t> Apportion(size_t total, std::span<const double> weights);

// JSON Lines: {"text","label","split","origin","rejected_by","matched_verbs"}.
std::string DatasetToJsonl(const LabeledDataset &dataset);
LabeledDataset DatasetFromJsonl(std::string_view text);

std::string FunnelToJson(const FunnelReport &funnel);

}  // namespace actionable

#endif  // ACTIONABLE_DATASET_BUILDER_H_
