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

#include "actionable/dataset_builder.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "actionable/error.h"
#include "actionable/util.h"
#include "json.hpp"

namespace actionable {

using json = nlohmann::ordered_json;

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "";
}

std::optional<Split> ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

std::vector<size_t> LabeledDataset::Indices(Split split) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < split_assignment.size(); ++i) {
    if (split_assignment[i] == split) out.push_back(i);
  }
  return out;
}

int WeakLabel(const FilterVerdict &verdict) { return verdict.passed ? 1 : 0; }

BuildResult BuildDatasetFromSentences(std::span<const Sentence> sentences,
                                      const FilterConfig &cfg, double balance,
                                      uint64_t seed) {
  if (!(balance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "balance must be > 0");
  }
  cfg.Validate();

  BuildResult result;
  std::vector<LabeledExample> positives;
  std::vector<LabeledExample> negatives;
  for (const Sentence &s : sentences) {
    LabeledExample ex;
    ex.text = s.text;
    ex.origin = s.origin.ToString();
    ex.trace = ApplyFilters(s, cfg);
    ex.label = WeakLabel(ex.trace);
    ++result.funnel.total;
    if (ex.trace.passed) {
      ++result.funnel.passed;
      positives.push_back(std::move(ex));
    } else {
      ++result.funnel.rejected[*ex.trace.rejected_by];
      negatives.push_back(std::move(ex));
    }
  }
  result.positives_found = positives.size();
  result.negatives_found = negatives.size();
  if (positives.empty()) {
    throw Error(ErrorCode::kEmptyDataset,
                "no sentence passed the filter cascade (" +
                    std::to_string(sentences.size()) + " sentences)");
  }

  const auto wanted = static_cast<size_t>(
      std::floor(balance * static_cast<double>(positives.size())));
  result.negatives_short = negatives.size() < wanted;

  // Uniform sample without replacement; kept negatives retain corpus order
  // before the final shuffle.
  std::vector<size_t> order(negatives.size());
  std::iota(order.begin(), order.end(), 0);
  Rng sample_rng(DeriveSeed(seed, 1));
  sample_rng.Shuffle(order);
  order.resize(std::min(wanted, order.size()));
  std::sort(order.begin(), order.end());

  LabeledDataset &ds = result.dataset;
  ds.seed = seed;
  ds.examples = std::move(positives);
  for (size_t i : order) ds.examples.push_back(std::move(negatives[i]));
  Rng shuffle_rng(DeriveSeed(seed, 2));
  shuffle_rng.Shuffle(ds.examples);
  return result;
}

BuildResult BuildDataset(std::span<const EmailMessage> corpus,
                         const FilterConfig &cfg, double balance,
                         uint64_t seed) {
  std::vector<Sentence> sentences;
  for (const EmailMessage &msg : corpus) {
    for (Sentence &s : SplitSentences(msg.body, msg.id)) {
      sentences.push_back(std::move(s));
    }
  }
  return BuildDatasetFromSentences(sentences, cfg, balance, seed);
}

std::vector<size_t> Apportion(size_t total, std::span<const double> weights) {
  std::vector<size_t> counts(weights.size(), 0);
  std::vector<double> remainder(weights.size(), 0.0);
  size_t assigned = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    const double exact = weights[i] * static_cast<double>(total);
    counts[i] = static_cast<size_t>(std::floor(exact + 1e-9));
    remainder[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return remainder[a] > remainder[b];
  });
  for (size_t k = 0; assigned < total && k < order.size(); ++k) {
    if (weights[order[k]] <= 0.0) continue;
    ++counts[order[k]];
    ++assigned;
  }
  return counts;
}

std::vector<Split> AssignSplits(std::span<const LabeledExample> examples,
                                const SplitRatios &ratios, uint64_t seed) {
  const std::array<double, 3> r = {ratios.train, ratios.val, ratios.test};
  for (double x : r) {
    if (!(x >= 0.0) || x > 1.0) {
      throw Error(ErrorCode::kRatio, "split ratios must lie in [0, 1]");
    }
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) {
    throw Error(ErrorCode::kRatio, "split ratios must sum to 1");
  }

  std::array<std::vector<size_t>, 2> strata;
  for (size_t i = 0; i < examples.size(); ++i) {
    strata[examples[i].label == 1 ? 1 : 0].push_back(i);
  }

  // Split totals first, then per-stratum cells: each cell is the floor of
  // its exact share plus at most one, with the extra units placed so that
  // row sums hit the stratum sizes and column sums hit the split totals.
  const std::vector<size_t> totals = Apportion(examples.size(), r);
  std::array<std::array<size_t, 3>, 2> cells{};
  std::array<std::array<double, 3>, 2> frac{};
  std::array<size_t, 2> row_deficit{};
  std::array<long, 3> col_room{};
  for (size_t s = 0; s < 3; ++s) col_room[s] = static_cast<long>(totals[s]);
  for (size_t c = 0; c < 2; ++c) {
    size_t used = 0;
    for (size_t s = 0; s < 3; ++s) {
      const double exact = r[s] * static_cast<double>(strata[c].size());
      cells[c][s] = static_cast<size_t>(std::floor(exact + 1e-9));
      frac[c][s] = exact - static_cast<double>(cells[c][s]);
      used += cells[c][s];
      col_room[s] -= static_cast<long>(cells[c][s]);
    }
    row_deficit[c] = strata[c].size() - used;
  }
  std::array<size_t, 2> rows = {0, 1};
  if (row_deficit[1] > row_deficit[0]) std::swap(rows[0], rows[1]);
  for (size_t c : rows) {
    std::array<size_t, 3> cols = {0, 1, 2};
    std::stable_sort(cols.begin(), cols.end(), [&](size_t a, size_t b) {
      if (col_room[a] != col_room[b]) return col_room[a] > col_room[b];
      return frac[c][a] > frac[c][b];
    });
    for (size_t k = 0; k < row_deficit[c]; ++k) {
      const size_t s = cols[k % 3];
      ++cells[c][s];
      --col_room[s];
    }
  }

  std::vector<Split> assignment(examples.size(), Split::kTrain);
  Rng rng(seed);
  for (size_t c = 0; c < 2; ++c) {
    std::vector<size_t> idx = strata[c];
    rng.Shuffle(idx);
    size_t pos = 0;
    for (size_t s = 0; s < 3; ++s) {
      for (size_t k = 0; k < cells[c][s]; ++k) {
        assignment[idx[pos++]] = static_cast<Split>(s);
      }
    }
  }
  return assignment;
}

std::string DatasetToJsonl(const LabeledDataset &dataset) {
  std::string out;
  for (size_t i = 0; i < dataset.examples.size(); ++i) {
    const LabeledExample &ex = dataset.examples[i];
    json j;
    j["text"] = ex.text;
    j["label"] = ex.label;
    if (i < dataset.split_assignment.size()) {
      j["split"] = SplitName(dataset.split_assignment[i]);
    } else {
      j["split"] = nullptr;
    }
    j["origin"] = ex.origin;
    if (ex.trace.rejected_by) {
      j["rejected_by"] = FilterStageName(*ex.trace.rejected_by);
    } else {
      j["rejected_by"] = nullptr;
    }
    j["matched_verbs"] = ex.trace.matched_verbs;
    out += j.dump(-1, ' ', false, json::error_handler_t::replace);
    out.push_back('\n');
  }
  return out;
}

LabeledDataset DatasetFromJsonl(std::string_view text) {
  LabeledDataset ds;
  bool any_split = false;
  size_t lineno = 0;
  for (std::string_view line : SplitLines(text)) {
    ++lineno;
    if (TrimView(line).empty()) continue;
    auto fail = [&](const std::string &why) {
      return Error(ErrorCode::kParse,
                   "dataset line " + std::to_string(lineno) + ": " + why);
    };
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw fail("invalid JSON");
    try {
      LabeledExample ex;
      ex.text = j.at("text").get<std::string>();
      ex.label = j.at("label").get<int>();
      if (ex.label != 0 && ex.label != 1) throw fail("label must be 0 or 1");
      ex.origin = j.value("origin", std::string());
      if (j.contains("rejected_by") && !j["rejected_by"].is_null()) {
        ex.trace.rejected_by =
            ParseFilterStage(j["rejected_by"].get<std::string>());
        if (!ex.trace.rejected_by) throw fail("unknown rejected_by");
      }
      ex.trace.passed = !ex.trace.rejected_by.has_value();
      if (ex.trace.passed != (ex.label == 1)) {
        throw fail("label disagrees with rejected_by");
      }
      if (j.contains("matched_verbs")) {
        ex.trace.matched_verbs =
            j["matched_verbs"].get<std::vector<std::string>>();
      }
      if (j.contains("split") && !j["split"].is_null()) {
        auto split = ParseSplit(j["split"].get<std::string>());
        if (!split) throw fail("unknown split");
        ds.split_assignment.push_back(*split);
        any_split = true;
      } else if (any_split) {
        throw fail("missing split");
      }
      ds.examples.push_back(std::move(ex));
    } catch (const json::exception &e) {
      throw fail(e.what());
    }
  }
  if (any_split && ds.split_assignment.size() != ds.examples.size()) {
    throw Error(ErrorCode::kParse, "dataset has partial split assignment");
  }
  return ds;
}

std::string FunnelToJson(const FunnelReport &funnel) {
  json j;
  j["total"] = funnel.total;
  j["passed"] = funnel.passed;
  json rejected = json::object();
  for (FilterStage s : {FilterStage::kActionVerb, FilterStage::kLength,
                        FilterStage::kPronoun, FilterStage::kNegation}) {
    auto it = funnel.rejected.find(s);
    rejected[std::string(FilterStageName(s))] =
        it == funnel.rejected.end() ? 0 : it->second;
  }
  j["rejected"] = rejected;
  return j.dump(2) + "\n";
}

}  // namespace actionable
