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

#ifndef ACTIONABLE_EVAL_METRICS_H_
#define ACTIONABLE_EVAL_METRICS_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "actionable/dense_head.h"

namespace actionable {

struct ConfusionMatrix {
  size_t tp = 0;
  size_t fp = 0;
  size_t tn = 0;
  size_t fn = 0;

  size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix &) const = default;
};

// Ratios with a zero denominator are reported as 0 and flagged.
struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

// Throws Error(kLengthMismatch) on unequal or empty inputs.
ConfusionMatrix Confusion(std::span<const int> predictions,
                          std::span<const int> truth);

// Throws Error(kInvalidArgument) when the matrix is empty.
Metrics ComputeMetrics(const ConfusionMatrix &cm);

struct MetricsReport {
  std::string model;  // "forest" | "dense_head"
  std::optional<double> train_accuracy;
  std::optional<double> val_accuracy;
  std::optional<double> test_accuracy;
  Metrics metrics;  // on the evaluated split
  double threshold = 0.5;
};

// {"accuracy":{"train","val","test"},"precision","recall","f1","threshold","model"}
std::string MetricsReportToJson(const MetricsReport &report);

// Header `epoch,train_loss,train_acc,val_loss,val_acc`, one row per epoch.
std::string HistoryToCsv(const History &history);

// Writes `metrics.json` and, when a history is given, `history.csv` into
// `dir`. Throws Error(kIo).
void EmitReport(const MetricsReport &report, const History *history,
                const std::filesystem::path &dir);

}  // namespace actionable

#endif  // ACTIONABLE_EVAL_METRICS_H_
