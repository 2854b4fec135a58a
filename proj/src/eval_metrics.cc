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

#include "actionable/eval_metrics.h"

#include "actionable/error.h"
#include "actionable/util.h"
#include "json.hpp"

namespace actionable {

using json = nlohmann::ordered_json;

ConfusionMatrix Confusion(std::span<const int> predictions,
                          std::span<const int> truth) {
  if (predictions.size() != truth.size() || truth.empty()) {
    throw Error(ErrorCode::kLengthMismatch,
                "predictions (" + std::to_string(predictions.size()) +
                    ") and truth (" + std::to_string(truth.size()) +
                    ") must have equal nonzero length");
  }
  ConfusionMatrix cm;
  for (size_t i = 0; i < truth.size(); ++i) {
    const bool p = predictions[i] == 1;
    const bool t = truth[i] == 1;
    if (p && t) {
      ++cm.tp;
    } else if (p) {
      ++cm.fp;
    } else if (t) {
      ++cm.fn;
    } else {
      ++cm.tn;
    }
  }
  return cm;
}

Metrics ComputeMetrics(const ConfusionMatrix &cm) {
  if (cm.total() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty confusion matrix");
  }
  Metrics m;
  const auto d = [](size_t x) { return static_cast<double>(x); };
  m.accuracy = d(cm.tp + cm.tn) / d(cm.total());
  if (cm.tp + cm.fp == 0) {
    m.precision_undefined = true;
  } else {
    m.precision = d(cm.tp) / d(cm.tp + cm.fp);
  }
  if (cm.tp + cm.fn == 0) {
    m.recall_undefined = true;
  } else {
    m.recall = d(cm.tp) / d(cm.tp + cm.fn);
  }
  if (m.precision_undefined || m.recall_undefined ||
      m.precision + m.recall == 0.0) {
    m.f1_undefined = true;
  } else {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

std::string MetricsReportToJson(const MetricsReport &report) {
  auto opt = [](const std::optional<double> &v) -> json {
    return v ? json(*v) : json(nullptr);
  };
  json j;
  j["accuracy"] = json{{"train", opt(report.train_accuracy)},
                       {"val", opt(report.val_accuracy)},
                       {"test", opt(report.test_accuracy)}};
  j["precision"] = report.metrics.precision;
  j["recall"] = report.metrics.recall;
  j["f1"] = report.metrics.f1;
  j["threshold"] = report.threshold;
  j["model"] = report.model;
  json undefined = json::array();
  if (report.metrics.precision_undefined) undefined.push_back("precision");
  if (report.metrics.recall_undefined) undefined.push_back("recall");
  if (report.metrics.f1_undefined) undefined.push_back("f1");
  j["undefined"] = undefined;
  return j.dump(2) + "\n";
}

std::string HistoryToCsv(const History &history) {
  std::string out = "epoch,train_loss,train_acc,val_loss,val_acc\n";
  for (size_t i = 0; i < history.size(); ++i) {
    const EpochRecord &r = history[i];
    out += std::to_string(i + 1) + "," + FormatDouble(r.train_loss) + "," +
           FormatDouble(r.train_accuracy) + "," + FormatDouble(r.val_loss) +
           "," + FormatDouble(r.val_accuracy) + "\n";
  }
  return out;
}

void EmitReport(const MetricsReport &report, const History *history,
                const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, dir.string() + ": " + ec.message());
  WriteFile(dir / "metrics.json", MetricsReportToJson(report));
  if (history) WriteFile(dir / "history.csv", HistoryToCsv(*history));
}

}  // namespace actionable
