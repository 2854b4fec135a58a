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

#include "actionable/config.h"

#include <charconv>
#include <functional>

#include "actionable/error.h"
#include "actionable/util.h"

namespace actionable {
namespace {

template <typename T>
T ParseNumber(const std::string &key, const std::string &value) {
  T out{};
  const char *b = value.data();
  const char *e = value.data() + value.size();
  auto res = std::from_chars(b, e, out);
  if (res.ec != std::errc() || res.ptr != e) {
    throw Error(ErrorCode::kInvalidArgument,
                "config key '" + key + "': bad number '" + value + "'");
  }
  return out;
}

bool ParseBool(const std::string &key, const std::string &value) {
  const std::string v = AsciiLower(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::kInvalidArgument,
              "config key '" + key + "': bad boolean '" + value + "'");
}

using Setter = std::function<void(PipelineConfig &, const std::string &,
                                  const std::string &)>;
using Getter = std::function<std::string(const PipelineConfig &)>;

struct Field {
  Setter set;
  Getter get;
};

template <typename T>
Field SizeField(T PipelineConfig::*group, size_t T::*member) {
  return {[=](PipelineConfig &c, const std::string &k, const std::string &v) {
            (c.*group).*member = ParseNumber<size_t>(k, v);
          },
          [=](const PipelineConfig &c) {
            return std::to_string((c.*group).*member);
          }};
}

template <typename T>
Field DoubleField(T PipelineConfig::*group, double T::*member) {
  return {[=](PipelineConfig &c, const std::string &k, const std::string &v) {
            (c.*group).*member = ParseNumber<double>(k, v);
          },
          [=](const PipelineConfig &c) {
            return FormatDouble((c.*group).*member);
          }};
}

const std::map<std::string, Field> &Fields() {
  static const std::map<std::string, Field> fields = {
      {"min_tokens", SizeField(&PipelineConfig::filter, &FilterConfig::min_tokens)},
      {"max_tokens", SizeField(&PipelineConfig::filter, &FilterConfig::max_tokens)},
      {"min_action_ratio",
       DoubleField(&PipelineConfig::filter, &FilterConfig::min_action_ratio)},
      {"allow_imperative_as_pronoun_pass",
       {[](PipelineConfig &c, const std::string &k, const std::string &v) {
          c.filter.allow_imperative_as_pronoun_pass = ParseBool(k, v);
        },
        [](const PipelineConfig &c) {
          return std::string(c.filter.allow_imperative_as_pronoun_pass ? "true"
                                                                       : "false");
        }}},
      {"balance",
       {[](PipelineConfig &c, const std::string &k, const std::string &v) {
          c.balance = ParseNumber<double>(k, v);
        },
        [](const PipelineConfig &c) { return FormatDouble(c.balance); }}},
      {"train_ratio", DoubleField(&PipelineConfig::ratios, &SplitRatios::train)},
      {"val_ratio", DoubleField(&PipelineConfig::ratios, &SplitRatios::val)},
      {"test_ratio", DoubleField(&PipelineConfig::ratios, &SplitRatios::test)},
      {"epochs", SizeField(&PipelineConfig::train, &TrainConfig::epochs)},
      {"batch_size", SizeField(&PipelineConfig::train, &TrainConfig::batch_size)},
      {"hidden", SizeField(&PipelineConfig::train, &TrainConfig::hidden)},
      {"dropout_rate",
       DoubleField(&PipelineConfig::train, &TrainConfig::dropout_rate)},
      {"learning_rate",
       {[](PipelineConfig &c, const std::string &k, const std::string &v) {
          c.train.adam.learning_rate = ParseNumber<double>(k, v);
        },
        [](const PipelineConfig &c) {
          return FormatDouble(c.train.adam.learning_rate);
        }}},
      {"beta1",
       {[](PipelineConfig &c, const std::string &k, const std::string &v) {
          c.train.adam.beta1 = ParseNumber<double>(k, v);
        },
        [](const PipelineConfig &c) { return FormatDouble(c.train.adam.beta1); }}},
      {"beta2",
       {[](PipelineConfig &c, const std::string &k, const std::string &v) {
          c.train.adam.beta2 = ParseNumber<double>(k, v);
        },
        [](const PipelineConfig &c) { return FormatDouble(c.train.adam.beta2); }}},
      {"epsilon",
       {[](PipelineConfig &c, const std::string &k, const std::string &v) {
          c.train.adam.epsilon = ParseNumber<double>(k, v);
        },
        [](const PipelineConfig &c) { return FormatDouble(c.train.adam.epsilon); }}},
      {"threshold", DoubleField(&PipelineConfig::train, &TrainConfig::threshold)},
      {"threshold_mode",
       {[](PipelineConfig &c, const std::string &k, const std::string &v) {
          if (v == "fixed") {
            c.train.threshold_mode = ThresholdMode::kFixed;
          } else if (v == "validation_median") {
            c.train.threshold_mode = ThresholdMode::kValidationMedian;
          } else {
            throw Error(ErrorCode::kInvalidArgument,
                        "config key '" + k + "': expected fixed|validation_median");
          }
        },
        [](const PipelineConfig &c) {
          return std::string(ThresholdModeName(c.train.threshold_mode));
        }}},
      {"n_trees", SizeField(&PipelineConfig::forest, &ForestParams::n_trees)},
      {"max_depth",
       {[](PipelineConfig &c, const std::string &k, const std::string &v) {
          const size_t depth = ParseNumber<size_t>(k, v);
          c.forest.max_depth = depth == 0 ? std::nullopt : std::optional(depth);
        },
        [](const PipelineConfig &c) {
          return std::to_string(c.forest.max_depth.value_or(0));
        }}},
      {"min_samples_split",
       SizeField(&PipelineConfig::forest, &ForestParams::min_samples_split)},
      {"feature_subsample",
       SizeField(&PipelineConfig::forest, &ForestParams::feature_subsample)},
      {"embed_dim", SizeField(&PipelineConfig::backend, &BackendConfig::dim)},
      {"embed_batch_size",
       SizeField(&PipelineConfig::backend, &BackendConfig::batch_size)},
      {"embed_seed",
       {[](PipelineConfig &c, const std::string &k, const std::string &v) {
          c.backend.seed = ParseNumber<uint64_t>(k, v);
        },
        [](const PipelineConfig &c) { return std::to_string(c.backend.seed); }}},
      {"max_in_flight",
       SizeField(&PipelineConfig::backend, &BackendConfig::max_in_flight)},
  };
  return fields;
}

}  // namespace

ConfigValues ParseConfigText(std::string_view text) {
  ConfigValues values;
  size_t lineno = 0;
  for (std::string_view line : SplitLines(text)) {
    ++lineno;
    std::string_view t = TrimView(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParse,
                  "config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key(TrimView(t.substr(0, eq)));
    std::string value(TrimView(t.substr(eq + 1)));
    if (key.empty()) {
      throw Error(ErrorCode::kParse,
                  "config line " + std::to_string(lineno) + ": empty key");
    }
    values[key] = value;
  }
  return values;
}

ConfigValues LoadConfigFile(const std::filesystem::path &path) {
  return ParseConfigText(ReadFile(path));
}

void ApplyConfig(const ConfigValues &values, PipelineConfig &cfg) {
  const auto &fields = Fields();
  for (const auto &[key, value] : values) {
    auto it = fields.find(key);
    if (it == fields.end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
    }
    it->second.set(cfg, key, value);
  }
}

ConfigValues SnapshotConfig(const PipelineConfig &cfg) {
  ConfigValues out;
  for (const auto &[key, field] : Fields()) out[key] = field.get(cfg);
  return out;
}

}  // namespace actionable
