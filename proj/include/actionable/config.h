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

#ifndef ACTIONABLE_CONFIG_H_
#define ACTIONABLE_CONFIG_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "actionable/dataset_builder.h"
#include "actionable/dense_head.h"
#include "actionable/embedding_client.h"
#include "actionable/filter_pipeline.h"
#include "actionable/tfidf_forest.h"

namespace actionable {

// Every tunable of a run. Keys in the config file mirror the field names:
//
//   # filter cascade
//   min_tokens = 3
//   max_tokens = 25
//   min_action_ratio = 0.04
//   allow_imperative_as_pronoun_pass = true
//   # dataset
//   balance = 1.0
//   train_ratio = 0.72
//   ...
struct PipelineConfig {
  FilterConfig filter;
  double balance = 1.0;
  SplitRatios ratios;
  TrainConfig train;
  ForestParams forest;
  BackendConfig backend;
};

using ConfigValues = std::map<std::string, std::string>;

// `key = value` per line, '#' comments. Throws Error(kParse).
ConfigValues ParseConfigText(std::string_view text);
ConfigValues LoadConfigFile(const std::filesystem::path &path);

// Applies values onto `cfg`. Unknown keys or malformed values throw
// Error(kInvalidArgument).
void ApplyConfig(const ConfigValues &values, PipelineConfig &cfg);

// Flat snapshot of every key with its current value.
ConfigValues SnapshotConfig(const PipelineConfig &cfg);

}  // namespace actionable

#endif  // ACTIONABLE_CONFIG_H_
