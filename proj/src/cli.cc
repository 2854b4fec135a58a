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

#include "actionable/cli.h"

#include <chrono>
#include <cstdlib>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "actionable/config.h"
#include "actionable/corpus_ingest.h"
#include "actionable/dataset_builder.h"
#include "actionable/error.h"
#include "actionable/pipeline.h"
#include "actionable/text_segment.h"
#include "actionable/util.h"
#include "json.hpp"

namespace actionable {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Provenance record written next to every artifact a command produces.
struct RunManifest {
  std::string command;
  ConfigValues config;
  std::map<std::string, uint64_t> seeds;
  std::map<std::string, std::string> inputs;
  std::vector<std::string> outputs;
  double duration_seconds = 0.0;

  std::string ToJson() const {
    json j;
    j["command"] = command;
    j["config"] = config;
    j["seeds"] = seeds;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["tool_version"] = kToolVersion;
    j["duration_seconds"] = duration_seconds;
    return j.dump(2) + "\n";
  }
};

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int ExitFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
    case ErrorCode::kRatio:
    case ErrorCode::kLexicon:
      return kExitInvalidArgs;
    case ErrorCode::kIo:
    case ErrorCode::kCsvSchema:
      return kExitIo;
    case ErrorCode::kEmptyDataset:
      return kExitNoPositives;
    case ErrorCode::kBackendUnavailable:
    case ErrorCode::kProtocol:
    case ErrorCode::kDimensionDrift:
      return kExitBackend;
    default:
      return kExitFailure;
  }
}

std::string JsonLine(const json &j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace) + "\n";
}

std::vector<Sentence> ReadSentencesJsonl(const fs::path &path) {
  const std::string text = ReadFile(path);
  std::vector<Sentence> out;
  size_t lineno = 0;
  for (std::string_view line : SplitLines(text)) {
    ++lineno;
    if (TrimView(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("text") ||
        !j["text"].is_string()) {
      throw Error(ErrorCode::kParse, path.string() + ":" +
                                         std::to_string(lineno) +
                                         ": expected {\"text\", \"origin\"}");
    }
    Sentence s;
    s.text = j["text"].get<std::string>();
    s.tokens = Tokenize(s.text);
    if (s.tokens.empty()) continue;
    const std::string origin = j.value("origin", std::string());
    const size_t hash = origin.rfind('#');
    s.origin.message_id = origin;
    s.origin.index = 0;
    if (hash != std::string::npos) {
      const std::string idx = origin.substr(hash + 1);
      if (!idx.empty() &&
          idx.find_first_not_of("0123456789") == std::string::npos) {
        s.origin.message_id = origin.substr(0, hash);
        s.origin.index = std::stoul(idx);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

LabeledDataset ReadDataset(const fs::path &path) {
  LabeledDataset ds = DatasetFromJsonl(ReadFile(path));
  if (ds.examples.empty()) {
    throw Error(ErrorCode::kParse, path.string() + ": empty dataset");
  }
  if (ds.split_assignment.empty()) {
    throw Error(ErrorCode::kParse, path.string() + ": no split assignment");
  }
  return ds;
}

void ApplyConfigFile(const std::string &path, PipelineConfig &cfg) {
  if (!path.empty()) ApplyConfig(LoadConfigFile(path), cfg);
}

int CmdIngest(const std::string &corpus, const std::string &format,
              std::optional<size_t> limit, const std::string &out_path,
              std::ostream &out) {
  Stopwatch clock;
  auto fmt = ParseCorpusFormat(format);
  if (!fmt) throw Error(ErrorCode::kInvalidArgument, "unknown format " + format);
  CorpusSpec spec{corpus, *fmt, limit};
  LoadStats stats;
  const std::vector<EmailMessage> messages = LoadCorpus(spec, &stats);
  std::string jsonl;
  size_t sentences = 0;
  for (const EmailMessage &m : messages) {
    for (const Sentence &s : SplitSentences(m.body, m.id)) {
      jsonl += JsonLine(json{{"text", s.text}, {"origin", s.origin.ToString()}});
      ++sentences;
    }
  }
  WriteFile(out_path, jsonl);

  RunManifest manifest;
  manifest.command = "ingest";
  manifest.config = {{"format", format},
                     {"limit", limit ? std::to_string(*limit) : "none"}};
  manifest.inputs = {{"corpus", corpus}};
  manifest.outputs = {out_path};
  manifest.duration_seconds = clock.Seconds();
  WriteFile(out_path + ".manifest.json", manifest.ToJson());

  out << "messages " << messages.size() << " (skipped empty "
      << stats.empty_messages << "), sentences " << sentences << "\n";
  return kExitOk;
}

int CmdBuildDataset(const std::string &sentences_path,
                    const std::string &lexicon_dir,
                    const std::string &config_path, uint64_t seed,
                    std::optional<double> balance, const std::string &out_path,
                    std::ostream &out, std::ostream &err) {
  Stopwatch clock;
  PipelineConfig cfg;
  ApplyConfigFile(config_path, cfg);
  if (balance) cfg.balance = *balance;
  cfg.filter.lexicon =
      lexicon_dir.empty() ? Lexicon::Default() : Lexicon::LoadDir(lexicon_dir);

  const std::vector<Sentence> sentences = ReadSentencesJsonl(sentences_path);
  BuildResult built;
  try {
    built = BuildDatasetFromSentences(sentences, cfg.filter, cfg.balance, seed);
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kEmptyDataset) {
      // The funnel is still useful for diagnosing an empty result.
      FunnelReport funnel;
      for (const Sentence &s : sentences) {
        const FilterVerdict v = ApplyFilters(s, cfg.filter);
        ++funnel.total;
        if (v.passed) {
          ++funnel.passed;
        } else {
          ++funnel.rejected[*v.rejected_by];
        }
      }
      WriteFile(out_path + ".funnel.json", FunnelToJson(funnel));
    }
    throw;
  }
  LabeledDataset &ds = built.dataset;
  ds.split_assignment = AssignSplits(ds.examples, cfg.ratios, seed);
  WriteFile(out_path, DatasetToJsonl(ds));
  WriteFile(out_path + ".funnel.json", FunnelToJson(built.funnel));

  if (built.negatives_short) {
    err << "warning: only " << built.negatives_found
        << " negatives available for balance " << cfg.balance << "\n";
  }

  RunManifest manifest;
  manifest.command = "build-dataset";
  manifest.config = SnapshotConfig(cfg);
  manifest.seeds = {{"seed", seed}};
  manifest.inputs = {{"sentences", sentences_path},
                     {"lexicon_dir", lexicon_dir.empty() ? "<built-in>" : lexicon_dir},
                     {"config", config_path.empty() ? "<defaults>" : config_path}};
  manifest.outputs = {out_path, out_path + ".funnel.json"};
  manifest.duration_seconds = clock.Seconds();
  WriteFile(out_path + ".manifest.json", manifest.ToJson());

  const FunnelReport &f = built.funnel;
  out << "sentences " << f.total << ", passed " << f.passed;
  for (const auto &[stage, n] : f.rejected) {
    out << ", " << FilterStageName(stage) << " " << n;
  }
  out << "\nexamples " << ds.examples.size() << " (train "
      << ds.Indices(Split::kTrain).size() << ", val "
      << ds.Indices(Split::kVal).size() << ", test "
      << ds.Indices(Split::kTest).size() << ")\n";
  return kExitOk;
}

int CmdTrain(const std::string &dataset_path, const std::string &model_kind,
             const std::string &backend_kind, const std::string &endpoint,
             const std::string &config_path, const std::string &cache_path,
             uint64_t seed, const std::string &out_dir, std::ostream &out,
             std::ostream &err) {
  Stopwatch clock;
  PipelineConfig cfg;
  ApplyConfigFile(config_path, cfg);
  cfg.train.seed = seed;
  auto kind = ParseBackendKind(backend_kind);
  if (!kind) {
    throw Error(ErrorCode::kInvalidArgument, "unknown backend " + backend_kind);
  }
  cfg.backend.kind = *kind;
  cfg.backend.endpoint = endpoint;
  if (!cache_path.empty()) cfg.backend.cache_path = cache_path;

  const LabeledDataset ds = ReadDataset(dataset_path);
  const fs::path dir(out_dir);
  std::unique_ptr<TextModel> model;
  std::optional<History> history;
  if (model_kind == "forest") {
    model = TrainForestModel(ds, cfg.forest, seed);
  } else if (model_kind == "dense") {
    DenseTraining trained = TrainDenseModel(ds, cfg.backend, cfg.train);
    model = std::move(trained.model);
    history = std::move(trained.history);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown model " + model_kind);
  }

  Split report_split = Split::kVal;
  if (ds.Indices(Split::kVal).empty()) {
    report_split = ds.Indices(Split::kTest).empty() ? Split::kTrain : Split::kTest;
    err << "note: validation split is empty; reporting on "
        << SplitName(report_split) << "\n";
  }
  const MetricsReport report = Evaluate(*model, ds, report_split);

  json doc = model->ToJson();
  doc["manifest"] = "manifest.json";
  WriteFile(dir / "model.json", doc.dump(1) + "\n");
  EmitReport(report, history ? &*history : nullptr, dir);

  RunManifest manifest;
  manifest.command = "train";
  manifest.config = SnapshotConfig(cfg);
  manifest.config["model"] = model_kind;
  manifest.config["backend"] = backend_kind;
  if (!endpoint.empty()) manifest.config["endpoint"] = endpoint;
  manifest.seeds = {{"seed", seed}};
  manifest.inputs = {{"dataset", dataset_path},
                     {"config", config_path.empty() ? "<defaults>" : config_path}};
  manifest.outputs = {(dir / "model.json").string(), (dir / "metrics.json").string()};
  if (history) manifest.outputs.push_back((dir / "history.csv").string());
  manifest.duration_seconds = clock.Seconds();
  WriteFile(dir / "manifest.json", manifest.ToJson());

  out << MetricsReportToJson(report);
  return kExitOk;
}

int CmdEval(const std::string &model_path, const std::string &dataset_path,
            const std::string &split_name, const std::string &endpoint,
            const std::string &out_path, std::ostream &out) {
  Stopwatch clock;
  auto split = ParseSplit(split_name);
  if (!split) throw Error(ErrorCode::kInvalidArgument, "unknown split " + split_name);
  auto model = LoadModel(model_path, endpoint);
  const LabeledDataset ds = ReadDataset(dataset_path);
  const MetricsReport report = Evaluate(*model, ds, *split);
  const std::string text = MetricsReportToJson(report);
  if (!out_path.empty()) {
    WriteFile(out_path, text);
    RunManifest manifest;
    manifest.command = "eval";
    manifest.config = {{"split", split_name}};
    manifest.inputs = {{"model", model_path}, {"dataset", dataset_path}};
    manifest.outputs = {out_path};
    manifest.duration_seconds = clock.Seconds();
    WriteFile(out_path + ".manifest.json", manifest.ToJson());
  }
  out << text;
  return kExitOk;
}

int CmdPredict(const std::string &model_path, const std::string &text,
               const std::string &endpoint, std::ostream &out) {
  if (TrimView(text).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--text must not be empty");
  }
  auto model = LoadModel(model_path, endpoint);
  const std::vector<std::string> texts = {text};
  const double p = model->PredictProba(texts).at(0);
  out << JsonLine(json{{"text", text},
                       {"probability", p},
                       {"label", Classify(p, model->threshold())},
                       {"threshold", model->threshold()}});
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"Actionable sentence extraction and classification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string corpus, format = "maildir", out_path;
  std::optional<size_t> limit;
  auto *ingest = app.add_subcommand("ingest", "Parse a corpus into sentences JSONL");
  ingest->add_option("--corpus", corpus, "Maildir root or CSV file")->required();
  ingest->add_option("--format", format, "maildir|csv")
      ->check(CLI::IsMember({"maildir", "csv"}));
  ingest->add_option("--limit", limit, "Maximum number of messages")
      ->check(CLI::PositiveNumber);
  ingest->add_option("--out", out_path, "Output sentences JSONL")->required();

  std::string sentences, lexicon_dir, config_path;
  uint64_t seed = 42;
  std::optional<double> balance;
  auto *build = app.add_subcommand("build-dataset",
                                   "Weak-label sentences through the filter cascade");
  build->add_option("--sentences", sentences, "Sentences JSONL")->required();
  build->add_option("--lexicon-dir", lexicon_dir, "Directory of lexicon files");
  build->add_option("--config", config_path, "key = value config file");
  build->add_option("--seed", seed, "Sampling and split seed");
  build->add_option("--balance", balance, "Negatives kept per positive");
  build->add_option("--out", out_path, "Output dataset JSONL")->required();

  std::string dataset, model_kind, backend = "stub", cache_path, out_dir;
  std::string endpoint;
  if (const char *env = std::getenv("ACTIONABLE_EMBED_ENDPOINT")) endpoint = env;
  auto *train = app.add_subcommand("train", "Train a classifier on a dataset");
  train->add_option("--dataset", dataset, "Dataset JSONL")->required();
  train->add_option("--model", model_kind, "forest|dense")
      ->required()
      ->check(CLI::IsMember({"forest", "dense"}));
  train->add_option("--backend", backend, "stub|remote")
      ->check(CLI::IsMember({"stub", "remote"}));
  train->add_option("--endpoint", endpoint, "Embedding service URL");
  train->add_option("--config", config_path, "key = value config file");
  train->add_option("--cache", cache_path, "Embedding cache JSONL");
  train->add_option("--seed", seed, "Training seed");
  train->add_option("--out", out_dir, "Output directory")->required();

  std::string model_path, split = "test";
  auto *eval = app.add_subcommand("eval", "Evaluate a trained model");
  eval->add_option("--model", model_path, "model.json")->required();
  eval->add_option("--dataset", dataset, "Dataset JSONL")->required();
  eval->add_option("--split", split, "train|val|test")
      ->check(CLI::IsMember({"train", "val", "test"}));
  eval->add_option("--endpoint", endpoint, "Embedding service URL");
  eval->add_option("--out", out_path, "Metrics JSON output");

  std::string text;
  auto *predict = app.add_subcommand("predict", "Score one sentence");
  predict->add_option("--model", model_path, "model.json")->required();
  predict->add_option("--text", text, "Sentence to classify")->required();
  predict->add_option("--endpoint", endpoint, "Embedding service URL");

  std::vector<const char *> argv;
  for (const std::string &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidArgs;
  }

  try {
    if (*ingest) return CmdIngest(corpus, format, limit, out_path, out);
    if (*build) {
      return CmdBuildDataset(sentences, lexicon_dir, config_path, seed, balance,
                             out_path, out, err);
    }
    if (*train) {
      return CmdTrain(dataset, model_kind, backend, endpoint, config_path,
                      cache_path, seed, out_dir, out, err);
    }
    if (*eval) return CmdEval(model_path, dataset, split, endpoint, out_path, out);
    if (*predict) return CmdPredict(model_path, text, endpoint, out);
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return ExitFor(e.code());
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitInvalidArgs;
}

}  // namespace actionable
