// Copyright 2026 The vertattack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The vertattack command-line tool.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "vertattack/cassette.h"
#include "vertattack/config.h"
#include "vertattack/datasets.h"
#include "vertattack/error.h"
#include "vertattack/eval.h"
#include "vertattack/llm_client.h"
#include "vertattack/prompts.h"
#include "vertattack/report.h"
#include "vertattack/select.h"
#include "vertattack/text_util.h"
#include "vertattack/tokshift.h"
#include "vertattack/transform.h"
#include "vertattack/version.h"

namespace vertattack {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> out_dir;
  bool verbose = false;
};

void PrintJson(const Json& json) {
  std::cout << json.dump(2, ' ', false, Json::error_handler_t::replace) << '\n';
}

void WriteFile(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
}

std::vector<std::size_t> ParseIndexList(const std::string& text) {
  std::vector<std::size_t> out;
  for (const std::string& item : Split(text, ',')) {
    const std::string_view trimmed = TrimWhitespace(item);
    if (trimmed.empty()) continue;
    std::size_t used = 0;
    long long value = -1;
    try {
      value = std::stoll(std::string(trimmed), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != trimmed.size() || value < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("'{}' is not a word index", trimmed));
    }
    out.push_back(static_cast<std::size_t>(value));
  }
  return out;
}

Json PlacementsJson(const Sentence& sentence, const LayoutGrid& grid) {
  Json out = Json::array();
  for (const auto& [index, p] : grid.placements) {
    out.push_back({{"index", index},
                   {"word", sentence.words[index]},
                   {"row", p.row},
                   {"column", p.column},
                   {"orientation", OrientationName(p.orientation)}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// transform

struct TransformOptions {
  std::string text;
  std::string indices;
  std::string words;
  char pad = ' ';
  bool json = false;
};

int RunTransform(const TransformOptions& o) {
  const Sentence sentence = Decompose(o.text);
  TransformSpec spec;
  spec.pad_char = o.pad;
  if (!o.indices.empty()) {
    spec.vertical_indices = ParseIndexList(o.indices);
  } else if (!o.words.empty()) {
    for (const std::string& item : Split(o.words, ',')) {
      const std::string_view word = TrimWhitespace(item);
      if (word.empty()) continue;
      const std::size_t index = FindWord(sentence, word, spec.vertical_indices);
      if (index == std::string::npos) {
        throw Error(ErrorCode::kWordNotInSentence,
                    fmt::format("'{}' does not occur in the text", word));
      }
      spec.vertical_indices.push_back(index);
    }
  }
  const Rendering r = Verticalize(sentence, spec);
  if (o.json) {
    std::vector<std::size_t> sorted = spec.vertical_indices;
    std::sort(sorted.begin(), sorted.end());
    PrintJson({{"rendered", r.rendered},
               {"height", r.grid.height},
               {"rows", r.grid.rows},
               {"words", sentence.words},
               {"vertical_indices", sorted},
               {"placements", PlacementsJson(sentence, r.grid)}});
  } else {
    std::cout << r.rendered << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// select

struct SelectOptions {
  std::string text;
  std::optional<std::size_t> k;
  std::string mode = "heuristic";
  std::string model;
  std::string task = "sst2";
  std::string endpoint;
  std::string api_key_env;
  fs::path cache;
  fs::path cassette;
  std::string cassette_mode = "off";
  bool json = false;
};

int RunSelect(const SelectOptions& o) {
  const TaskSpec& task = GetTask(o.task);
  SelectionRequest request;
  request.sentence = Decompose(o.text);
  request.k = o.k.value_or(task.default_k);
  request.mode = ParseSelectionMode(o.mode);
  request.topic = task.topic;
  SelectionResult result;
  if (request.mode == SelectionMode::kHeuristic) {
    result = SelectHeuristic(request);
  } else {
    if (o.model.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "llm mode needs --model");
    }
    ModelSettings settings;
    settings.provider = "http";
    settings.client.model_id = o.model;
    if (!o.endpoint.empty()) settings.client.endpoint_url = o.endpoint;
    if (!o.api_key_env.empty()) settings.client.api_key_env = o.api_key_env;
    settings.cassette = o.cassette;
    settings.cassette_mode = ParseCassetteMode(o.cassette_mode);
    if (settings.cassette_mode != CassetteMode::kOff && o.cassette.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "--cassette-mode needs --cassette");
    }
    request.evaluator_model = o.model;
    std::shared_ptr<ChatClient> client = BuildClient(settings);
    std::optional<SelectionCache> cache;
    if (!o.cache.empty()) cache.emplace(o.cache);
    result = SelectLlm(request, *client, settings.client,
                       cache ? &*cache : nullptr);
  }
  std::vector<std::string> words;
  for (std::size_t i : result.indices) words.push_back(request.sentence.words[i]);
  if (o.json) {
    Json out{{"mode", o.mode}, {"k", request.k}, {"indices", result.indices},
             {"words", words}};
    out["rationale"] = result.rationale ? Json(*result.rationale) : Json();
    PrintJson(out);
  } else {
    std::cout << fmt::format("{}\n", fmt::join(words, ", "));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// prompts render

struct PromptOptions {
  std::string strategy = "zero_shot";
  std::string task = "sst2";
  std::string text;
  std::string question;
  std::size_t shots = kDefaultShotCount;
  fs::path prompts_dir;
  bool json = false;
};

int RunPromptRender(const PromptOptions& o) {
  const TaskSpec& task = GetTask(o.task);
  std::optional<TemplateBundle> custom;
  if (!o.prompts_dir.empty()) custom = TemplateBundle::FromDirectory(o.prompts_dir);
  const TemplateBundle& bundle = custom ? *custom : TemplateBundle::Builtin();
  const PromptStrategy strategy =
      PromptStrategy::Create(ParseStrategy(o.strategy), task, o.shots, bundle);
  const std::string input = FormatInput(
      task, o.text,
      o.question.empty() ? std::nullopt : std::optional<std::string_view>(o.question));
  const std::vector<Message> messages = BuildPrompt(strategy, input);
  if (o.json) {
    PrintJson({{"strategy", StrategyName(strategy.kind())},
               {"task", task.name},
               {"prompt_id", strategy.Id()},
               {"prompt_fingerprint", bundle.fingerprint()},
               {"messages", ToJson(std::span<const Message>(messages))}});
  } else {
    for (const Message& m : messages) std::cout << m.content << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// data load

struct DataOptions {
  std::string dataset;
  fs::path path;
  std::size_t split_n = 100;
  bool no_split = false;
  bool no_stratify = false;
  std::string format = "auto";
  fs::path out;
  bool json = false;
};

FileFormat ParseFormat(std::string_view name) {
  if (name == "auto") return FileFormat::kAuto;
  if (name == "tsv") return FileFormat::kTsv;
  if (name == "csv") return FileFormat::kCsv;
  if (name == "jsonl") return FileFormat::kJsonl;
  throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown format '{}'", name));
}

int RunDataLoad(const DataOptions& o, const GlobalOptions& g) {
  const LoadResult loaded = LoadDataset(o.dataset, o.path, ParseFormat(o.format));
  std::vector<Sample> samples = loaded.samples;
  const std::uint64_t seed = g.seed.value_or(42);
  if (!o.no_split) {
    samples = DrawSplit(loaded.samples, {o.split_n, seed, !o.no_stratify});
  }
  fs::path out = o.out;
  if (!out.empty() && out.is_relative() && g.out_dir) out = *g.out_dir / out;
  if (!out.empty()) WriteJsonl(samples, out);

  std::map<std::string, std::size_t> counts;
  std::vector<std::string> ids;
  for (const Sample& s : samples) {
    ++counts[s.gold];
    ids.push_back(s.id);
  }
  if (o.json) {
    Json split = Json();
    if (!o.no_split) {
      split = {{"n", o.split_n}, {"seed", seed}, {"stratify", !o.no_stratify}};
    }
    PrintJson({{"dataset", o.dataset},
               {"path", o.path.string()},
               {"data_rows", loaded.data_rows},
               {"loaded", loaded.samples.size()},
               {"rejected", loaded.rejected_ids},
               {"split", split},
               {"label_counts", counts},
               {"ids", ids},
               {"out", out.empty() ? Json() : Json(out.string())}});
  } else {
    std::cout << fmt::format("loaded {} of {} rows ({} rejected)", loaded.samples.size(),
                             loaded.data_rows, loaded.rejected_ids.size());
    for (const auto& [label, n] : counts) std::cout << fmt::format("; {} {}", label, n);
    if (!out.empty()) std::cout << fmt::format("; wrote {} samples to {}", samples.size(), out.string());
    std::cout << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// run / sweep

struct ExperimentOptions {
  fs::path config;
  std::vector<std::string> strategies;
  std::vector<std::string> conditions;
  std::vector<std::size_t> ks;
  std::optional<std::size_t> k_max;
  std::string cassette_mode;
  std::optional<int> parallelism;
  bool json = false;
};

ExperimentConfig ResolveConfig(const ExperimentOptions& o, const GlobalOptions& g) {
  ExperimentConfig c = LoadExperimentConfig(o.config);
  if (g.seed) c.seed = *g.seed;
  if (g.out_dir) c.out_dir = *g.out_dir;
  if (!o.strategies.empty()) {
    c.strategies.clear();
    for (const auto& s : o.strategies) c.strategies.push_back(ParseStrategy(s));
  }
  if (!o.conditions.empty()) {
    c.conditions.clear();
    for (const auto& s : o.conditions) c.conditions.push_back(ParseCondition(s));
  }
  if (!o.ks.empty()) c.ks = o.ks;
  if (o.k_max) c.k_max = *o.k_max;
  if (!o.cassette_mode.empty()) {
    c.model.cassette_mode = ParseCassetteMode(o.cassette_mode);
    if (c.model.cassette_mode != CassetteMode::kOff && c.model.cassette.empty()) {
      throw Error(ErrorCode::kConfigError, "cassette mode set without a cassette");
    }
  }
  if (o.parallelism) {
    c.model.client.parallelism = *o.parallelism;
    c.model.client.Validate();
  }
  return c;
}

// Everything an experiment needs, prepared before any request is sent.
class Experiment {
 public:
  Experiment(ExperimentConfig config, std::string command)
      : config_(std::move(config)), command_(std::move(command)) {
    if (!config_.prompts_dir.empty()) {
      custom_bundle_ = TemplateBundle::FromDirectory(config_.prompts_dir);
    }
    for (const auto& [dataset, path] : config_.datasets) {
      const LoadResult loaded = LoadDataset(dataset, path);
      std::vector<Sample> split = DrawSplit(
          loaded.samples, {config_.split_n, config_.seed, config_.stratify});
      const fs::path split_path = config_.out_dir / "splits" /
                                  fmt::format("{}-seed{}.jsonl", dataset, config_.seed);
      WriteJsonl(split, split_path);
      outputs_.insert(split_path);
      splits_.emplace(dataset, std::move(split));
      for (StrategyKind kind : config_.strategies) {
        strategies_.emplace(std::pair(dataset, kind),
                            PromptStrategy::Create(kind, GetTask(dataset),
                                                   kDefaultShotCount, bundle()));
      }
    }
    client_ = BuildClient(config_.model);
    if (config_.selector.mode == SelectionMode::kLlm) {
      ModelSettings selector_model = config_.model;
      if (!config_.selector.model.empty()) {
        selector_model.client.model_id = config_.selector.model;
      }
      selector_config_ = selector_model.client;
      if (!config_.selector.cache.empty()) {
        selection_cache_.emplace(config_.selector.cache);
      }
      selector_ = std::make_unique<LlmSelector>(
          *client_, selector_config_,
          selection_cache_ ? &*selection_cache_ : nullptr);
    } else {
      selector_ = std::make_unique<HeuristicSelector>();
    }
  }

  const ExperimentConfig& config() const { return config_; }
  const TemplateBundle& bundle() const {
    return custom_bundle_ ? *custom_bundle_ : TemplateBundle::Builtin();
  }
  const std::vector<Sample>& split(const std::string& dataset) const {
    return splits_.at(dataset);
  }
  const PromptStrategy& strategy(const std::string& dataset, StrategyKind kind) const {
    return strategies_.at({dataset, kind});
  }
  ChatClient& client() { return *client_; }

  CellSpec BaseSpec(const std::string& dataset) {
    CellSpec spec;
    spec.model = config_.model.client;
    spec.dataset = dataset;
    spec.split_seed = config_.seed;
    spec.selector = selector_.get();
    spec.runs_dir = config_.out_dir;
    spec.max_failure_fraction = config_.max_failure_fraction;
    return spec;
  }

  std::vector<std::size_t> KsFor(const std::string& dataset) const {
    return config_.ks.empty() ? std::vector<std::size_t>{GetTask(dataset).default_k}
                              : config_.ks;
  }

  void WriteManifest(const std::vector<std::string>& run_keys, std::string_view status) {
    Json manifest{{"tool_version", kVersion},
                  {"command", command_},
                  {"config", config_.source.string()},
                  {"out_dir", config_.out_dir.string()},
                  {"status", status},
                  {"run_keys", run_keys},
                  {"model", config_.model.client.model_id},
                  {"provider", config_.model.provider},
                  {"cassette_mode", CassetteModeName(config_.model.cassette_mode)},
                  {"seed", config_.seed},
                  {"prompt_templates",
                   {{"version", bundle().version()},
                    {"fingerprint", bundle().fingerprint()}}}};
    Json outputs = Json::array();
    for (const fs::path& p : outputs_) outputs.push_back(p.string());
    manifest["outputs"] = outputs;
    WriteFile(manifest_path(), manifest.dump(2) + "\n");
  }

  fs::path manifest_path() const { return config_.out_dir / "manifest.json"; }

  void RecordCellOutputs(const CellResult& cell) {
    const CellSummary summary = CellSummary::FromJson(cell.summary);
    WriteFile(cell.dir / "report.md", RenderCellReport(summary));
    for (const auto& entry : fs::recursive_directory_iterator(cell.dir)) {
      if (entry.is_regular_file()) outputs_.insert(entry.path());
    }
  }

  void RecordOutput(const fs::path& path) { outputs_.insert(path); }

 private:
  ExperimentConfig config_;
  std::string command_;
  std::optional<TemplateBundle> custom_bundle_;
  std::map<std::string, std::vector<Sample>> splits_;
  std::map<std::pair<std::string, StrategyKind>, PromptStrategy> strategies_;
  std::shared_ptr<ChatClient> client_;
  ClientConfig selector_config_;
  std::optional<SelectionCache> selection_cache_;
  std::unique_ptr<Selector> selector_;
  std::set<fs::path> outputs_;
};

Json CellJson(const CellResult& cell) {
  return {{"run_key", cell.run_key},
          {"dataset", cell.summary["dataset"]},
          {"strategy", cell.summary["strategy"]},
          {"condition", cell.summary["condition"]},
          {"k", cell.summary["k"]},
          {"n", cell.summary["n"]},
          {"accuracy", cell.summary["accuracy"]},
          {"failures", cell.failures},
          {"resumed", cell.resumed},
          {"dir", cell.dir.string()}};
}

int RunExperiment(const ExperimentOptions& o, const GlobalOptions& g) {
  Experiment exp(ResolveConfig(o, g), "run");
  const ExperimentConfig& c = exp.config();

  struct Planned {
    std::string dataset;
    StrategyKind strategy;
    Condition condition;
    std::size_t k;
  };
  std::vector<Planned> plan;
  std::vector<std::string> keys;
  for (const auto& [dataset, path] : c.datasets) {
    for (StrategyKind kind : c.strategies) {
      for (Condition condition : c.conditions) {
        const std::vector<std::size_t> ks =
            condition == Condition::kOriginal ? std::vector<std::size_t>{0}
                                              : exp.KsFor(dataset);
        for (std::size_t k : ks) {
          plan.push_back({dataset, kind, condition, k});
          CellSpec spec = exp.BaseSpec(dataset);
          spec.condition = condition;
          spec.k = k;
          keys.push_back(RunKey(spec, exp.strategy(dataset, kind), exp.split(dataset)));
        }
      }
    }
  }
  exp.WriteManifest(keys, "running");

  ReportInput report_input;
  Json cells = Json::array();
  try {
    for (const Planned& p : plan) {
      CellSpec spec = exp.BaseSpec(p.dataset);
      spec.condition = p.condition;
      spec.k = p.k;
      const CellResult cell = RunCell(exp.client(), spec,
                                      exp.strategy(p.dataset, p.strategy),
                                      exp.split(p.dataset));
      exp.RecordCellOutputs(cell);
      report_input.cells.push_back(CellSummary::FromJson(cell.summary));
      cells.push_back(CellJson(cell));
      spdlog::info("cell {} {} {} k={}: accuracy {}", cell.run_key, p.dataset,
                   ConditionName(p.condition), p.k,
                   FormatPercent(Accuracy(cell.matrix)));
    }
  } catch (const Error&) {
    exp.WriteManifest(keys, "failed");
    throw;
  }

  const ReportBundle bundle = BuildReport(report_input);
  for (const fs::path& p : WriteReport(bundle, c.out_dir / "report")) exp.RecordOutput(p);
  exp.RecordOutput(exp.manifest_path());
  exp.WriteManifest(keys, "complete");

  if (o.json) {
    PrintJson({{"manifest", exp.manifest_path().string()},
               {"out_dir", c.out_dir.string()},
               {"cells", cells},
               {"report", (c.out_dir / "report" / "report.md").string()},
               {"complete", bundle.complete}});
  } else {
    std::cout << bundle.markdown;
  }
  return kExitOk;
}

int RunSweepCommand(const ExperimentOptions& o, const GlobalOptions& g) {
  Experiment exp(ResolveConfig(o, g), "sweep");
  const ExperimentConfig& c = exp.config();

  std::vector<std::string> keys;
  for (const auto& [dataset, path] : c.datasets) {
    for (StrategyKind kind : c.strategies) {
      for (std::size_t k = 0; k <= c.k_max; ++k) {
        CellSpec spec = exp.BaseSpec(dataset);
        spec.condition = k == 0 ? Condition::kOriginal : Condition::kVertical;
        spec.k = k;
        keys.push_back(RunKey(spec, exp.strategy(dataset, kind), exp.split(dataset)));
      }
    }
  }
  exp.WriteManifest(keys, "running");

  ReportInput report_input;
  Json sweeps = Json::array();
  try {
    for (const auto& [dataset, path] : c.datasets) {
      for (StrategyKind kind : c.strategies) {
        const PromptStrategy& strategy = exp.strategy(dataset, kind);
        const SweepResult sweep = Sweep(exp.client(), exp.BaseSpec(dataset), strategy,
                                        exp.split(dataset), c.k_max);
        const fs::path file =
            c.out_dir / "sweeps" /
            fmt::format("{}_{}_{}.json", sweep.model, dataset, StrategyName(kind));
        WriteFile(file, sweep.ToJson().dump(2) + "\n");
        exp.RecordOutput(file);
        for (const std::string& key : sweep.run_keys) {
          const fs::path dir = c.out_dir / key;
          std::ifstream in(dir / "summary.json");
          CellResult cell;
          cell.dir = dir;
          cell.summary = Json::parse(in);
          exp.RecordCellOutputs(cell);
          report_input.cells.push_back(CellSummary::FromJson(cell.summary));
        }
        report_input.sweeps.push_back(sweep);
        sweeps.push_back(sweep.ToJson());
      }
    }
  } catch (const Error&) {
    exp.WriteManifest(keys, "failed");
    throw;
  }

  const ReportBundle bundle = BuildReport(report_input);
  for (const fs::path& p : WriteReport(bundle, c.out_dir / "report")) exp.RecordOutput(p);
  exp.RecordOutput(exp.manifest_path());
  exp.WriteManifest(keys, "complete");

  if (o.json) {
    PrintJson({{"manifest", exp.manifest_path().string()},
               {"out_dir", c.out_dir.string()},
               {"sweeps", sweeps},
               {"report", (c.out_dir / "report" / "report.md").string()}});
  } else {
    for (const Json& s : sweeps) {
      std::cout << fmt::format("{} {} {}:", s["model"].get<std::string>(),
                               s["dataset"].get<std::string>(),
                               s["strategy"].get<std::string>());
      for (std::size_t i = 0; i < s["k"].size(); ++i) {
        std::cout << fmt::format(" k={} {}", s["k"][i].get<std::size_t>(),
                                 FormatPercent(s["accuracy"][i].get<double>()));
      }
      std::cout << '\n';
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// tokens

struct TokenOptions {
  fs::path artifact;
  std::string pretokenizer;
  std::string word;
  std::string text;
  std::string context;
  std::optional<std::size_t> index;
  bool json = false;
};

Tokenizer LoadTokenizerFor(const TokenOptions& o) {
  LoadOptions options;
  if (!o.pretokenizer.empty()) options.pretokenizer = ParsePretokenizer(o.pretokenizer);
  return Tokenizer::Load(o.artifact, options);
}

Json TokenizerJson(const Tokenizer& t) {
  return {{"source", t.source()},
          {"pretokenizer", PretokenizerName(t.pretokenizer())},
          {"vocab_size", t.vocab_size()}};
}

int RunTokensInflate(const TokenOptions& o) {
  const Tokenizer tokenizer = LoadTokenizerFor(o);
  const TokenInflationReport report = Inflate(
      tokenizer, o.word,
      o.context.empty() ? std::nullopt : std::optional<std::string_view>(o.context),
      o.index);
  Json out = report.ToJson();
  out["tokenizer"] = TokenizerJson(tokenizer);
  PrintJson(out);
  return kExitOk;
}

int RunTokensEncode(const TokenOptions& o) {
  const Tokenizer tokenizer = LoadTokenizerFor(o);
  const std::vector<int> ids = tokenizer.Encode(o.text);
  if (o.json) {
    std::vector<std::string> pieces;
    for (int id : ids) pieces.push_back(tokenizer.TokenBytes(id));
    PrintJson({{"text", o.text},
               {"count", ids.size()},
               {"ids", ids},
               {"pieces", pieces},
               {"tokenizer", TokenizerJson(tokenizer)}});
  } else {
    std::cout << fmt::format("{}\n", fmt::join(ids, " "));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report

struct ReportOptions {
  fs::path runs;
  std::vector<fs::path> attention;
  fs::path out;
  bool json = false;
};

int RunReport(const ReportOptions& o, const GlobalOptions& g) {
  fs::path runs = o.runs;
  if (runs.empty()) runs = g.out_dir.value_or("runs");
  ReportInput input;
  if (fs::exists(runs)) {
    input = CollectRuns(runs);
  } else if (!o.runs.empty() || o.attention.empty()) {
    throw Error(ErrorCode::kFileNotFound, runs.string());
  }
  for (const fs::path& path : o.attention) {
    input.attention.push_back(LoadAttentionReport(path));
  }
  const ReportBundle bundle = BuildReport(input);
  const fs::path out = o.out.empty() ? runs / "report" : o.out;
  const std::vector<fs::path> written = WriteReport(bundle, out);
  if (o.json) {
    Json files = Json::array();
    for (const fs::path& p : written) files.push_back(p.string());
    Json summary = bundle.summary;
    summary["files"] = files;
    PrintJson(summary);
  } else {
    std::cout << bundle.markdown;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

int Main(int argc, char** argv) {
  auto sink = std::make_shared<spdlog::sinks::stderr_color_sink_mt>();
  spdlog::set_default_logger(std::make_shared<spdlog::logger>("vertattack", sink));
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);

  CLI::App app{"Vertical text perturbation toolkit: layout, selection, "
               "prompting, evaluation, and tokenization analysis."};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::uint64_t seed = 0;
  std::string out_dir;
  auto* seed_opt = app.add_option("--seed", seed, "Seed for split draws");
  auto* out_opt = app.add_option("--out-dir", out_dir, "Directory for outputs");
  app.add_flag("-v,--verbose", g.verbose, "Log progress to stderr");

  TransformOptions t;
  auto* transform = app.add_subcommand("transform", "Render a sentence with vertical words");
  transform->add_option("--text", t.text, "Sentence")->required();
  auto* idx = transform->add_option("--indices", t.indices, "Comma-separated word indices");
  transform->add_option("--words", t.words, "Comma-separated words")->excludes(idx);
  transform->add_option("--pad", t.pad, "Padding character");
  transform->add_flag("--json", t.json, "Emit JSON");

  SelectOptions s;
  auto* select = app.add_subcommand("select", "Choose words to verticalize");
  select->add_option("--text", s.text, "Sentence")->required();
  select->add_option("-k", s.k, "Number of words (default: the task's)");
  select->add_option("--mode", s.mode, "heuristic or llm")
      ->check(CLI::IsMember({"heuristic", "llm"}));
  select->add_option("--model", s.model, "Evaluator model (llm mode)");
  select->add_option("--task", s.task, "Task whose label topic is used");
  select->add_option("--endpoint", s.endpoint, "Chat-completions URL");
  select->add_option("--api-key-env", s.api_key_env, "Environment variable with the API key");
  select->add_option("--cache", s.cache, "Selection cache (JSON lines)");
  select->add_option("--cassette", s.cassette, "Cassette file");
  select->add_option("--cassette-mode", s.cassette_mode, "off, record, or replay")
      ->check(CLI::IsMember({"off", "record", "replay"}));
  select->add_flag("--json", s.json, "Emit JSON");

  PromptOptions p;
  auto* prompts = app.add_subcommand("prompts", "Prompt templates");
  prompts->require_subcommand(1);
  auto* render = prompts->add_subcommand("render", "Print the prompt for one input");
  render->add_option("--strategy", p.strategy, "zero_shot, cot, few_shot, explicit")
      ->check(CLI::IsMember({"zero_shot", "cot", "few_shot", "explicit"}));
  render->add_option("--task", p.task, "Task name");
  render->add_option("--text", p.text, "Input text (already transformed if desired)")
      ->required();
  render->add_option("--question", p.question, "Question for pair tasks");
  render->add_option("--shots", p.shots, "Shot count for few_shot");
  render->add_option("--prompts-dir", p.prompts_dir, "Template directory override");
  render->add_flag("--json", p.json, "Emit JSON");

  DataOptions d;
  auto* data = app.add_subcommand("data", "Corpora");
  data->require_subcommand(1);
  auto* load = data->add_subcommand("load", "Load a corpus and draw a split");
  load->add_option("--dataset", d.dataset, "sst2, cola, qnli, rotten_tomatoes, jigsaw")
      ->required();
  load->add_option("--path", d.path, "Corpus file")->required();
  load->add_option("--split-n", d.split_n, "Split size");
  load->add_flag("--no-split", d.no_split, "Keep every loaded sample");
  load->add_flag("--no-stratify", d.no_stratify, "Draw without label balancing");
  load->add_option("--format", d.format, "auto, tsv, csv, jsonl")
      ->check(CLI::IsMember({"auto", "tsv", "csv", "jsonl"}));
  load->add_option("--out", d.out, "Write the samples as JSON lines");
  load->add_flag("--json", d.json, "Emit JSON");

  ExperimentOptions r;
  auto* run = app.add_subcommand("run", "Evaluate the cells described by a config file");
  auto* sweep = app.add_subcommand("sweep", "Accuracy against the number of vertical words");
  ExperimentOptions w;
  for (auto [cmd, opts] : {std::pair{run, &r}, std::pair{sweep, &w}}) {
    cmd->add_option("--config", opts->config, "Experiment config file")->required();
    cmd->add_option("--strategy", opts->strategies, "Override strategies");
    cmd->add_option("--cassette-mode", opts->cassette_mode, "off, record, or replay")
        ->check(CLI::IsMember({"off", "record", "replay"}));
    cmd->add_option("--parallelism", opts->parallelism, "In-flight requests");
    cmd->add_flag("--json", opts->json, "Emit JSON");
  }
  run->add_option("--condition", r.conditions, "Override conditions");
  run->add_option("-k", r.ks, "Override vertical word counts");
  sweep->add_option("--k-max", w.k_max, "Largest k");

  TokenOptions tk;
  auto* tokens = app.add_subcommand("tokens", "Tokenization analysis");
  tokens->require_subcommand(1);
  auto* inflate = tokens->add_subcommand("inflate", "Token counts of a word, horizontal vs vertical");
  auto* encode = tokens->add_subcommand("encode", "Encode text");
  for (auto* cmd : {inflate, encode}) {
    cmd->add_option("--artifact", tk.artifact, "Tokenizer directory or file")->required();
    cmd->add_option("--pretokenizer", tk.pretokenizer, "gpt2 or llama3")
        ->check(CLI::IsMember({"gpt2", "llama3"}));
    cmd->add_flag("--json", tk.json, "Emit JSON");
  }
  inflate->add_option("--word", tk.word, "Word")->required();
  inflate->add_option("--context", tk.context, "Sentence containing the word");
  inflate->add_option("--index", tk.index, "Word index in the context");
  encode->add_option("--text", tk.text, "Text")->required();

  ReportOptions rp;
  auto* report = app.add_subcommand("report", "Render tables, matrices, and charts");
  report->add_option("--runs", rp.runs, "Runs directory (default: --out-dir or runs)");
  report->add_option("--attention", rp.attention, "Attention report JSON files");
  report->add_option("--out", rp.out, "Output directory (default: <runs>/report)");
  report->add_flag("--json", rp.json, "Emit the summary JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kExitUsage;
  }
  if (g.verbose) spdlog::set_level(spdlog::level::info);
  if (seed_opt->count() > 0) g.seed = seed;
  if (out_opt->count() > 0) g.out_dir = out_dir;

  try {
    if (*transform) return RunTransform(t);
    if (*select) return RunSelect(s);
    if (*render) return RunPromptRender(p);
    if (*load) return RunDataLoad(d, g);
    if (*run) return RunExperiment(r, g);
    if (*sweep) return RunSweepCommand(w, g);
    if (*inflate) return RunTokensInflate(tk);
    if (*encode) return RunTokensEncode(tk);
    if (*report) return RunReport(rp, g);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace vertattack

int main(int argc, char** argv) { return vertattack::Main(argc, argv); }
