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

#include "vertattack/eval.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "vertattack/error.h"
#include "vertattack/text_util.h"
#include "vertattack/transform.h"

namespace vertattack {
namespace {

using Json = nlohmann::json;

std::string Dump(const Json& json) {
  return json.dump(-1, ' ', false, Json::error_handler_t::replace);
}

std::string TranscriptName(const std::string& sample_id) {
  std::string safe;
  for (char c : sample_id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                    c == '_' || c == '.';
    safe.push_back(ok ? c : '_');
  }
  return fmt::format("transcripts/{}-{}.json", safe.substr(0, 64),
                     Sha256Hex(sample_id).substr(0, 8));
}

void ValidateCell(const CellSpec& spec, std::span<const Sample> split) {
  if (split.empty()) throw Error(ErrorCode::kEmptyRun, "split is empty");
  if (spec.condition == Condition::kOriginal && spec.k != 0) {
    throw Error(ErrorCode::kInvalidArgument, "original condition requires k=0");
  }
  if (spec.condition == Condition::kVertical) {
    if (spec.k == 0) {
      throw Error(ErrorCode::kInvalidArgument, "vertical condition requires k>=1");
    }
    if (spec.selector == nullptr) {
      throw Error(ErrorCode::kInvalidArgument,
                  "vertical condition requires a selector");
    }
  }
  if (spec.max_failure_fraction < 0.0 || spec.max_failure_fraction > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "max_failure_fraction out of range");
  }
  spec.model.Validate();
}

// Latest record per sample id from an earlier, possibly interrupted run.
std::map<std::string, EvalRecord> LoadRecords(const std::filesystem::path& file) {
  std::map<std::string, EvalRecord> out;
  std::ifstream in(file);
  std::string line;
  while (std::getline(in, line)) {
    if (TrimWhitespace(line).empty()) continue;
    Json json = Json::parse(line, nullptr, false);
    if (json.is_discarded()) {
      spdlog::warn("{}: skipping unreadable record line", file.string());
      continue;
    }
    EvalRecord record = EvalRecordFromJson(json);
    out[record.sample_id] = std::move(record);
  }
  return out;
}

void WriteText(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
}

class CellWorker {
 public:
  CellWorker(ChatClient& client, const CellSpec& spec,
             const PromptStrategy& strategy, const std::filesystem::path& dir)
      : client_(client), spec_(spec), strategy_(strategy), dir_(dir) {}

  EvalRecord Evaluate(const Sample& sample) {
    EvalRecord record;
    record.sample_id = sample.id;
    record.condition = spec_.condition;
    record.k = spec_.k;
    record.strategy_id = strategy_.Id();
    record.gold = sample.gold;
    record.prediction = std::string(kUnparsed);
    try {
      std::string text = sample.text;
      if (spec_.condition == Condition::kVertical) {
        const Sentence sentence = Decompose(sample.text);
        SelectionResult selection =
            spec_.selector->Select(sentence, spec_.k, strategy_.task());
        record.vertical_indices = selection.indices;
        text = Verticalize(sentence, {selection.indices, ' '}).rendered;
      }
      const std::string input = FormatInput(
          strategy_.task(), text,
          sample.text2 ? std::optional<std::string_view>(*sample.text2)
                       : std::nullopt);
      const std::vector<Message> messages = BuildPrompt(strategy_, input);
      const Transcript transcript = client_.Complete(spec_.model, messages);
      record.raw = transcript.generation;
      record.prediction = ParseLabel(transcript.generation, strategy_.task())
                              .LabelOrUnparsed();
      if (!dir_.empty()) {
        record.transcript = TranscriptName(sample.id);
        Json json = ToJson(transcript);
        json["sample_id"] = sample.id;
        WriteText(dir_ / record.transcript, json.dump(2, ' ', false,
                                                      Json::error_handler_t::replace));
      }
    } catch (const std::exception& e) {
      record.error = e.what();
      spdlog::warn("sample {} failed: {}", sample.id, e.what());
    }
    return record;
  }

 private:
  ChatClient& client_;
  const CellSpec& spec_;
  const PromptStrategy& strategy_;
  const std::filesystem::path& dir_;
};

Json BuildSummary(const CellSpec& spec, const PromptStrategy& strategy,
                  std::span<const Sample> split, const CellResult& result) {
  std::size_t unparsed = 0;
  for (const EvalRecord& r : result.records) {
    if (!r.error && r.prediction == kUnparsed) ++unparsed;
  }
  return Json{
      {"run_key", result.run_key},
      {"model", spec.model.model_id},
      {"dataset", spec.dataset},
      {"split_seed", spec.split_seed},
      {"split_fingerprint", SplitFingerprint(split)},
      {"condition", ConditionName(spec.condition)},
      {"k", spec.k},
      {"strategy", strategy.Id()},
      {"prompt_version", strategy.bundle().version()},
      {"prompt_fingerprint", strategy.bundle().fingerprint()},
      {"selector", spec.selector ? spec.selector->Id() : std::string("none")},
      {"n", result.matrix.Total()},
      {"correct", result.matrix.Correct()},
      {"accuracy", Accuracy(result.matrix)},
      {"failures", result.failures},
      {"unparsed", unparsed},
      {"confusion", result.matrix.ToJson()},
  };
}

}  // namespace

std::string_view ConditionName(Condition condition) {
  return condition == Condition::kOriginal ? "original" : "vertical";
}

Condition ParseCondition(std::string_view name) {
  if (name == "original") return Condition::kOriginal;
  if (name == "vertical") return Condition::kVertical;
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("unknown condition '{}'", name));
}

Json ToJson(const EvalRecord& record) {
  Json out{{"sample_id", record.sample_id},
           {"condition", ConditionName(record.condition)},
           {"k", record.k},
           {"strategy", record.strategy_id},
           {"gold", record.gold},
           {"prediction", record.prediction},
           {"raw", record.raw},
           {"vertical_indices", record.vertical_indices},
           {"transcript", record.transcript}};
  if (record.error) out["error"] = *record.error;
  return out;
}

EvalRecord EvalRecordFromJson(const Json& json) {
  EvalRecord r;
  r.sample_id = json.at("sample_id").get<std::string>();
  r.condition = ParseCondition(json.at("condition").get<std::string>());
  r.k = json.at("k").get<std::size_t>();
  r.strategy_id = json.at("strategy").get<std::string>();
  r.gold = json.at("gold").get<std::string>();
  r.prediction = json.at("prediction").get<std::string>();
  r.raw = json.value("raw", "");
  r.vertical_indices =
      json.value("vertical_indices", std::vector<std::size_t>{});
  r.transcript = json.value("transcript", "");
  if (json.contains("error")) r.error = json["error"].get<std::string>();
  return r;
}

// ---------------------------------------------------------------------------

void ConfusionMatrix::Add(const std::string& gold, const std::string& predicted,
                          std::size_t count) {
  counts_[{gold, predicted}] += count;
  total_ += count;
}

std::size_t ConfusionMatrix::Count(const std::string& gold,
                                   const std::string& predicted) const {
  auto it = counts_.find({gold, predicted});
  return it == counts_.end() ? 0 : it->second;
}

std::size_t ConfusionMatrix::Correct() const {
  std::size_t correct = 0;
  for (const auto& [key, count] : counts_) {
    if (key.first == key.second && key.first != kUnparsed) correct += count;
  }
  return correct;
}

std::vector<std::string> ConfusionMatrix::RowLabels() const {
  std::vector<std::string> out = labels_;
  for (const auto& [key, count] : counts_) {
    if (std::find(out.begin(), out.end(), key.first) == out.end()) {
      out.push_back(key.first);
    }
  }
  return out;
}

std::vector<std::string> ConfusionMatrix::ColumnLabels() const {
  std::vector<std::string> out = RowLabels();
  bool unparsed = false;
  for (const auto& [key, count] : counts_) {
    if (key.second == kUnparsed) {
      unparsed = true;
    } else if (std::find(out.begin(), out.end(), key.second) == out.end()) {
      out.push_back(key.second);
    }
  }
  if (unparsed) out.emplace_back(kUnparsed);
  return out;
}

ConfusionMatrix ConfusionMatrix::FromRecords(std::span<const EvalRecord> records,
                                             std::vector<std::string> labels) {
  ConfusionMatrix matrix(std::move(labels));
  for (const EvalRecord& r : records) matrix.Add(r.gold, r.prediction);
  return matrix;
}

Json ConfusionMatrix::ToJson() const {
  Json counts = Json::array();
  for (const auto& [key, count] : counts_) {
    counts.push_back({{"gold", key.first}, {"predicted", key.second},
                      {"count", count}});
  }
  return Json{{"labels", labels_}, {"total", total_}, {"counts", counts}};
}

ConfusionMatrix ConfusionMatrix::FromJson(const Json& json) {
  ConfusionMatrix matrix(json.at("labels").get<std::vector<std::string>>());
  for (const Json& cell : json.at("counts")) {
    matrix.Add(cell.at("gold").get<std::string>(),
               cell.at("predicted").get<std::string>(),
               cell.at("count").get<std::size_t>());
  }
  return matrix;
}

double Accuracy(const ConfusionMatrix& matrix) {
  if (matrix.Total() == 0) {
    throw Error(ErrorCode::kEmptyRun, "confusion matrix has no samples");
  }
  return static_cast<double>(matrix.Correct()) /
         static_cast<double>(matrix.Total());
}

// ---------------------------------------------------------------------------

std::string SplitFingerprint(std::span<const Sample> split) {
  Json rows = Json::array();
  for (const Sample& s : split) {
    rows.push_back({s.id, s.text, s.text2 ? Json(*s.text2) : Json(), s.gold});
  }
  return Sha256Hex(Dump(rows)).substr(0, 16);
}

std::string RunKey(const CellSpec& spec, const PromptStrategy& strategy,
                   std::span<const Sample> split) {
  Json key{{"model", spec.model.model_id},
           {"temperature", spec.model.temperature},
           {"top_p", spec.model.top_p},
           {"max_tokens", spec.model.max_tokens},
           {"dataset", spec.dataset},
           {"split_seed", spec.split_seed},
           {"split", SplitFingerprint(split)},
           {"condition", ConditionName(spec.condition)},
           {"k", spec.k},
           {"strategy", strategy.Id()},
           {"prompt_version", strategy.bundle().version()},
           {"prompt_fingerprint", strategy.bundle().fingerprint()},
           {"selector", spec.condition == Condition::kVertical && spec.selector
                            ? spec.selector->Id()
                            : std::string("none")}};
  return Sha256Hex(Dump(key)).substr(0, 16);
}

CellResult RunCell(ChatClient& client, const CellSpec& spec,
                   const PromptStrategy& strategy,
                   std::span<const Sample> split) {
  ValidateCell(spec, split);
  CellResult result;
  result.run_key = RunKey(spec, strategy, split);

  std::map<std::string, EvalRecord> done;
  std::filesystem::path records_path;
  if (!spec.runs_dir.empty()) {
    result.dir = spec.runs_dir / result.run_key;
    std::filesystem::create_directories(result.dir / "transcripts");
    records_path = result.dir / "records.jsonl";
    for (auto& [id, record] : LoadRecords(records_path)) {
      if (!record.error) done.emplace(id, std::move(record));
    }
  }

  std::set<std::string> seen;
  std::vector<const Sample*> pending;
  std::vector<EvalRecord> records;
  for (const Sample& sample : split) {
    if (!seen.insert(sample.id).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("duplicate sample id '{}'", sample.id));
    }
    auto it = done.find(sample.id);
    if (it != done.end()) {
      records.push_back(it->second);
      ++result.resumed;
    } else {
      pending.push_back(&sample);
    }
  }
  if (result.resumed > 0) {
    spdlog::info("cell {}: resuming, {} of {} samples already recorded",
                 result.run_key, result.resumed, split.size());
  }

  std::ofstream records_out;
  if (!records_path.empty()) {
    records_out.open(records_path, std::ios::app | std::ios::binary);
    if (!records_out) {
      throw Error(ErrorCode::kIoError, "cannot append to " + records_path.string());
    }
  }

  CellWorker worker(client, spec, strategy, result.dir);
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < pending.size(); i = next++) {
      EvalRecord record = worker.Evaluate(*pending[i]);
      std::lock_guard lock(mu);
      if (records_out.is_open()) {
        records_out << Dump(ToJson(record)) << '\n';
        records_out.flush();
      }
      records.push_back(std::move(record));
    }
  };
  const std::size_t threads = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(spec.model.parallelism, 1)),
      pending.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
  }

  std::sort(records.begin(), records.end(),
            [](const EvalRecord& a, const EvalRecord& b) {
              return a.sample_id < b.sample_id;
            });
  result.failures = static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(),
      [](const EvalRecord& r) { return r.error.has_value(); }));
  if (static_cast<double>(result.failures) >
      spec.max_failure_fraction * static_cast<double>(records.size())) {
    throw Error(ErrorCode::kCellAborted,
                fmt::format("cell {}: {} of {} samples failed", result.run_key,
                            result.failures, records.size()));
  }

  result.matrix = ConfusionMatrix::FromRecords(records, strategy.task().label_set);
  result.records = std::move(records);
  result.summary = BuildSummary(spec, strategy, split, result);
  if (!result.dir.empty()) {
    WriteText(result.dir / "summary.json", result.summary.dump(2) + "\n");
  }
  return result;
}

// ---------------------------------------------------------------------------

Json SweepResult::ToJson() const {
  return Json{{"model", model},       {"dataset", dataset},
              {"strategy", strategy_id}, {"k", ks},
              {"accuracy", accuracies}, {"run_keys", run_keys}};
}

SweepResult SweepResult::FromJson(const Json& json) {
  SweepResult r;
  r.model = json.at("model").get<std::string>();
  r.dataset = json.at("dataset").get<std::string>();
  r.strategy_id = json.at("strategy").get<std::string>();
  r.ks = json.at("k").get<std::vector<std::size_t>>();
  r.accuracies = json.at("accuracy").get<std::vector<double>>();
  r.run_keys = json.value("run_keys", std::vector<std::string>{});
  if (r.ks.size() != r.accuracies.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "sweep k and accuracy lengths differ");
  }
  return r;
}

SweepResult Sweep(ChatClient& client, const CellSpec& base,
                  const PromptStrategy& strategy, std::span<const Sample> split,
                  std::size_t k_max) {
  if (k_max == 0) throw Error(ErrorCode::kInvalidArgument, "k_max must be >= 1");
  if (base.selector == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "sweep requires a selector");
  }
  if (split.empty()) throw Error(ErrorCode::kEmptyRun, "split is empty");

  // Selections for every k, checked for the superset chain before any
  // classification request is made.
  std::map<PrecomputedSelector::Key, PrecomputedSelector::Entry> entries;
  for (const Sample& sample : split) {
    const Sentence sentence = Decompose(sample.text);
    const std::string text = sentence.Joined();
    std::optional<std::vector<std::size_t>> previous;
    for (std::size_t k = 1; k <= k_max; ++k) {
      PrecomputedSelector::Entry entry;
      try {
        entry.result = base.selector->Select(sentence, k, strategy.task());
      } catch (const Error& e) {
        entry.error = e.code();
        entry.message = e.detail();
      }
      if (entry.result && previous &&
          !std::includes(entry.result->indices.begin(),
                         entry.result->indices.end(), previous->begin(),
                         previous->end())) {
        throw Error(ErrorCode::kSupersetViolation,
                    fmt::format("sample {}: k={} selection does not contain the "
                                "k={} selection",
                                sample.id, k, k - 1));
      }
      previous = entry.result ? std::optional(entry.result->indices) : std::nullopt;
      entries[{text, k}] = std::move(entry);
    }
  }
  PrecomputedSelector chain(std::move(entries), base.selector->Id());

  SweepResult out;
  out.model = base.model.model_id;
  out.dataset = base.dataset;
  out.strategy_id = strategy.Id();
  for (std::size_t k = 0; k <= k_max; ++k) {
    CellSpec spec = base;
    spec.k = k;
    spec.condition = k == 0 ? Condition::kOriginal : Condition::kVertical;
    spec.selector = &chain;
    const CellResult cell = RunCell(client, spec, strategy, split);
    out.ks.push_back(k);
    out.accuracies.push_back(Accuracy(cell.matrix));
    out.run_keys.push_back(cell.run_key);
  }
  return out;
}

}  // namespace vertattack
