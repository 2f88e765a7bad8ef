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

// Evaluation cells, confusion matrices, and word-count sweeps.

#ifndef VERTATTACK_EVAL_H_
#define VERTATTACK_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "vertattack/datasets.h"
#include "vertattack/llm_client.h"
#include "vertattack/prompts.h"
#include "vertattack/select.h"

namespace vertattack {

enum class Condition { kOriginal, kVertical };

std::string_view ConditionName(Condition condition);
Condition ParseCondition(std::string_view name);

struct EvalRecord {
  std::string sample_id;
  Condition condition = Condition::kOriginal;
  std::size_t k = 0;
  std::string strategy_id;
  std::string gold;
  std::string prediction;  // a label or kUnparsed
  std::string raw;         // the generation
  std::vector<std::size_t> vertical_indices;
  std::string transcript;  // path relative to the run directory
  std::optional<std::string> error;

  bool correct() const { return prediction == gold; }
  friend bool operator==(const EvalRecord&, const EvalRecord&) = default;
};

nlohmann::json ToJson(const EvalRecord& record);
EvalRecord EvalRecordFromJson(const nlohmann::json& json);

// Counts keyed by (gold, predicted); predictions may be kUnparsed.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<std::string> labels)
      : labels_(std::move(labels)) {}

  void Add(const std::string& gold, const std::string& predicted,
           std::size_t count = 1);
  std::size_t Count(const std::string& gold, const std::string& predicted) const;
  std::size_t Total() const { return total_; }
  std::size_t Correct() const;

  // Declared labels followed by any other label seen, then kUnparsed if seen.
  std::vector<std::string> RowLabels() const;
  std::vector<std::string> ColumnLabels() const;
  const std::map<std::pair<std::string, std::string>, std::size_t>& counts()
      const {
    return counts_;
  }

  static ConfusionMatrix FromRecords(std::span<const EvalRecord> records,
                                     std::vector<std::string> labels);
  nlohmann::json ToJson() const;
  static ConfusionMatrix FromJson(const nlohmann::json& json);

 private:
  std::vector<std::string> labels_;
  std::map<std::pair<std::string, std::string>, std::size_t> counts_;
  std::size_t total_ = 0;
};

// Diagonal over total. Throws EmptyRun for an empty matrix.
double Accuracy(const ConfusionMatrix& matrix);

struct CellSpec {
  ClientConfig model;
  std::string dataset;
  std::uint64_t split_seed = 0;
  Condition condition = Condition::kOriginal;
  std::size_t k = 0;
  StrategyKind strategy = StrategyKind::kZeroShot;
  Selector* selector = nullptr;  // required for the vertical condition
  // Where runs/<key>/ directories go; empty keeps everything in memory.
  std::filesystem::path runs_dir;
  double max_failure_fraction = 0.2;
};

// sha256 prefix over every sample's id, texts, and gold label, in order.
std::string SplitFingerprint(std::span<const Sample> split);

// sha256 prefix over model and sampling settings, dataset, split seed and
// fingerprint, condition, k, strategy id, template version and fingerprint,
// and selector id.
std::string RunKey(const CellSpec& spec, const PromptStrategy& strategy,
                   std::span<const Sample> split);

struct CellResult {
  std::string run_key;
  std::vector<EvalRecord> records;  // sorted by sample id
  ConfusionMatrix matrix;
  std::size_t failures = 0;
  std::size_t resumed = 0;  // records reused from an earlier run
  nlohmann::json summary;
  std::filesystem::path dir;  // empty for in-memory runs
};

// Evaluates every sample of `split`, up to model.parallelism at a time.
// Per-sample failures become records with `error` set (scored as wrong);
// more than max_failure_fraction of them raises CellAborted. When runs_dir
// is set the cell persists records.jsonl, transcripts/, and summary.json and
// resumes by skipping samples that already have a successful record.
CellResult RunCell(ChatClient& client, const CellSpec& spec,
                   const PromptStrategy& strategy,
                   std::span<const Sample> split);

struct SweepResult {
  std::string model;
  std::string dataset;
  std::string strategy_id;
  std::vector<std::size_t> ks;
  std::vector<double> accuracies;
  std::vector<std::string> run_keys;

  nlohmann::json ToJson() const;
  static SweepResult FromJson(const nlohmann::json& json);
};

// Runs cells for k = 0..k_max. Selections for every k are computed first and
// must form a superset chain per sample (SupersetViolation otherwise).
// k_max == 0 is rejected with InvalidArgument. The base spec's condition and
// k are ignored.
SweepResult Sweep(ChatClient& client, const CellSpec& base,
                  const PromptStrategy& strategy, std::span<const Sample> split,
                  std::size_t k_max);

}  // namespace vertattack

#endif  // VERTATTACK_EVAL_H_
