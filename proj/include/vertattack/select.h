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

// Choosing which words of a sample to verticalize.

#ifndef VERTATTACK_SELECT_H_
#define VERTATTACK_SELECT_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vertattack/error.h"
#include "vertattack/llm_client.h"
#include "vertattack/prompts.h"
#include "vertattack/transform.h"

namespace vertattack {

enum class SelectionMode { kLlm, kHeuristic };

std::string_view SelectionModeName(SelectionMode mode);
SelectionMode ParseSelectionMode(std::string_view name);

struct SelectionRequest {
  Sentence sentence;
  std::size_t k = 1;
  SelectionMode mode = SelectionMode::kHeuristic;
  std::string evaluator_model;  // llm mode only
  std::string topic = "classification";
};

struct SelectionResult {
  std::vector<std::size_t> indices;  // ascending word positions
  std::optional<std::string> rationale;

  friend bool operator==(const SelectionResult&,
                         const SelectionResult&) = default;
};

// The fixed 50-entry English function-word list.
std::span<const std::string_view> Stopwords();
bool IsStopword(std::string_view word);

// Longest non-stopword words first, earlier position breaking ties; the
// top k are returned in sentence order. Throws KTooLarge when fewer than k
// eligible words exist and InvalidArgument for k == 0.
SelectionResult SelectHeuristic(const SelectionRequest& request);

// Number of words SelectHeuristic can choose from.
std::size_t EligibleWordCount(const Sentence& sentence);

// JSON-lines cache of LLM selections keyed by sha256(text, k, model).
class SelectionCache {
 public:
  SelectionCache() = default;  // memory only
  explicit SelectionCache(std::filesystem::path path);

  static std::string Key(std::string_view text, std::size_t k,
                         std::string_view model);

  std::optional<SelectionResult> Get(const std::string& key) const;
  void Put(const std::string& key, std::string_view text, std::size_t k,
           std::string_view model, const SelectionResult& result);

 private:
  std::optional<std::filesystem::path> path_;
  mutable std::mutex mu_;
  std::map<std::string, SelectionResult> entries_;
};

// Parses an evaluator answer into words: splits on commas, semicolons and
// newlines; drops list markers, quotes, and empty items.
std::vector<std::string> ParseWordList(std::string_view answer);

std::vector<Message> BuildSelectionPrompt(
    std::string_view text, std::size_t k, std::string_view topic,
    const TemplateBundle& bundle = TemplateBundle::Builtin());

inline constexpr int kSelectionRetries = 2;

// Asks the evaluator for k words and resolves each to its first unused
// case-insensitive occurrence. Failed attempts are retried up to
// kSelectionRetries times with a corrective follow-up turn; then
// WordNotInSentence or WrongCardinality is raised. Client errors propagate.
SelectionResult SelectLlm(const SelectionRequest& request, ChatClient& client,
                          const ClientConfig& config,
                          SelectionCache* cache = nullptr);

// Strategy object used by the evaluation harness.
class Selector {
 public:
  virtual ~Selector() = default;
  virtual SelectionResult Select(const Sentence& sentence, std::size_t k,
                                 const TaskSpec& task) = 0;
  virtual std::string Id() const = 0;
};

// Clamps k to EligibleWordCount so short texts still get a selection.
class HeuristicSelector : public Selector {
 public:
  SelectionResult Select(const Sentence& sentence, std::size_t k,
                         const TaskSpec& task) override;
  std::string Id() const override { return "heuristic"; }
};

class LlmSelector : public Selector {
 public:
  LlmSelector(ChatClient& client, ClientConfig config, SelectionCache* cache)
      : client_(client), config_(std::move(config)), cache_(cache) {}

  SelectionResult Select(const Sentence& sentence, std::size_t k,
                         const TaskSpec& task) override;
  std::string Id() const override { return "llm:" + config_.model_id; }

 private:
  ChatClient& client_;
  ClientConfig config_;
  SelectionCache* cache_;
};

// Serves selections computed ahead of time, keyed by (joined text, k). A
// stored failure is rethrown with its original code.
class PrecomputedSelector : public Selector {
 public:
  struct Entry {
    std::optional<SelectionResult> result;
    ErrorCode error = ErrorCode::kInvalidArgument;
    std::string message;
  };
  using Key = std::pair<std::string, std::size_t>;

  PrecomputedSelector(std::map<Key, Entry> entries, std::string id)
      : entries_(std::move(entries)), id_(std::move(id)) {}

  SelectionResult Select(const Sentence& sentence, std::size_t k,
                         const TaskSpec& task) override;
  std::string Id() const override { return id_; }

 private:
  std::map<Key, Entry> entries_;
  std::string id_;
};

}  // namespace vertattack

#endif  // VERTATTACK_SELECT_H_
