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

#include "vertattack/select.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "json.hpp"
#include "vertattack/error.h"
#include "vertattack/text_util.h"

namespace vertattack {
namespace {

using Json = nlohmann::json;

constexpr std::array<std::string_view, 50> kStopwords = {
    "a",     "an",   "the",   "and",   "or",   "but",  "if",   "of",
    "to",    "in",   "on",    "at",    "by",   "for",  "with", "from",
    "as",    "is",   "are",   "was",   "were", "be",   "been", "it",
    "its",   "this", "that",  "these", "those", "he",  "she",  "they",
    "we",    "you",  "i",     "me",    "my",   "his",  "her",  "their",
    "our",   "your", "not",   "no",    "so",   "do",   "does", "did",
    "has",   "have"};

Json ResultToJson(const SelectionResult& r) {
  Json out{{"indices", r.indices}};
  if (r.rationale) out["rationale"] = *r.rationale;
  return out;
}

SelectionResult ResultFromJson(const Json& j) {
  SelectionResult r;
  r.indices = j.at("indices").get<std::vector<std::size_t>>();
  if (j.contains("rationale")) r.rationale = j["rationale"].get<std::string>();
  return r;
}

}  // namespace

std::string_view SelectionModeName(SelectionMode mode) {
  return mode == SelectionMode::kLlm ? "llm" : "heuristic";
}

SelectionMode ParseSelectionMode(std::string_view name) {
  if (name == "llm") return SelectionMode::kLlm;
  if (name == "heuristic") return SelectionMode::kHeuristic;
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("unknown selection mode '{}'", name));
}

std::span<const std::string_view> Stopwords() { return kStopwords; }

bool IsStopword(std::string_view word) {
  const std::string bare = AsciiLower(StripPunctuation(word));
  if (bare.empty()) return true;
  return std::find(kStopwords.begin(), kStopwords.end(), bare) !=
         kStopwords.end();
}

std::size_t EligibleWordCount(const Sentence& sentence) {
  return static_cast<std::size_t>(std::count_if(
      sentence.words.begin(), sentence.words.end(),
      [](const std::string& w) { return !IsStopword(w); }));
}

SelectionResult SelectHeuristic(const SelectionRequest& request) {
  if (request.mode != SelectionMode::kHeuristic) {
    throw Error(ErrorCode::kInvalidArgument, "request is not in heuristic mode");
  }
  if (request.k == 0) {
    throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  }
  const auto& words = request.sentence.words;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!IsStopword(words[i])) candidates.push_back(i);
  }
  if (candidates.size() < request.k) {
    throw Error(ErrorCode::kKTooLarge,
                fmt::format("k={} but only {} non-stopword words", request.k,
                            candidates.size()));
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) {
                     return words[a].size() > words[b].size();
                   });
  candidates.resize(request.k);
  std::sort(candidates.begin(), candidates.end());
  return SelectionResult{std::move(candidates), std::nullopt};
}

// ---------------------------------------------------------------------------

SelectionCache::SelectionCache(std::filesystem::path path)
    : path_(std::move(path)) {
  std::ifstream in(*path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json entry = Json::parse(line, nullptr, false);
    if (entry.is_discarded() || !entry.contains("key")) continue;
    entries_[entry["key"].get<std::string>()] = ResultFromJson(entry["result"]);
  }
}

std::string SelectionCache::Key(std::string_view text, std::size_t k,
                                std::string_view model) {
  Json canonical{{"text", std::string(text)}, {"k", k},
                 {"model", std::string(model)}};
  return Sha256Hex(canonical.dump(-1, ' ', false, Json::error_handler_t::replace));
}

std::optional<SelectionResult> SelectionCache::Get(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void SelectionCache::Put(const std::string& key, std::string_view text,
                         std::size_t k, std::string_view model,
                         const SelectionResult& result) {
  std::lock_guard lock(mu_);
  entries_[key] = result;
  if (!path_) return;
  if (path_->has_parent_path()) {
    std::filesystem::create_directories(path_->parent_path());
  }
  std::ofstream out(*path_, std::ios::app);
  Json entry{{"key", key},
             {"text", std::string(text)},
             {"k", k},
             {"model", std::string(model)},
             {"result", ResultToJson(result)}};
  out << entry.dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
}

// ---------------------------------------------------------------------------

std::vector<std::string> ParseWordList(std::string_view answer) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    std::string_view item = TrimWhitespace(current);
    // List markers: "1.", "2)", "-", "*".
    std::size_t digits = 0;
    while (digits < item.size() && std::isdigit(static_cast<unsigned char>(item[digits]))) {
      ++digits;
    }
    if (digits > 0 && digits < item.size() &&
        (item[digits] == '.' || item[digits] == ')')) {
      item.remove_prefix(digits + 1);
    }
    item = TrimWhitespace(item);
    while (!item.empty() && (item.front() == '-' || item.front() == '*')) {
      item.remove_prefix(1);
      item = TrimWhitespace(item);
    }
    auto quote = [](char c) { return c == '"' || c == '\'' || c == '`'; };
    while (!item.empty() && quote(item.front())) item.remove_prefix(1);
    while (!item.empty() && (quote(item.back()) || item.back() == '.')) {
      item.remove_suffix(1);
    }
    item = TrimWhitespace(item);
    if (!item.empty()) out.emplace_back(item);
    current.clear();
  };
  for (char c : answer) {
    if (c == ',' || c == ';' || c == '\n') {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  return out;
}

std::vector<Message> BuildSelectionPrompt(std::string_view text, std::size_t k,
                                          std::string_view topic,
                                          const TemplateBundle& bundle) {
  std::string tmpl = bundle.Get("select");
  if (!tmpl.empty() && tmpl.back() == '\n') tmpl.pop_back();
  return {Message{"user", RenderTemplate(tmpl, {{"input", std::string(text)},
                                                {"k", std::to_string(k)},
                                                {"topic", std::string(topic)}})}};
}

SelectionResult SelectLlm(const SelectionRequest& request, ChatClient& client,
                          const ClientConfig& config, SelectionCache* cache) {
  if (request.mode != SelectionMode::kLlm) {
    throw Error(ErrorCode::kInvalidArgument, "request is not in llm mode");
  }
  if (request.k == 0) {
    throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  }
  const Sentence& sentence = request.sentence;
  if (request.k > sentence.words.size()) {
    throw Error(ErrorCode::kKTooLarge,
                fmt::format("k={} exceeds {} words", request.k,
                            sentence.words.size()));
  }
  const std::string model =
      request.evaluator_model.empty() ? config.model_id : request.evaluator_model;
  const std::string text = sentence.Joined();
  const std::string key = SelectionCache::Key(text, request.k, model);
  if (cache != nullptr) {
    if (auto hit = cache->Get(key)) return *hit;
  }

  ClientConfig selection_config = config.ForSelection();
  selection_config.model_id = model;
  std::vector<Message> messages =
      BuildSelectionPrompt(text, request.k, request.topic);

  ErrorCode last_code = ErrorCode::kWrongCardinality;
  std::string last_problem;
  for (int attempt = 0; attempt <= kSelectionRetries; ++attempt) {
    const Transcript t = client.Complete(selection_config, messages);
    const std::vector<std::string> words = ParseWordList(t.generation);
    std::string problem;
    std::vector<std::size_t> indices;
    if (words.size() != request.k) {
      last_code = ErrorCode::kWrongCardinality;
      problem = fmt::format("Your answer listed {} words but exactly {} are "
                            "required.",
                            words.size(), request.k);
    } else {
      for (const std::string& word : words) {
        const std::size_t index = FindWord(sentence, word, indices);
        if (index == std::string::npos) {
          last_code = ErrorCode::kWordNotInSentence;
          problem = fmt::format("The word '{}' does not occur in the text.", word);
          break;
        }
        indices.push_back(index);
      }
    }
    if (problem.empty()) {
      std::sort(indices.begin(), indices.end());
      SelectionResult result{std::move(indices), t.generation};
      if (cache != nullptr) cache->Put(key, text, request.k, model, result);
      return result;
    }
    last_problem = problem;
    messages.push_back({"assistant", t.generation});
    messages.push_back(
        {"user", fmt::format("{} Answer again with exactly {} words copied from "
                             "the text, as a comma-separated list, words only.",
                             problem, request.k)});
  }
  throw Error(last_code, last_problem);
}

SelectionResult HeuristicSelector::Select(const Sentence& sentence,
                                          std::size_t k, const TaskSpec&) {
  SelectionRequest request;
  request.sentence = sentence;
  request.k = std::min(k, EligibleWordCount(sentence));
  if (request.k == 0) return {};
  return SelectHeuristic(request);
}

SelectionResult LlmSelector::Select(const Sentence& sentence, std::size_t k,
                                    const TaskSpec& task) {
  SelectionRequest request;
  request.sentence = sentence;
  request.k = std::min(k, sentence.words.size());
  request.mode = SelectionMode::kLlm;
  request.evaluator_model = config_.model_id;
  request.topic = task.topic;
  return SelectLlm(request, client_, config_, cache_);
}

SelectionResult PrecomputedSelector::Select(const Sentence& sentence,
                                            std::size_t k, const TaskSpec&) {
  auto it = entries_.find({sentence.Joined(), k});
  if (it == entries_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("no precomputed selection for k={}", k));
  }
  if (!it->second.result) throw Error(it->second.error, it->second.message);
  return *it->second.result;
}

}  // namespace vertattack
