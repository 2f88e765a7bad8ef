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

#include <atomic>
#include <filesystem>

#include <gtest/gtest.h>

#include "vertattack/error.h"
#include "vertattack/prompts.h"

namespace vertattack {
namespace {

namespace fs = std::filesystem;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIoError;
}

SelectionRequest Heuristic(std::string_view text, std::size_t k) {
  SelectionRequest r;
  r.sentence = Decompose(text);
  r.k = k;
  return r;
}

SelectionRequest Llm(std::string_view text, std::size_t k) {
  SelectionRequest r = Heuristic(text, k);
  r.mode = SelectionMode::kLlm;
  r.evaluator_model = "evaluator";
  return r;
}

ClientConfig Config() {
  ClientConfig c;
  c.model_id = "evaluator";
  return c;
}

TEST(HeuristicTest, LongestWordsWithEarlierTieBreak) {
  EXPECT_EQ(SelectHeuristic(Heuristic("a bad day", 1)).indices,
            (std::vector<std::size_t>{1}));
}

TEST(HeuristicTest, FollowsLengthRuleOnOverburdenedExample) {
  // Length order: overburdened(12) complicated(11) plotting(8) dialogue(8) banal(5).
  EXPECT_EQ(SelectHeuristic(Heuristic(
                "overburdened with complicated plotting and banal dialogue", 3))
                .indices,
            (std::vector<std::size_t>{0, 2, 3}));
}

TEST(HeuristicTest, AllStopwordsIsKTooLarge) {
  EXPECT_EQ(CodeOf([] { SelectHeuristic(Heuristic("the the the", 1)); }),
            ErrorCode::kKTooLarge);
}

TEST(HeuristicTest, ZeroKIsRejected) {
  EXPECT_EQ(CodeOf([] { SelectHeuristic(Heuristic("a bad day", 0)); }),
            ErrorCode::kInvalidArgument);
}

TEST(HeuristicTest, PunctuationOnlyWordsAreSkipped) {
  EXPECT_TRUE(IsStopword("--"));
  EXPECT_TRUE(IsStopword("The"));
  EXPECT_FALSE(IsStopword("film"));
  EXPECT_EQ(EligibleWordCount(Decompose("the film -- was ... fine")), 2u);
}

TEST(HeuristicSelectorTest, ClampsToEligibleWords) {
  HeuristicSelector selector;
  const SelectionResult r = selector.Select(Decompose("the film was fine"), 4, GetTask("sst2"));
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{1, 3}));
  EXPECT_TRUE(selector.Select(Decompose("the the"), 2, GetTask("sst2")).indices.empty());
}

TEST(ParseWordListTest, StripsListMarkersAndQuotes) {
  EXPECT_EQ(ParseWordList("1. miserable\n2) \"scenes\""),
            (std::vector<std::string>{"miserable", "scenes"}));
  EXPECT_EQ(ParseWordList("- idiot; * talented, 'never'"),
            (std::vector<std::string>{"idiot", "talented", "never"}));
  EXPECT_TRUE(ParseWordList("").empty());
}

TEST(SelectLlmTest, ScriptedAnswerMapsToIndex) {
  ScriptedClient client([](const ClientConfig&, std::span<const Message>) {
    return std::string("idiot");
  });
  const SelectionResult r = SelectLlm(
      Llm("You are a talented idiot who never fails to surprise me", 1), client, Config());
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{4}));
}

TEST(SelectLlmTest, MiserableExample) {
  ScriptedClient client([](const ClientConfig&, std::span<const Message>) {
    return std::string("miserable");
  });
  const SelectionResult r = SelectLlm(
      Llm("He appears miserable throughout as he swaggers through his scenes", 1), client,
      Config());
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{2}));
}

TEST(SelectLlmTest, UsesDeterministicDecodingAndTopic) {
  ClientConfig seen;
  std::string prompt;
  ScriptedClient client([&](const ClientConfig& c, std::span<const Message> m) {
    seen = c;
    prompt = m.back().content;
    return std::string("bad");
  });
  SelectionRequest request = Llm("a bad day", 1);
  request.topic = "sentiment";
  SelectLlm(request, client, Config());
  EXPECT_EQ(seen.temperature, kSelectionTemperature);
  EXPECT_EQ(seen.top_p, kSelectionTopP);
  EXPECT_NE(prompt.find("sentiment"), std::string::npos);
  EXPECT_NE(prompt.find("a bad day"), std::string::npos);
}

TEST(SelectLlmTest, RetriesThenSucceeds) {
  int calls = 0;
  ScriptedClient client([&](const ClientConfig&, std::span<const Message> m) {
    ++calls;
    if (calls == 1) return std::string("bad, day");
    EXPECT_EQ(m.size(), 3u);
    EXPECT_EQ(m[1].role, "assistant");
    return std::string("bad");
  });
  EXPECT_EQ(SelectLlm(Llm("a bad day", 1), client, Config()).indices,
            (std::vector<std::size_t>{1}));
  EXPECT_EQ(calls, 2);
}

TEST(SelectLlmTest, ExhaustedRetriesRaiseLastProblem) {
  int calls = 0;
  ScriptedClient wrong_count([&](const ClientConfig&, std::span<const Message>) {
    ++calls;
    return std::string("bad, day");
  });
  EXPECT_EQ(CodeOf([&] { SelectLlm(Llm("a bad day", 1), wrong_count, Config()); }),
            ErrorCode::kWrongCardinality);
  EXPECT_EQ(calls, kSelectionRetries + 1);

  ScriptedClient absent([](const ClientConfig&, std::span<const Message>) {
    return std::string("good");
  });
  EXPECT_EQ(CodeOf([&] { SelectLlm(Llm("a bad day", 1), absent, Config()); }),
            ErrorCode::kWordNotInSentence);
}

TEST(SelectLlmTest, RejectsDegenerateK) {
  ScriptedClient client([](const ClientConfig&, std::span<const Message>) {
    return std::string("x");
  });
  EXPECT_EQ(CodeOf([&] { SelectLlm(Llm("a bad day", 0), client, Config()); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { SelectLlm(Llm("a bad day", 4), client, Config()); }),
            ErrorCode::kKTooLarge);
}

TEST(SelectLlmTest, RepeatedWordsResolveToDistinctPositions) {
  ScriptedClient client([](const ClientConfig&, std::span<const Message>) {
    return std::string("bad, bad");
  });
  EXPECT_EQ(SelectLlm(Llm("bad and bad", 2), client, Config()).indices,
            (std::vector<std::size_t>{0, 2}));
}

TEST(SelectionCacheTest, PersistsAcrossInstances) {
  const fs::path path = fs::temp_directory_path() / "vertattack_select_cache.jsonl";
  fs::remove(path);
  std::atomic<int> calls = 0;
  ScriptedClient client([&](const ClientConfig&, std::span<const Message>) {
    ++calls;
    return std::string("bad");
  });
  {
    SelectionCache cache(path);
    SelectLlm(Llm("a bad day", 1), client, Config(), &cache);
    SelectLlm(Llm("a bad day", 1), client, Config(), &cache);
  }
  SelectionCache reopened(path);
  const auto hit = reopened.Get(SelectionCache::Key("a bad day", 1, "evaluator"));
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(hit->indices, (std::vector<std::size_t>{1}));
  EXPECT_EQ(calls, 1);
  EXPECT_NE(SelectionCache::Key("a bad day", 1, "evaluator"),
            SelectionCache::Key("a bad day", 1, "other"));
  fs::remove(path);
}

TEST(PrecomputedSelectorTest, ReplaysResultsAndErrors) {
  std::map<PrecomputedSelector::Key, PrecomputedSelector::Entry> entries;
  entries[{"a bad day", 1}] = {SelectionResult{{1}, std::nullopt}, {}, {}};
  entries[{"a bad day", 2}] = {std::nullopt, ErrorCode::kWordNotInSentence, "nope"};
  PrecomputedSelector selector(entries, "llm:x");
  const TaskSpec& task = GetTask("sst2");
  EXPECT_EQ(selector.Select(Decompose("a bad day"), 1, task).indices,
            (std::vector<std::size_t>{1}));
  EXPECT_EQ(CodeOf([&] { selector.Select(Decompose("a bad day"), 2, task); }),
            ErrorCode::kWordNotInSentence);
  EXPECT_EQ(selector.Id(), "llm:x");
}

}  // namespace
}  // namespace vertattack
