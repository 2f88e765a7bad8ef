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

// Classification tasks, prompt strategies, and label parsing.

#ifndef VERTATTACK_PROMPTS_H_
#define VERTATTACK_PROMPTS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vertattack/llm_client.h"

namespace vertattack {

struct TaskSpec {
  std::string name;                    // dataset identifier, e.g. "sst2"
  std::vector<std::string> label_set;  // display labels, positive class first
  std::string instruction;
  bool pair_task = false;
  std::string topic;     // "sentiment", used in the selection prompt
  std::string goal;      // "whether the sentiment of a sentence is ..."
  std::string unit;      // "sentence" / "comment"
  std::string category;  // "sentiment" / "toxicity"
  std::size_t default_k = 4;
  // Raw dataset label -> display label ("1" -> "positive").
  std::map<std::string, std::string> raw_labels;
  // Extra surface forms accepted by ParseLabel ("not toxic" -> "non-toxic").
  std::map<std::string, std::string> aliases;

  bool HasLabel(std::string_view label) const;
  // Throws InvalidArgument when fewer than two distinct labels are declared.
  void Validate() const;
};

// sst2, cola, qnli, rotten_tomatoes, jigsaw. Throws InvalidArgument.
const TaskSpec& GetTask(std::string_view name);
std::vector<std::string> TaskNames();

enum class StrategyKind { kZeroShot, kCot, kFewShot, kExplicit };

std::string_view StrategyName(StrategyKind kind);
StrategyKind ParseStrategy(std::string_view name);

struct Shot {
  std::string input_text;  // formatted input exactly as shown in the prompt
  std::string crafted_analysis;
  std::string label;
  // Provenance for verification.
  std::string original_text;
  std::vector<std::size_t> vertical_indices;
};

inline constexpr std::size_t kDefaultShotCount = 3;

// Versioned template bundle. The built-in bundle is compiled from prompts/;
// FromDirectory loads the same layout from disk.
class TemplateBundle {
 public:
  static const TemplateBundle& Builtin();
  static TemplateBundle FromDirectory(const std::filesystem::path& dir);

  // Throws InvalidArgument for unknown names.
  const std::string& Get(std::string_view name) const;
  const std::string& version() const { return version_; }
  // sha256 prefix over every template, for provenance.
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  TemplateBundle(std::map<std::string, std::string, std::less<>> files,
                 std::string version);

  std::map<std::string, std::string, std::less<>> files_;
  std::string version_;
  std::string fingerprint_;
};

class PromptStrategy {
 public:
  // few_shot takes `shot_count` shots from the bundle's shot file; other
  // kinds take none. Throws InvalidArgument when a few-shot strategy would
  // end up without exactly `shot_count` (>= 1) shots.
  static PromptStrategy Create(StrategyKind kind, const TaskSpec& task,
                               std::size_t shot_count = kDefaultShotCount,
                               const TemplateBundle& bundle =
                                   TemplateBundle::Builtin());
  static PromptStrategy WithShots(StrategyKind kind, const TaskSpec& task,
                                  std::vector<Shot> shots,
                                  std::size_t shot_count = kDefaultShotCount,
                                  const TemplateBundle& bundle =
                                      TemplateBundle::Builtin());

  StrategyKind kind() const { return kind_; }
  const TaskSpec& task() const { return task_; }
  const std::vector<Shot>& shots() const { return shots_; }
  const TemplateBundle& bundle() const { return *bundle_; }
  // "cot@v1"
  std::string Id() const;

 private:
  PromptStrategy(StrategyKind kind, TaskSpec task, std::vector<Shot> shots,
                 const TemplateBundle* bundle)
      : kind_(kind), task_(std::move(task)), shots_(std::move(shots)),
        bundle_(bundle) {}

  StrategyKind kind_;
  TaskSpec task_;
  std::vector<Shot> shots_;
  const TemplateBundle* bundle_;
};

// Replaces {{name}} placeholders; unknown placeholders are left verbatim.
std::string RenderTemplate(std::string_view tmpl,
                           const std::map<std::string, std::string>& vars);

// Labels joined for display: "positive, negative".
std::string JoinLabels(const TaskSpec& task);

// The text block handed to the model: the classified text itself, or for
// pair tasks "Question: ...\nSentence:\n<text>" so grids stay aligned.
std::string FormatInput(const TaskSpec& task, std::string_view text,
                        std::optional<std::string_view> question = {});

// Throws InvalidArgument on empty input.
std::vector<Message> BuildPrompt(const PromptStrategy& strategy,
                                 std::string_view input_text);

// Shots for `task` from the bundle's shot file, rendered through the
// vertical layout with their analyses generated from the grids.
std::vector<Shot> LoadShots(const TaskSpec& task,
                            const TemplateBundle& bundle =
                                TemplateBundle::Builtin());

inline constexpr std::string_view kUnparsed = "<unparsed>";

struct LabelParse {
  std::optional<std::string> label;  // nullopt == Unparsed
  std::string raw;

  std::string LabelOrUnparsed() const {
    return label ? *label : std::string(kUnparsed);
  }
};

// Case-insensitive whole-word search for labels and aliases; when several
// occur the last one wins. Matches nested inside a longer match ("toxic" in
// "non-toxic") are ignored.
LabelParse ParseLabel(std::string_view generation, const TaskSpec& task);

}  // namespace vertattack

#endif  // VERTATTACK_PROMPTS_H_
