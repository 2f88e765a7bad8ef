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

#include "vertattack/prompts.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "embedded_prompts.h"
#include "json.hpp"
#include "vertattack/error.h"
#include "vertattack/text_util.h"
#include "vertattack/transform.h"

namespace vertattack {
namespace {

using Json = nlohmann::json;

std::vector<TaskSpec> BuildTasks() {
  std::vector<TaskSpec> tasks;

  TaskSpec sst2;
  sst2.name = "sst2";
  sst2.label_set = {"positive", "negative"};
  sst2.instruction =
      "Classify the sentiment of the following movie review sentence as "
      "positive or negative.";
  sst2.topic = "sentiment";
  sst2.goal = "whether the sentiment of a sentence is positive or negative";
  sst2.unit = "sentence";
  sst2.category = "sentiment";
  sst2.default_k = 4;
  sst2.raw_labels = {{"0", "negative"}, {"1", "positive"}};
  tasks.push_back(sst2);

  TaskSpec rt = sst2;
  rt.name = "rotten_tomatoes";
  rt.instruction =
      "Classify the sentiment of the following movie review as positive or "
      "negative.";
  tasks.push_back(rt);

  TaskSpec cola;
  cola.name = "cola";
  cola.label_set = {"acceptable", "unacceptable"};
  cola.instruction =
      "Decide whether the following English sentence is grammatically "
      "acceptable or unacceptable.";
  cola.topic = "grammatical acceptability";
  cola.goal = "whether a sentence is grammatically acceptable or unacceptable";
  cola.unit = "sentence";
  cola.category = "acceptability";
  cola.default_k = 2;
  cola.raw_labels = {{"0", "unacceptable"}, {"1", "acceptable"}};
  cola.aliases = {{"not acceptable", "unacceptable"}};
  tasks.push_back(cola);

  TaskSpec qnli;
  qnli.name = "qnli";
  qnli.label_set = {"entailment", "not_entailment"};
  qnli.instruction =
      "Decide whether the sentence contains the answer to the question "
      "(entailment) or not (not_entailment).";
  qnli.pair_task = true;
  qnli.topic = "question answering";
  qnli.goal =
      "whether a sentence answers a question (entailment) or not "
      "(not_entailment)";
  qnli.unit = "sentence";
  qnli.category = "entailment";
  qnli.default_k = 4;
  qnli.raw_labels = {{"0", "entailment"}, {"1", "not_entailment"}};
  qnli.aliases = {{"not entailment", "not_entailment"},
                  {"not-entailment", "not_entailment"},
                  {"non-entailment", "not_entailment"}};
  tasks.push_back(qnli);

  TaskSpec jigsaw;
  jigsaw.name = "jigsaw";
  jigsaw.label_set = {"toxic", "non-toxic"};
  jigsaw.instruction =
      "Decide whether the following online comment is toxic or non-toxic.";
  jigsaw.topic = "toxicity";
  jigsaw.goal = "whether a comment is toxic or non-toxic";
  jigsaw.unit = "comment";
  jigsaw.category = "toxicity";
  jigsaw.default_k = 4;
  jigsaw.raw_labels = {{"0", "non-toxic"}, {"1", "toxic"}};
  jigsaw.aliases = {{"non toxic", "non-toxic"},
                    {"nontoxic", "non-toxic"},
                    {"not toxic", "non-toxic"}};
  tasks.push_back(jigsaw);

  return tasks;
}

const std::vector<TaskSpec>& Tasks() {
  static const auto* tasks = new std::vector<TaskSpec>(BuildTasks());
  return *tasks;
}

bool IsLabelWordByte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) != 0 || c == '_' || c == '-' || u >= 0x80;
}

// "zero_shot.v1.txt" -> {"zero_shot", "v1"}.
std::pair<std::string, std::string> SplitTemplateName(const std::string& file) {
  const std::size_t last = file.rfind('.');
  const std::size_t mid = last == std::string::npos ? std::string::npos
                                                    : file.rfind('.', last - 1);
  if (mid == std::string::npos) return {file, ""};
  return {file.substr(0, mid), file.substr(mid + 1, last - mid - 1)};
}

std::string StripFinalNewline(std::string s) {
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

}  // namespace

bool TaskSpec::HasLabel(std::string_view label) const {
  return std::find(label_set.begin(), label_set.end(), label) != label_set.end();
}

void TaskSpec::Validate() const {
  std::vector<std::string> sorted = label_set;
  std::sort(sorted.begin(), sorted.end());
  if (std::unique(sorted.begin(), sorted.end()) != sorted.end() ||
      sorted.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "task '" + name + "' needs at least two distinct labels");
  }
}

const TaskSpec& GetTask(std::string_view name) {
  for (const TaskSpec& task : Tasks()) {
    if (task.name == name) return task;
  }
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("unknown dataset '{}' (known: {})", name,
                          fmt::join(TaskNames(), ", ")));
}

std::vector<std::string> TaskNames() {
  std::vector<std::string> out;
  for (const TaskSpec& task : Tasks()) out.push_back(task.name);
  return out;
}

std::string_view StrategyName(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kZeroShot: return "zero_shot";
    case StrategyKind::kCot: return "cot";
    case StrategyKind::kFewShot: return "few_shot";
    case StrategyKind::kExplicit: return "explicit";
  }
  return "zero_shot";
}

StrategyKind ParseStrategy(std::string_view name) {
  for (StrategyKind kind : {StrategyKind::kZeroShot, StrategyKind::kCot,
                            StrategyKind::kFewShot, StrategyKind::kExplicit}) {
    if (StrategyName(kind) == name) return kind;
  }
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("unknown strategy '{}'", name));
}

// ---------------------------------------------------------------------------

TemplateBundle::TemplateBundle(
    std::map<std::string, std::string, std::less<>> files, std::string version)
    : files_(std::move(files)), version_(std::move(version)) {
  std::string all;
  for (const auto& [name, content] : files_) {
    all += name;
    all.push_back('\0');
    all += content;
    all.push_back('\0');
  }
  fingerprint_ = Sha256Hex(all).substr(0, 12);
}

const TemplateBundle& TemplateBundle::Builtin() {
  static const auto* bundle = [] {
    std::map<std::string, std::string, std::less<>> files;
    std::string version;
    for (const auto& [file, content] : internal::EmbeddedPromptFiles()) {
      auto [name, v] = SplitTemplateName(file);
      if (v.empty()) continue;
      version = v;
      files[name] = content;
    }
    return new TemplateBundle(std::move(files), version);
  }();
  return *bundle;
}

TemplateBundle TemplateBundle::FromDirectory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kFileNotFound, dir.string());
  }
  std::map<std::string, std::string, std::less<>> files;
  std::string version;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto [name, v] = SplitTemplateName(entry.path().filename().string());
    if (v.empty()) continue;
    if (!version.empty() && v != version) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("mixed template versions {} and {} in {}",
                              version, v, dir.string()));
    }
    version = v;
    std::ifstream in(entry.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[name] = ss.str();
  }
  return TemplateBundle(std::move(files), version);
}

const std::string& TemplateBundle::Get(std::string_view name) const {
  auto it = files_.find(name);
  if (it == files_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("template '{}' missing from bundle {}", name,
                            version_));
  }
  return it->second;
}

// ---------------------------------------------------------------------------

std::string RenderTemplate(std::string_view tmpl,
                           const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const std::size_t open = tmpl.find("{{", i);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(i));
      break;
    }
    const std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) {
      out.append(tmpl.substr(i));
      break;
    }
    out.append(tmpl.substr(i, open - i));
    const std::string key(tmpl.substr(open + 2, close - open - 2));
    auto it = vars.find(key);
    if (it != vars.end()) {
      out += it->second;
    } else {
      out.append(tmpl.substr(open, close + 2 - open));
    }
    i = close + 2;
  }
  return out;
}

std::string JoinLabels(const TaskSpec& task) {
  return fmt::format("{}", fmt::join(task.label_set, ", "));
}

std::string FormatInput(const TaskSpec& task, std::string_view text,
                        std::optional<std::string_view> question) {
  if (!task.pair_task) return std::string(text);
  return fmt::format("Question: {}\nSentence:\n{}", question.value_or(""), text);
}

std::vector<Shot> LoadShots(const TaskSpec& task, const TemplateBundle& bundle) {
  const Json doc = Json::parse(bundle.Get("shots"));
  const Json& list = doc.at("tasks").at(task.name);
  std::vector<Shot> shots;
  for (const Json& item : list) {
    Shot shot;
    shot.original_text = item.at("text").get<std::string>();
    shot.vertical_indices = item.at("vertical").get<std::vector<std::size_t>>();
    shot.label = item.at("label").get<std::string>();
    if (!task.HasLabel(shot.label)) {
      throw Error(ErrorCode::kBadLabel,
                  fmt::format("shot label '{}' not in task {}", shot.label,
                              task.name));
    }
    const Sentence sentence = Decompose(shot.original_text);
    TransformSpec spec;
    spec.vertical_indices = shot.vertical_indices;
    const Rendering rendering = Verticalize(sentence, spec);
    std::optional<std::string> question;
    if (item.contains("question")) question = item["question"].get<std::string>();
    shot.input_text = FormatInput(task, rendering.rendered, question);

    std::vector<std::size_t> order = shot.vertical_indices;
    std::sort(order.begin(), order.end());
    std::string analysis =
        "Some words in this text are written vertically, one letter per line. "
        "Reading each column from top to bottom:\n";
    int n = 1;
    for (std::size_t index : order) {
      const std::string& word = sentence.words[index];
      std::vector<std::string> letters;
      for (char c : word) letters.emplace_back(1, c);
      analysis += fmt::format("{}. '{}' ({})\n", n++, word,
                              fmt::join(letters, ", "));
    }
    analysis += fmt::format("Reconstructed text: '{}'.\n", sentence.Joined());
    analysis += item.at("reasoning").get<std::string>();
    analysis += fmt::format("\nTherefore, the answer is {}.", shot.label);
    shot.crafted_analysis = std::move(analysis);
    shots.push_back(std::move(shot));
  }
  return shots;
}

PromptStrategy PromptStrategy::Create(StrategyKind kind, const TaskSpec& task,
                                      std::size_t shot_count,
                                      const TemplateBundle& bundle) {
  std::vector<Shot> shots;
  if (kind == StrategyKind::kFewShot) {
    shots = LoadShots(task, bundle);
    if (shots.size() > shot_count) shots.resize(shot_count);
  }
  return WithShots(kind, task, std::move(shots), shot_count, bundle);
}

PromptStrategy PromptStrategy::WithShots(StrategyKind kind, const TaskSpec& task,
                                         std::vector<Shot> shots,
                                         std::size_t shot_count,
                                         const TemplateBundle& bundle) {
  task.Validate();
  if (kind == StrategyKind::kFewShot) {
    if (shot_count == 0 || shots.size() != shot_count) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("few-shot strategy needs exactly {} shots, got {}",
                              shot_count, shots.size()));
    }
  } else if (!shots.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "only the few-shot strategy takes shots");
  }
  return PromptStrategy(kind, task, std::move(shots), &bundle);
}

std::string PromptStrategy::Id() const {
  return fmt::format("{}@{}", StrategyName(kind_), bundle_->version());
}

std::vector<Message> BuildPrompt(const PromptStrategy& strategy,
                                 std::string_view input_text) {
  if (TrimWhitespace(input_text).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "input text is empty");
  }
  const TaskSpec& task = strategy.task();
  std::map<std::string, std::string> vars{
      {"instruction", task.instruction},
      {"input", std::string(input_text)},
      {"labels", JoinLabels(task)},
      {"goal", task.goal},
      {"unit", task.unit},
      {"category", task.category},
  };
  if (strategy.kind() == StrategyKind::kFewShot) {
    const std::string shot_template =
        StripFinalNewline(strategy.bundle().Get("shot"));
    std::vector<std::string> rendered;
    for (std::size_t i = 0; i < strategy.shots().size(); ++i) {
      const Shot& shot = strategy.shots()[i];
      rendered.push_back(RenderTemplate(
          shot_template, {{"number", std::to_string(i + 1)},
                          {"input", shot.input_text},
                          {"analysis", shot.crafted_analysis},
                          {"label", shot.label}}));
    }
    vars["shots"] = fmt::format("{}", fmt::join(rendered, "\n\n"));
  }
  const std::string body = RenderTemplate(
      StripFinalNewline(
          strategy.bundle().Get(StrategyName(strategy.kind()))),
      vars);
  return {Message{"user", body}};
}

LabelParse ParseLabel(std::string_view generation, const TaskSpec& task) {
  struct Match {
    std::size_t begin;
    std::size_t end;
    const std::string* label;
  };
  std::vector<std::pair<std::string, const std::string*>> forms;
  for (const std::string& label : task.label_set) {
    forms.emplace_back(AsciiLower(label), &label);
  }
  for (const auto& [alias, label] : task.aliases) {
    for (const std::string& l : task.label_set) {
      if (l == label) forms.emplace_back(AsciiLower(alias), &l);
    }
  }

  const std::string haystack = AsciiLower(generation);
  std::vector<Match> matches;
  for (const auto& [form, label] : forms) {
    for (std::size_t pos = haystack.find(form); pos != std::string::npos;
         pos = haystack.find(form, pos + 1)) {
      const std::size_t end = pos + form.size();
      const bool left_ok = pos == 0 || !IsLabelWordByte(haystack[pos - 1]);
      const bool right_ok =
          end == haystack.size() || !IsLabelWordByte(haystack[end]);
      if (left_ok && right_ok) matches.push_back({pos, end, label});
    }
  }
  // Drop matches nested inside a longer one.
  std::vector<Match> kept;
  for (const Match& m : matches) {
    const bool nested = std::any_of(
        matches.begin(), matches.end(), [&](const Match& other) {
          return other.begin <= m.begin && m.end <= other.end &&
                 (other.end - other.begin) > (m.end - m.begin);
        });
    if (!nested) kept.push_back(m);
  }

  LabelParse out;
  out.raw = std::string(generation);
  const Match* last = nullptr;
  for (const Match& m : kept) {
    if (last == nullptr || m.begin > last->begin) last = &m;
  }
  if (last != nullptr) out.label = *last->label;
  return out;
}

}  // namespace vertattack
