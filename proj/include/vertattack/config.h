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

// Experiment configuration files and the clients they describe.
//
// The format is a TOML subset: [section] headers, `key = value` lines, and
// '#' comments. Values are double-quoted strings, bare numbers or booleans,
// or single-line [lists] of those.

#ifndef VERTATTACK_CONFIG_H_
#define VERTATTACK_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vertattack/cassette.h"
#include "vertattack/eval.h"
#include "vertattack/llm_client.h"
#include "vertattack/prompts.h"
#include "vertattack/select.h"

namespace vertattack {

struct ConfigValue {
  bool is_list = false;
  std::vector<std::string> items;  // one entry for scalars
  std::size_t line = 0;
};

class ConfigFile {
 public:
  // Throws ConfigError with the offending line number.
  static ConfigFile Parse(std::string_view text);
  // Throws FileNotFound or ConfigError.
  static ConfigFile Load(const std::filesystem::path& path);

  bool Has(std::string_view section, std::string_view key) const;
  std::vector<std::string> Keys(std::string_view section) const;
  std::vector<std::string> Sections() const;

  std::optional<std::string> GetString(std::string_view section,
                                       std::string_view key) const;
  std::optional<std::int64_t> GetInt(std::string_view section,
                                     std::string_view key) const;
  std::optional<double> GetDouble(std::string_view section,
                                  std::string_view key) const;
  std::optional<bool> GetBool(std::string_view section,
                              std::string_view key) const;
  // A scalar reads as a one-element list.
  std::optional<std::vector<std::string>> GetList(std::string_view section,
                                                  std::string_view key) const;

 private:
  const ConfigValue* Find(std::string_view section, std::string_view key) const;
  std::map<std::string, std::map<std::string, ConfigValue>, std::less<>>
      sections_;
};

struct ModelSettings {
  std::string provider = "mock";  // "mock" (keyword classifier) or "http"
  ClientConfig client;
  std::filesystem::path lexicon;  // mock only
  std::string default_label;      // mock only
  std::filesystem::path cassette;
  CassetteMode cassette_mode = CassetteMode::kOff;
};

struct SelectorSettings {
  SelectionMode mode = SelectionMode::kHeuristic;
  std::string model;  // evaluator model; defaults to the classifier's
  std::filesystem::path cache;
};

struct ExperimentConfig {
  std::filesystem::path source;
  std::filesystem::path out_dir = "runs";
  std::uint64_t seed = 42;
  std::size_t split_n = 100;
  bool stratify = true;
  std::vector<Condition> conditions = {Condition::kOriginal, Condition::kVertical};
  std::vector<StrategyKind> strategies = {StrategyKind::kZeroShot};
  std::vector<std::size_t> ks;  // empty: each task's default k
  std::size_t k_max = 4;
  double max_failure_fraction = 0.2;
  std::vector<std::pair<std::string, std::filesystem::path>> datasets;
  std::filesystem::path prompts_dir;  // empty: built-in templates
  ModelSettings model;
  SelectorSettings selector;
};

// Sections: [run], [model], [selector], [datasets] (dataset id = path).
// Relative paths resolve against the file's directory. Unknown sections or
// keys raise ConfigError.
ExperimentConfig ParseExperimentConfig(const ConfigFile& file,
                                       const std::filesystem::path& base_dir);
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);

// The classifier client: keyword mock or HTTP, wrapped in a cassette when
// one is configured and capped at client.parallelism in-flight calls.
std::shared_ptr<ChatClient> BuildClient(const ModelSettings& settings);

}  // namespace vertattack

#endif  // VERTATTACK_CONFIG_H_
