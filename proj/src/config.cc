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

#include "vertattack/config.h"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "vertattack/error.h"
#include "vertattack/text_util.h"

namespace vertattack {
namespace {

[[noreturn]] void Fail(std::size_t line, std::string_view message) {
  throw Error(ErrorCode::kConfigError, fmt::format("line {}: {}", line, message));
}

// Reads one scalar starting at `pos`; leaves `pos` after it.
std::string ReadScalar(std::string_view text, std::size_t& pos, std::size_t line,
                       bool in_list) {
  if (pos < text.size() && text[pos] == '"') {
    std::string out;
    for (++pos; pos < text.size(); ++pos) {
      const char c = text[pos];
      if (c == '"') {
        ++pos;
        return out;
      }
      if (c == '\\' && pos + 1 < text.size()) {
        const char e = text[++pos];
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: Fail(line, fmt::format("unknown escape '\\{}'", e));
        }
      } else {
        out.push_back(c);
      }
    }
    Fail(line, "unterminated string");
  }
  const std::size_t start = pos;
  while (pos < text.size() && text[pos] != '#' &&
         !(in_list && (text[pos] == ',' || text[pos] == ']'))) {
    ++pos;
  }
  std::string_view bare = TrimWhitespace(text.substr(start, pos - start));
  if (bare.empty()) Fail(line, "missing value");
  return std::string(bare);
}

void ExpectEnd(std::string_view text, std::size_t pos, std::size_t line) {
  std::string_view rest = TrimWhitespace(text.substr(pos));
  if (!rest.empty() && rest.front() != '#') {
    Fail(line, fmt::format("unexpected '{}'", rest));
  }
}

void SkipSpaces(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
}

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& value) {
  std::filesystem::path p(value);
  return p.is_relative() && !base.empty() ? base / p : p;
}

void CheckKeys(const ConfigFile& file, std::string_view section,
               std::initializer_list<std::string_view> allowed) {
  const std::set<std::string_view> known(allowed);
  for (const std::string& key : file.Keys(section)) {
    if (!known.contains(key)) {
      throw Error(ErrorCode::kConfigError,
                  fmt::format("unknown key '{}' in [{}]", key, section));
    }
  }
}

template <typename T>
T Require(std::optional<T> value, std::string_view section, std::string_view key) {
  if (!value) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("missing [{}] {}", section, key));
  }
  return *value;
}

}  // namespace

ConfigFile ConfigFile::Parse(std::string_view text) {
  ConfigFile file;
  std::string section;
  file.sections_[section];
  std::size_t line_no = 0;
  for (const std::string& raw : Split(text, '\n')) {
    ++line_no;
    std::string_view line = TrimWhitespace(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      const std::size_t close = line.find(']');
      if (close == std::string_view::npos) Fail(line_no, "unterminated section");
      section = std::string(TrimWhitespace(line.substr(1, close - 1)));
      if (section.empty()) Fail(line_no, "empty section name");
      ExpectEnd(line, close + 1, line_no);
      file.sections_[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) Fail(line_no, "expected key = value");
    std::string key(TrimWhitespace(line.substr(0, eq)));
    if (key.empty()) Fail(line_no, "empty key");
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"') {
      key = key.substr(1, key.size() - 2);
    }
    ConfigValue value;
    value.line = line_no;
    std::size_t pos = eq + 1;
    SkipSpaces(line, pos);
    if (pos < line.size() && line[pos] == '[') {
      value.is_list = true;
      ++pos;
      SkipSpaces(line, pos);
      if (pos < line.size() && line[pos] == ']') {
        ++pos;
      } else {
        while (true) {
          SkipSpaces(line, pos);
          value.items.push_back(ReadScalar(line, pos, line_no, true));
          SkipSpaces(line, pos);
          if (pos < line.size() && line[pos] == ',') {
            ++pos;
            continue;
          }
          if (pos < line.size() && line[pos] == ']') {
            ++pos;
            break;
          }
          Fail(line_no, "expected ',' or ']' in list");
        }
      }
    } else {
      value.items.push_back(ReadScalar(line, pos, line_no, false));
    }
    ExpectEnd(line, pos, line_no);
    if (!file.sections_[section].emplace(key, std::move(value)).second) {
      Fail(line_no, fmt::format("duplicate key '{}'", key));
    }
  }
  return file;
}

ConfigFile ConfigFile::Load(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(ErrorCode::kFileNotFound, path.string());
  }
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return Parse(buffer.str());
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.detail()));
  }
}

const ConfigValue* ConfigFile::Find(std::string_view section,
                                    std::string_view key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(std::string(key));
  return k == s->second.end() ? nullptr : &k->second;
}

bool ConfigFile::Has(std::string_view section, std::string_view key) const {
  return Find(section, key) != nullptr;
}

std::vector<std::string> ConfigFile::Keys(std::string_view section) const {
  std::vector<std::string> out;
  auto s = sections_.find(section);
  if (s != sections_.end()) {
    for (const auto& [key, value] : s->second) out.push_back(key);
  }
  return out;
}

std::vector<std::string> ConfigFile::Sections() const {
  std::vector<std::string> out;
  for (const auto& [name, keys] : sections_) out.push_back(name);
  return out;
}

std::optional<std::string> ConfigFile::GetString(std::string_view section,
                                                 std::string_view key) const {
  const ConfigValue* v = Find(section, key);
  if (v == nullptr) return std::nullopt;
  if (v->is_list) Fail(v->line, fmt::format("{} must not be a list", key));
  return v->items.front();
}

std::optional<std::int64_t> ConfigFile::GetInt(std::string_view section,
                                               std::string_view key) const {
  const ConfigValue* v = Find(section, key);
  if (v == nullptr) return std::nullopt;
  const std::optional<std::string> s = GetString(section, key);
  std::int64_t out = 0;
  auto [end, ec] = std::from_chars(s->data(), s->data() + s->size(), out);
  if (ec != std::errc() || end != s->data() + s->size()) {
    Fail(v->line, fmt::format("{} must be an integer", key));
  }
  return out;
}

std::optional<double> ConfigFile::GetDouble(std::string_view section,
                                            std::string_view key) const {
  const ConfigValue* v = Find(section, key);
  if (v == nullptr) return std::nullopt;
  const std::optional<std::string> s = GetString(section, key);
  try {
    std::size_t used = 0;
    const double out = std::stod(*s, &used);
    if (used == s->size()) return out;
  } catch (const std::exception&) {
  }
  Fail(v->line, fmt::format("{} must be a number", key));
}

std::optional<bool> ConfigFile::GetBool(std::string_view section,
                                        std::string_view key) const {
  const ConfigValue* v = Find(section, key);
  if (v == nullptr) return std::nullopt;
  const std::optional<std::string> s = GetString(section, key);
  if (*s == "true") return true;
  if (*s == "false") return false;
  Fail(v->line, fmt::format("{} must be true or false", key));
}

std::optional<std::vector<std::string>> ConfigFile::GetList(
    std::string_view section, std::string_view key) const {
  const ConfigValue* v = Find(section, key);
  if (v == nullptr) return std::nullopt;
  return v->items;
}

// ---------------------------------------------------------------------------

ExperimentConfig ParseExperimentConfig(const ConfigFile& file,
                                       const std::filesystem::path& base_dir) {
  for (const std::string& section : file.Sections()) {
    static const std::set<std::string> kKnown = {"", "run", "model", "selector",
                                                 "datasets"};
    if (!kKnown.contains(section)) {
      throw Error(ErrorCode::kConfigError,
                  fmt::format("unknown section [{}]", section));
    }
  }
  if (!file.Keys("").empty()) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("key '{}' outside any section", file.Keys("").front()));
  }
  CheckKeys(file, "run",
            {"out_dir", "seed", "split_n", "stratify", "conditions", "strategies",
             "k", "k_max", "max_failure_fraction", "prompts_dir"});
  CheckKeys(file, "model",
            {"provider", "id", "endpoint", "api_key_env", "temperature", "top_p",
             "max_tokens", "timeout", "max_retries", "parallelism", "lexicon",
             "default_label", "cassette", "cassette_mode"});
  CheckKeys(file, "selector", {"mode", "model", "cache"});

  ExperimentConfig c;
  try {
    if (auto v = file.GetString("run", "out_dir")) c.out_dir = Resolve(base_dir, *v);
    if (auto v = file.GetInt("run", "seed")) c.seed = static_cast<std::uint64_t>(*v);
    if (auto v = file.GetInt("run", "split_n")) {
      if (*v < 0) throw Error(ErrorCode::kConfigError, "split_n must be >= 0");
      c.split_n = static_cast<std::size_t>(*v);
    }
    if (auto v = file.GetBool("run", "stratify")) c.stratify = *v;
    if (auto v = file.GetList("run", "conditions")) {
      c.conditions.clear();
      for (const auto& item : *v) c.conditions.push_back(ParseCondition(item));
    }
    if (auto v = file.GetList("run", "strategies")) {
      c.strategies.clear();
      for (const auto& item : *v) c.strategies.push_back(ParseStrategy(item));
    }
    if (auto v = file.GetList("run", "k")) {
      for (const auto& item : *v) {
        std::size_t k = 0;
        auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), k);
        if (ec != std::errc() || end != item.data() + item.size() || k == 0) {
          throw Error(ErrorCode::kConfigError, "k values must be positive integers");
        }
        c.ks.push_back(k);
      }
    }
    if (auto v = file.GetInt("run", "k_max")) {
      if (*v < 1) throw Error(ErrorCode::kConfigError, "k_max must be >= 1");
      c.k_max = static_cast<std::size_t>(*v);
    }
    if (auto v = file.GetDouble("run", "max_failure_fraction")) {
      c.max_failure_fraction = *v;
    }
    if (auto v = file.GetString("run", "prompts_dir")) {
      c.prompts_dir = Resolve(base_dir, *v);
    }

    ModelSettings& m = c.model;
    if (auto v = file.GetString("model", "provider")) m.provider = *v;
    if (m.provider != "mock" && m.provider != "http") {
      throw Error(ErrorCode::kConfigError,
                  fmt::format("unknown provider '{}'", m.provider));
    }
    m.client.model_id = Require(file.GetString("model", "id"), "model", "id");
    if (auto v = file.GetString("model", "endpoint")) m.client.endpoint_url = *v;
    if (auto v = file.GetString("model", "api_key_env")) m.client.api_key_env = *v;
    if (auto v = file.GetDouble("model", "temperature")) m.client.temperature = *v;
    if (auto v = file.GetDouble("model", "top_p")) m.client.top_p = *v;
    if (auto v = file.GetInt("model", "max_tokens")) m.client.max_tokens = static_cast<int>(*v);
    if (auto v = file.GetDouble("model", "timeout")) m.client.timeout_seconds = *v;
    if (auto v = file.GetInt("model", "max_retries")) m.client.max_retries = static_cast<int>(*v);
    if (auto v = file.GetInt("model", "parallelism")) m.client.parallelism = static_cast<int>(*v);
    if (auto v = file.GetString("model", "lexicon")) m.lexicon = Resolve(base_dir, *v);
    if (auto v = file.GetString("model", "default_label")) m.default_label = *v;
    if (auto v = file.GetString("model", "cassette")) m.cassette = Resolve(base_dir, *v);
    if (auto v = file.GetString("model", "cassette_mode")) {
      m.cassette_mode = ParseCassetteMode(*v);
    }
    if (m.provider == "mock" && m.lexicon.empty()) {
      throw Error(ErrorCode::kConfigError, "the mock provider needs [model] lexicon");
    }
    if (m.cassette_mode != CassetteMode::kOff && m.cassette.empty()) {
      throw Error(ErrorCode::kConfigError, "cassette_mode set without cassette");
    }
    m.client.Validate();

    SelectorSettings& s = c.selector;
    if (auto v = file.GetString("selector", "mode")) s.mode = ParseSelectionMode(*v);
    if (auto v = file.GetString("selector", "model")) s.model = *v;
    if (auto v = file.GetString("selector", "cache")) s.cache = Resolve(base_dir, *v);

    for (const std::string& dataset : file.Keys("datasets")) {
      GetTask(dataset);
      c.datasets.emplace_back(dataset,
                              Resolve(base_dir, *file.GetString("datasets", dataset)));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    throw Error(ErrorCode::kConfigError, e.detail());
  }
  if (c.datasets.empty()) {
    throw Error(ErrorCode::kConfigError, "no [datasets] entries");
  }
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  const ConfigFile file = ConfigFile::Load(path);
  try {
    ExperimentConfig c = ParseExperimentConfig(file, path.parent_path());
    c.source = path;
    return c;
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.detail()));
  }
}

std::shared_ptr<ChatClient> BuildClient(const ModelSettings& settings) {
  std::shared_ptr<ChatClient> client;
  if (settings.cassette_mode == CassetteMode::kReplay) {
    client = nullptr;  // replay never reaches the inner client
  } else if (settings.provider == "mock") {
    std::map<std::string, std::string> lexicon =
        LoadLexicon(settings.lexicon.string());
    client = MakeKeywordClassifier(std::move(lexicon), settings.default_label);
  } else {
    client = std::make_shared<HttpChatClient>(std::make_shared<HttplibTransport>());
  }
  if (settings.cassette_mode != CassetteMode::kOff) {
    client = std::make_shared<CassetteClient>(
        client, std::make_shared<Cassette>(settings.cassette),
        settings.cassette_mode);
  }
  return std::make_shared<ParallelismLimiter>(client, settings.client.parallelism);
}

}  // namespace vertattack
