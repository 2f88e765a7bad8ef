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

#include "vertattack/cassette.h"

#include <fstream>

#include <fmt/format.h>

#include "vertattack/error.h"

namespace vertattack {

using Json = nlohmann::json;

CassetteMode ParseCassetteMode(std::string_view name) {
  if (name == "off") return CassetteMode::kOff;
  if (name == "record") return CassetteMode::kRecord;
  if (name == "replay") return CassetteMode::kReplay;
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("unknown cassette mode '{}'", name));
}

std::string_view CassetteModeName(CassetteMode mode) {
  switch (mode) {
    case CassetteMode::kOff: return "off";
    case CassetteMode::kRecord: return "record";
    case CassetteMode::kReplay: return "replay";
  }
  return "off";
}

Cassette::Cassette(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json entry = Json::parse(line, nullptr, false);
    if (entry.is_discarded() || !entry.contains("key")) {
      throw Error(ErrorCode::kSchemaMismatch,
                  fmt::format("{}:{}: not a cassette entry", path_.string(),
                              line_no));
    }
    entries_.try_emplace(entry["key"].get<std::string>(), std::move(entry));
  }
}

std::optional<Json> Cassette::Find(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Cassette::Append(const std::string& key, const Json& entry) {
  std::lock_guard lock(mu_);
  if (path_.has_parent_path()) {
    std::filesystem::create_directories(path_.parent_path());
  }
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error(ErrorCode::kIoError, "cannot append to " + path_.string());
  out << entry.dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
  out.flush();
  entries_.try_emplace(key, entry);
}

std::size_t Cassette::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

CassetteClient::CassetteClient(std::shared_ptr<ChatClient> inner,
                               std::shared_ptr<Cassette> cassette,
                               CassetteMode mode)
    : inner_(std::move(inner)), cassette_(std::move(cassette)), mode_(mode) {
  if (mode_ != CassetteMode::kReplay && inner_ == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "record/off cassette modes need an inner client");
  }
  if (mode_ != CassetteMode::kOff && cassette_ == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "cassette file required");
  }
}

Transcript CassetteClient::Complete(const ClientConfig& config,
                                    std::span<const Message> messages) {
  if (mode_ == CassetteMode::kOff) return inner_->Complete(config, messages);

  const std::string key =
      CassetteKey(config.model_id, messages, config.temperature, config.top_p);
  if (std::optional<Json> hit = cassette_->Find(key)) {
    Transcript t;
    t.model_id = config.model_id;
    t.messages.assign(messages.begin(), messages.end());
    t.generation = hit->at("response").at("generation").get<std::string>();
    t.cassette_key = key;
    t.timestamp = hit->value("meta", Json::object()).value("timestamp", "");
    if (hit->at("response").contains("usage")) {
      const Json& u = hit->at("response")["usage"];
      t.usage = Usage{u.value("prompt_tokens", 0), u.value("completion_tokens", 0)};
    }
    return t;
  }
  if (mode_ == CassetteMode::kReplay) {
    throw Error(ErrorCode::kCassetteMiss,
                fmt::format("key {} not in {}", key, cassette_->path().string()));
  }

  Transcript t = inner_->Complete(config, messages);
  Json response{{"generation", t.generation}};
  if (t.usage) {
    response["usage"] = {{"prompt_tokens", t.usage->prompt_tokens},
                         {"completion_tokens", t.usage->completion_tokens}};
  }
  Json entry{{"key", key},
             {"request", RequestBody(config, messages)},
             {"response", std::move(response)},
             {"meta", {{"timestamp", t.timestamp}, {"latency_ms", t.latency_ms}}}};
  cassette_->Append(key, entry);
  t.cassette_key = key;
  return t;
}

}  // namespace vertattack
