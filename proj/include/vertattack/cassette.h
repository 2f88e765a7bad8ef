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

// Record/replay of chat completions as JSON lines:
//   {"key": ..., "request": {...}, "response": {...}, "meta": {...}}

#ifndef VERTATTACK_CASSETTE_H_
#define VERTATTACK_CASSETTE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "vertattack/llm_client.h"

namespace vertattack {

enum class CassetteMode { kOff, kRecord, kReplay };

CassetteMode ParseCassetteMode(std::string_view name);
std::string_view CassetteModeName(CassetteMode mode);

class Cassette {
 public:
  // Loads existing entries if the file exists.
  explicit Cassette(std::filesystem::path path);

  std::optional<nlohmann::json> Find(const std::string& key) const;
  // Appends one line and flushes. First write for a key wins in memory.
  void Append(const std::string& key, const nlohmann::json& entry);
  std::size_t size() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<std::string, nlohmann::json> entries_;
};

// kReplay never touches `inner` (which may be null) and raises CassetteMiss
// for unknown requests. kRecord serves known keys from the cassette and
// records the rest.
class CassetteClient : public ChatClient {
 public:
  CassetteClient(std::shared_ptr<ChatClient> inner,
                 std::shared_ptr<Cassette> cassette, CassetteMode mode);

  Transcript Complete(const ClientConfig& config,
                      std::span<const Message> messages) override;

 private:
  std::shared_ptr<ChatClient> inner_;
  std::shared_ptr<Cassette> cassette_;
  CassetteMode mode_;
};

}  // namespace vertattack

#endif  // VERTATTACK_CASSETTE_H_
