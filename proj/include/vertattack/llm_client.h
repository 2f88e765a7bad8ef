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

// Chat-completion clients: the HTTP client for the de-facto chat API shape,
// offline mock clients, and decorators (parallelism limit, cassettes).

#ifndef VERTATTACK_LLM_CLIENT_H_
#define VERTATTACK_LLM_CLIENT_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace vertattack {

struct Message {
  std::string role;
  std::string content;

  friend bool operator==(const Message&, const Message&) = default;
};

// Word selection decodes greedily with full nucleus; classification keeps
// temperature 0 but narrows top_p.
inline constexpr double kSelectionTemperature = 0.0;
inline constexpr double kSelectionTopP = 1.0;
inline constexpr double kClassificationTemperature = 0.0;
inline constexpr double kClassificationTopP = 0.95;

struct ClientConfig {
  std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
  std::string api_key_env = "OPENAI_API_KEY";
  std::string model_id;
  double temperature = kClassificationTemperature;
  double top_p = kClassificationTopP;
  int max_tokens = 512;
  double timeout_seconds = 60.0;
  int max_retries = 4;
  int parallelism = 4;

  // Throws InvalidArgument when a field is out of range.
  void Validate() const;

  ClientConfig ForSelection() const;
  ClientConfig ForClassification() const;
};

struct Usage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

struct Transcript {
  std::string model_id;
  std::vector<Message> messages;
  std::string generation;
  double latency_ms = 0.0;
  std::optional<Usage> usage;
  std::string timestamp;  // ISO-8601 UTC
  std::string cassette_key;
};

nlohmann::json ToJson(const Message& message);
nlohmann::json ToJson(std::span<const Message> messages);
std::vector<Message> MessagesFromJson(const nlohmann::json& json);
nlohmann::json ToJson(const Transcript& transcript);

// sha256 over the canonical (key-sorted, compact) JSON of
// {model, messages, temperature, top_p}.
std::string CassetteKey(std::string_view model_id,
                        std::span<const Message> messages, double temperature,
                        double top_p);

// The chat-completions POST body.
nlohmann::json RequestBody(const ClientConfig& config,
                           std::span<const Message> messages);

std::string UtcTimestamp();

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual Transcript Complete(const ClientConfig& config,
                              std::span<const Message> messages) = 0;
};

// ---------------------------------------------------------------------------
// HTTP

struct HttpResponse {
  int status = 0;
  std::string body;
  std::map<std::string, std::string> headers;  // lower-cased names
};

// Throws Timeout for timeouts and ClientError for other transport failures.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse Post(const std::string& url,
                            const std::map<std::string, std::string>& headers,
                            const std::string& body,
                            std::chrono::milliseconds timeout) = 0;
};

// cpp-httplib backed transport. Refuses to connect (NetworkDisabled) when
// VERTATTACK_OFFLINE is set to a non-empty value other than "0".
class HttplibTransport : public HttpTransport {
 public:
  HttpResponse Post(const std::string& url,
                    const std::map<std::string, std::string>& headers,
                    const std::string& body,
                    std::chrono::milliseconds timeout) override;
};

bool NetworkDisabledByEnvironment();

// Number of connection attempts made by HttplibTransport in this process.
std::uint64_t NetworkAttemptCount();

struct RetryPolicy {
  std::chrono::milliseconds base_delay{1000};
  double factor = 2.0;
  double jitter = 0.25;  // +/- fraction of the delay
};

class HttpChatClient : public ChatClient {
 public:
  using SleepFn = std::function<void(std::chrono::milliseconds)>;

  explicit HttpChatClient(std::shared_ptr<HttpTransport> transport,
                          RetryPolicy policy = {}, SleepFn sleep = {},
                          std::uint64_t jitter_seed = 0x5eed);

  // Retries 429, 5xx, and timeouts with exponential backoff, honouring
  // Retry-After. 401/403 fail immediately with AuthError.
  Transcript Complete(const ClientConfig& config,
                      std::span<const Message> messages) override;

 private:
  std::chrono::milliseconds Backoff(int attempt);

  std::shared_ptr<HttpTransport> transport_;
  RetryPolicy policy_;
  SleepFn sleep_;
  std::uint64_t jitter_state_;
};

// Parses a chat-completions response body. Throws MalformedResponse.
std::pair<std::string, std::optional<Usage>> ParseCompletionBody(
    std::string_view body);

// ---------------------------------------------------------------------------
// Offline clients

// Answers with fn(config, messages).
class ScriptedClient : public ChatClient {
 public:
  using Fn = std::function<std::string(const ClientConfig&,
                                       std::span<const Message>)>;
  explicit ScriptedClient(Fn fn) : fn_(std::move(fn)) {}
  Transcript Complete(const ClientConfig& config,
                      std::span<const Message> messages) override;

 private:
  Fn fn_;
};

// Answers by cassette key; unknown keys raise CassetteMiss.
class KeyedMockClient : public ChatClient {
 public:
  explicit KeyedMockClient(std::map<std::string, std::string> by_key)
      : by_key_(std::move(by_key)) {}
  Transcript Complete(const ClientConfig& config,
                      std::span<const Message> messages) override;

 private:
  std::map<std::string, std::string> by_key_;
};

// Surface-keyword reader: the generation is the label of the first lexicon
// word that appears as a whitespace-delimited token (case-insensitive,
// surrounding punctuation ignored) in the final user message, or
// `default_label`. Throws InvalidArgument on an empty lexicon.
std::unique_ptr<ChatClient> MakeKeywordClassifier(
    std::map<std::string, std::string> lexicon, std::string default_label);

// Reads a lexicon file: one "word<TAB>label" per line, '#' comments.
std::map<std::string, std::string> LoadLexicon(const std::string& path);

// Caps concurrent Complete() calls on the wrapped client.
class ParallelismLimiter : public ChatClient {
 public:
  ParallelismLimiter(std::shared_ptr<ChatClient> inner, int limit);
  Transcript Complete(const ClientConfig& config,
                      std::span<const Message> messages) override;

 private:
  std::shared_ptr<ChatClient> inner_;
  std::counting_semaphore<1024> slots_;
};

}  // namespace vertattack

#endif  // VERTATTACK_LLM_CLIENT_H_
