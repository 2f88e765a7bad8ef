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

#include "vertattack/llm_client.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <thread>

#include <fmt/format.h>

#include "httplib.h"
#include "vertattack/error.h"
#include "vertattack/text_util.h"

namespace vertattack {
namespace {

using Json = nlohmann::json;

std::atomic<std::uint64_t> g_network_attempts{0};

}  // namespace

void ClientConfig::Validate() const {
  if (temperature < 0.0 || temperature > 2.0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("temperature {} outside [0, 2]", temperature));
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("top_p {} outside (0, 1]", top_p));
  }
  if (parallelism < 1) {
    throw Error(ErrorCode::kInvalidArgument, "parallelism must be >= 1");
  }
  if (max_tokens < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_tokens must be >= 1");
  }
  if (max_retries < 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_retries must be >= 0");
  }
  if (timeout_seconds <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "timeout must be positive");
  }
}

ClientConfig ClientConfig::ForSelection() const {
  ClientConfig out = *this;
  out.temperature = kSelectionTemperature;
  out.top_p = kSelectionTopP;
  return out;
}

ClientConfig ClientConfig::ForClassification() const {
  ClientConfig out = *this;
  out.temperature = kClassificationTemperature;
  out.top_p = kClassificationTopP;
  return out;
}

Json ToJson(const Message& message) {
  return Json{{"role", message.role}, {"content", message.content}};
}

Json ToJson(std::span<const Message> messages) {
  Json out = Json::array();
  for (const Message& m : messages) out.push_back(ToJson(m));
  return out;
}

std::vector<Message> MessagesFromJson(const Json& json) {
  std::vector<Message> out;
  for (const Json& m : json) {
    out.push_back({m.at("role").get<std::string>(),
                   m.at("content").get<std::string>()});
  }
  return out;
}

Json ToJson(const Transcript& t) {
  Json out{{"model", t.model_id},
           {"messages", ToJson(t.messages)},
           {"generation", t.generation},
           {"latency_ms", t.latency_ms},
           {"timestamp", t.timestamp},
           {"cassette_key", t.cassette_key}};
  if (t.usage) {
    out["usage"] = {{"prompt_tokens", t.usage->prompt_tokens},
                    {"completion_tokens", t.usage->completion_tokens}};
  }
  return out;
}

std::string CassetteKey(std::string_view model_id,
                        std::span<const Message> messages, double temperature,
                        double top_p) {
  Json canonical{{"model", std::string(model_id)},
                 {"messages", ToJson(messages)},
                 {"temperature", temperature},
                 {"top_p", top_p}};
  return Sha256Hex(canonical.dump(-1, ' ', false,
                                  Json::error_handler_t::replace));
}

Json RequestBody(const ClientConfig& config, std::span<const Message> messages) {
  return Json{{"model", config.model_id},
              {"messages", ToJson(messages)},
              {"temperature", config.temperature},
              {"top_p", config.top_p},
              {"max_tokens", config.max_tokens}};
}

std::string UtcTimestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---------------------------------------------------------------------------

bool NetworkDisabledByEnvironment() {
  const char* v = std::getenv("VERTATTACK_OFFLINE");
  return v != nullptr && *v != '\0' && std::string_view(v) != "0";
}

std::uint64_t NetworkAttemptCount() { return g_network_attempts.load(); }

HttpResponse HttplibTransport::Post(
    const std::string& url, const std::map<std::string, std::string>& headers,
    const std::string& body, std::chrono::milliseconds timeout) {
  if (NetworkDisabledByEnvironment()) {
    throw Error(ErrorCode::kNetworkDisabled,
                "network access disabled by VERTATTACK_OFFLINE");
  }
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "endpoint URL lacks a scheme: " + url);
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path =
      path_start == std::string::npos ? "/" : url.substr(path_start);

  g_network_attempts.fetch_add(1);
  httplib::Client client(origin);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
      timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  auto result = client.Post(path, h, body, "application/json");
  if (!result) {
    const httplib::Error err = result.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
      throw Error(ErrorCode::kTimeout, httplib::to_string(err));
    }
    throw Error(ErrorCode::kClientError, httplib::to_string(err));
  }
  HttpResponse out;
  out.status = result->status;
  out.body = result->body;
  for (const auto& [k, v] : result->headers) out.headers[AsciiLower(k)] = v;
  return out;
}

std::pair<std::string, std::optional<Usage>> ParseCompletionBody(
    std::string_view body) {
  Json json = Json::parse(body, nullptr, false);
  if (json.is_discarded() || !json.is_object()) {
    throw Error(ErrorCode::kMalformedResponse, "response body is not a JSON object");
  }
  const Json* content = nullptr;
  if (json.contains("choices") && json["choices"].is_array() &&
      !json["choices"].empty()) {
    const Json& choice = json["choices"][0];
    if (choice.contains("message") && choice["message"].contains("content")) {
      content = &choice["message"]["content"];
    }
  }
  if (content == nullptr || !content->is_string()) {
    throw Error(ErrorCode::kMalformedResponse,
                "missing choices[0].message.content");
  }
  std::optional<Usage> usage;
  if (json.contains("usage") && json["usage"].is_object()) {
    Usage u;
    u.prompt_tokens = json["usage"].value("prompt_tokens", 0);
    u.completion_tokens = json["usage"].value("completion_tokens", 0);
    usage = u;
  }
  return {content->get<std::string>(), usage};
}

HttpChatClient::HttpChatClient(std::shared_ptr<HttpTransport> transport,
                               RetryPolicy policy, SleepFn sleep,
                               std::uint64_t jitter_seed)
    : transport_(std::move(transport)),
      policy_(policy),
      sleep_(sleep ? std::move(sleep)
                   : SleepFn([](std::chrono::milliseconds d) {
                       std::this_thread::sleep_for(d);
                     })),
      jitter_state_(jitter_seed | 1) {}

std::chrono::milliseconds HttpChatClient::Backoff(int attempt) {
  // xorshift64 for jitter; quality is irrelevant here.
  jitter_state_ ^= jitter_state_ << 13;
  jitter_state_ ^= jitter_state_ >> 7;
  jitter_state_ ^= jitter_state_ << 17;
  const double unit = static_cast<double>(jitter_state_ >> 11) * 0x1.0p-53;
  const double base = static_cast<double>(policy_.base_delay.count()) *
                      std::pow(policy_.factor, attempt);
  const double jittered = base * (1.0 + policy_.jitter * (2.0 * unit - 1.0));
  return std::chrono::milliseconds(static_cast<long long>(std::max(0.0, jittered)));
}

Transcript HttpChatClient::Complete(const ClientConfig& config,
                                    std::span<const Message> messages) {
  if (messages.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "messages must be nonempty");
  }
  config.Validate();
  const char* key = std::getenv(config.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw Error(ErrorCode::kAuthError,
                fmt::format("environment variable {} is not set",
                            config.api_key_env));
  }
  const std::string body = RequestBody(config, messages).dump();
  const std::map<std::string, std::string> headers{
      {"Authorization", std::string("Bearer ") + key}};
  const auto timeout = std::chrono::milliseconds(
      static_cast<long long>(config.timeout_seconds * 1000.0));

  ErrorCode last_code = ErrorCode::kClientError;
  std::string last_message;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    const auto started = std::chrono::steady_clock::now();
    std::optional<std::chrono::milliseconds> server_delay;
    try {
      HttpResponse response = transport_->Post(config.endpoint_url, headers,
                                               body, timeout);
      if (response.status == 200) {
        auto [generation, usage] = ParseCompletionBody(response.body);
        Transcript t;
        t.model_id = config.model_id;
        t.messages.assign(messages.begin(), messages.end());
        t.generation = std::move(generation);
        t.usage = usage;
        t.latency_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - started)
                           .count();
        t.timestamp = UtcTimestamp();
        t.cassette_key = CassetteKey(config.model_id, messages,
                                     config.temperature, config.top_p);
        return t;
      }
      if (response.status == 401 || response.status == 403) {
        throw Error(ErrorCode::kAuthError,
                    fmt::format("HTTP {}: {}", response.status, response.body));
      }
      if (response.status == 429) {
        last_code = ErrorCode::kRateLimited;
      } else if (response.status >= 500) {
        last_code = ErrorCode::kClientError;
      } else {
        throw Error(ErrorCode::kClientError,
                    fmt::format("HTTP {}: {}", response.status, response.body));
      }
      last_message = fmt::format("HTTP {}", response.status);
      if (auto it = response.headers.find("retry-after");
          it != response.headers.end()) {
        char* end = nullptr;
        const double seconds = std::strtod(it->second.c_str(), &end);
        if (end != it->second.c_str() && seconds >= 0.0) {
          server_delay = std::chrono::milliseconds(
              static_cast<long long>(seconds * 1000.0));
        }
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTimeout) throw;
      last_code = ErrorCode::kTimeout;
      last_message = e.what();
    }
    if (attempt < config.max_retries) {
      sleep_(server_delay ? std::max(*server_delay, Backoff(attempt))
                          : Backoff(attempt));
    }
  }
  throw Error(last_code, fmt::format("giving up after {} attempts: {}",
                                     config.max_retries + 1, last_message));
}

// ---------------------------------------------------------------------------

namespace {

Transcript MakeTranscript(const ClientConfig& config,
                          std::span<const Message> messages,
                          std::string generation) {
  Transcript t;
  t.model_id = config.model_id;
  t.messages.assign(messages.begin(), messages.end());
  t.generation = std::move(generation);
  t.timestamp = UtcTimestamp();
  t.cassette_key =
      CassetteKey(config.model_id, messages, config.temperature, config.top_p);
  return t;
}

class KeywordClassifier : public ChatClient {
 public:
  KeywordClassifier(std::map<std::string, std::string> lexicon,
                    std::string default_label)
      : default_label_(std::move(default_label)) {
    for (auto& [word, label] : lexicon) lexicon_[AsciiLower(word)] = label;
  }

  Transcript Complete(const ClientConfig& config,
                      std::span<const Message> messages) override {
    std::string_view final_user;
    for (const Message& m : messages) {
      if (m.role == "user") final_user = m.content;
    }
    std::string answer = default_label_;
    for (const std::string& token : SplitWhitespace(final_user)) {
      auto it = lexicon_.find(AsciiLower(StripPunctuation(token)));
      if (it != lexicon_.end()) {
        answer = it->second;
        break;
      }
    }
    return MakeTranscript(config, messages, std::move(answer));
  }

 private:
  std::map<std::string, std::string> lexicon_;
  std::string default_label_;
};

}  // namespace

Transcript ScriptedClient::Complete(const ClientConfig& config,
                                    std::span<const Message> messages) {
  return MakeTranscript(config, messages, fn_(config, messages));
}

Transcript KeyedMockClient::Complete(const ClientConfig& config,
                                     std::span<const Message> messages) {
  const std::string key =
      CassetteKey(config.model_id, messages, config.temperature, config.top_p);
  auto it = by_key_.find(key);
  if (it == by_key_.end()) {
    throw Error(ErrorCode::kCassetteMiss, "no scripted answer for key " + key);
  }
  return MakeTranscript(config, messages, it->second);
}

std::unique_ptr<ChatClient> MakeKeywordClassifier(
    std::map<std::string, std::string> lexicon, std::string default_label) {
  if (lexicon.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "keyword lexicon is empty");
  }
  return std::make_unique<KeywordClassifier>(std::move(lexicon),
                                             std::move(default_label));
}

std::map<std::string, std::string> LoadLexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, path);
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = TrimWhitespace(line);
    if (view.empty() || view.front() == '#') continue;
    const std::size_t tab = view.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::kSchemaMismatch,
                  fmt::format("{}:{}: expected word<TAB>label", path, line_no));
    }
    out[std::string(TrimWhitespace(view.substr(0, tab)))] =
        std::string(TrimWhitespace(view.substr(tab + 1)));
  }
  return out;
}

ParallelismLimiter::ParallelismLimiter(std::shared_ptr<ChatClient> inner,
                                       int limit)
    : inner_(std::move(inner)), slots_(std::clamp(limit, 1, 1024)) {}

Transcript ParallelismLimiter::Complete(const ClientConfig& config,
                                        std::span<const Message> messages) {
  slots_.acquire();
  struct Release {
    std::counting_semaphore<1024>& s;
    ~Release() { s.release(); }
  } release{slots_};
  return inner_->Complete(config, messages);
}

}  // namespace vertattack
