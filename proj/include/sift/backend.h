// Copyright 2026 The Sift Authors.
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


#ifndef SIFT_BACKEND_H_
#define SIFT_BACKEND_H_

#include <atomic>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "sift/regex.h"

namespace sift {

using Json = nlohmann::json;

struct ChatMessage {
  std::string role;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::string system;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int64_t max_tokens = 4096;
  std::optional<int64_t> seed = 0;

  bool operator==(const ChatRequest&) const = default;
};

ChatRequest user_request(std::string prompt);

Json to_json(const ChatRequest& request);
ChatRequest chat_request_from_json(const Json& j);
// stable_hash of the canonical JSON form.
std::string fingerprint(const ChatRequest& request);
// System text and message contents joined by newlines; what scripted rules
// match against.
std::string request_text(const ChatRequest& request);

struct ChatResponse {
  std::string text;
  int64_t prompt_tokens = 0;
  int64_t completion_tokens = 0;
  double latency_ms = 0;

  bool operator==(const ChatResponse&) const = default;
};

Json to_json(const ChatResponse& response);
ChatResponse chat_response_from_json(const Json& j);

// Implementations must be safe for concurrent complete() calls.
class ModelBackend {
 public:
  virtual ~ModelBackend() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
  virtual std::string name() const = 0;
};

// ---- Cassettes ----

struct ChatExchange {
  ChatRequest request;
  ChatResponse response;
  std::string fingerprint;
};

Json to_json(const ChatExchange& exchange);
ChatExchange chat_exchange_from_json(const Json& j);

struct CassetteMeta {
  std::string provider;
  std::string captured_at;
};

// JSON Lines. An optional first line {"cassette_meta": {...}} carries the
// metadata; every other line is one exchange.
struct Cassette {
  CassetteMeta meta;
  std::vector<ChatExchange> entries;

  static Cassette parse(std::string_view text);
  static Cassette load(const std::string& path);
  std::string serialize() const;
};

// Answers each request with the next recorded response for its
// fingerprint. Throws Error(CassetteMiss) when none is left.
class ReplayBackend : public ModelBackend {
 public:
  explicit ReplayBackend(const Cassette& cassette);
  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "replay:" + provider_; }
  size_t remaining() const;

 private:
  std::string provider_;
  mutable std::mutex mu_;
  std::map<std::string, std::deque<ChatResponse>> queues_;
};

class CassetteSink {
 public:
  virtual ~CassetteSink() = default;
  // Throws Error(SinkWriteFailure).
  virtual void append(const ChatExchange& exchange) = 0;
};

// Writes the metadata line on open and flushes every exchange.
class FileCassetteSink : public CassetteSink {
 public:
  FileCassetteSink(std::string path, CassetteMeta meta);
  void append(const ChatExchange& exchange) override;

 private:
  std::string path_;
};

class MemoryCassetteSink : public CassetteSink {
 public:
  explicit MemoryCassetteSink(CassetteMeta meta = {}) { cassette_.meta = std::move(meta); }
  void append(const ChatExchange& exchange) override;
  Cassette cassette() const;

 private:
  mutable std::mutex mu_;
  Cassette cassette_;
};

// Passes calls through to `inner` and appends every exchange to `sink`.
class RecordingBackend : public ModelBackend {
 public:
  RecordingBackend(std::shared_ptr<ModelBackend> inner, std::shared_ptr<CassetteSink> sink);
  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "record:" + inner_->name(); }

 private:
  std::shared_ptr<ModelBackend> inner_;
  std::shared_ptr<CassetteSink> sink_;
  std::mutex mu_;
};

// ---- Scripted policies ----

// A rule matches when the request text contains every `contains` fragment,
// none of the `not_contains` fragments, and (if set) the regex finds a
// match. "{{n}}" in `respond` is replaced by regex group n.
struct ScriptRule {
  std::string name;
  std::vector<std::string> contains;
  std::vector<std::string> not_contains;
  std::optional<std::string> regex;
  std::string respond;
  double latency_ms = 0;
};

struct ScriptedPolicy {
  std::vector<ScriptRule> rules;
  std::optional<std::string> default_response;

  static ScriptedPolicy from_json(const Json& j);
  static ScriptedPolicy load(const std::string& path);
  Json to_json() const;
};

// First matching rule wins; a pure function of the request text. Throws
// Error(NoRuleMatched) when nothing matches and there is no default.
class ScriptedBackend : public ModelBackend {
 public:
  explicit ScriptedBackend(ScriptedPolicy policy);
  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "scripted"; }

 private:
  ScriptedPolicy policy_;
  std::vector<std::optional<Regex>> compiled_;
};

// Wraps a callable; handy for tests that need stateful behavior.
class CallbackBackend : public ModelBackend {
 public:
  using Fn = std::function<std::string(const ChatRequest&)>;
  explicit CallbackBackend(Fn fn) : fn_(std::move(fn)) {}
  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "callback"; }

 private:
  std::mutex mu_;
  Fn fn_;
};

class CountingBackend : public ModelBackend {
 public:
  explicit CountingBackend(std::shared_ptr<ModelBackend> inner) : inner_(std::move(inner)) {}
  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return inner_->name(); }
  int64_t calls() const { return calls_.load(); }

 private:
  std::shared_ptr<ModelBackend> inner_;
  std::atomic<int64_t> calls_{0};
};

// ---- Live HTTP ----

struct HttpConfig {
  std::string endpoint;  // e.g. https://api.example.com/v1/chat/completions
  std::string model;
  std::string api_key_env = "SIFT_API_KEY";
  double timeout_s = 60;
  int transport_retries = 2;
};

// Chat-completions client. Sends {model, messages, temperature, max_tokens,
// seed} and reads choices[0].message.content. Throws Error(Transport) after
// the configured retries.
class HttpBackend : public ModelBackend {
 public:
  explicit HttpBackend(HttpConfig config);
  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "http:" + config_.model; }

  // Requests sent over the network by every HttpBackend in the process.
  static int64_t live_calls() { return live_calls_.load(); }

 private:
  HttpConfig config_;
  std::string scheme_host_;
  std::string path_;
  static std::atomic<int64_t> live_calls_;
};

}  // namespace sift

#endif  // SIFT_BACKEND_H_
