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


#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "sift/backend.h"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "sift/error.h"
#include "sift/schema.h"

namespace sift {
namespace {

int64_t word_count(std::string_view s) {
  int64_t n = 0;
  bool in_word = false;
  for (char c : s) {
    const bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMalformedDocument, path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(std::string_view text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedDocument, where, e.what());
  }
}

}  // namespace

ChatRequest user_request(std::string prompt) {
  ChatRequest r;
  r.messages.push_back({"user", std::move(prompt)});
  return r;
}

Json to_json(const ChatRequest& r) {
  Json messages = Json::array();
  for (const ChatMessage& m : r.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  Json j = {{"system", r.system},
            {"messages", std::move(messages)},
            {"temperature", r.temperature},
            {"max_tokens", r.max_tokens}};
  j["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
  return j;
}

ChatRequest chat_request_from_json(const Json& j) {
  try {
    ChatRequest r;
    r.system = j.value("system", "");
    for (const Json& m : j.at("messages")) {
      r.messages.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
    }
    r.temperature = j.value("temperature", 0.0);
    r.max_tokens = j.value("max_tokens", int64_t{4096});
    if (j.contains("seed") && !j["seed"].is_null()) {
      r.seed = j["seed"].get<int64_t>();
    } else {
      r.seed.reset();
    }
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, "", std::string("bad request record: ") + e.what());
  }
}

std::string fingerprint(const ChatRequest& request) {
  return stable_hash(canonical_dump(to_json(request)));
}

std::string request_text(const ChatRequest& request) {
  std::string out = request.system;
  for (const ChatMessage& m : request.messages) {
    if (!out.empty()) out += "\n";
    out += m.content;
  }
  return out;
}

Json to_json(const ChatResponse& r) {
  return {{"text", r.text},
          {"prompt_tokens", r.prompt_tokens},
          {"completion_tokens", r.completion_tokens},
          {"latency_ms", r.latency_ms}};
}

ChatResponse chat_response_from_json(const Json& j) {
  try {
    ChatResponse r;
    r.text = j.at("text").get<std::string>();
    r.prompt_tokens = j.value("prompt_tokens", int64_t{0});
    r.completion_tokens = j.value("completion_tokens", int64_t{0});
    r.latency_ms = j.value("latency_ms", 0.0);
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, "", std::string("bad response record: ") + e.what());
  }
}

Json to_json(const ChatExchange& e) {
  return {{"fingerprint", e.fingerprint},
          {"request", to_json(e.request)},
          {"response", to_json(e.response)}};
}

ChatExchange chat_exchange_from_json(const Json& j) {
  ChatExchange e;
  if (!j.is_object() || !j.contains("request") || !j.contains("response")) {
    throw Error(ErrorCode::kMalformedDocument, "", "exchange needs request and response");
  }
  e.request = chat_request_from_json(j["request"]);
  e.response = chat_response_from_json(j["response"]);
  e.fingerprint = fingerprint(e.request);
  return e;
}

// ---- Cassette ----

Cassette Cassette::parse(std::string_view text) {
  Cassette c;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    const Json j = parse_json(line, "line " + std::to_string(line_no));
    if (j.is_object() && j.contains("cassette_meta")) {
      c.meta.provider = j["cassette_meta"].value("provider", "");
      c.meta.captured_at = j["cassette_meta"].value("captured_at", "");
    } else {
      try {
        c.entries.push_back(chat_exchange_from_json(j));
      } catch (const Error& e) {
        throw Error(ErrorCode::kMalformedDocument, "line " + std::to_string(line_no), e.detail());
      }
    }
    if (end == text.size()) break;
  }
  return c;
}

Cassette Cassette::load(const std::string& path) { return parse(read_file(path)); }

std::string Cassette::serialize() const {
  std::string out = canonical_dump(
      {{"cassette_meta", {{"provider", meta.provider}, {"captured_at", meta.captured_at}}}});
  out += "\n";
  for (const ChatExchange& e : entries) {
    out += canonical_dump(to_json(e));
    out += "\n";
  }
  return out;
}

ReplayBackend::ReplayBackend(const Cassette& cassette) : provider_(cassette.meta.provider) {
  for (const ChatExchange& e : cassette.entries) queues_[e.fingerprint].push_back(e.response);
}

ChatResponse ReplayBackend::complete(const ChatRequest& request) {
  const std::string fp = fingerprint(request);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = queues_.find(fp);
  if (it == queues_.end() || it->second.empty()) {
    throw Error(ErrorCode::kCassetteMiss, fp, "no recorded response left for this request");
  }
  ChatResponse r = std::move(it->second.front());
  it->second.pop_front();
  return r;
}

size_t ReplayBackend::remaining() const {
  std::lock_guard<std::mutex> lock(mu_);
  size_t n = 0;
  for (const auto& [fp, q] : queues_) n += q.size();
  return n;
}

FileCassetteSink::FileCassetteSink(std::string path, CassetteMeta meta) : path_(std::move(path)) {
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  Cassette header;
  header.meta = std::move(meta);
  out << header.serialize();
  out.flush();
  if (!out) throw Error(ErrorCode::kSinkWriteFailure, path_, "cannot write cassette file");
}

void FileCassetteSink::append(const ChatExchange& exchange) {
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  out << canonical_dump(to_json(exchange)) << "\n";
  out.flush();
  if (!out) throw Error(ErrorCode::kSinkWriteFailure, path_, "cannot append to cassette file");
}

void MemoryCassetteSink::append(const ChatExchange& exchange) {
  std::lock_guard<std::mutex> lock(mu_);
  cassette_.entries.push_back(exchange);
}

Cassette MemoryCassetteSink::cassette() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cassette_;
}

RecordingBackend::RecordingBackend(std::shared_ptr<ModelBackend> inner,
                                   std::shared_ptr<CassetteSink> sink)
    : inner_(std::move(inner)), sink_(std::move(sink)) {}

ChatResponse RecordingBackend::complete(const ChatRequest& request) {
  ChatResponse response = inner_->complete(request);
  std::lock_guard<std::mutex> lock(mu_);
  sink_->append({request, response, fingerprint(request)});
  return response;
}

// ---- Scripted ----

ScriptedPolicy ScriptedPolicy::from_json(const Json& j) {
  try {
    ScriptedPolicy p;
    for (const Json& r : j.value("rules", Json::array())) {
      ScriptRule rule;
      rule.name = r.value("name", "");
      if (r.contains("contains")) {
        if (r["contains"].is_string()) {
          rule.contains.push_back(r["contains"].get<std::string>());
        } else {
          rule.contains = r["contains"].get<std::vector<std::string>>();
        }
      }
      if (r.contains("not_contains")) {
        if (r["not_contains"].is_string()) {
          rule.not_contains.push_back(r["not_contains"].get<std::string>());
        } else {
          rule.not_contains = r["not_contains"].get<std::vector<std::string>>();
        }
      }
      if (r.contains("regex")) rule.regex = r["regex"].get<std::string>();
      rule.respond = r.at("respond").get<std::string>();
      rule.latency_ms = r.value("latency_ms", 0.0);
      p.rules.push_back(std::move(rule));
    }
    if (j.contains("default") && !j["default"].is_null()) {
      p.default_response = j["default"].get<std::string>();
    }
    return p;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, "", std::string("bad scripted policy: ") + e.what());
  }
}

ScriptedPolicy ScriptedPolicy::load(const std::string& path) {
  return from_json(parse_json(read_file(path), path));
}

Json ScriptedPolicy::to_json() const {
  Json rules_json = Json::array();
  for (const ScriptRule& r : rules) {
    Json j = {{"respond", r.respond}};
    if (!r.name.empty()) j["name"] = r.name;
    if (!r.contains.empty()) j["contains"] = r.contains;
    if (!r.not_contains.empty()) j["not_contains"] = r.not_contains;
    if (r.regex) j["regex"] = *r.regex;
    if (r.latency_ms != 0) j["latency_ms"] = r.latency_ms;
    rules_json.push_back(std::move(j));
  }
  Json j = {{"rules", std::move(rules_json)}};
  if (default_response) j["default"] = *default_response;
  return j;
}

ScriptedBackend::ScriptedBackend(ScriptedPolicy policy) : policy_(std::move(policy)) {
  for (const ScriptRule& r : policy_.rules) {
    if (!r.regex) {
      compiled_.emplace_back();
      continue;
    }
    try {
      compiled_.emplace_back(Regex::compile(*r.regex));
    } catch (const RegexError& e) {
      throw Error(ErrorCode::kInvalidPattern, r.name, e.what());
    }
  }
}

ChatResponse ScriptedBackend::complete(const ChatRequest& request) {
  const std::string text = request_text(request);
  for (size_t i = 0; i < policy_.rules.size(); ++i) {
    const ScriptRule& rule = policy_.rules[i];
    bool ok = true;
    for (const std::string& c : rule.contains) ok = ok && text.find(c) != std::string::npos;
    for (const std::string& c : rule.not_contains) ok = ok && text.find(c) == std::string::npos;
    if (!ok) continue;
    Regex::Groups groups;
    if (compiled_[i]) {
      auto m = compiled_[i]->search(text);
      if (!m) continue;
      groups = std::move(*m);
    }
    std::string out;
    const std::string& t = rule.respond;
    for (size_t k = 0; k < t.size();) {
      if (t.compare(k, 2, "{{") == 0) {
        const size_t close = t.find("}}", k + 2);
        if (close != std::string::npos) {
          const std::string idx = t.substr(k + 2, close - k - 2);
          if (!idx.empty() && idx.find_first_not_of("0123456789") == std::string::npos) {
            const size_t g = std::stoul(idx);
            if (g < groups.size() && groups[g]) out += *groups[g];
            k = close + 2;
            continue;
          }
        }
      }
      out += t[k++];
    }
    return {out, word_count(text), word_count(out), rule.latency_ms};
  }
  if (policy_.default_response) {
    return {*policy_.default_response, word_count(text), word_count(*policy_.default_response), 0};
  }
  throw Error(ErrorCode::kNoRuleMatched, "", "no scripted rule matches the request");
}

ChatResponse CallbackBackend::complete(const ChatRequest& request) {
  std::string text;
  {
    std::lock_guard<std::mutex> lock(mu_);
    text = fn_(request);
  }
  return {text, word_count(request_text(request)), word_count(text), 0};
}

ChatResponse CountingBackend::complete(const ChatRequest& request) {
  calls_.fetch_add(1);
  return inner_->complete(request);
}

// ---- HTTP ----

std::atomic<int64_t> HttpBackend::live_calls_{0};

HttpBackend::HttpBackend(HttpConfig config) : config_(std::move(config)) {
  const std::string& url = config_.endpoint;
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kPrecondition, url, "endpoint must be an http(s) URL");
  }
  const size_t path_start = url.find('/', scheme_end + 3);
  scheme_host_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

ChatResponse HttpBackend::complete(const ChatRequest& request) {
  Json messages = Json::array();
  if (!request.system.empty()) messages.push_back({{"role", "system"}, {"content", request.system}});
  for (const ChatMessage& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  Json body = {{"model", config_.model},
               {"messages", std::move(messages)},
               {"temperature", request.temperature},
               {"max_tokens", request.max_tokens}};
  if (request.seed) body["seed"] = *request.seed;

  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  std::string last_error;
  for (int attempt = 0; attempt <= config_.transport_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(250 << (attempt - 1)));
    httplib::Client client(scheme_host_);
    const auto seconds = static_cast<time_t>(config_.timeout_s);
    const auto micros = static_cast<time_t>((config_.timeout_s - static_cast<double>(seconds)) * 1e6);
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);

    const auto start = std::chrono::steady_clock::now();
    live_calls_.fetch_add(1);
    auto res = client.Post(path_, headers, body.dump(), "application/json");
    const double latency =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (!res) {
      last_error = "connection: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "http_status: " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kTransport, config_.endpoint,
                  "http_status: " + std::to_string(res->status) + " " + res->body.substr(0, 200));
    }
    try {
      const Json j = Json::parse(res->body);
      ChatResponse out;
      out.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
      if (j.contains("usage")) {
        out.prompt_tokens = j["usage"].value("prompt_tokens", int64_t{0});
        out.completion_tokens = j["usage"].value("completion_tokens", int64_t{0});
      }
      out.latency_ms = latency;
      return out;
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kTransport, config_.endpoint, std::string("bad_response: ") + e.what());
    }
  }
  throw Error(ErrorCode::kTransport, config_.endpoint, last_error);
}

}  // namespace sift
