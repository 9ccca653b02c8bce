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


#include "sift/harness.h"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "sift/candidate.h"
#include "sift/text.h"

namespace sift {
namespace {

std::string code_of(const std::string& message) { return message.substr(0, message.find(' ')); }

Json record_json(const EvalRecord& r) {
  Json attempts = Json::array();
  for (const Attempt& a : r.outcome.attempts) {
    Json findings = Json::array();
    if (a.report) {
      for (const Finding& f : a.report->findings()) {
        findings.push_back(std::string(finding_code_name(f.code)) + " at " + f.path);
      }
    }
    attempts.push_back({{"passed", a.passed()},
                        {"findings", std::move(findings)},
                        {"parse_error", a.parse_error ? Json(*a.parse_error) : Json(nullptr)},
                        {"latency_ms", a.latency_ms}});
  }
  return {{"id", r.id},
          {"correct", r.correct()},
          {"per_field", to_json(r.compare)["per_field"]},
          {"retries_used", r.outcome.retries_used},
          {"extracted", r.outcome.final ? r.outcome.final->values : Json(nullptr)},
          {"failure", r.outcome.failure ? Json(r.outcome.failure->reason) : Json(nullptr)},
          {"attempts", std::move(attempts)}};
}

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::optional<DatasetFormat> dataset_format_from_name(std::string_view name) {
  if (name == "conversation-jsonl" || name == "conversation") return DatasetFormat::kConversation;
  if (name == "page-jsonl" || name == "page") return DatasetFormat::kPage;
  return std::nullopt;
}

std::string flatten_turns(const Json& turns) {
  std::string out;
  for (const Json& t : turns) {
    std::string speaker = t.at("speaker").get<std::string>();
    for (char& c : speaker) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!out.empty()) out += "\n";
    out += (speaker == "user" ? "[USER]: " : "[ASSISTANT]: ") + t.at("text").get<std::string>();
  }
  return out;
}

std::vector<DatasetSample> load_dataset(const DatasetSpec& spec, const SchemaDoc& schema) {
  std::ifstream in(spec.path);
  if (!in) throw Error(ErrorCode::kMalformedDocument, spec.path, "cannot open dataset");
  std::vector<DatasetSample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (spec.sample_cap && out.size() >= *spec.sample_cap) break;
    if (text::trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    DatasetSample s;
    try {
      const Json j = Json::parse(line);
      if (spec.format == DatasetFormat::kConversation) {
        if (!j.at("turns").is_array()) throw Error(ErrorCode::kLineParseError, where, "turns must be an array");
        s.input_text = flatten_turns(j["turns"]);
      } else {
        s.input_text = j.at("html").get<std::string>();
      }
      s.expected = j.at("expected");
      s.id = j.contains("id") ? j["id"].get<std::string>() : "line-" + std::to_string(line_no);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kLineParseError, where, e.what());
    }
    try {
      check_shape(s.expected, schema);
    } catch (const Error& e) {
      throw Error(ErrorCode::kShapeViolation, where + (e.path().empty() ? "" : " " + e.path()),
                  e.detail());
    }
    out.push_back(std::move(s));
  }
  return out;
}

RunReport run_eval(const std::vector<DatasetSample>& samples, const SchemaDoc& schema,
                   const EngineConfig& config, ModelBackend& backend,
                   ModelBackend* condition_backend) {
  if (samples.empty()) throw Error(ErrorCode::kPrecondition, "", "dataset is empty");
  RunReport report;
  report.config = {{"name", config.name},
                   {"schema", schema.version_tag()},
                   {"max_retries", config.max_retries},
                   {"reflection_enabled", config.reflection_enabled},
                   {"llm_condition_check", config.llm_condition_check}};
  report.n_samples = samples.size();

  std::vector<std::optional<EvalRecord>> slots(samples.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  const auto work = [&] {
    while (!stop) {
      const size_t i = next++;
      if (i >= samples.size()) return;
      try {
        ExtractionRequest req(samples[i].input_text, schema);
        req.max_retries = config.max_retries;
        req.reflection_enabled = config.reflection_enabled;
        req.llm_condition_check = config.llm_condition_check;
        EvalRecord r{samples[i].id, samples[i].expected, extract(req, backend, condition_backend), {}};
        const Json actual = r.outcome.final ? r.outcome.final->values : Json::object();
        r.compare = strict_compare(samples[i].expected, actual, schema);
        slots[i] = std::move(r);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        if (!report.interrupted) report.interrupted = "sample " + samples[i].id + ": " + e.what();
        stop = true;
      }
    }
  };
  const int workers = std::max(1, config.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  int correct = 0;
  int failed_at_0 = 0;
  int failed_after_1 = 0;
  double latency = 0;
  double wall = 0;
  for (auto& slot : slots) {
    if (!slot) continue;
    EvalRecord& r = *slot;
    correct += r.correct() ? 1 : 0;
    ++report.retry_histogram[r.outcome.retries_used];
    const auto& at = r.outcome.attempts;
    if (!at.empty() && !at[0].passed()) {
      ++failed_at_0;
      if (at.size() < 2 || !at[1].passed()) ++failed_after_1;
    }
    for (const Attempt& a : at) {
      latency += a.latency_ms;
      if (a.report) {
        for (const Finding& f : a.report->findings()) ++report.finding_counts[std::string(finding_code_name(f.code))];
      }
      if (a.parse_error) ++report.finding_counts[code_of(*a.parse_error)];
    }
    if (r.outcome.failure) {
      const bool parse = !at.empty() && at.back().parse_error;
      ++report.failure_counts[parse ? code_of(*at.back().parse_error) : "ValidationFailed"];
    }
    wall += r.outcome.wall_time_ms;
    report.records.push_back(std::move(r));
  }
  report.processed = report.records.size();
  if (report.processed > 0) {
    const double n = static_cast<double>(report.processed);
    report.accuracy = correct / n;
    report.mean_latency_ms = latency / n;
    report.mean_wall_time_ms = wall / n;
  }
  if (failed_at_0 > 0) {
    report.error_reduction_at_1 = 1.0 - static_cast<double>(failed_after_1) / failed_at_0;
  }
  return report;
}

Json RunReport::to_json() const {
  Json hist = Json::object();
  for (const auto& [k, v] : retry_histogram) hist[std::to_string(k)] = v;
  Json recs = Json::array();
  for (const EvalRecord& r : records) recs.push_back(record_json(r));
  return {{"config", config},
          {"n_samples", n_samples},
          {"processed", processed},
          {"interrupted", interrupted ? Json(*interrupted) : Json(nullptr)},
          {"accuracy", accuracy},
          {"retry_histogram", std::move(hist)},
          {"error_reduction_at_1", error_reduction_at_1 ? Json(*error_reduction_at_1) : Json(nullptr)},
          {"mean_latency_ms", mean_latency_ms},
          {"finding_counts", finding_counts},
          {"failure_counts", failure_counts},
          {"records", std::move(recs)}};
}

std::string RunReport::summary() const {
  std::ostringstream s;
  s << "config               " << config.value("name", "") << "\n"
    << "samples              " << processed << " of " << n_samples << "\n"
    << "accuracy             " << fmt(accuracy) << "\n"
    << "error_reduction_at_1 " << (error_reduction_at_1 ? fmt(*error_reduction_at_1) : "n/a") << "\n"
    << "mean_latency_ms      " << fmt(mean_latency_ms, 1) << "\n"
    << "mean_wall_time_ms    " << fmt(mean_wall_time_ms, 1) << "\n"
    << "retries              ";
  for (const auto& [k, v] : retry_histogram) s << k << ":" << v << " ";
  s << "\n";
  for (const auto& [code, n] : finding_counts) s << "finding  " << code << " " << n << "\n";
  for (const auto& [code, n] : failure_counts) s << "failure  " << code << " " << n << "\n";
  if (interrupted) s << "interrupted: " << *interrupted << "\n";
  return s.str();
}

Json AbReport::to_json() const {
  const auto reduction = [](const RunReport& r) {
    return r.error_reduction_at_1 ? Json(*r.error_reduction_at_1) : Json(nullptr);
  };
  Json delta = {{"accuracy", b.accuracy - a.accuracy},
                {"mean_latency_ms", b.mean_latency_ms - a.mean_latency_ms}};
  delta["error_reduction_at_1"] = (a.error_reduction_at_1 && b.error_reduction_at_1)
                                      ? Json(*b.error_reduction_at_1 - *a.error_reduction_at_1)
                                      : Json(nullptr);
  return {{"a", a.to_json()},
          {"b", b.to_json()},
          {"delta", delta},
          {"error_reduction_at_1", {{"a", reduction(a)}, {"b", reduction(b)}}}};
}

std::string AbReport::summary() const {
  std::ostringstream s;
  s << "== A ==\n" << a.summary() << "== B ==\n" << b.summary() << "== B - A ==\n"
    << "accuracy             " << fmt(b.accuracy - a.accuracy) << "\n"
    << "mean_latency_ms      " << fmt(b.mean_latency_ms - a.mean_latency_ms, 1) << "\n";
  return s.str();
}

}  // namespace sift
