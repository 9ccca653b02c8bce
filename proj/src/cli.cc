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


#include "sift/cli.h"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "sift/architect.h"
#include "sift/backend.h"
#include "sift/harness.h"
#include "sift/relay.h"
#include "sift/scope.h"

namespace sift {
namespace {

struct BackendOptions {
  std::string kind = "http";
  std::string policy;
  std::string cassette;
  bool record = false;
  bool replay = false;
  std::string endpoint;
  std::string model;
  std::string api_key_env = "SIFT_API_KEY";
  int timeout_s = 60;
};

// Operational errors that are not library Errors, e.g. unreadable input.
struct CliFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw CliFailure("cannot write " + path);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::shared_ptr<ModelBackend> make_backend(const BackendOptions& o) {
  if (o.replay) {
    if (o.cassette.empty()) throw CLI::ValidationError("--replay", "needs --cassette");
    return std::make_shared<ReplayBackend>(Cassette::load(o.cassette));
  }
  std::shared_ptr<ModelBackend> inner;
  if (o.kind == "scripted") {
    if (o.policy.empty()) throw CLI::ValidationError("--backend scripted", "needs --policy");
    inner = std::make_shared<ScriptedBackend>(ScriptedPolicy::load(o.policy));
  } else {
    if (o.endpoint.empty() || o.model.empty()) {
      throw CLI::ValidationError("--backend http", "needs --endpoint and --model");
    }
    HttpConfig cfg;
    cfg.endpoint = o.endpoint;
    cfg.model = o.model;
    cfg.api_key_env = o.api_key_env;
    cfg.timeout_s = o.timeout_s;
    inner = std::make_shared<HttpBackend>(cfg);
  }
  if (!o.record) return inner;
  if (o.cassette.empty()) throw CLI::ValidationError("--record", "needs --cassette");
  auto sink = std::make_shared<FileCassetteSink>(o.cassette, CassetteMeta{inner->name(), utc_now()});
  return std::make_shared<RecordingBackend>(inner, sink);
}

SchemaDoc load_schema_file(const std::string& path) {
  try {
    return parse_schema(read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path + (e.path().empty() ? "" : " " + e.path()), e.detail());
  }
}

// A program file may embed its target schema under "target_schema_doc".
struct RelayBundle {
  TransformProgram program;
  SchemaDoc target;
};

RelayBundle load_relay(const std::string& program_path, const std::string& user_schema_path,
                       const SchemaDoc& s_star) {
  Json doc;
  try {
    doc = Json::parse(read_file(program_path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedDocument, program_path, e.what());
  }
  TransformProgram program = program_from_json(doc);
  std::optional<SchemaDoc> target;
  if (!user_schema_path.empty()) {
    target = load_schema_file(user_schema_path);
  } else if (doc.contains("target_schema_doc")) {
    target = schema_from_json(doc["target_schema_doc"]);
  } else {
    throw CliFailure(program_path + " has no target_schema_doc; pass --user-schema");
  }
  if (!program.source_schema.empty() && program.source_schema != s_star.version_tag()) {
    throw CliFailure("program was built for source schema " + program.source_schema + ", not " +
                     s_star.version_tag());
  }
  if (!program.target_schema.empty() && program.target_schema != target->version_tag()) {
    throw CliFailure("program was built for target schema " + program.target_schema + ", not " +
                     target->version_tag());
  }
  validate_program(program, s_star, *target);
  return {std::move(program), *target};
}

Json program_bundle(const TransformProgram& p, const SchemaDoc& target) {
  Json j = to_json(p);
  j["target_schema_doc"] = to_json(target);
  return j;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Schema-guided structured extraction with guardrails, schema optimization and "
               "backward-compatible output mapping."};
  app.name(args.empty() ? "sift" : args[0]);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  BackendOptions bo;
  app.add_option("--backend", bo.kind, "Model backend")
      ->check(CLI::IsMember({"http", "scripted"}))
      ->capture_default_str();
  app.add_option("--policy", bo.policy, "Scripted policy JSON (with --backend scripted)");
  app.add_option("--cassette", bo.cassette, "Cassette file for --record or --replay");
  auto* record = app.add_flag("--record", bo.record, "Record every exchange to --cassette");
  app.add_flag("--replay", bo.replay, "Answer from --cassette only; no live calls")->excludes(record);
  app.add_option("--endpoint", bo.endpoint, "Chat-completions URL (with --backend http)");
  app.add_option("--model", bo.model, "Model name (with --backend http)");
  app.add_option("--api-key-env", bo.api_key_env, "Environment variable holding the API key")
      ->capture_default_str();
  app.add_option("--timeout", bo.timeout_s, "HTTP timeout in seconds")->capture_default_str();

  // build
  auto* build = app.add_subcommand("build", "Optimize a schema and write it with its report and relay program");
  std::string task, user_schema_path, seeds_path, out_dir;
  ArchitectConfig acfg;
  bool no_relay = false;
  int relay_pairs = kDefaultPairCount;
  build->add_option("--task", task, "Task description")->required();
  build->add_option("--schema", user_schema_path, "Starting schema; generated from the task when absent");
  build->add_option("--seeds", seeds_path, "Seed samples, JSON Lines with input_text and expected");
  build->add_option("--tau", acfg.tau, "Target accuracy")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  build->add_option("--max-iters", acfg.max_iters, "Refinement budget K")->check(CLI::PositiveNumber)->capture_default_str();
  build->add_option("--n-samples", acfg.n_samples, "Synthetic cases per iteration")->check(CLI::PositiveNumber)->capture_default_str();
  build->add_option("--holdout", acfg.holdout_size, "Hold-out cases generated at iteration 0")->check(CLI::NonNegativeNumber)->capture_default_str();
  build->add_option("--eval-retries", acfg.eval.max_retries, "Extraction retries during evaluation")->check(CLI::Range(0, kMaxRetriesCap))->capture_default_str();
  build->add_flag("--no-relay", no_relay, "Skip building the relay program");
  build->add_option("--relay-pairs", relay_pairs, "Sample pairs for relay verification")->check(CLI::PositiveNumber)->capture_default_str();
  build->add_option("--out", out_dir, "Output directory")->required();

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "Extract attribute values from one document");
  std::string schema_path, input_path, relay_path, relay_user_schema, outcome_path;
  int max_retries = kDefaultMaxRetries;
  bool no_reflection = false;
  bool condition_check = false;
  extract_cmd->add_option("--schema", schema_path, "Schema file")->required();
  extract_cmd->add_option("--input", input_path, "Input file; stdin when absent or '-'");
  extract_cmd->add_option("--max-retries", max_retries, "Retry budget")->check(CLI::Range(0, kMaxRetriesCap))->capture_default_str();
  extract_cmd->add_flag("--no-reflection", no_reflection, "Retry with a generic note instead of reflection");
  extract_cmd->add_flag("--condition-check", condition_check, "Ask the model to judge condition fields");
  extract_cmd->add_option("--relay", relay_path, "Relay program; output in the original schema's format");
  extract_cmd->add_option("--user-schema", relay_user_schema, "Original schema, when the program does not embed it");
  extract_cmd->add_option("--outcome", outcome_path, "Write the full extraction outcome JSON here");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate extraction over a dataset");
  std::string dataset_path, format_name = "page-jsonl", report_path, ab, schema_b_path;
  EngineConfig ecfg;
  size_t limit = 0;
  eval->add_option("--dataset", dataset_path, "Dataset, JSON Lines")->required();
  eval->add_option("--format", format_name, "Dataset format")
      ->check(CLI::IsMember({"page-jsonl", "conversation-jsonl"}))
      ->capture_default_str();
  eval->add_option("--schema", schema_path, "Schema file")->required();
  eval->add_option("--max-retries", ecfg.max_retries, "Retry budget")->check(CLI::Range(0, kMaxRetriesCap))->capture_default_str();
  eval->add_flag("--no-reflection", no_reflection, "Retry with a generic note instead of reflection");
  eval->add_flag("--condition-check", condition_check, "Ask the model to judge condition fields");
  eval->add_option("--ab", ab, "Compare two configurations: reflection (on vs off) or schema (--schema vs --schema-b)")
      ->check(CLI::IsMember({"reflection", "schema"}));
  eval->add_option("--schema-b", schema_b_path, "Second schema for --ab schema");
  eval->add_option("--limit", limit, "Evaluate at most this many samples");
  eval->add_option("--workers", ecfg.workers, "Concurrent samples")->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--report", report_path, "Write the report JSON here");

  // relay-check
  auto* check = app.add_subcommand("relay-check", "Check a relay program against sample pairs");
  std::string pairs_path;
  check->add_option("--program", relay_path, "Relay program")->required();
  check->add_option("--pairs", pairs_path, "Sample pairs, JSON Lines")->required();
  check->add_option("--schema", schema_path, "Optimized schema")->required();
  check->add_option("--user-schema", relay_user_schema, "Original schema, when the program does not embed it");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  if (*eval && ab == "schema" && schema_b_path.empty()) {
    err << "error: --ab schema needs --schema-b\n";
    return kExitUsage;
  }

  try {
    // relay-check needs no backend.
    if (*check) {
      const SchemaDoc s_star = load_schema_file(schema_path);
      const RelayBundle relay = load_relay(relay_path, relay_user_schema, s_star);
      const std::vector<SamplePair> pairs = load_pairs(pairs_path);
      const auto failing = check_pairs(relay.program, pairs, relay.target);
      for (const PairCheck& f : failing) out << "FAIL pair " << f.index << ": " << f.problem << "\n";
      out << (pairs.size() - failing.size()) << "/" << pairs.size() << " pairs reproduced\n";
      return failing.empty() ? kExitOk : kExitFailure;
    }

    std::shared_ptr<ModelBackend> backend;
    try {
      backend = make_backend(bo);
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }

    if (*build) {
      std::optional<SchemaDoc> user_schema;
      if (!user_schema_path.empty()) user_schema = load_schema_file(user_schema_path);
      const std::vector<SeedSample> seeds = seeds_path.empty() ? std::vector<SeedSample>{} : load_seeds(seeds_path);
      std::filesystem::create_directories(out_dir);
      const auto path = [&](const char* name) { return (std::filesystem::path(out_dir) / name).string(); };
      OptimizeResult result = [&] {
        try {
          return optimize(user_schema, task, seeds, acfg, *backend);
        } catch (const ArchitectError& e) {
          write_file(path("refinement_state.json"), e.state().to_json().dump(2) + "\n");
          throw;
        }
      }();
      write_file(path("schema.json"), to_json(result.best).dump(2) + "\n");
      write_file(path("refinement_state.json"), result.state.to_json().dump(2) + "\n");
      if (!no_relay) {
        const SchemaDoc& target = user_schema ? *user_schema : result.state.iterations[0].schema;
        const TransformProgram program = build_relay(result.best, target, *backend, relay_pairs);
        write_file(path("relay_program.json"), program_bundle(program, target).dump(2) + "\n");
      }
      const Iteration& best = result.state.iterations[result.state.best_index];
      out << "best iteration " << result.state.best_index << " of " << result.state.iterations.size()
          << ", train accuracy " << best.train_accuracy << ", hold-out accuracy "
          << best.val_accuracy << ", refinements " << result.state.refinements_used << "\n";
      return kExitOk;
    }

    if (*extract_cmd) {
      const SchemaDoc schema = load_schema_file(schema_path);
      std::string source;
      if (input_path.empty() || input_path == "-") {
        std::stringstream ss;
        ss << in.rdbuf();
        source = ss.str();
      } else {
        source = read_file(input_path);
      }
      std::optional<RelayBundle> relay;
      if (!relay_path.empty()) relay = load_relay(relay_path, relay_user_schema, schema);
      ExtractionRequest req(source, schema);
      req.max_retries = max_retries;
      req.reflection_enabled = !no_reflection;
      req.llm_condition_check = condition_check;
      const ExtractionOutcome outcome = extract(req, *backend, condition_check ? backend.get() : nullptr);
      if (!outcome_path.empty()) write_file(outcome_path, to_json(outcome).dump(2) + "\n");
      for (const std::string& w : outcome.warnings) err << "warning: " << w << "\n";
      if (!outcome.ok()) {
        err << "extraction failed: " << outcome.failure->reason << "\n";
        return kExitFailure;
      }
      const Json values = relay ? apply_transform(relay->program, outcome.final->values, relay->target)
                                : outcome.final->values;
      out << values.dump(2) << "\n";
      return kExitOk;
    }

    if (*eval) {
      const SchemaDoc schema = load_schema_file(schema_path);
      DatasetSpec spec{*dataset_format_from_name(format_name), dataset_path, std::nullopt};
      if (limit > 0) spec.sample_cap = limit;
      const auto samples = load_dataset(spec, schema);
      ecfg.reflection_enabled = !no_reflection;
      ecfg.llm_condition_check = condition_check;
      ModelBackend* cond = condition_check ? backend.get() : nullptr;
      Json report_json;
      bool interrupted = false;
      if (ab.empty()) {
        const RunReport r = run_eval(samples, schema, ecfg, *backend, cond);
        out << r.summary();
        report_json = r.to_json();
        interrupted = r.interrupted.has_value();
      } else {
        EngineConfig a = ecfg;
        EngineConfig b = ecfg;
        SchemaDoc schema_b = schema;
        if (ab == "reflection") {
          a.name = "reflection-on";
          a.reflection_enabled = true;
          b.name = "reflection-off";
          b.reflection_enabled = false;
        } else {
          a.name = "schema-a";
          b.name = "schema-b";
          schema_b = load_schema_file(schema_b_path);
        }
        AbReport r{run_eval(samples, schema, a, *backend, cond),
                   run_eval(load_dataset(spec, schema_b), schema_b, b, *backend, cond)};
        out << r.summary();
        report_json = r.to_json();
        interrupted = r.a.interrupted || r.b.interrupted;
      }
      if (!report_path.empty()) write_file(report_path, report_json.dump(2) + "\n");
      return interrupted ? kExitFailure : kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const CliFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sift
