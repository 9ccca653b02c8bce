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


#include "sift/relay.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sift/candidate.h"
#include "sift/metrics.h"
#include "sift/prompts.h"
#include "sift/regex.h"
#include "sift/text.h"

namespace sift {
namespace {

constexpr const char* kStepGrammar = R"GRAMMAR(A program is a JSON object {"steps": [...]}. Steps run in order. The output
starts with every value whose path exists in both schemas; steps then add,
overwrite or drop values. Paths are JSON pointers through object properties.
  {"op":"rename","src":"/a","dst":"/b"}            same parent, new name
  {"op":"move","src":"/a/b","dst":"/c"}            copy a value to another path
  {"op":"concat","dst":"/p","template":"{/a}{/b|thousands} text"}
  {"op":"split_regex","src":"/m","pattern":"^(\\d{4}) (.+)$","groups":{"1":"/year","2":"/rest"}}
  {"op":"constant","dst":"/p","value":"literal"}
  {"op":"cast_number_to_string","src":"/n","dst":"/s","format":"thousands"}
  {"op":"drop","src":"/p"}                         remove a path from the output
Number formats: plain, thousands, fixed:N, thousands_fixed:N.)GRAMMAR";

const std::map<std::string, StepOp>& op_names() {
  static const std::map<std::string, StepOp> kNames = {
      {"rename", StepOp::kRename},
      {"move", StepOp::kMove},
      {"concat", StepOp::kConcat},
      {"split_regex", StepOp::kSplitRegex},
      {"constant", StepOp::kConstant},
      {"cast_number_to_string", StepOp::kCastNumberToString},
      {"drop", StepOp::kDrop},
  };
  return kNames;
}

std::string step_path(size_t i) { return "/steps/" + std::to_string(i); }

Error invalid(size_t i, const std::string& what) {
  return Error(ErrorCode::kProposalInvalid, step_path(i), what);
}

Error step_failure(size_t i, const std::string& what) {
  return Error(ErrorCode::kStepFailure, step_path(i), what);
}

// Spec reached from `root` through object properties only.
const AttributeSpec* object_path_spec(const AttributeSpec& root, const std::string& pointer) {
  if (pointer.empty() || pointer[0] != '/') return nullptr;
  const AttributeSpec* node = &root;
  for (const std::string& token : path_tokens(pointer)) {
    if (node->kind != Kind::kObject) return nullptr;
    node = node->property(token);
    if (!node) return nullptr;
  }
  return node;
}

const Json* get_path(const Json& tree, const std::string& pointer) {
  const Json* node = &tree;
  for (const std::string& token : path_tokens(pointer)) {
    if (!node->is_object()) return nullptr;
    auto it = node->find(token);
    if (it == node->end()) return nullptr;
    node = &*it;
  }
  return node;
}

Json* get_path_mut(Json& tree, const std::string& pointer) {
  Json* node = &tree;
  for (const std::string& token : path_tokens(pointer)) {
    if (!node->is_object()) return nullptr;
    auto it = node->find(token);
    if (it == node->end()) return nullptr;
    node = &*it;
  }
  return node;
}

void set_path(Json& tree, const std::string& pointer, Json value) {
  Json* node = &tree;
  const auto tokens = path_tokens(pointer);
  for (size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (!node->is_object()) *node = Json::object();
    node = &(*node)[tokens[i]];
  }
  if (!node->is_object()) *node = Json::object();
  (*node)[tokens.back()] = std::move(value);
}

void erase_path(Json& tree, const std::string& pointer) {
  const auto tokens = path_tokens(pointer);
  const std::string parent = pointer.substr(0, pointer.rfind('/'));
  Json* node = parent.empty() ? &tree : get_path_mut(tree, parent);
  if (node && node->is_object()) node->erase(tokens.back());
}

bool has_value(const Json& tree, const std::string& pointer) {
  const Json* v = get_path(tree, pointer);
  return v && !v->is_null();
}

// Writes a missing source as null unless the target already has a value.
void write(Json& out, const std::string& dst, const Json* value) {
  if (value && !value->is_null()) {
    set_path(out, dst, *value);
  } else if (!has_value(out, dst)) {
    set_path(out, dst, nullptr);
  }
}

void pass_through(const Json& value, const AttributeSpec& user_node, Json& out) {
  for (const auto& [key, child] : value.items()) {
    const AttributeSpec* spec = user_node.property(key);
    if (!spec) continue;
    if (spec->kind == Kind::kObject && child.is_object()) {
      Json sub = Json::object();
      pass_through(child, *spec, sub);
      out[key] = std::move(sub);
    } else if (!find_shape_violation(child, *spec)) {
      out[key] = child;
    }
  }
}

bool valid_format(const std::string& f) {
  if (f == "plain" || f == "thousands") return true;
  for (const char* prefix : {"fixed:", "thousands_fixed:"}) {
    const std::string p = prefix;
    if (f.rfind(p, 0) == 0 && f.size() > p.size() && f.size() <= p.size() + 2) {
      bool digits = true;
      for (size_t i = p.size(); i < f.size(); ++i) digits = digits && std::isdigit(static_cast<unsigned char>(f[i]));
      if (digits) return true;
    }
  }
  return false;
}

std::string group_thousands(const std::string& plain) {
  size_t start = plain[0] == '-' ? 1 : 0;
  size_t end = plain.find('.');
  if (end == std::string::npos) end = plain.size();
  std::string out = plain.substr(0, start);
  for (size_t i = start; i < end; ++i) {
    if (i > start && (end - i) % 3 == 0) out += ',';
    out += plain[i];
  }
  return out + plain.substr(end);
}

struct Placeholder {
  std::string path;
  std::string format;
};

// Literal segments and placeholders of a concat template, alternating.
void parse_template(const std::string& tmpl, std::vector<std::string>& literals,
                    std::vector<Placeholder>& holes, size_t step) {
  literals.assign(1, "");
  holes.clear();
  for (size_t i = 0; i < tmpl.size(); ++i) {
    const char c = tmpl[i];
    if ((c == '{' || c == '}') && i + 1 < tmpl.size() && tmpl[i + 1] == c) {
      literals.back() += c;
      ++i;
    } else if (c == '{') {
      const size_t close = tmpl.find('}', i);
      if (close == std::string::npos) throw invalid(step, "unclosed placeholder in template");
      const std::string body = tmpl.substr(i + 1, close - i - 1);
      const size_t bar = body.find('|');
      holes.push_back({body.substr(0, bar), bar == std::string::npos ? "plain" : body.substr(bar + 1)});
      literals.emplace_back();
      i = close;
    } else if (c == '}') {
      throw invalid(step, "stray '}' in template");
    } else {
      literals.back() += c;
    }
  }
}

std::string scalar_text(const Json& v, const std::string& format, size_t step) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return format_number(v, format);
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  throw step_failure(step, "cannot render a " + std::string(v.type_name()) + " as text");
}

std::string extract_program_json(const std::string& response) {
  const auto block = prompts::tagged_block(response, "transform_program", true);
  const auto object = prompts::first_json_object(block ? *block : response);
  if (!object) throw Error(ErrorCode::kProposalInvalid, "", "no JSON program in the answer");
  return *object;
}

TransformProgram parse_proposal(const std::string& response, const SchemaDoc& s_star,
                                const SchemaDoc& s_user) {
  Json doc;
  try {
    doc = Json::parse(extract_program_json(response));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kProposalInvalid, "", e.what());
  }
  TransformProgram p = program_from_json(doc);
  p.source_schema = s_star.version_tag();
  p.target_schema = s_user.version_tag();
  validate_program(p, s_star, s_user);
  return p;
}

std::string call(ModelBackend& backend, const std::string& prompt) {
  try {
    return backend.complete(user_request(prompt)).text;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTransport) {
      throw Error(ErrorCode::kBackendUnavailable, e.path(), e.detail());
    }
    throw;
  }
}

std::string render_repair_prompt(const SchemaDoc& s_star, const SchemaDoc& s_user,
                                 const TransformProgram& program, const std::string& program_error,
                                 const std::vector<SamplePair>& pairs,
                                 const std::vector<PairCheck>& failing) {
  std::ostringstream p;
  p << render_proposal_prompt(s_star, s_user, pairs) << "\n\nYour previous program:\n"
    << "<transform_program>" << canonical_dump(to_json(program)) << "</transform_program>\n";
  if (!program_error.empty()) {
    p << "It was rejected: " << program_error << "\n";
  } else {
    p << "It failed verification on these pairs:\n";
    for (const PairCheck& f : failing) {
      p << "pair " << f.index << ": expected "
        << canonical_dump(pairs[f.index].expected_original) << ", got "
        << (f.actual ? canonical_dump(*f.actual) : std::string("no output")) << " (" << f.problem
        << ")\n";
    }
  }
  p << "Return the corrected program in <transform_program></transform_program> tags.";
  return p.str();
}

}  // namespace

std::string_view step_op_name(StepOp op) {
  for (const auto& [name, value] : op_names()) {
    if (value == op) return name;
  }
  return "";
}

Json to_json(const TransformStep& s) {
  Json j = {{"op", std::string(step_op_name(s.op))}};
  switch (s.op) {
    case StepOp::kRename:
    case StepOp::kMove:
      j["src"] = s.src;
      j["dst"] = s.dst;
      break;
    case StepOp::kConcat:
      j["dst"] = s.dst;
      j["template"] = s.tmpl;
      break;
    case StepOp::kSplitRegex: {
      j["src"] = s.src;
      j["pattern"] = s.pattern;
      Json groups = Json::object();
      for (const auto& [g, dst] : s.groups) groups[std::to_string(g)] = dst;
      j["groups"] = groups;
      break;
    }
    case StepOp::kConstant:
      j["dst"] = s.dst;
      j["value"] = s.literal;
      break;
    case StepOp::kCastNumberToString:
      j["src"] = s.src;
      j["dst"] = s.dst;
      j["format"] = s.format;
      break;
    case StepOp::kDrop:
      j["src"] = s.src;
      break;
  }
  return j;
}

Json to_json(const TransformProgram& p) {
  Json steps = Json::array();
  for (const TransformStep& s : p.steps) steps.push_back(to_json(s));
  return {{"source_schema", p.source_schema},
          {"target_schema", p.target_schema},
          {"steps", std::move(steps)}};
}

TransformProgram program_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("steps") || !doc["steps"].is_array()) {
    throw Error(ErrorCode::kProposalInvalid, "", "program must be an object with a steps array");
  }
  TransformProgram p;
  p.source_schema = doc.value("source_schema", "");
  p.target_schema = doc.value("target_schema", "");
  const Json& steps = doc["steps"];
  for (size_t i = 0; i < steps.size(); ++i) {
    const Json& j = steps[i];
    const auto text = [&](const char* key) {
      if (!j.contains(key) || !j[key].is_string()) {
        throw invalid(i, std::string("missing string field \"") + key + "\"");
      }
      return j[key].get<std::string>();
    };
    if (!j.is_object()) throw invalid(i, "step must be an object");
    const auto op = op_names().find(j.value("op", ""));
    if (op == op_names().end()) throw invalid(i, "unknown op " + j.value("op", std::string("(none)")));
    TransformStep s;
    s.op = op->second;
    switch (s.op) {
      case StepOp::kRename:
      case StepOp::kMove:
        s.src = text("src");
        s.dst = text("dst");
        break;
      case StepOp::kConcat:
        s.dst = text("dst");
        s.tmpl = text("template");
        break;
      case StepOp::kSplitRegex:
        s.src = text("src");
        s.pattern = text("pattern");
        if (!j.contains("groups") || !j["groups"].is_object()) throw invalid(i, "missing groups object");
        for (const auto& [g, dst] : j["groups"].items()) {
          int n = 0;
          try {
            size_t used = 0;
            n = std::stoi(g, &used);
            if (used != g.size() || n < 1) throw std::invalid_argument(g);
          } catch (const std::exception&) {
            throw invalid(i, "group key \"" + g + "\" is not a positive integer");
          }
          if (!dst.is_string()) throw invalid(i, "group target must be a path");
          s.groups[n] = dst.get<std::string>();
        }
        break;
      case StepOp::kConstant:
        s.dst = text("dst");
        if (!j.contains("value")) throw invalid(i, "missing field \"value\"");
        s.literal = j["value"];
        break;
      case StepOp::kCastNumberToString:
        s.src = text("src");
        s.dst = text("dst");
        s.format = j.value("format", "plain");
        break;
      case StepOp::kDrop:
        s.src = text("src");
        break;
    }
    p.steps.push_back(std::move(s));
  }
  return p;
}

TransformProgram load_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMalformedDocument, path, "cannot open program file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return program_from_json(Json::parse(ss.str()));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedDocument, path, e.what());
  }
}

void validate_program(const TransformProgram& program, const SchemaDoc& s_star,
                      const SchemaDoc& s_user) {
  const auto src_ok = [&](size_t i, const std::string& path) {
    if (!object_path_spec(s_star.root(), path)) throw invalid(i, "unknown source path " + path);
  };
  const auto dst_ok = [&](size_t i, const std::string& path) {
    if (!object_path_spec(s_user.root(), path)) throw invalid(i, "unknown target path " + path);
  };
  for (size_t i = 0; i < program.steps.size(); ++i) {
    const TransformStep& s = program.steps[i];
    switch (s.op) {
      case StepOp::kRename:
        src_ok(i, s.src);
        dst_ok(i, s.dst);
        if (s.src.substr(0, s.src.rfind('/')) != s.dst.substr(0, s.dst.rfind('/'))) {
          throw invalid(i, "rename must keep the parent path; use move");
        }
        break;
      case StepOp::kMove:
        src_ok(i, s.src);
        dst_ok(i, s.dst);
        break;
      case StepOp::kConcat: {
        dst_ok(i, s.dst);
        std::vector<std::string> literals;
        std::vector<Placeholder> holes;
        parse_template(s.tmpl, literals, holes, i);
        for (const Placeholder& h : holes) {
          src_ok(i, h.path);
          if (!valid_format(h.format)) throw invalid(i, "unknown number format " + h.format);
        }
        break;
      }
      case StepOp::kSplitRegex: {
        src_ok(i, s.src);
        int count = 0;
        try {
          count = Regex::compile(s.pattern).group_count();
        } catch (const RegexError& e) {
          throw invalid(i, std::string("bad pattern: ") + e.what());
        }
        if (s.groups.empty()) throw invalid(i, "no groups mapped");
        for (const auto& [g, dst] : s.groups) {
          if (g > count) throw invalid(i, "pattern has no group " + std::to_string(g));
          dst_ok(i, dst);
        }
        break;
      }
      case StepOp::kConstant:
        dst_ok(i, s.dst);
        break;
      case StepOp::kCastNumberToString:
        src_ok(i, s.src);
        dst_ok(i, s.dst);
        if (!valid_format(s.format)) throw invalid(i, "unknown number format " + s.format);
        break;
      case StepOp::kDrop:
        dst_ok(i, s.src);
        break;
    }
  }
}

std::string format_number(const Json& number, const std::string& format) {
  const double d = number.get<double>();
  std::string plain;
  const size_t colon = format.find(':');
  if (colon != std::string::npos) {
    const int digits = std::stoi(format.substr(colon + 1));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, d);
    plain = buf;
  } else if (number.is_number_integer()) {
    plain = number.dump();
  } else if (std::floor(d) == d && std::fabs(d) < 1e15) {
    plain = std::to_string(static_cast<long long>(d));
  } else {
    plain = Json(d).dump();
  }
  return format.rfind("thousands", 0) == 0 ? group_thousands(plain) : plain;
}

Json apply_transform(const TransformProgram& program, const Json& value, const SchemaDoc& s_user) {
  Json out = Json::object();
  if (value.is_object()) pass_through(value, s_user.root(), out);
  for (size_t i = 0; i < program.steps.size(); ++i) {
    const TransformStep& s = program.steps[i];
    switch (s.op) {
      case StepOp::kRename:
      case StepOp::kMove:
        write(out, s.dst, get_path(value, s.src));
        break;
      case StepOp::kConcat: {
        std::vector<std::string> literals;
        std::vector<Placeholder> holes;
        parse_template(s.tmpl, literals, holes, i);
        std::string text = literals[0];
        bool complete = true;
        for (size_t h = 0; h < holes.size(); ++h) {
          const Json* v = get_path(value, holes[h].path);
          if (!v || v->is_null()) {
            complete = false;
            break;
          }
          text += scalar_text(*v, holes[h].format, i) + literals[h + 1];
        }
        const Json result = complete ? Json(text) : Json(nullptr);
        write(out, s.dst, &result);
        break;
      }
      case StepOp::kSplitRegex: {
        const Json* v = get_path(value, s.src);
        if (!v || v->is_null()) {
          for (const auto& [g, dst] : s.groups) write(out, dst, nullptr);
          break;
        }
        if (!v->is_string()) throw step_failure(i, s.src + " is not a string");
        const auto groups = Regex::compile(s.pattern).full_match_groups(v->get<std::string>());
        if (!groups) throw step_failure(i, s.src + " does not match " + s.pattern);
        for (const auto& [g, dst] : s.groups) {
          const auto& part = (*groups)[static_cast<size_t>(g)];
          const Json j = part ? Json(*part) : Json(nullptr);
          write(out, dst, &j);
        }
        break;
      }
      case StepOp::kConstant:
        set_path(out, s.dst, s.literal);
        break;
      case StepOp::kCastNumberToString: {
        const Json* v = get_path(value, s.src);
        if (v && v->is_string()) {
          write(out, s.dst, v);
        } else if (v && v->is_number()) {
          const Json j = format_number(*v, s.format);
          write(out, s.dst, &j);
        } else if (!v || v->is_null()) {
          write(out, s.dst, nullptr);
        } else {
          throw step_failure(i, s.src + " is not a number");
        }
        break;
      }
      case StepOp::kDrop:
        erase_path(out, s.src);
        break;
    }
  }
  if (const auto why = find_shape_violation(out, s_user.root())) {
    throw Error(ErrorCode::kStepFailure, "/result", *why);
  }
  return out;
}

Json to_json(const SamplePair& pair) {
  return {{"optimized_output", pair.optimized_output},
          {"expected_original", pair.expected_original}};
}

std::vector<SamplePair> load_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMalformedDocument, path, "cannot open pairs file");
  std::vector<SamplePair> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const Json j = Json::parse(line);
      out.push_back({j.at("optimized_output"), j.at("expected_original")});
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kLineParseError, "line " + std::to_string(line_no), e.what());
    }
  }
  return out;
}

std::string render_pairs_prompt(const SchemaDoc& s_star, const SchemaDoc& s_user, int n, int round) {
  std::ostringstream p;
  p << "Generate sample data pairs for testing a transformation between two JSON schemas.\n"
    << "Optimized schema: " << canonical_serialize(s_star) << "\n"
    << "Original schema: " << canonical_serialize(s_user) << "\n"
    << "For each pair write a value for the optimized schema and the value the original "
       "schema would hold for the same input:\n"
    << "<pair>\n<optimized>{...}</optimized>\n<original>{...}</original>\n</pair>\n"
    << "Generate at least " << n << " diverse pairs.";
  if (round > 0) p << "\nGeneration round " << round + 1 << ": produce pairs that differ from the earlier rounds.";
  return p.str();
}

std::string render_proposal_prompt(const SchemaDoc& s_star, const SchemaDoc& s_user,
                                   const std::vector<SamplePair>& pairs) {
  Json arr = Json::array();
  for (const SamplePair& pair : pairs) arr.push_back(to_json(pair));
  std::ostringstream p;
  p << "Write a transform program that maps outputs of the optimized schema to the original "
       "schema format.\n"
    << "Optimized schema: " << canonical_serialize(s_star) << "\n"
    << "Original schema: " << canonical_serialize(s_user) << "\n"
    << kStepGrammar << "\n"
    << "Sample pairs: " << canonical_dump(arr) << "\n"
    << "Return the program in <transform_program></transform_program> tags.";
  return p.str();
}

std::vector<SamplePair> generate_sample_pairs(const SchemaDoc& s_star, const SchemaDoc& s_user,
                                              ModelBackend& backend, int n, int max_rounds,
                                              PairStats* stats_out) {
  if (n < 1) throw Error(ErrorCode::kPrecondition, "", "n must be at least 1");
  PairStats stats;
  std::vector<SamplePair> pairs;
  for (int round = 0; round < max_rounds && static_cast<int>(pairs.size()) < n; ++round) {
    ++stats.rounds;
    const std::string response = call(backend, render_pairs_prompt(s_star, s_user, n, round));
    size_t pos = 0;
    while ((pos = response.find("<pair>", pos)) != std::string::npos) {
      size_t end = response.find("</pair>", pos);
      if (end == std::string::npos) end = response.size();
      const std::string block = response.substr(pos, end - pos);
      pos = end;
      try {
        const auto opt = prompts::tagged_block(block, "optimized");
        const auto orig = prompts::tagged_block(block, "original");
        if (!opt || !orig) throw std::invalid_argument("missing tags");
        SamplePair pair{Json::parse(*opt), Json::parse(*orig)};
        check_shape(pair.optimized_output, s_star);
        check_shape(pair.expected_original, s_user);
        pairs.push_back(std::move(pair));
      } catch (const std::exception&) {
        ++stats.skipped;
      }
    }
  }
  if (stats_out) *stats_out = stats;
  if (static_cast<int>(pairs.size()) < n) {
    throw Error(ErrorCode::kInsufficientPairs, "",
                std::to_string(pairs.size()) + " valid pair(s) after " +
                    std::to_string(stats.rounds) + " round(s), " + std::to_string(n) + " needed");
  }
  pairs.resize(static_cast<size_t>(n));
  return pairs;
}

TransformProgram propose_transform(const SchemaDoc& s_star, const SchemaDoc& s_user,
                                   const std::vector<SamplePair>& pairs, ModelBackend& backend) {
  if (pairs.empty()) throw Error(ErrorCode::kPrecondition, "", "at least one sample pair is needed");
  if (s_star == s_user) return {{}, s_star.version_tag(), s_user.version_tag()};
  return parse_proposal(call(backend, render_proposal_prompt(s_star, s_user, pairs)), s_star, s_user);
}

std::vector<PairCheck> check_pairs(const TransformProgram& program,
                                   const std::vector<SamplePair>& pairs, const SchemaDoc& s_user) {
  std::vector<PairCheck> failing;
  for (size_t i = 0; i < pairs.size(); ++i) {
    PairCheck c{i, std::nullopt, ""};
    try {
      c.actual = apply_transform(program, pairs[i].optimized_output, s_user);
    } catch (const Error& e) {
      c.problem = e.what();
      failing.push_back(std::move(c));
      continue;
    }
    const CompareResult r = strict_compare(pairs[i].expected_original, *c.actual, s_user);
    for (const auto& [path, status] : r.per_field) {
      if (status == FieldStatus::kMatch) continue;
      if (!c.problem.empty()) c.problem += ", ";
      c.problem += std::string(field_status_name(status)) + " at " + path;
    }
    if (!c.problem.empty()) failing.push_back(std::move(c));
  }
  return failing;
}

TransformProgram verify_and_repair(const TransformProgram& program, const SchemaDoc& s_star,
                                   const SchemaDoc& s_user, const std::vector<SamplePair>& pairs,
                                   ModelBackend& backend, int max_rounds) {
  if (pairs.empty()) throw Error(ErrorCode::kPrecondition, "", "at least one sample pair is needed");
  TransformProgram current = program;
  std::string program_error;
  try {
    validate_program(current, s_star, s_user);
  } catch (const Error& e) {
    program_error = e.what();
  }
  for (int round = 0;; ++round) {
    std::vector<PairCheck> failing;
    if (program_error.empty()) {
      failing = check_pairs(current, pairs, s_user);
      if (failing.empty()) return current;
    }
    if (round >= max_rounds) {
      std::string detail = program_error.empty()
                               ? std::to_string(failing.size()) + " of " +
                                     std::to_string(pairs.size()) + " pair(s) still fail"
                               : "program invalid: " + program_error;
      detail += " after " + std::to_string(round) + " repair round(s)";
      for (const PairCheck& f : failing) detail += "; pair " + std::to_string(f.index) + ": " + f.problem;
      throw Error(ErrorCode::kVerificationFailed, "", detail);
    }
    const std::string response = call(
        backend, render_repair_prompt(s_star, s_user, current, program_error, pairs, failing));
    program_error.clear();
    try {
      current = parse_proposal(response, s_star, s_user);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kProposalInvalid) throw;
      program_error = e.what();
    }
  }
}

TransformProgram build_relay(const SchemaDoc& s_star, const SchemaDoc& s_user, ModelBackend& backend,
                             int n_pairs, int max_rounds) {
  if (s_star == s_user) return {{}, s_star.version_tag(), s_user.version_tag()};
  const std::vector<SamplePair> pairs = generate_sample_pairs(s_star, s_user, backend, n_pairs);
  TransformProgram proposal;
  proposal.source_schema = s_star.version_tag();
  proposal.target_schema = s_user.version_tag();
  try {
    proposal = propose_transform(s_star, s_user, pairs, backend);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kProposalInvalid) throw;
    // An empty program fails verification, so the repair loop re-prompts.
  }
  return verify_and_repair(proposal, s_star, s_user, pairs, backend, max_rounds);
}

}  // namespace sift
