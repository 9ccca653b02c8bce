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

#include "sift/schema.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>

#include "sift/dates.h"
#include "sift/error.h"
#include "sift/text.h"

namespace sift {

std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::kString: return "string";
    case Kind::kNumber: return "number";
    case Kind::kInteger: return "integer";
    case Kind::kBoolean: return "boolean";
    case Kind::kObject: return "object";
    case Kind::kArray: return "array";
  }
  return "string";
}

AttributeSpec::AttributeSpec(const AttributeSpec& other)
    : name(other.name),
      kind(other.kind),
      description(other.description),
      title(other.title),
      display_name(other.display_name),
      enum_values(other.enum_values),
      pattern(other.pattern),
      min_length(other.min_length),
      max_length(other.max_length),
      condition(other.condition),
      date_spec(other.date_spec),
      properties(other.properties),
      required(other.required),
      items_(other.items_ ? std::make_unique<AttributeSpec>(*other.items_) : nullptr),
      compiled_(other.compiled_) {}

AttributeSpec& AttributeSpec::operator=(const AttributeSpec& other) {
  if (this != &other) {
    AttributeSpec copy(other);
    *this = std::move(copy);
  }
  return *this;
}

void AttributeSpec::set_items(AttributeSpec spec) {
  items_ = std::make_unique<AttributeSpec>(std::move(spec));
}

const AttributeSpec* AttributeSpec::property(std::string_view key) const {
  auto it = std::lower_bound(
      properties.begin(), properties.end(), key,
      [](const AttributeSpec& a, std::string_view k) { return a.name < k; });
  if (it == properties.end() || it->name != key) return nullptr;
  return &*it;
}

bool AttributeSpec::is_required(std::string_view key) const {
  return std::binary_search(required.begin(), required.end(), key);
}

bool operator==(const AttributeSpec& a, const AttributeSpec& b) {
  if (a.name != b.name || a.kind != b.kind || a.description != b.description ||
      a.title != b.title || a.display_name != b.display_name ||
      a.enum_values != b.enum_values || a.pattern != b.pattern ||
      a.min_length != b.min_length || a.max_length != b.max_length ||
      a.condition != b.condition || a.date_spec != b.date_spec ||
      a.properties != b.properties || a.required != b.required) {
    return false;
  }
  if (!a.items_ || !b.items_) return !a.items_ && !b.items_;
  return *a.items_ == *b.items_;
}

SchemaDoc SchemaDoc::with_task_hint(std::string hint) const {
  SchemaDoc copy = *this;
  copy.task_hint_ = std::move(hint);
  return copy;
}

bool is_forbidden_key(std::string_view key) {
  std::string lower;
  for (char c : key) {
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return lower == "if" || lower == "else" || lower == "anyof" || lower == "allof";
}

std::string path_join(std::string_view base, std::string_view token) {
  std::string out(base == "/" ? "" : base);
  out.push_back('/');
  for (char c : token) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string path_join(std::string_view base, size_t index) {
  return path_join(base, std::to_string(index));
}

std::vector<std::string> path_tokens(std::string_view pointer) {
  std::vector<std::string> tokens;
  if (pointer.empty() || pointer == "/") return tokens;
  size_t i = pointer.front() == '/' ? 1 : 0;
  std::string cur;
  for (; i <= pointer.size(); ++i) {
    if (i == pointer.size() || pointer[i] == '/') {
      tokens.push_back(cur);
      cur.clear();
    } else if (pointer[i] == '~' && i + 1 < pointer.size()) {
      cur.push_back(pointer[i + 1] == '1' ? '/' : '~');
      ++i;
    } else {
      cur.push_back(pointer[i]);
    }
  }
  return tokens;
}

std::string stable_hash(std::string_view bytes) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string canonical_dump(const Json& value) {
  return value.dump(-1, ' ', false, Json::error_handler_t::replace);
}

Json to_json(const AttributeSpec& spec) {
  Json j = Json::object();
  j["type"] = std::string(kind_name(spec.kind));
  if (spec.display_name) j["name"] = *spec.display_name;
  if (spec.description) j["description"] = *spec.description;
  if (spec.title) j["title"] = *spec.title;
  if (spec.enum_values) j["enum"] = *spec.enum_values;
  if (spec.pattern) j["pattern"] = *spec.pattern;
  if (spec.min_length) j["minLength"] = *spec.min_length;
  if (spec.max_length) j["maxLength"] = *spec.max_length;
  if (spec.condition) j["condition"] = *spec.condition;
  if (spec.date_spec) {
    j["allowed_date_formats"] = spec.date_spec->allowed_formats;
    j["delimiter"] = spec.date_spec->delimiter;
  }
  if (spec.kind == Kind::kObject) {
    Json props = Json::object();
    for (const AttributeSpec& child : spec.properties) props[child.name] = to_json(child);
    j["properties"] = std::move(props);
    if (!spec.required.empty()) j["required"] = spec.required;
  }
  if (spec.items()) j["items"] = to_json(*spec.items());
  return j;
}

std::string canonical_serialize(const SchemaDoc& schema) {
  return canonical_dump(to_json(schema));
}

class SchemaParser {
 public:
  static SchemaDoc parse(const Json& doc) {
    find_forbidden(doc, "");
    AttributeSpec root = parse_node(doc, "", "");
    if (root.kind != Kind::kObject) {
      throw Error(ErrorCode::kInvalidSchema, "", "root must be an object");
    }
    SchemaDoc out;
    out.root_ = std::make_shared<const AttributeSpec>(std::move(root));
    out.version_tag_ = stable_hash(canonical_dump(to_json(*out.root_)));
    return out;
  }

 private:
  static void find_forbidden(const Json& node, const std::string& path) {
    if (node.is_object()) {
      for (const auto& [key, value] : node.items()) {
        if (is_forbidden_key(key)) throw Error(ErrorCode::kForbiddenKey, path, key);
      }
      for (const auto& [key, value] : node.items()) {
        find_forbidden(value, path_join(path, key));
      }
    } else if (node.is_array()) {
      for (size_t i = 0; i < node.size(); ++i) find_forbidden(node[i], path_join(path, i));
    }
  }

  static const std::string& require_string(const Json& v, const std::string& path,
                                           std::string_view key) {
    if (!v.is_string()) {
      throw Error(ErrorCode::kInvalidSchema, path, std::string(key) + " must be a string");
    }
    return v.get_ref<const std::string&>();
  }

  static int64_t require_length(const Json& v, const std::string& path, std::string_view key) {
    if (!v.is_number()) {
      throw Error(ErrorCode::kInvalidSchema, path, std::string(key) + " must be a number");
    }
    const double d = v.get<double>();
    if (d < 0) {
      throw Error(ErrorCode::kInvalidBounds, path, std::string(key) + " is negative");
    }
    if (v.is_number_float() && d != static_cast<double>(static_cast<int64_t>(d))) {
      throw Error(ErrorCode::kInvalidSchema, path, std::string(key) + " must be an integer");
    }
    return static_cast<int64_t>(d);
  }

  static Kind parse_kind(const Json& v, const std::string& path) {
    const std::string& s = require_string(v, path, "type");
    static constexpr std::array<std::pair<std::string_view, Kind>, 6> kKinds = {{
        {"string", Kind::kString},
        {"number", Kind::kNumber},
        {"integer", Kind::kInteger},
        {"boolean", Kind::kBoolean},
        {"object", Kind::kObject},
        {"array", Kind::kArray},
    }};
    for (const auto& [name, kind] : kKinds) {
      if (s == name) return kind;
    }
    throw Error(ErrorCode::kInvalidSchema, path, "unsupported type \"" + s + "\"");
  }

  static AttributeSpec parse_node(const Json& node, const std::string& path,
                                  const std::string& name) {
    if (!node.is_object()) {
      throw Error(ErrorCode::kInvalidSchema, path, "attribute must be a JSON object");
    }
    static const std::set<std::string, std::less<>> kAllowed = {
        "name", "description", "type", "enum", "properties", "title", "pattern",
        "minLength", "maxLength", "condition", "required", "items",
        "allowed_date_formats", "delimiter"};
    for (const auto& [key, value] : node.items()) {
      if (!kAllowed.contains(key)) throw Error(ErrorCode::kUnknownKey, path, key);
    }

    AttributeSpec spec;
    spec.name = name;
    if (node.contains("type")) {
      spec.kind = parse_kind(node["type"], path);
    } else if (node.contains("properties")) {
      spec.kind = Kind::kObject;
    } else if (node.contains("items")) {
      spec.kind = Kind::kArray;
    }

    if (node.contains("name")) spec.display_name = require_string(node["name"], path, "name");
    if (node.contains("description")) {
      spec.description = require_string(node["description"], path, "description");
    }
    if (node.contains("title")) spec.title = require_string(node["title"], path, "title");
    if (node.contains("condition")) {
      spec.condition = require_string(node["condition"], path, "condition");
    }

    if (node.contains("pattern")) {
      spec.pattern = require_string(node["pattern"], path, "pattern");
      try {
        spec.compiled_ = std::make_shared<const Regex>(Regex::compile(*spec.pattern));
      } catch (const RegexError& e) {
        throw Error(ErrorCode::kInvalidPattern, path, e.what());
      }
    }

    if (node.contains("minLength")) spec.min_length = require_length(node["minLength"], path, "minLength");
    if (node.contains("maxLength")) spec.max_length = require_length(node["maxLength"], path, "maxLength");
    if (spec.min_length && spec.max_length && *spec.min_length > *spec.max_length) {
      throw Error(ErrorCode::kInvalidBounds, path, "minLength exceeds maxLength");
    }

    if (node.contains("enum")) {
      const Json& e = node["enum"];
      if (!e.is_array() || e.empty()) {
        throw Error(ErrorCode::kInvalidSchema, path, "enum must be a non-empty array");
      }
      std::vector<Json> values;
      for (const Json& v : e) {
        if (std::find(values.begin(), values.end(), v) != values.end()) {
          throw Error(ErrorCode::kInvalidSchema, path, "enum has duplicate value " + v.dump());
        }
        values.push_back(v);
      }
      spec.enum_values = std::move(values);
    }

    parse_date_spec(node, path, spec);

    if (node.contains("properties")) {
      if (spec.kind != Kind::kObject) {
        throw Error(ErrorCode::kInvalidSchema, path, "properties on a non-object attribute");
      }
      const Json& props = node["properties"];
      if (!props.is_object()) {
        throw Error(ErrorCode::kInvalidSchema, path, "properties must be an object");
      }
      const std::string props_path = path_join(path, "properties");
      for (const auto& [key, value] : props.items()) {
        if (key.empty()) throw Error(ErrorCode::kInvalidSchema, props_path, "empty property name");
        spec.properties.push_back(parse_node(value, path_join(props_path, key), key));
      }
    }

    if (node.contains("required")) {
      const Json& req = node["required"];
      if (!req.is_array()) throw Error(ErrorCode::kInvalidSchema, path, "required must be an array");
      if (spec.kind != Kind::kObject && !req.empty()) {
        throw Error(ErrorCode::kInvalidSchema, path, "required on a non-object attribute");
      }
      for (const Json& r : req) {
        const std::string& key = require_string(r, path, "required entry");
        if (!spec.property(key)) {
          throw Error(ErrorCode::kInvalidSchema, path,
                      "required names unknown property \"" + key + "\"");
        }
        spec.required.push_back(key);
      }
      std::sort(spec.required.begin(), spec.required.end());
      spec.required.erase(std::unique(spec.required.begin(), spec.required.end()),
                          spec.required.end());
    }

    if (node.contains("items")) {
      if (spec.kind != Kind::kArray) {
        throw Error(ErrorCode::kInvalidSchema, path, "items on a non-array attribute");
      }
      spec.set_items(parse_node(node["items"], path_join(path, "items"), ""));
    } else if (spec.kind == Kind::kArray) {
      throw Error(ErrorCode::kInvalidSchema, path, "array attribute needs items");
    }
    return spec;
  }

  static void parse_date_spec(const Json& node, const std::string& path, AttributeSpec& spec) {
    const bool has_formats = node.contains("allowed_date_formats");
    const bool has_delim = node.contains("delimiter");
    if (!has_formats && !has_delim) return;
    if (has_formats != has_delim) {
      throw Error(ErrorCode::kInvalidSchema, path,
                  "allowed_date_formats and delimiter must appear together");
    }
    if (spec.kind != Kind::kString) {
      throw Error(ErrorCode::kInvalidSchema, path, "date formats on a non-string attribute");
    }
    DateSpec date;
    date.delimiter = require_string(node["delimiter"], path, "delimiter");
    if (text::utf8_decode(date.delimiter).size() != 1) {
      throw Error(ErrorCode::kInvalidSchema, path, "delimiter must be a single character");
    }
    const Json& formats = node["allowed_date_formats"];
    if (!formats.is_array() || formats.empty()) {
      throw Error(ErrorCode::kInvalidSchema, path,
                  "allowed_date_formats must be a non-empty array");
    }
    for (const Json& f : formats) {
      const std::string& fmt = require_string(f, path, "date format");
      if (!dates::parse_format(fmt, date.delimiter)) {
        throw Error(ErrorCode::kInvalidSchema, path, "unsupported date format \"" + fmt + "\"");
      }
      date.allowed_formats.push_back(fmt);
    }
    spec.date_spec = std::move(date);
  }
};

SchemaDoc schema_from_json(const Json& doc) { return SchemaParser::parse(doc); }

SchemaDoc parse_schema(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedDocument, "", e.what());
  }
  return SchemaParser::parse(doc);
}

SchemaDoc make_schema(const AttributeSpec& root) { return SchemaParser::parse(to_json(root)); }

}  // namespace sift
