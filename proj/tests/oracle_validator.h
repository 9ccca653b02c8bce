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

#ifndef SIFT_TESTS_ORACLE_VALIDATOR_H_
#define SIFT_TESTS_ORACLE_VALIDATOR_H_

// Brute-force reference validator. Works on raw schema JSON with
// std::regex and ASCII-only text handling; shares no code with the library.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <regex>
#include <string>
#include <tuple>
#include <vector>

#include "nlohmann/json.hpp"

namespace sift::testing {

using OracleFinding = std::tuple<std::string, std::string, std::string>;  // stage, path, code

class OracleValidator {
 public:
  OracleValidator(const nlohmann::json& schema, std::string source)
      : schema_(schema), source_(std::move(source)) {}

  std::vector<OracleFinding> run(const nlohmann::json& values) {
    out_.clear();
    missing(schema_, values, "");
    leaves(schema_, values, "");
    std::sort(out_.begin(), out_.end());
    return out_;
  }

 private:
  static std::string escape(const std::string& key) {
    std::string r;
    for (char c : key) {
      if (c == '~') r += "~0";
      else if (c == '/') r += "~1";
      else r += c;
    }
    return r;
  }

  static std::string type_of(const nlohmann::json& node) { return node.value("type", "string"); }

  void missing(const nlohmann::json& node, const nlohmann::json& v, const std::string& path) {
    const std::string t = type_of(node);
    if (t == "object" && v.is_object()) {
      if (node.contains("required")) {
        for (const auto& r : node["required"]) {
          if (!v.contains(r.get<std::string>())) {
            out_.emplace_back("MissingAttribute", path + "/" + escape(r), "MissingRequired");
          }
        }
      }
      for (const auto& [k, child] : v.items()) {
        missing(node["properties"][k], child, path + "/" + escape(k));
      }
    } else if (t == "array" && v.is_array()) {
      for (size_t i = 0; i < v.size(); ++i) {
        missing(node["items"], v[i], path + "/" + std::to_string(i));
      }
    }
  }

  void leaves(const nlohmann::json& node, const nlohmann::json& v, const std::string& path) {
    const std::string t = type_of(node);
    if (t == "object" && v.is_object()) {
      for (const auto& [k, child] : v.items()) {
        leaves(node["properties"][k], child, path + "/" + escape(k));
      }
      return;
    }
    if (t == "array" && v.is_array()) {
      for (size_t i = 0; i < v.size(); ++i) {
        leaves(node["items"], v[i], path + "/" + std::to_string(i));
      }
      return;
    }
    grounding(node, v, path);
    if (!v.is_null()) rules(node, v, path);
  }

  // ---- grounding ----

  static bool punct(char c) {
    static const std::string kP = "!\"#%&'()*,-./:;?@[\\]_{}";
    return kP.find(c) != std::string::npos;
  }

  static std::string fold_collapse(const std::string& s) {
    std::string r;
    bool space = false;
    for (char c : s) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        space = true;
        continue;
      }
      if (space && !r.empty()) r += ' ';
      space = false;
      r += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return r;
  }

  bool text_ok(const std::string& value) const {
    std::string n = fold_collapse(value);
    size_t b = 0, e = n.size();
    while (b < e && (punct(n[b]) || n[b] == ' ')) ++b;
    while (e > b && (punct(n[e - 1]) || n[e - 1] == ' ')) --e;
    n = n.substr(b, e - b);
    if (n.empty()) return true;
    return fold_collapse(source_).find(n) != std::string::npos;
  }

  static std::string number_text(const nlohmann::json& v) {
    char buf[64];
    const double d = v.get<double>();
    if (v.is_number_integer() || d == std::floor(d)) {
      std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(d));
    } else {
      std::snprintf(buf, sizeof(buf), "%.15g", d);
    }
    std::string digits;
    for (char c : std::string(buf)) {
      if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
    }
    return digits;
  }

  bool number_ok(const nlohmann::json& v) const {
    const std::string digits = number_text(v);
    std::string stream;
    const std::string& s = source_;
    for (size_t i = 0; i < s.size(); ++i) {
      const bool sep = s[i] == ',' || s[i] == '.' || s[i] == ' ' || s[i] == '\'';
      if (sep && i > 0 && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i - 1])) &&
          std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
        continue;
      }
      stream += s[i];
    }
    return digits.empty() || stream.find(digits) != std::string::npos;
  }

  static bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }
  static bool valid(int y, int m, int d) {
    static const int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12 || d < 1) return false;
    return d <= kDays[m - 1] + (m == 2 && leap(y) ? 1 : 0);
  }

  // Field order of the three numeric formats used by the generator.
  static std::string order_of(const std::string& fmt) {
    if (fmt == "MM/DD/YYYY") return "mdy";
    if (fmt == "YYYY-MM-DD") return "ymd";
    return "dmy";
  }

  static std::string render(int y, int m, int d, const std::string& fmt) {
    char buf[32];
    if (fmt == "MM/DD/YYYY") std::snprintf(buf, sizeof(buf), "%02d/%02d/%04d", m, d, y);
    else if (fmt == "YYYY-MM-DD") std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    else std::snprintf(buf, sizeof(buf), "%02d.%02d.%04d", d, m, y);
    return buf;
  }

  bool date_ok(const std::string& value, const std::string& fmt) const {
    std::string want = value;
    while (!want.empty() && std::isspace(static_cast<unsigned char>(want.front()))) want.erase(0, 1);
    while (!want.empty() && std::isspace(static_cast<unsigned char>(want.back()))) want.pop_back();
    static const std::regex kSpan(R"((^|[^0-9])(\d+)([/.\-])(\d+)([/.\-])(\d+)(?![0-9/.\-]\d))");
    for (auto it = std::sregex_iterator(source_.begin(), source_.end(), kSpan);
         it != std::sregex_iterator(); ++it) {
      const auto& m = *it;
      if (m[3] != m[5]) continue;
      const std::string g[3] = {m[2], m[4], m[6]};
      std::vector<std::string> orders = {order_of(fmt)};
      if (g[0].size() == 4) orders.push_back("ymd");
      for (const std::string& order : orders) {
        int y = 0, mo = 0, d = 0;
        bool ok = true;
        for (int i = 0; i < 3; ++i) {
          const int n = std::stoi(g[i]);
          if (order[i] == 'y') {
            ok = ok && g[i].size() == 4;
            y = n;
          } else if (order[i] == 'm') {
            mo = n;
          } else {
            d = n;
          }
        }
        if (ok && valid(y, mo, d) && render(y, mo, d, fmt) == want) return true;
      }
    }
    return false;
  }

  void grounding(const nlohmann::json& node, const nlohmann::json& v, const std::string& path) {
    bool ok = true;
    if (v.is_string()) {
      const std::string s = v;
      ok = text_ok(s) ||
           (node.contains("allowed_date_formats") && date_ok(s, node["allowed_date_formats"][0]));
    } else if (v.is_number()) {
      ok = number_ok(v);
    }
    if (!ok) out_.emplace_back("Grounding", path, "NotGrounded");
  }

  // ---- rules ----

  void rules(const nlohmann::json& node, const nlohmann::json& v, const std::string& path) {
    const auto add = [&](const char* code) { out_.emplace_back("RuleCompliance", path, code); };
    const std::string t = type_of(node);
    bool type_ok = false;
    if (t == "string") type_ok = v.is_string();
    if (t == "number") type_ok = v.is_number();
    if (t == "integer") {
      type_ok = v.is_number() && v.get<double>() == std::floor(v.get<double>());
    }
    if (t == "boolean") type_ok = v.is_boolean();
    if (t == "object") type_ok = v.is_object();
    if (t == "array") type_ok = v.is_array();
    if (!type_ok) add("TypeMismatch");
    if (node.contains("enum")) {
      bool member = false;
      for (const auto& e : node["enum"]) member = member || e == v;
      if (!member) add("EnumViolation");
    }
    const std::string form = v.is_string() ? v.get<std::string>() : v.dump();
    if (node.contains("pattern")) {
      const std::regex re(node["pattern"].get<std::string>(), std::regex::ECMAScript);
      if (!std::regex_match(form, re)) add("PatternMismatch");
    }
    const long long len = static_cast<long long>(form.size());
    if (node.contains("minLength") && len < node["minLength"].get<long long>()) {
      add("LengthViolation");
    } else if (node.contains("maxLength") && len > node["maxLength"].get<long long>()) {
      add("LengthViolation");
    }
    if (node.contains("allowed_date_formats")) {
      const std::string fmt = node["allowed_date_formats"][0];
      bool ok = false;
      const std::string order = order_of(fmt);
      const char sep = fmt == "MM/DD/YYYY" ? '/' : fmt == "YYYY-MM-DD" ? '-' : '.';
      std::string shape = fmt;
      if (form.size() == shape.size()) {
        ok = true;
        for (size_t i = 0; i < form.size(); ++i) {
          const bool want_digit = shape[i] != sep;
          ok = ok && (want_digit ? std::isdigit(static_cast<unsigned char>(form[i])) != 0
                                 : form[i] == sep);
        }
        if (ok) {
          int y, m, d;
          if (order == "mdy") {
            m = std::stoi(form.substr(0, 2)), d = std::stoi(form.substr(3, 2)),
            y = std::stoi(form.substr(6));
          } else if (order == "ymd") {
            y = std::stoi(form.substr(0, 4)), m = std::stoi(form.substr(5, 2)),
            d = std::stoi(form.substr(8));
          } else {
            d = std::stoi(form.substr(0, 2)), m = std::stoi(form.substr(3, 2)),
            y = std::stoi(form.substr(6));
          }
          ok = valid(y, m, d);
        }
      }
      if (!ok) add("DateFormatViolation");
    }
  }

  nlohmann::json schema_;
  std::string source_;
  std::vector<OracleFinding> out_;
};

}  // namespace sift::testing

#endif  // SIFT_TESTS_ORACLE_VALIDATOR_H_
