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

#ifndef SIFT_TESTS_RANDOM_CASES_H_
#define SIFT_TESTS_RANDOM_CASES_H_

// Random schema documents, source texts and candidates for property tests.
// Everything is ASCII so the brute-force oracle can stay simple.

#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nlohmann/json.hpp"

namespace sift::testing {

using Json = nlohmann::json;

struct PatternSample {
  const char* pattern;
  std::vector<const char*> samples;
};

inline const std::vector<PatternSample>& string_patterns() {
  static const std::vector<PatternSample> kPool = {
      {"^(19[5-9][0-9]|20[0-2][0-9]) [A-Za-z0-9 -+]+$",
       {"2010 Subaru Legacy", "2010 Subaru Legacy 2.5 i 4dr Sedan", "1949 Ford", "2025 Kia-Rio"}},
      {"^[0-9]{4} [A-Za-z0-9 -]+", {"2010 Subaru Legacy", "201 X", "2010 Golf GTI!"}},
      {"[a-z]+", {"alpha", "Alpha", "alpha bravo"}},
      {"^[A-Z][a-z]*$", {"Alpha", "alpha", "Zulu"}},
      {"\\d+(\\.\\d+)?", {"49.99", "19995", "4.", ".5"}},
      {"(foo|bar)baz?", {"fooba", "barbaz", "foo", "bazz"}},
      {"^[0-9,.]+(?:k|K)?$", {"19,995", "20k", "20kk", "$20"}},
  };
  return kPool;
}

struct DateFormatSample {
  const char* format;
  const char* delimiter;
};

inline const std::vector<DateFormatSample>& date_formats() {
  static const std::vector<DateFormatSample> kFormats = {
      {"MM/DD/YYYY", "/"}, {"YYYY-MM-DD", "-"}, {"DD.MM.YYYY", "."}};
  return kFormats;
}

class CaseGenerator {
 public:
  explicit CaseGenerator(uint32_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }
  std::mt19937& rng() { return rng_; }

  static const std::vector<std::string>& words() {
    // No month names or abbreviations, so free text never mentions a date.
    static const std::vector<std::string> kWords = {
        "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel", "india",
        "juliet", "kilo", "lima", "oscar", "papa", "tango", "zulu", "Legacy", "Subaru",
        "Sedan", "Livermore", "Castle", "Rock"};
    return kWords;
  }

  Json random_schema(int depth = 3) {
    Json root = random_object(depth);
    return root;
  }

  // Builds source text: words, numbers and dates separated by spaces.
  std::string random_source() {
    std::string s;
    const int n = uniform(4, 18);
    source_dates_.clear();
    for (int i = 0; i < n; ++i) {
      if (i > 0) s += chance(0.1) ? "  " : " ";
      const int r = uniform(0, 9);
      if (r <= 5) {
        s += pick(words());
      } else if (r == 6) {
        s += std::to_string(uniform(0, 3000));
      } else if (r == 7) {
        s += pick(std::vector<std::string>{"19,995", "49.99", "29.99", "2.5", "12"});
      } else if (r == 8) {
        s += render_date(random_date(), pick(date_formats()));
        source_dates_.push_back(last_date_);
      } else {
        s += pick(std::vector<std::string>{",", "-", "!", "$19,995", "2010 Subaru Legacy"});
      }
    }
    return s;
  }

  Json random_candidate(const Json& schema, const std::string& source) {
    source_words_ = split_words(source);
    return random_value(schema, 0, true);
  }

 private:
  struct Date {
    int y, m, d;
  };

  Date random_date() {
    last_date_ = {uniform(1995, 2030), uniform(1, 12), uniform(1, 28)};
    return last_date_;
  }

  static std::string render_date(const Date& date, const DateFormatSample& f) {
    char buf[32];
    const std::string fmt = f.format;
    if (fmt == "MM/DD/YYYY") {
      std::snprintf(buf, sizeof(buf), "%02d/%02d/%04d", date.m, date.d, date.y);
    } else if (fmt == "YYYY-MM-DD") {
      std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", date.y, date.m, date.d);
    } else {
      std::snprintf(buf, sizeof(buf), "%02d.%02d.%04d", date.d, date.m, date.y);
    }
    return buf;
  }

  static std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == ' ') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  }

  Json random_object(int depth) {
    static const std::vector<std::string> kNames = {"a", "b", "name", "price", "city",
                                                    "date", "model", "count", "flag", "tags"};
    Json node = {{"type", "object"}, {"properties", Json::object()}};
    const int n = uniform(0, 4);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) {
      const std::string& name = pick(kNames);
      if (node["properties"].contains(name)) continue;
      node["properties"][name] = random_node(depth - 1);
      names.push_back(name);
    }
    Json required = Json::array();
    for (const std::string& name : names) {
      if (chance(0.5)) required.push_back(name);
    }
    if (!required.empty()) node["required"] = required;
    if (chance(0.3)) node["description"] = "object " + pick(words());
    return node;
  }

  Json random_node(int depth) {
    const int r = uniform(0, 99);
    if (depth > 0 && r < 20) return random_object(depth);
    if (depth > 0 && r < 32) {
      Json items = chance(0.5) ? random_object(depth - 1) : random_scalar();
      return {{"type", "array"}, {"items", items}};
    }
    return random_scalar();
  }

  Json random_scalar() {
    const int r = uniform(0, 99);
    Json node;
    if (r < 55) {
      node = {{"type", "string"}};
      const int flavor = uniform(0, 9);
      if (flavor <= 2) {
        node["pattern"] = pick(string_patterns()).pattern;
      } else if (flavor == 3) {
        Json e = Json::array();
        for (int i = 0, n = uniform(1, 3); i < n; ++i) {
          std::string w = pick(words());
          if (std::find(e.begin(), e.end(), Json(w)) == e.end()) e.push_back(w);
        }
        node["enum"] = e;
      } else if (flavor == 4) {
        const auto& f = pick(date_formats());
        node["allowed_date_formats"] = {f.format};
        node["delimiter"] = f.delimiter;
      }
      if (chance(0.3)) {
        const int lo = uniform(0, 6);
        node["minLength"] = lo;
        if (chance(0.6)) node["maxLength"] = lo + uniform(0, 12);
      } else if (chance(0.15)) {
        node["maxLength"] = uniform(0, 10);
      }
      if (chance(0.15)) node["condition"] = "must be " + pick(words());
    } else if (r < 70) {
      node = {{"type", "number"}};
      if (chance(0.15)) node["pattern"] = "^[0-9]+$";
    } else if (r < 85) {
      node = {{"type", "integer"}};
      if (chance(0.25)) node["enum"] = {uniform(0, 5), 12, 2010};
      if (chance(0.2)) node["maxLength"] = uniform(1, 4);
    } else {
      node = {{"type", "boolean"}};
    }
    if (chance(0.3)) node["description"] = "the " + pick(words());
    return node;
  }

  std::string mutate_text(std::string s) {
    const int r = uniform(0, 9);
    if (r == 0 && !s.empty()) {
      s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    } else if (r == 1) {
      for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    } else if (r == 2) {
      s = "\"" + s + ".";
    } else if (r == 3) {
      s = "  " + s + " ";
    }
    return s;
  }

  Json random_string_value(const Json& node) {
    if (node.contains("enum") && chance(0.7)) return pick(node["enum"].get<std::vector<Json>>());
    if (node.contains("allowed_date_formats") && chance(0.75)) {
      const std::string fmt = node["allowed_date_formats"][0];
      const DateFormatSample* sample = nullptr;
      for (const auto& f : date_formats()) {
        if (fmt == f.format) sample = &f;
      }
      if (chance(0.2)) return "March 14th";
      Date d = (!source_dates_.empty() && chance(0.6)) ? pick(source_dates_) : random_date();
      return render_date(d, chance(0.85) ? *sample : pick(date_formats()));
    }
    if (node.contains("pattern") && chance(0.7)) {
      for (const auto& p : string_patterns()) {
        if (node["pattern"] == p.pattern) return std::string(pick(p.samples));
      }
    }
    const int r = uniform(0, 9);
    if (r <= 4 && !source_words_.empty()) return mutate_text(pick(source_words_));
    if (r == 5 && source_words_.size() >= 2) {
      const size_t i = static_cast<size_t>(uniform(0, static_cast<int>(source_words_.size()) - 2));
      return source_words_[i] + (chance(0.3) ? "   " : " ") + source_words_[i + 1];
    }
    if (r == 6) return std::string("");
    return pick(words()) + (chance(0.5) ? "" : " " + pick(words()));
  }

  Json random_number_value(bool integer) {
    const int r = uniform(0, 5);
    if (r == 0) return 19995;
    if (r == 1) return 49.99;
    if (r == 2) return 2010;
    if (r == 3 && !integer) return 2.5;
    if (r == 4) return 12.0;
    return uniform(0, 3000);
  }

  Json wrong_type() {
    switch (uniform(0, 5)) {
      case 0: return 7;
      case 1: return "seven";
      case 2: return true;
      case 3: return Json::object();
      case 4: return Json::array();
      default: return 3.25;
    }
  }

  Json random_value(const Json& node, int depth, bool root = false) {
    if (!root && chance(0.12)) return nullptr;
    if (!root && chance(0.07)) return wrong_type();
    const std::string type = node.value("type", "string");
    if (type == "object") {
      Json obj = Json::object();
      for (const auto& [key, child] : node["properties"].items()) {
        if (chance(0.15)) continue;
        obj[key] = random_value(child, depth + 1);
      }
      return obj;
    }
    if (type == "array") {
      Json arr = Json::array();
      for (int i = 0, n = uniform(0, 3); i < n; ++i) {
        arr.push_back(random_value(node["items"], depth + 1));
      }
      return arr;
    }
    if (type == "string") return random_string_value(node);
    if (type == "number") return random_number_value(false);
    if (type == "integer") {
      if (node.contains("enum") && chance(0.6)) return pick(node["enum"].get<std::vector<Json>>());
      return random_number_value(true);
    }
    return chance(0.5);
  }

  std::mt19937 rng_;
  std::vector<std::string> source_words_;
  std::vector<Date> source_dates_;
  Date last_date_{2000, 1, 1};
};

}  // namespace sift::testing

#endif  // SIFT_TESTS_RANDOM_CASES_H_
