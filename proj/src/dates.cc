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

#include "sift/dates.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>

#include "sift/text.h"

namespace sift::dates {
namespace {

constexpr std::array<std::string_view, 12> kMonthNames = {
    "january", "february", "march", "april", "may", "june",
    "july", "august", "september", "october", "november", "december"};

std::vector<std::string> split(std::string_view s, std::string_view delim) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t at = s.find(delim, start);
    if (at == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, at - start));
    start = at + delim.size();
  }
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// 1-based month for a full name, three-letter abbreviation or "sept".
int month_from_name(std::string_view word) {
  const std::string w = lower_ascii(word);
  if (w == "sept") return 9;
  for (size_t i = 0; i < kMonthNames.size(); ++i) {
    if (w == kMonthNames[i]) return static_cast<int>(i) + 1;
    if (w.size() == 3 && kMonthNames[i].substr(0, 3) == w) return static_cast<int>(i) + 1;
  }
  return 0;
}

bool valid_date(const Date& d) {
  if (d.month != 0 && (d.month < 1 || d.month > 12)) return false;
  if (d.day != 0) {
    if (d.day < 1) return false;
    const int limit = d.month == 0 ? 31 : days_in_month(d.year == 0 ? 2000 : d.year, d.month);
    if (d.day > limit) return false;
  }
  return true;
}

// Reads one field. `strict_width` requires the padded width of MM/DD/YY.
bool read_field(std::string_view piece, Field f, bool strict_width, Date& d) {
  const auto number = [&](size_t min_w, size_t max_w, int& out) {
    if (!all_digits(piece) || piece.size() < min_w || piece.size() > max_w) return false;
    out = std::stoi(std::string(piece));
    return true;
  };
  switch (f) {
    case Field::kYear4:
      return number(4, 4, d.year);
    case Field::kYear2: {
      int yy = 0;
      if (!number(2, 2, yy)) return false;
      d.year = 2000 + yy;
      return true;
    }
    case Field::kMonth2:
      return number(strict_width ? 2 : 1, 2, d.month) && d.month >= 1;
    case Field::kMonth:
      return number(1, 2, d.month) && d.month >= 1;
    case Field::kDay2:
      return number(strict_width ? 2 : 1, 2, d.day) && d.day >= 1;
    case Field::kDay:
      return number(1, 2, d.day) && d.day >= 1;
    case Field::kMonthAbbr:
      if (piece.size() != 3 && lower_ascii(piece) != "sept") return false;
      d.month = month_from_name(piece);
      return d.month != 0;
    case Field::kMonthName: {
      const std::string w = lower_ascii(piece);
      for (size_t i = 0; i < kMonthNames.size(); ++i) {
        if (w == kMonthNames[i]) {
          d.month = static_cast<int>(i) + 1;
          return true;
        }
      }
      return false;
    }
  }
  return false;
}

std::optional<Date> read_date(const std::vector<std::string>& pieces, const Format& format,
                              bool strict_width) {
  if (pieces.size() != format.fields.size()) return std::nullopt;
  Date d;
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (!read_field(pieces[i], format.fields[i], strict_width, d)) return std::nullopt;
  }
  if (!valid_date(d)) return std::nullopt;
  return d;
}

struct Word {
  std::string text;
  bool digits;
};

}  // namespace

int days_in_month(int year, int month) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2) {
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return kDays[month - 1];
}

bool Format::has_year() const {
  return std::any_of(fields.begin(), fields.end(),
                     [](Field f) { return f == Field::kYear4 || f == Field::kYear2; });
}

bool Format::numeric() const {
  return std::none_of(fields.begin(), fields.end(), [](Field f) {
    return f == Field::kMonthAbbr || f == Field::kMonthName;
  });
}

std::optional<Format> parse_format(std::string_view format, std::string_view delimiter) {
  if (delimiter.empty()) return std::nullopt;
  Format out;
  out.delimiter = std::string(delimiter);
  bool seen_year = false;
  bool seen_month = false;
  bool seen_day = false;
  for (const std::string& tok : split(format, delimiter)) {
    Field f;
    bool* seen = nullptr;
    if (tok == "YYYY") { f = Field::kYear4; seen = &seen_year; }
    else if (tok == "YY") { f = Field::kYear2; seen = &seen_year; }
    else if (tok == "MM") { f = Field::kMonth2; seen = &seen_month; }
    else if (tok == "M") { f = Field::kMonth; seen = &seen_month; }
    else if (tok == "MMM") { f = Field::kMonthAbbr; seen = &seen_month; }
    else if (tok == "MMMM") { f = Field::kMonthName; seen = &seen_month; }
    else if (tok == "DD") { f = Field::kDay2; seen = &seen_day; }
    else if (tok == "D") { f = Field::kDay; seen = &seen_day; }
    else return std::nullopt;
    if (*seen) return std::nullopt;
    *seen = true;
    out.fields.push_back(f);
  }
  if (out.fields.size() < 2 || !seen_month) return std::nullopt;
  return out;
}

bool matches(std::string_view value, const Format& format) {
  return read_date(split(value, format.delimiter), format, true).has_value();
}

std::optional<std::string> render(const Date& date, const Format& format) {
  std::string out;
  char buf[16];
  for (size_t i = 0; i < format.fields.size(); ++i) {
    if (i > 0) out += format.delimiter;
    switch (format.fields[i]) {
      case Field::kYear4:
        if (date.year == 0) return std::nullopt;
        std::snprintf(buf, sizeof(buf), "%04d", date.year);
        break;
      case Field::kYear2:
        if (date.year == 0) return std::nullopt;
        std::snprintf(buf, sizeof(buf), "%02d", date.year % 100);
        break;
      case Field::kMonth2:
        std::snprintf(buf, sizeof(buf), "%02d", date.month);
        break;
      case Field::kMonth:
        std::snprintf(buf, sizeof(buf), "%d", date.month);
        break;
      case Field::kDay2:
        if (date.day == 0) return std::nullopt;
        std::snprintf(buf, sizeof(buf), "%02d", date.day);
        break;
      case Field::kDay:
        if (date.day == 0) return std::nullopt;
        std::snprintf(buf, sizeof(buf), "%d", date.day);
        break;
      case Field::kMonthAbbr: {
        std::string name(kMonthNames[date.month - 1].substr(0, 3));
        name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
        out += name;
        continue;
      }
      case Field::kMonthName: {
        std::string name(kMonthNames[date.month - 1]);
        name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
        out += name;
        continue;
      }
    }
    out += buf;
  }
  return out;
}

std::vector<Date> find_dates(std::string_view input, const std::vector<Format>& formats) {
  std::vector<Date> found;
  const auto add = [&](const Date& d) {
    if (valid_date(d) && std::find(found.begin(), found.end(), d) == found.end()) {
      found.push_back(d);
    }
  };

  // Numeric spans: digit groups joined by one separator character.
  const std::string s(input);
  size_t i = 0;
  while (i < s.size()) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])) ||
        (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1])))) {
      ++i;
      continue;
    }
    std::vector<std::string> groups;
    size_t j = i;
    char sep = 0;
    while (true) {
      size_t k = j;
      while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
      groups.push_back(s.substr(j, k - j));
      j = k;
      if (j + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[j + 1])) &&
          (s[j] == '/' || s[j] == '-' || s[j] == '.' ) && (sep == 0 || s[j] == sep)) {
        sep = s[j];
        ++j;
        continue;
      }
      break;
    }
    if (groups.size() >= 2 && groups.size() <= 3) {
      for (const Format& f : formats) {
        if (!f.numeric()) continue;
        if (auto d = read_date(groups, f, false)) add(*d);
      }
      if (groups.size() == 3 && groups[0].size() == 4) {
        Format iso{{Field::kYear4, Field::kMonth, Field::kDay}, "-"};
        if (auto d = read_date(groups, iso, false)) add(*d);
      }
    }
    i = j;
  }

  // Month-name spans.
  std::vector<Word> words;
  {
    std::string cur;
    bool cur_digits = false;
    const auto flush = [&] {
      if (!cur.empty()) words.push_back({cur, cur_digits});
      cur.clear();
    };
    for (char c : s) {
      const bool is_digit = std::isdigit(static_cast<unsigned char>(c));
      const bool is_alpha = std::isalpha(static_cast<unsigned char>(c));
      if (!is_digit && !is_alpha) {
        flush();
        continue;
      }
      if (!cur.empty() && is_digit != cur_digits && !(cur_digits && is_alpha)) flush();
      if (cur.empty()) cur_digits = is_digit;
      cur.push_back(c);
    }
    flush();
  }
  // A day word is digits optionally followed by an ordinal suffix ("14th").
  const auto day_of = [](const Word& w) -> int {
    size_t k = 0;
    while (k < w.text.size() && std::isdigit(static_cast<unsigned char>(w.text[k]))) ++k;
    if (k == 0 || k > 2) return 0;
    const std::string suffix = lower_ascii(std::string_view(w.text).substr(k));
    if (!suffix.empty() && suffix != "st" && suffix != "nd" && suffix != "rd" && suffix != "th") {
      return 0;
    }
    return std::stoi(w.text.substr(0, k));
  };
  const auto year_of = [](const Word* w) -> int {
    if (!w || w->text.size() != 4 || !all_digits(w->text)) return 0;
    return std::stoi(w->text);
  };
  for (size_t w = 0; w < words.size(); ++w) {
    const int month = words[w].digits ? 0 : month_from_name(words[w].text);
    if (month == 0) continue;
    const Word* next = w + 1 < words.size() ? &words[w + 1] : nullptr;
    const Word* next2 = w + 2 < words.size() ? &words[w + 2] : nullptr;
    // "March 14th[, 2024]"
    if (next && next->digits) {
      if (int day = day_of(*next)) add({year_of(next2), month, day});
    }
    // "14th [of] March [2024]"
    const Word* prev = w >= 1 ? &words[w - 1] : nullptr;
    if (prev && lower_ascii(prev->text) == "of" && w >= 2) prev = &words[w - 2];
    if (prev && prev->digits) {
      if (int day = day_of(*prev)) add({year_of(next), month, day});
    }
  }
  return found;
}

}  // namespace sift::dates
