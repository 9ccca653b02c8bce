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

#ifndef SIFT_DATES_H_
#define SIFT_DATES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Date formats of the form "MM/DD/YYYY": tokens joined by a one-character
// delimiter. Tokens: YYYY, YY, MM, M, DD, D, MMM (Jan), MMMM (January).
namespace sift::dates {

enum class Field { kYear4, kYear2, kMonth2, kMonth, kMonthAbbr, kMonthName, kDay2, kDay };

struct Format {
  std::vector<Field> fields;
  std::string delimiter;

  bool has_year() const;
  bool numeric() const;
};

struct Date {
  int year = 0;  // 0 when the text gave no year
  int month = 0;
  int day = 0;   // 0 when the format carries no day

  bool operator==(const Date&) const = default;
};

std::optional<Format> parse_format(std::string_view format, std::string_view delimiter);

// True when `value` is written in `format` and names a real calendar date.
bool matches(std::string_view value, const Format& format);

// Nullopt when the format needs a component the date does not have.
std::optional<std::string> render(const Date& date, const Format& format);

// Dates mentioned in free text: delimiter-separated numeric spans read in the
// field order of each numeric format (plus ISO year-first), and month-name
// spans such as "March 14th", "14th of March" or "Mar 14, 2024".
std::vector<Date> find_dates(std::string_view text, const std::vector<Format>& formats);

int days_in_month(int year, int month);

}  // namespace sift::dates

#endif  // SIFT_DATES_H_
