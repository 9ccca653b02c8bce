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

#include <algorithm>

#include "doctest.h"
#include "sift/dates.h"

namespace sift::dates {
namespace {

Format fmt(const char* f, const char* d) {
  auto parsed = parse_format(f, d);
  REQUIRE(parsed);
  return *parsed;
}

TEST_CASE("format parsing") {
  CHECK(parse_format("MM/DD/YYYY", "/"));
  CHECK(parse_format("D MMMM YYYY", " "));
  CHECK(parse_format("MM-YYYY", "-"));
  CHECK_FALSE(parse_format("YYYY", "/"));           // single field
  CHECK_FALSE(parse_format("DD/YYYY", "/"));        // no month
  CHECK_FALSE(parse_format("MM/MM/YYYY", "/"));     // duplicate month
  CHECK_FALSE(parse_format("MM/DD/YYYY", "-"));     // wrong delimiter
  CHECK_FALSE(parse_format("MM/QQ/YYYY", "/"));
}

TEST_CASE("strict matching with calendar validity") {
  const Format us = fmt("MM/DD/YYYY", "/");
  CHECK(matches("03/14/2024", us));
  CHECK(matches("02/29/2024", us));
  CHECK_FALSE(matches("02/29/2023", us));
  CHECK_FALSE(matches("3/14/2024", us));
  CHECK_FALSE(matches("03-14-2024", us));
  CHECK_FALSE(matches("14/03/2024", us));
  CHECK_FALSE(matches("March 14th", us));
  CHECK(matches("3/14/24", fmt("M/D/YY", "/")));
  CHECK(matches("14 March 2024", fmt("D MMMM YYYY", " ")));
  CHECK(matches("14 mar 2024", fmt("D MMM YYYY", " ")));
}

TEST_CASE("rendering") {
  CHECK(*render({2024, 3, 14}, fmt("MM/DD/YYYY", "/")) == "03/14/2024");
  CHECK(*render({2024, 3, 14}, fmt("D MMMM YYYY", " ")) == "14 March 2024");
  CHECK_FALSE(render({0, 3, 14}, fmt("MM/DD/YYYY", "/")));
  CHECK(*render({0, 3, 14}, fmt("MM/DD", "/")) == "03/14");
}

bool has(const std::vector<Date>& v, Date d) { return std::find(v.begin(), v.end(), d) != v.end(); }

TEST_CASE("dates found in free text") {
  const std::vector<Format> formats = {fmt("MM/DD/YYYY", "/")};
  const auto a = find_dates("booked for 14.03.2024 at noon", {fmt("DD.MM.YYYY", ".")});
  CHECK(has(a, {2024, 3, 14}));
  const auto b = find_dates("on 2024-03-14", formats);
  CHECK(has(b, {2024, 3, 14}));
  const auto c = find_dates("see you March 14th, 2024!", formats);
  CHECK(has(c, {2024, 3, 14}));
  const auto d = find_dates("the 14th of March", formats);
  CHECK(has(d, {0, 3, 14}));
  CHECK(find_dates("costs 19,995 or 49.99", formats).empty());
  CHECK(find_dates("02/30/2024", formats).empty());
}

TEST_CASE("days in month") {
  CHECK(days_in_month(2024, 2) == 29);
  CHECK(days_in_month(1900, 2) == 28);
  CHECK(days_in_month(2000, 2) == 29);
  CHECK(days_in_month(2023, 4) == 30);
}

}  // namespace
}  // namespace sift::dates
