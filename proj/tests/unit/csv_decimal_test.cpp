// Copyright 2026 The surveylens Authors
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

#include <gtest/gtest.h>

#include "surveylens/csv.hpp"
#include "surveylens/decimal.hpp"
#include "surveylens/error.hpp"

namespace surveylens {
namespace {

TEST(Csv, QuotedFieldsAndLineBreaks) {
  const auto rows = parse_csv("id,text\r\nr1,\"a, b\"\nr2,\"say \"\"hi\"\"\nthere\"\n\nr3,x\n");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].fields[1], "a, b");
  EXPECT_EQ(rows[2].fields[1], "say \"hi\"\nthere");
  EXPECT_EQ(rows[2].line, 3u);
  EXPECT_EQ(rows[3].line, 6u);
}

TEST(Csv, UnterminatedQuoteNamesLine) {
  try {
    parse_csv("a,b\nr1,\"oops\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Csv, EscapeRoundTrips) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("q\"q"), "\"q\"\"q\"");
  const std::string row = csv_row({"x,y", "z\"", "w\nv"});
  const auto back = parse_csv(row);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].fields, (std::vector<std::string>{"x,y", "z\"", "w\nv"}));
}

TEST(Decimal, ParseAndFormat) {
  EXPECT_EQ(Decimal::parse("0.03").to_string(), "0.03");
  EXPECT_EQ(Decimal::parse("-1.500").to_string(), "-1.5");
  EXPECT_EQ(Decimal::parse("12").to_string(2), "12.00");
  EXPECT_THROW(Decimal::parse("1.2.3"), Error);
  EXPECT_THROW(Decimal::parse(""), Error);
  EXPECT_THROW(Decimal::parse("0.0000000000001"), Error);
}

TEST(Decimal, RoundsHalfEven) {
  EXPECT_EQ(Decimal::parse("0.125").to_string(2), "0.12");
  EXPECT_EQ(Decimal::parse("0.135").to_string(2), "0.14");
  EXPECT_EQ(Decimal::parse("-0.125").to_string(2), "-0.12");
  EXPECT_EQ(Decimal::parse("2.5").rounded(0).to_string(), "2");
  EXPECT_EQ(divide_round_half_even(5, 2), 2);
  EXPECT_EQ(divide_round_half_even(7, 2), 4);
  EXPECT_EQ(divide_round_half_even(-7, 2), -4);
}

TEST(Decimal, RoundedRatio) {
  // 1 / 716 x 100 = 0.13966... and 2 / 716 x 100 = 0.27932...
  EXPECT_EQ(Decimal::rounded_ratio(Decimal::from_int(1), 100, 716, 2).to_string(2), "0.14");
  EXPECT_EQ(Decimal::rounded_ratio(Decimal::from_int(2), 100, 716, 2).to_string(2), "0.28");
  EXPECT_EQ(Decimal::rounded_ratio(Decimal::from_int(1), 1, 8, 2).to_string(2), "0.12");
  EXPECT_EQ(Decimal::from_int(9).divided_exactly(4).to_string(), "2.25");
  EXPECT_THROW(Decimal::from_int(1).divided_exactly(3), Error);
}

TEST(Decimal, ExactAddition) {
  Decimal sum;
  for (int i = 0; i < 10; ++i) sum += Decimal::parse("0.1");
  EXPECT_EQ(sum, Decimal::from_int(1));
  EXPECT_LT(Decimal::parse("0.1"), Decimal::parse("0.11"));
}

}  // namespace
}  // namespace surveylens
