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

#include <random>

#include "surveylens/error.hpp"
#include "surveylens/ledger.hpp"

namespace surveylens {
namespace {

Pricing gpt4() {
  Pricing p;
  p.set("gpt-4-0613", "0.03", "0.06");
  return p;
}

TEST(Ledger, TotalCostIsExact) {
  const UsageLedger ledger({{"binary", "gpt-4-0613", {200000, 50000}}});
  EXPECT_EQ(ledger.total_cost(gpt4()).to_string(2), "9.00");
  EXPECT_EQ(ledger.total_cost(gpt4()), Decimal::from_int(9));
}

TEST(Ledger, CostPerHundredComments) {
  // 100 calls whose costs sum to 0.93.
  std::vector<LedgerEntry> entries;
  for (int i = 0; i < 100; ++i) entries.push_back({"binary", "gpt-4-0613", {300, 5}});
  Pricing p;
  p.set("gpt-4-0613", "0.03", "0.06");
  const auto rows = cost_report(entries, p, 100);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].comments, 100);
  EXPECT_EQ(rows[0].total_cost.to_string(2), "0.93");
  EXPECT_EQ(rows[0].cost_per_n.to_string(2), "0.93");
  EXPECT_EQ(cost_report_csv(rows, 100),
            "task_kind,model_id,comments,total_cost,cost_per_100\n"
            "binary,gpt-4-0613,100,0.93,0.9300\n");
}

TEST(Ledger, CommentCountsOverrideCallCounts) {
  const std::vector<LedgerEntry> entries{{"themes", "m", {1000, 0}}, {"themes", "m", {1000, 0}},
                                         {"binary", "m", {1000, 0}}};
  Pricing p;
  p.set("m", "0.01", "0");
  const auto rows = cost_report(entries, p, 100, {{"themes", 50}});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].task_kind, "binary");
  EXPECT_EQ(rows[0].cost_per_n.to_string(4), "1.0000");
  EXPECT_EQ(rows[1].comments, 50);
  EXPECT_EQ(rows[1].cost_per_n.to_string(4), "0.0400");
  EXPECT_THROW(cost_report(entries, p, 0), Error);
}

TEST(Ledger, MissingPriceNamesModel) {
  const UsageLedger ledger({{"binary", "mystery-model", {1, 1}}});
  try {
    ledger.total_cost(gpt4());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    EXPECT_NE(std::string(e.what()).find("mystery-model"), std::string::npos);
  }
}

TEST(Ledger, RejectsBadPrices) {
  Pricing p;
  EXPECT_THROW(p.set("m", "-0.01", "0"), Error);
  EXPECT_THROW(p.set("m", "0.0000000001", "0"), Error);
  EXPECT_NO_THROW(p.set("m", "0.000000001", "0"));
}

TEST(Ledger, CsvRoundTrip) {
  UsageLedger ledger;
  ledger.record({"binary", "gpt-4-0613", {10, 2}});
  ledger.record({"themes", "model,with,commas", {0, 7}});
  const std::string csv = ledger.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "task_kind,model_id,prompt_tokens,completion_tokens");
  const UsageLedger back = UsageLedger::from_csv(csv);
  EXPECT_EQ(back.entries(), ledger.entries());
  EXPECT_EQ(back.to_csv(), csv);
}

TEST(Ledger, CsvErrorsCiteLine) {
  EXPECT_THROW(UsageLedger::from_csv("a,b\n"), Error);
  try {
    UsageLedger::from_csv("task_kind,model_id,prompt_tokens,completion_tokens\nbinary,m,1,2\nbinary,m,x,2\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

// Prices in whole micro-dollars per 1k tokens make every cost a whole number
// of nano-dollars, so the oracle is plain integer arithmetic.
std::string nanos_to_string(__int128 nanos) {
  std::string digits;
  do {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(nanos % 10)));
    nanos /= 10;
  } while (nanos > 0);
  while (digits.size() < 10) digits.insert(digits.begin(), '0');
  return digits.substr(0, digits.size() - 9) + "." + digits.substr(digits.size() - 9);
}

std::string micros_to_string(std::int64_t micros) {
  std::string s = std::to_string(micros);
  while (s.size() < 7) s.insert(s.begin(), '0');
  return s.substr(0, s.size() - 6) + "." + s.substr(s.size() - 6);
}

TEST(Ledger, RandomLedgersMatchIntegerOracle) {
  std::mt19937_64 rng(20261019);
  std::uniform_int_distribution<std::int64_t> price(0, 200000);
  std::uniform_int_distribution<std::int64_t> tokens(0, 400000);
  std::uniform_int_distribution<int> length(0, 60);
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t pp = price(rng), cp = price(rng);
    Pricing p;
    p.set("m", micros_to_string(pp), micros_to_string(cp));
    std::vector<LedgerEntry> entries;
    __int128 nanos = 0;
    for (int i = length(rng); i > 0; --i) {
      const Usage u{tokens(rng), tokens(rng)};
      entries.push_back({"binary", "m", u});
      nanos += static_cast<__int128>(u.prompt_tokens) * pp + static_cast<__int128>(u.completion_tokens) * cp;
    }
    const Decimal total = UsageLedger(entries).total_cost(p);
    ASSERT_EQ(total.to_string(9), nanos_to_string(nanos)) << trial;
    if (!entries.empty()) {
      const auto rows = cost_report(entries, p, 100);
      ASSERT_EQ(rows.size(), 1u);
      EXPECT_EQ(rows[0].total_cost, total);
    }
  }
}

}  // namespace
}  // namespace surveylens
