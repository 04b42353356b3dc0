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

#include "surveylens/ledger.hpp"

#include <charconv>

#include "surveylens/csv.hpp"
#include "surveylens/error.hpp"

namespace surveylens {
namespace {

Decimal parse_price(std::string_view text) {
  const auto dot = text.find('.');
  if (dot != std::string_view::npos && text.size() - dot - 1 > 9) {
    throw Error(ErrorKind::kConfig, "price '" + std::string(text) +
                                        "' has more than 9 fractional digits");
  }
  Decimal d = Decimal::parse(text);
  if (d < Decimal()) {
    throw Error(ErrorKind::kConfig, "negative price '" + std::string(text) + "'");
  }
  return d;
}

std::int64_t parse_count(const std::string& s, std::size_t line) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
    throw Error(ErrorKind::kParse, "ledger line " + std::to_string(line) +
                                       ": invalid token count '" + s + "'");
  }
  return v;
}

// Exact value with at least two fractional digits.
std::string money(const Decimal& d) {
  std::string exact = d.to_string();
  const auto dot = exact.find('.');
  const std::size_t places = dot == std::string::npos ? 0 : exact.size() - dot - 1;
  return places >= 2 ? exact : d.to_string(2);
}

}  // namespace

void Pricing::set(const std::string& model_id, std::string_view prompt_per_1k,
                  std::string_view completion_per_1k) {
  prices_[model_id] =
      ModelPrice{parse_price(prompt_per_1k), parse_price(completion_per_1k)};
}

void Pricing::set(const std::string& model_id, ModelPrice price) {
  prices_[model_id] = price;
}

bool Pricing::contains(std::string_view model_id) const {
  return prices_.find(model_id) != prices_.end();
}

const ModelPrice& Pricing::at(std::string_view model_id) const {
  auto it = prices_.find(model_id);
  if (it == prices_.end()) {
    throw Error(ErrorKind::kConfig,
                "no pricing configured for model '" + std::string(model_id) + "'");
  }
  return it->second;
}

Decimal entry_cost(const LedgerEntry& entry, const Pricing& pricing) {
  const ModelPrice& p = pricing.at(entry.model_id);
  // tokens * price / 1000 is exact: prices have <= 9 fractional digits.
  return (p.prompt_per_1k * entry.usage.prompt_tokens).divided_exactly(1000) +
         (p.completion_per_1k * entry.usage.completion_tokens).divided_exactly(1000);
}

void UsageLedger::record(LedgerEntry entry) {
  std::lock_guard lock(mu_);
  entries_.push_back(std::move(entry));
}

std::vector<LedgerEntry> UsageLedger::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::size_t UsageLedger::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

Decimal UsageLedger::total_cost(const Pricing& pricing) const {
  Decimal total;
  for (const auto& e : entries()) total += entry_cost(e, pricing);
  return total;
}

std::string UsageLedger::to_csv() const {
  std::string out = "task_kind,model_id,prompt_tokens,completion_tokens\n";
  for (const auto& e : entries()) {
    out += csv_row({e.task_kind, e.model_id,
                    std::to_string(e.usage.prompt_tokens),
                    std::to_string(e.usage.completion_tokens)});
  }
  return out;
}

UsageLedger UsageLedger::from_csv(std::string_view csv) {
  const auto records = parse_csv(csv);
  if (records.empty() ||
      records.front().fields !=
          std::vector<std::string>{"task_kind", "model_id", "prompt_tokens",
                                   "completion_tokens"}) {
    throw Error(ErrorKind::kParse,
                "ledger csv must start with "
                "task_kind,model_id,prompt_tokens,completion_tokens");
  }
  std::vector<LedgerEntry> entries;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.fields.size() != 4) {
      throw Error(ErrorKind::kParse, "ledger line " + std::to_string(r.line) +
                                         ": expected 4 fields");
    }
    entries.push_back(LedgerEntry{
        r.fields[0], r.fields[1],
        Usage{parse_count(r.fields[2], r.line), parse_count(r.fields[3], r.line)}});
  }
  return UsageLedger(std::move(entries));
}

std::vector<CostRow> cost_report(
    const std::vector<LedgerEntry>& entries, const Pricing& pricing,
    std::int64_t per_n, const std::map<std::string, std::int64_t>& comment_counts) {
  if (per_n < 1) throw Error(ErrorKind::kInvalidArgument, "per_n must be >= 1");
  std::map<std::pair<std::string, std::string>, CostRow> rows;
  for (const auto& e : entries) {
    auto& row = rows[{e.task_kind, e.model_id}];
    row.task_kind = e.task_kind;
    row.model_id = e.model_id;
    row.total_cost += entry_cost(e, pricing);
    row.comments += 1;
  }
  std::vector<CostRow> out;
  out.reserve(rows.size());
  for (auto& [key, row] : rows) {
    if (auto it = comment_counts.find(row.task_kind); it != comment_counts.end()) {
      row.comments = it->second;
    }
    if (row.comments > 0) {
      row.cost_per_n = Decimal::rounded_ratio(row.total_cost, per_n, row.comments, 4);
    }
    out.push_back(row);
  }
  return out;
}

std::string cost_report_csv(const std::vector<CostRow>& rows, std::int64_t per_n) {
  std::string out = "task_kind,model_id,comments,total_cost,cost_per_" +
                    std::to_string(per_n) + "\n";
  for (const auto& r : rows) {
    out += csv_row({r.task_kind, r.model_id, std::to_string(r.comments),
                    money(r.total_cost), r.cost_per_n.to_string(4)});
  }
  return out;
}

}  // namespace surveylens
