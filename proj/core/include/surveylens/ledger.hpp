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

#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "surveylens/decimal.hpp"

namespace surveylens {

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  std::int64_t total() const { return prompt_tokens + completion_tokens; }
  bool operator==(const Usage&) const = default;
};

struct LedgerEntry {
  std::string task_kind;
  std::string model_id;
  Usage usage;

  bool operator==(const LedgerEntry&) const = default;
};

struct ModelPrice {
  Decimal prompt_per_1k;
  Decimal completion_per_1k;
};

// model_id -> per-1k-token prices. Prices may carry at most nine fractional
// digits so per-entry costs stay exact.
class Pricing {
 public:
  void set(const std::string& model_id, std::string_view prompt_per_1k,
           std::string_view completion_per_1k);
  void set(const std::string& model_id, ModelPrice price);
  bool contains(std::string_view model_id) const;
  // Throws Error(kConfig) naming the model when no price is configured.
  const ModelPrice& at(std::string_view model_id) const;
  const std::map<std::string, ModelPrice, std::less<>>& prices() const {
    return prices_;
  }

 private:
  std::map<std::string, ModelPrice, std::less<>> prices_;
};

Decimal entry_cost(const LedgerEntry& entry, const Pricing& pricing);

// Append-only record of every model call; safe to share across threads.
class UsageLedger {
 public:
  UsageLedger() = default;
  explicit UsageLedger(std::vector<LedgerEntry> entries)
      : entries_(std::move(entries)) {}

  void record(LedgerEntry entry);
  std::vector<LedgerEntry> entries() const;
  std::size_t size() const;

  Decimal total_cost(const Pricing& pricing) const;

  // csv with header `task_kind,model_id,prompt_tokens,completion_tokens`.
  std::string to_csv() const;
  static UsageLedger from_csv(std::string_view csv);

 private:
  mutable std::mutex mu_;
  std::vector<LedgerEntry> entries_;
};

struct CostRow {
  std::string task_kind;
  std::string model_id;
  std::int64_t comments = 0;
  Decimal total_cost;
  Decimal cost_per_n;  // rounded half-even to 4 places

  bool operator==(const CostRow&) const = default;
};

// One row per (task_kind, model_id), sorted by both keys. The comment count
// for a task kind comes from `comment_counts` when present, otherwise it is
// the number of ledger entries of that (task_kind, model_id).
std::vector<CostRow> cost_report(
    const std::vector<LedgerEntry>& entries, const Pricing& pricing,
    std::int64_t per_n,
    const std::map<std::string, std::int64_t>& comment_counts = {});

// `task_kind,model_id,comments,total_cost,cost_per_<n>`
std::string cost_report_csv(const std::vector<CostRow>& rows, std::int64_t per_n);

}  // namespace surveylens
