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
#include <span>
#include <string>
#include <vector>

#include "surveylens/tasks.hpp"

namespace surveylens {

// An input theme as named in a coalesce prompt: set label plus title.
struct ThemeRef {
  std::string set;
  std::string title;

  auto operator<=>(const ThemeRef&) const = default;
};

struct Theme {
  std::string title;
  std::string description;
  std::int64_t count = 0;
  std::vector<ThemeRef> merged_from;  // empty until coalesced

  bool operator==(const Theme&) const = default;
};

struct ThemeSet {
  std::vector<Theme> themes;
  std::vector<std::string> source_batch_ids;
  std::vector<std::string> warnings;
  std::string reasoning;

  const Theme* find(std::string_view title) const;
  std::int64_t total_count() const;
  std::vector<Tag> as_labels() const;

  bool operator==(const ThemeSet&) const = default;
};

struct Batch {
  std::string batch_id;  // "B1", "B2", ...
  std::vector<TextItem> items;
  std::int64_t estimated_tokens = 0;
};

// Greedy, in input order. Each batch holds at most
// (context_budget - overhead) estimated tokens of item text. Throws
// Error(kInvalidArgument) naming the first item that cannot fit alone.
std::vector<Batch> make_batches(std::span<const TextItem> items,
                                std::int64_t context_budget,
                                std::int64_t overhead);

// Counts start at zero. Repeated titles keep the first occurrence and add a
// warning. Gateway errors propagate.
ThemeSet derive_themes(const Batch& batch, const std::string& question_text,
                       TaskContext& ctx);
// One slot per batch (slot id = batch id), run through the gateway in parallel.
std::vector<Slot<ThemeSet>> derive_themes_parallel(std::span<const Batch> batches,
                                                   const std::string& question_text,
                                                   TaskContext& ctx);

struct ThemeAssignment {
  std::vector<Slot<MultiClassResult>> assignments;
  ThemeSet themes;  // counts = successful assignments per title
};

// Multiclass over the theme titles. Throws on an empty theme set.
ThemeAssignment classify_with_themes(std::span<const TextItem> items,
                                     const ThemeSet& themes, TaskContext& ctx);

// Merges sets through the model, which only proposes groupings; counts
// are summed here. A single set comes back unchanged without a call. When
// the prompt would exceed `context_budget`, sets are merged in groups first.
ThemeSet coalesce_themes(const std::vector<ThemeSet>& sets, TaskContext& ctx,
                         std::int64_t context_budget = 8192);

// Listing used in coalesce prompts: "Set S1:" followed by "- title: description".
std::string render_theme_sets(const std::vector<ThemeSet>& sets);

// jsonl {title, description, count, merged_from} and csv `title,count`.
std::string themes_jsonl(const ThemeSet& set);
std::string themes_csv(const ThemeSet& set);
ThemeSet parse_themes_jsonl(std::string_view jsonl);

nlohmann::ordered_json theme_set_json(const ThemeSet& set);
ThemeSet theme_set_from_json(const json& doc);

}  // namespace surveylens
