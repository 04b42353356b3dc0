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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "surveylens/corpus.hpp"
#include "surveylens/tagset.hpp"
#include "surveylens/tasks.hpp"
#include "surveylens/thematic.hpp"

namespace surveylens {

enum class StageKind {
  kMultilabel,      // tag every item; passes on the items that succeeded
  kFilterTag,       // keep items whose multilabel result carries `param`
  kBinary,          // ask `param`; passes on the "yes" items
  kExtract,         // excerpts for goal `param` become the next items
  kMulticlass,      // one tag per item
  kDeriveThemes,    // batch the items and derive a theme set per batch
  kClassifyThemes,  // classify each batch against its own themes
  kCoalesce,        // merge the batch theme sets, summing counts
};

std::string_view to_string(StageKind kind);
StageKind parse_stage_kind(std::string_view name);

struct StageSpec {
  StageKind kind = StageKind::kMultilabel;
  std::string param;  // criterion, goal or tag name, depending on kind

  bool operator==(const StageSpec&) const = default;
};

struct WorkflowSpec {
  std::string name;
  std::vector<StageSpec> stages;

  bool operator==(const WorkflowSpec&) const = default;
};

// bottom-up-themes, top-down-multilabel, improvement-suggestions,
// content-gaps, focused-feedback.
const std::vector<std::string>& preset_names();
WorkflowSpec preset(std::string_view name);

// {"name": "...", "stages": [{"kind": "binary", "param": "..."}, ...]}
WorkflowSpec parse_workflow_spec(std::string_view json_text);
std::string workflow_spec_json(const WorkflowSpec& spec);

struct CountTable {
  std::vector<std::pair<std::string, std::int64_t>> rows;

  std::int64_t total() const;
  std::string to_csv() const;  // `key,count`
  bool operator==(const CountTable&) const = default;
};

struct StageRecord {
  std::string name;  // "01-binary"
  StageKind kind = StageKind::kMultilabel;
  std::string param;
  std::string source = "computed";  // or "reused" for prior results
  bool from_cache = false;          // reported in run_info.json only
  std::size_t input_count = 0;
  std::size_t output_count = 0;
  std::size_t error_count = 0;
  std::string artifact;  // file name inside the run directory
  std::vector<std::pair<std::string, std::string>> stats;
  std::optional<CountTable> counts;
};

struct StageError {
  std::string stage;
  std::string id;
  SlotError error;
};

struct WorkflowOptions {
  TagSet tagset = TagSet::course_feedback();
  std::int64_t context_budget = 8192;
  std::int64_t completion_reserve = 1024;  // kept free in every theme batch
  // Multilabel results from an earlier run; the multilabel stage reuses them.
  std::optional<std::vector<Slot<MultiLabelResult>>> prior_multilabel;
  // When set, artifacts go here and completed stages are cached under
  // `<run_dir>/cache`.
  std::optional<std::filesystem::path> run_dir;
  bool use_cache = true;
};

struct WorkflowRun {
  std::string workflow;
  std::string model_id;
  std::string config_hash;
  std::size_t corpus_size = 0;
  std::vector<StageRecord> stages;
  std::vector<StageError> errors;
  std::optional<CountTable> counts;  // last stage that produced one
  std::optional<ThemeSet> themes;    // thematic workflows
  std::vector<Excerpt> excerpts;     // last extraction stage
  std::string started_at;
  std::string finished_at;
  std::vector<LedgerEntry> ledger;   // calls made by this run, sorted

  bool partial() const { return !errors.empty(); }
};

// Runs the stages in order over the corpus sorted by id. Throws
// Error(kInvalidArgument) "empty corpus" on an empty corpus; item failures
// are collected in `errors` instead.
WorkflowRun run_workflow(const WorkflowSpec& spec, const Corpus& corpus,
                         TaskContext& ctx, const WorkflowOptions& options = {});

WorkflowRun run_bottom_up_themes(const Corpus& corpus, TaskContext& ctx,
                                 const WorkflowOptions& options = {});
WorkflowRun run_top_down_multilabel(const Corpus& corpus, TaskContext& ctx,
                                    const WorkflowOptions& options = {});
WorkflowRun run_improvement_suggestions(const Corpus& corpus, TaskContext& ctx,
                                        const WorkflowOptions& options = {});
WorkflowRun run_content_gaps(const Corpus& corpus, TaskContext& ctx,
                             const WorkflowOptions& options = {});
WorkflowRun run_focused_feedback(const Corpus& corpus, TaskContext& ctx,
                                 const std::string& focus_tag, const std::string& goal,
                                 const WorkflowOptions& options = {});

// Deterministic manifest (no timestamps, no cache state).
std::string manifest_json(const WorkflowRun& run);
std::string errors_jsonl(const WorkflowRun& run);

}  // namespace surveylens
