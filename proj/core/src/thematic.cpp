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

#include "surveylens/thematic.hpp"

#include <map>
#include <set>

#include "surveylens/csv.hpp"
#include "surveylens/error.hpp"

namespace surveylens {
namespace {

std::string set_label(std::size_t index) { return "S" + std::to_string(index + 1); }

std::optional<std::string> check_titles(const json& themes) {
  for (const auto& t : themes) {
    const auto& title = t.at("title").get_ref<const std::string&>();
    if (trim(title).empty()) return "every theme needs a non-empty title";
  }
  return std::nullopt;
}

ThemeSet themes_from_payload(const json& payload, std::string batch_id,
                             std::string reasoning) {
  ThemeSet set;
  if (!batch_id.empty()) set.source_batch_ids.push_back(std::move(batch_id));
  set.reasoning = std::move(reasoning);
  std::set<std::string> seen;
  for (const auto& t : payload.at("themes")) {
    std::string title(trim(t.at("title").get<std::string>()));
    if (!seen.insert(title).second) {
      set.warnings.push_back("duplicate theme title '" + title + "' dropped");
      continue;
    }
    set.themes.push_back(Theme{std::move(title), t.at("description").get<std::string>(),
                               0, {}});
  }
  return set;
}

PromptBundle derive_bundle(const Batch& batch, const std::string& question_text,
                           TaskContext& ctx) {
  if (batch.items.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "batch " + batch.batch_id + " is empty");
  }
  PromptInputs in;
  in.question = question_text;
  for (const auto& item : batch.items) in.comments.push_back(item.text);
  PromptBundle bundle =
      build_prompt(TaskKind::kThemes, in, ctx.templates, ctx.model_id, ctx.temperature);
  auto base = bundle.validator;
  bundle.validator = [base](const json& doc) -> std::optional<std::string> {
    if (auto err = base(doc)) return err;
    return check_titles(doc.at("themes"));
  };
  return bundle;
}

// Checks that the proposed groups partition the input themes exactly.
PayloadValidator partition_validator(const std::vector<ThemeSet>& sets) {
  std::set<ThemeRef> inputs;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (const auto& t : sets[i].themes) inputs.insert(ThemeRef{set_label(i), t.title});
  }
  return [inputs](const json& doc) -> std::optional<std::string> {
    std::set<ThemeRef> used;
    std::set<std::string> titles;
    for (const auto& theme : doc.at("themes")) {
      const std::string title(trim(theme.at("title").get<std::string>()));
      if (title.empty()) return "every theme needs a non-empty title";
      if (!titles.insert(title).second) {
        return "theme title '" + title + "' is used more than once";
      }
      if (theme.at("members").empty()) {
        return "theme '" + title + "' lists no members";
      }
      for (const auto& m : theme.at("members")) {
        ThemeRef ref{std::string(trim(m.at("set").get<std::string>())),
                     m.at("title").get<std::string>()};
        if (!inputs.contains(ref)) {
          return "member " + ref.set + " '" + ref.title +
                 "' does not name an input theme";
        }
        if (!used.insert(ref).second) {
          return "input theme " + ref.set + " '" + ref.title +
                 "' is a member of more than one theme";
        }
      }
    }
    for (const auto& ref : inputs) {
      if (!used.contains(ref)) {
        return "input theme " + ref.set + " '" + ref.title +
               "' is not a member of any theme";
      }
    }
    return std::nullopt;
  };
}

PromptBundle coalesce_bundle(const std::vector<ThemeSet>& sets, TaskContext& ctx) {
  PromptInputs in;
  in.themes = render_theme_sets(sets);
  PromptBundle bundle =
      build_prompt(TaskKind::kCoalesce, in, ctx.templates, ctx.model_id, ctx.temperature);
  auto base = bundle.validator;
  auto partition = partition_validator(sets);
  bundle.validator = [base, partition](const json& doc) -> std::optional<std::string> {
    if (auto err = base(doc)) return err;
    return partition(doc);
  };
  return bundle;
}

// One model call over `sets`. Members' merged_from lists are carried up so
// the result always refers back to the original inputs.
ThemeSet coalesce_once(const std::vector<ThemeSet>& sets, TaskContext& ctx) {
  const TaskOutcome outcome = ctx.gateway.complete_structured(coalesce_bundle(sets, ctx));
  std::map<ThemeRef, const Theme*> lookup;
  ThemeSet out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (const auto& t : sets[i].themes) lookup[ThemeRef{set_label(i), t.title}] = &t;
    out.source_batch_ids.insert(out.source_batch_ids.end(),
                                sets[i].source_batch_ids.begin(),
                                sets[i].source_batch_ids.end());
    out.warnings.insert(out.warnings.end(), sets[i].warnings.begin(),
                        sets[i].warnings.end());
  }
  out.reasoning = outcome.reasoning;
  for (const auto& t : outcome.payload.at("themes")) {
    Theme theme{std::string(trim(t.at("title").get<std::string>())),
                t.at("description").get<std::string>(), 0, {}};
    for (const auto& m : t.at("members")) {
      const Theme* member = lookup.at(ThemeRef{std::string(trim(m.at("set").get<std::string>())),
                                               m.at("title").get<std::string>()});
      theme.count += member->count;
      theme.merged_from.insert(theme.merged_from.end(), member->merged_from.begin(),
                               member->merged_from.end());
    }
    out.themes.push_back(std::move(theme));
  }
  return out;
}

std::int64_t prompt_tokens(const std::vector<ThemeSet>& sets, TaskContext& ctx) {
  const PromptBundle b = coalesce_bundle(sets, ctx);
  return estimate_tokens(b.system_text) + estimate_tokens(b.user_text);
}

}  // namespace

const Theme* ThemeSet::find(std::string_view title) const {
  for (const auto& t : themes) {
    if (t.title == title) return &t;
  }
  return nullptr;
}

std::int64_t ThemeSet::total_count() const {
  std::int64_t total = 0;
  for (const auto& t : themes) total += t.count;
  return total;
}

std::vector<Tag> ThemeSet::as_labels() const {
  std::vector<Tag> out;
  for (const auto& t : themes) {
    out.push_back(Tag{t.title, t.description.empty() ? t.title : t.description});
  }
  return out;
}

std::vector<Batch> make_batches(std::span<const TextItem> items,
                                std::int64_t context_budget, std::int64_t overhead) {
  if (overhead < 0 || context_budget <= overhead) {
    throw Error(ErrorKind::kInvalidArgument,
                "context budget must exceed the prompt overhead");
  }
  const std::int64_t capacity = context_budget - overhead;
  std::vector<Batch> batches;
  Batch current;
  for (const auto& item : items) {
    const std::int64_t tokens = estimate_tokens(item.text);
    if (tokens > capacity) {
      throw Error(ErrorKind::kInvalidArgument,
                  "item '" + item.id + "' needs " + std::to_string(tokens) +
                      " estimated tokens but a batch holds " +
                      std::to_string(capacity));
    }
    if (!current.items.empty() && current.estimated_tokens + tokens > capacity) {
      batches.push_back(std::move(current));
      current = Batch{};
    }
    current.items.push_back(item);
    current.estimated_tokens += tokens;
  }
  if (!current.items.empty()) batches.push_back(std::move(current));
  for (std::size_t i = 0; i < batches.size(); ++i) {
    batches[i].batch_id = "B" + std::to_string(i + 1);
  }
  return batches;
}

ThemeSet derive_themes(const Batch& batch, const std::string& question_text,
                       TaskContext& ctx) {
  const TaskOutcome o =
      ctx.gateway.complete_structured(derive_bundle(batch, question_text, ctx));
  return themes_from_payload(o.payload, batch.batch_id, o.reasoning);
}

std::vector<Slot<ThemeSet>> derive_themes_parallel(std::span<const Batch> batches,
                                                   const std::string& question_text,
                                                   TaskContext& ctx) {
  std::vector<PromptBundle> bundles;
  for (const auto& b : batches) bundles.push_back(derive_bundle(b, question_text, ctx));
  auto outcomes = ctx.gateway.run_parallel(bundles);
  std::vector<Slot<ThemeSet>> out;
  for (std::size_t i = 0; i < batches.size(); ++i) {
    const std::string& id = batches[i].batch_id;
    if (outcomes[i].ok()) {
      out.push_back(Slot<ThemeSet>::success(
          themes_from_payload(outcomes[i].value->payload, id,
                              outcomes[i].value->reasoning),
          id));
    } else {
      out.push_back(Slot<ThemeSet>::failure(*outcomes[i].error, id));
    }
  }
  return out;
}

ThemeAssignment classify_with_themes(std::span<const TextItem> items,
                                     const ThemeSet& themes, TaskContext& ctx) {
  if (themes.themes.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "cannot classify against an empty theme set");
  }
  ThemeAssignment result;
  result.assignments = classify_multiclass(items, themes.as_labels(), ctx);
  result.themes = themes;
  std::map<std::string, std::int64_t> counts;
  for (const auto& slot : result.assignments) {
    if (slot.ok()) ++counts[slot.value->label];
  }
  for (auto& t : result.themes.themes) t.count = counts[t.title];
  return result;
}

std::string render_theme_sets(const std::vector<ThemeSet>& sets) {
  std::string out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i) out += "\n\n";
    out += "Set " + set_label(i) + ":";
    for (const auto& t : sets[i].themes) {
      out += "\n- " + t.title + ": " + t.description;
    }
  }
  return out;
}

ThemeSet coalesce_themes(const std::vector<ThemeSet>& sets, TaskContext& ctx,
                         std::int64_t context_budget) {
  if (sets.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "coalesce needs at least one theme set");
  }
  if (sets.size() == 1) return sets.front();

  std::vector<ThemeSet> work = sets;
  for (std::size_t i = 0; i < work.size(); ++i) {
    for (auto& t : work[i].themes) {
      if (t.merged_from.empty()) t.merged_from.push_back(ThemeRef{set_label(i), t.title});
    }
  }
  while (work.size() > 1) {
    if (prompt_tokens(work, ctx) <= context_budget) return coalesce_once(work, ctx);
    // Greedy groups of at least two sets, so every pass shrinks the list.
    std::vector<std::vector<ThemeSet>> groups;
    for (auto& set : work) {
      if (!groups.empty()) {
        auto trial = groups.back();
        trial.push_back(set);
        if (groups.back().size() < 2 || prompt_tokens(trial, ctx) <= context_budget) {
          groups.back().push_back(std::move(set));
          continue;
        }
      }
      groups.push_back({std::move(set)});
    }
    std::vector<ThemeSet> next;
    for (auto& g : groups) {
      next.push_back(g.size() == 1 ? std::move(g.front()) : coalesce_once(g, ctx));
    }
    work = std::move(next);
  }
  return work.front();
}

nlohmann::ordered_json theme_set_json(const ThemeSet& set) {
  nlohmann::ordered_json doc;
  auto themes = nlohmann::ordered_json::array();
  for (const auto& t : set.themes) {
    nlohmann::ordered_json theme;
    theme["title"] = t.title;
    theme["description"] = t.description;
    theme["count"] = t.count;
    auto merged = nlohmann::ordered_json::array();
    for (const auto& r : t.merged_from) {
      merged.push_back({{"set", r.set}, {"title", r.title}});
    }
    theme["merged_from"] = std::move(merged);
    themes.push_back(std::move(theme));
  }
  doc["themes"] = std::move(themes);
  doc["source_batch_ids"] = set.source_batch_ids;
  doc["warnings"] = set.warnings;
  doc["reasoning"] = set.reasoning;
  return doc;
}

ThemeSet theme_set_from_json(const json& doc) {
  ThemeSet set;
  for (const auto& t : doc.at("themes")) {
    Theme theme{t.at("title").get<std::string>(), t.at("description").get<std::string>(),
                t.at("count").get<std::int64_t>(), {}};
    for (const auto& r : t.at("merged_from")) {
      theme.merged_from.push_back(
          ThemeRef{r.at("set").get<std::string>(), r.at("title").get<std::string>()});
    }
    set.themes.push_back(std::move(theme));
  }
  set.source_batch_ids = doc.value("source_batch_ids", std::vector<std::string>{});
  set.warnings = doc.value("warnings", std::vector<std::string>{});
  set.reasoning = doc.value("reasoning", std::string());
  return set;
}

std::string themes_jsonl(const ThemeSet& set) {
  const auto doc = theme_set_json(set);
  std::string out;
  for (const auto& t : doc["themes"]) out += t.dump() + "\n";
  return out;
}

std::string themes_csv(const ThemeSet& set) {
  std::string out = csv_row({"title", "count"});
  for (const auto& t : set.themes) out += csv_row({t.title, std::to_string(t.count)});
  return out;
}

ThemeSet parse_themes_jsonl(std::string_view jsonl) {
  json doc = {{"themes", json::array()}};
  std::size_t start = 0;
  while (start < jsonl.size()) {
    auto end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    const auto line = trim(jsonl.substr(start, end - start));
    if (!line.empty()) doc["themes"].push_back(json::parse(line));
    start = end + 1;
  }
  return theme_set_from_json(doc);
}

}  // namespace surveylens
