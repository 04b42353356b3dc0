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

#include "surveylens/workflows.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

#include "surveylens/csv.hpp"
#include "surveylens/error.hpp"
#include "surveylens/evaluation.hpp"

namespace surveylens {
namespace {

using ojson = nlohmann::ordered_json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string two_digit(std::size_t n) {
  return n < 10 ? "0" + std::to_string(n) : std::to_string(n);
}

ojson items_json(const std::vector<TextItem>& items) {
  ojson out = ojson::array();
  for (const auto& i : items) out.push_back({i.id, i.text, i.question_text});
  return out;
}

template <class T>
bool all_ok(const std::vector<Slot<T>>& slots) {
  return std::all_of(slots.begin(), slots.end(), [](const Slot<T>& s) { return s.ok(); });
}

std::string joined_questions(const std::vector<TextItem>& items) {
  std::vector<std::string> seen;
  for (const auto& i : items) {
    if (std::find(seen.begin(), seen.end(), i.question_text) == seen.end()) {
      seen.push_back(i.question_text);
    }
  }
  std::string out;
  for (const auto& q : seen) {
    if (!out.empty()) out += " / ";
    out += q;
  }
  return out;
}

void validate_spec(const WorkflowSpec& spec, const TagSet& tagset, bool has_prior) {
  if (spec.stages.empty()) {
    throw Error(ErrorKind::kConfig, "workflow '" + spec.name + "' has no stages");
  }
  bool multilabel = false;
  bool derived = false;
  for (const auto& s : spec.stages) {
    switch (s.kind) {
      case StageKind::kMultilabel:
        multilabel = true;
        break;
      case StageKind::kFilterTag:
        if (!multilabel && !has_prior) {
          throw Error(ErrorKind::kConfig, "filter_tag needs an earlier multilabel stage");
        }
        if (!tagset.contains(s.param)) {
          throw Error(ErrorKind::kConfig,
                      "focus tag '" + s.param + "' is not in the tag set");
        }
        break;
      case StageKind::kBinary:
      case StageKind::kExtract:
        if (trim(s.param).empty()) {
          throw Error(ErrorKind::kConfig,
                      std::string(to_string(s.kind)) + " stage needs a parameter");
        }
        break;
      case StageKind::kDeriveThemes:
        derived = true;
        break;
      case StageKind::kClassifyThemes:
      case StageKind::kCoalesce:
        if (!derived) {
          throw Error(ErrorKind::kConfig, std::string(to_string(s.kind)) +
                                              " needs an earlier derive_themes stage");
        }
        break;
      case StageKind::kMulticlass:
        break;
    }
  }
}

CountTable tag_counts(const TagSet& tagset, const std::vector<std::set<std::string>>& sets) {
  CountTable table;
  for (const auto& tag : tagset.tags()) {
    std::int64_t n = 0;
    for (const auto& s : sets) n += s.count(tag.name);
    table.rows.emplace_back(tag.name, n);
  }
  return table;
}

CountTable theme_counts(const ThemeSet& set, const std::string& prefix = {}) {
  CountTable table;
  for (const auto& t : set.themes) table.rows.emplace_back(prefix + t.title, t.count);
  return table;
}

class Runner {
 public:
  Runner(const WorkflowSpec& spec, TaskContext& ctx, const WorkflowOptions& options,
         WorkflowRun& run)
      : spec_(spec), ctx_(ctx), options_(options), run_(run) {}

  void run(std::vector<TextItem> items) {
    items_ = std::move(items);
    for (std::size_t i = 0; i < spec_.stages.size(); ++i) {
      const StageSpec& s = spec_.stages[i];
      StageRecord rec;
      rec.name = two_digit(i + 1) + "-" + std::string(to_string(s.kind));
      rec.kind = s.kind;
      rec.param = s.param;
      rec.artifact = rec.name + ".jsonl";
      rec.input_count = items_.size();
      std::string artifact;
      switch (s.kind) {
        case StageKind::kMultilabel: artifact = multilabel(rec); break;
        case StageKind::kFilterTag: artifact = filter_tag(s, rec); break;
        case StageKind::kBinary: artifact = binary(s, rec); break;
        case StageKind::kExtract: artifact = extract(s, rec); break;
        case StageKind::kMulticlass: artifact = multiclass(rec); break;
        case StageKind::kDeriveThemes: artifact = derive(rec); break;
        case StageKind::kClassifyThemes: artifact = classify_themes(rec); break;
        case StageKind::kCoalesce: artifact = coalesce(rec); break;
      }
      if (rec.counts) run_.counts = rec.counts;
      artifacts_.emplace_back(rec.artifact, std::move(artifact));
      run_.stages.push_back(std::move(rec));
    }
    if (themes_) run_.themes = themes_;
    run_.excerpts = excerpts_;
  }

  const std::vector<std::pair<std::string, std::string>>& artifacts() const {
    return artifacts_;
  }

 private:
  std::string stage_key(const StageRecord& rec, const std::vector<TextItem>& items) const {
    ojson key;
    key["stage"] = to_string(rec.kind);
    key["param"] = rec.param;
    key["items"] = items_json(items);
    key["model"] = ctx_.model_id;
    key["temperature"] = ctx_.temperature;
    key["tagset"] = options_.tagset.to_json();
    key["budget"] = {options_.context_budget, options_.completion_reserve};
    ojson tpl = ojson::array();
    for (TaskKind k : kAllTaskKinds) tpl.push_back(ctx_.templates.fingerprint(k));
    key["templates"] = std::move(tpl);
    return hex64(fnv1a64(key.dump()));
  }

  std::optional<std::filesystem::path> cache_path(const std::string& key) const {
    if (!options_.run_dir || !options_.use_cache) return std::nullopt;
    return *options_.run_dir / "cache" / (key + ".jsonl");
  }

  std::optional<std::string> cache_get(const std::string& key) const {
    auto path = cache_path(key);
    if (!path || !std::filesystem::exists(*path)) return std::nullopt;
    return read_file(*path);
  }

  void cache_put(const std::string& key, const std::string& text) const {
    if (auto path = cache_path(key)) write_file(*path, text);
  }

  // Returns cached slots when the same stage input was completed before.
  template <class T, class Fn>
  std::vector<Slot<T>> cached_slots(StageRecord& rec, const std::vector<TextItem>& items,
                                    Fn compute) {
    const std::string key = stage_key(rec, items);
    if (auto text = cache_get(key)) {
      rec.from_cache = true;
      return parse_jsonl_records<T>(*text);
    }
    auto slots = compute();
    if (all_ok(slots)) cache_put(key, to_jsonl(slots));
    return slots;
  }

  void add_error(const StageRecord& rec, const std::string& id, SlotError e) {
    run_.errors.push_back(StageError{rec.name, id, std::move(e)});
  }

  template <class T>
  void note_errors(StageRecord& rec, const std::vector<Slot<T>>& slots) {
    for (const auto& s : slots) {
      if (!s.ok()) {
        add_error(rec, s.id, *s.error);
        ++rec.error_count;
      }
    }
  }

  std::string multilabel(StageRecord& rec) {
    std::vector<Slot<MultiLabelResult>> slots;
    if (options_.prior_multilabel) {
      rec.source = "reused";
      std::map<std::string, const Slot<MultiLabelResult>*> prior;
      for (const auto& s : *options_.prior_multilabel) prior[s.id] = &s;
      for (const auto& item : items_) {
        auto it = prior.find(item.id);
        if (it == prior.end()) {
          slots.push_back(Slot<MultiLabelResult>::failure(
              SlotError{ErrorKind::kInvalidArgument, "no prior multilabel result", 0, {}},
              item.id));
        } else {
          slots.push_back(*it->second);
        }
      }
    } else {
      slots = cached_slots<MultiLabelResult>(rec, items_, [&] {
        return classify_multilabel(items_, options_.tagset, ctx_);
      });
    }
    note_errors(rec, slots);
    std::vector<TextItem> next;
    std::vector<std::set<std::string>> sets;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i].ok()) continue;
      labels_[items_[i].id] = slots[i].value->labels;
      sets.push_back(slots[i].value->labels);
      next.push_back(items_[i]);
    }
    rec.counts = tag_counts(options_.tagset, sets);
    items_ = std::move(next);
    rec.output_count = items_.size();
    return to_jsonl(slots);
  }

  std::string filter_tag(const StageSpec& s, StageRecord& rec) {
    std::vector<TextItem> next;
    std::string artifact;
    for (const auto& item : items_) {
      auto it = labels_.find(item.id);
      if (it != labels_.end() && it->second.contains(s.param)) {
        next.push_back(item);
        ojson line;
        line["id"] = item.id;
        artifact += line.dump() + "\n";
      }
    }
    items_ = std::move(next);
    rec.output_count = items_.size();
    const double fraction =
        run_.corpus_size == 0
            ? 0.0
            : static_cast<double>(items_.size()) / static_cast<double>(run_.corpus_size);
    rec.stats.emplace_back("retained_fraction", format_metric(fraction, 4));
    return artifact;
  }

  std::string binary(const StageSpec& s, StageRecord& rec) {
    auto slots = cached_slots<BinaryResult>(
        rec, items_, [&] { return classify_binary(items_, s.param, ctx_); });
    note_errors(rec, slots);
    std::vector<TextItem> next;
    std::size_t no = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i].ok()) continue;
      if (slots[i].value->answer) {
        next.push_back(items_[i]);
      } else {
        ++no;
      }
    }
    rec.stats.emplace_back("yes", std::to_string(next.size()));
    rec.stats.emplace_back("no", std::to_string(no));
    items_ = std::move(next);
    rec.output_count = items_.size();
    return to_jsonl(slots);
  }

  std::string extract(const StageSpec& s, StageRecord& rec) {
    auto slots = cached_slots<ExtractionResult>(
        rec, items_, [&] { return extract_excerpts(items_, s.param, ctx_); });
    note_errors(rec, slots);
    std::vector<TextItem> next;
    excerpts_.clear();
    std::size_t empty = 0;
    std::size_t unlocated = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i].ok()) continue;
      const auto& ex = slots[i].value->excerpts;
      if (ex.empty()) ++empty;
      for (std::size_t k = 0; k < ex.size(); ++k) {
        if (!ex[k].span) ++unlocated;
        next.push_back(TextItem{items_[i].id + "#" + std::to_string(k + 1), ex[k].text,
                                items_[i].question_text});
        excerpts_.push_back(ex[k]);
      }
    }
    rec.stats.emplace_back("items_without_excerpts", std::to_string(empty));
    rec.stats.emplace_back("unlocated_excerpts", std::to_string(unlocated));
    items_ = std::move(next);
    rec.output_count = items_.size();
    return to_jsonl(slots);
  }

  std::string multiclass(StageRecord& rec) {
    auto slots = cached_slots<MultiClassResult>(rec, items_, [&] {
      return classify_multiclass(items_, options_.tagset.tags(), ctx_);
    });
    note_errors(rec, slots);
    std::vector<TextItem> next;
    std::vector<std::set<std::string>> sets;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i].ok()) continue;
      sets.push_back({slots[i].value->label});
      next.push_back(items_[i]);
    }
    rec.counts = tag_counts(options_.tagset, sets);
    items_ = std::move(next);
    rec.output_count = items_.size();
    return to_jsonl(slots);
  }

  std::string derive(StageRecord& rec) {
    PromptInputs empty;
    empty.question = joined_questions(items_);
    const PromptBundle probe =
        build_prompt(TaskKind::kThemes, empty, ctx_.templates, ctx_.model_id);
    const std::int64_t overhead = estimate_tokens(probe.system_text) +
                                  estimate_tokens(probe.user_text) +
                                  options_.completion_reserve;
    batches_ = make_batches(items_, options_.context_budget, overhead);
    batch_sets_.assign(batches_.size(), std::nullopt);
    rec.stats.emplace_back("batches", std::to_string(batches_.size()));

    const std::string key = stage_key(rec, items_);
    std::string artifact;
    if (auto text = cache_get(key)) {
      rec.from_cache = true;
      artifact = *text;
      std::size_t b = 0;
      for (const auto& line : split_lines(artifact)) {
        batch_sets_.at(b++) = theme_set_from_json(json::parse(line).at("set"));
      }
    } else {
      auto slots = derive_themes_parallel(batches_, empty.question, ctx_);
      for (std::size_t b = 0; b < slots.size(); ++b) {
        ojson line;
        line["id"] = batches_[b].batch_id;
        ojson ids = ojson::array();
        for (const auto& item : batches_[b].items) ids.push_back(item.id);
        line["items"] = std::move(ids);
        if (slots[b].ok()) {
          line["status"] = "ok";
          line["set"] = theme_set_json(*slots[b].value);
          batch_sets_[b] = *slots[b].value;
        } else {
          line["status"] = "error";
          line["error"] = error_json(*slots[b].error);
        }
        artifact += line.dump() + "\n";
      }
      note_errors(rec, slots);
      if (all_ok(slots)) cache_put(key, artifact);
    }
    std::size_t themes = 0;
    for (const auto& s : batch_sets_) {
      if (s) themes += s->themes.size();
    }
    rec.output_count = themes;
    return artifact;
  }

  std::string classify_themes(StageRecord& rec) {
    // Items keep their batch: each batch is classified against its own themes.
    std::vector<TextItem> classifiable;
    std::vector<std::size_t> batch_of;
    for (std::size_t b = 0; b < batches_.size(); ++b) {
      const bool usable = batch_sets_[b] && !batch_sets_[b]->themes.empty();
      for (const auto& item : batches_[b].items) {
        if (usable) {
          classifiable.push_back(item);
          batch_of.push_back(b);
        } else {
          add_error(rec, item.id,
                    SlotError{ErrorKind::kInvalidArgument,
                              "batch " + batches_[b].batch_id + " has no themes", 0, {}});
          ++rec.error_count;
        }
      }
    }
    auto slots = cached_slots<MultiClassResult>(rec, classifiable, [&] {
      std::vector<Slot<MultiClassResult>> all;
      for (std::size_t b = 0; b < batches_.size(); ++b) {
        if (!batch_sets_[b] || batch_sets_[b]->themes.empty()) continue;
        auto part = classify_with_themes(batches_[b].items, *batch_sets_[b], ctx_);
        all.insert(all.end(), part.assignments.begin(), part.assignments.end());
      }
      return all;
    });
    note_errors(rec, slots);
    for (auto& s : batch_sets_) {
      if (!s) continue;
      for (auto& t : s->themes) t.count = 0;
    }
    std::vector<TextItem> next;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i].ok()) continue;
      ThemeSet& set = *batch_sets_[batch_of[i]];
      for (auto& t : set.themes) {
        if (t.title == slots[i].value->label) ++t.count;
      }
      next.push_back(classifiable[i]);
    }
    CountTable table;
    for (std::size_t b = 0; b < batches_.size(); ++b) {
      if (!batch_sets_[b]) continue;
      const auto part = theme_counts(*batch_sets_[b], batches_[b].batch_id + ": ");
      table.rows.insert(table.rows.end(), part.rows.begin(), part.rows.end());
    }
    rec.counts = std::move(table);
    items_ = std::move(next);
    rec.output_count = items_.size();
    return to_jsonl(slots);
  }

  std::string coalesce(StageRecord& rec) {
    std::vector<ThemeSet> sets;
    std::size_t input_themes = 0;
    for (const auto& s : batch_sets_) {
      if (!s) continue;
      sets.push_back(*s);
      input_themes += s->themes.size();
    }
    rec.input_count = input_themes;
    ThemeSet result;
    if (sets.size() == 1) {
      result = sets.front();
    } else if (sets.size() > 1) {
      std::vector<TextItem> key_items;
      for (const auto& s : sets) {
        key_items.push_back(TextItem{"set", theme_set_json(s).dump(), {}});
      }
      const std::string key = stage_key(rec, key_items);
      if (auto text = cache_get(key)) {
        rec.from_cache = true;
        result = parse_themes_jsonl(*text);
      } else {
        try {
          result = coalesce_themes(sets, ctx_, options_.context_budget);
          cache_put(key, themes_jsonl(result));
        } catch (const std::exception& e) {
          add_error(rec, "*", to_slot_error(e));
          ++rec.error_count;
        }
      }
    }
    rec.counts = theme_counts(result);
    rec.output_count = result.themes.size();
    rec.stats.emplace_back("input_sets", std::to_string(sets.size()));
    themes_ = result;
    return themes_jsonl(result);
  }

  static std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      if (end > start) out.push_back(text.substr(start, end - start));
      start = end + 1;
    }
    return out;
  }

  const WorkflowSpec& spec_;
  TaskContext& ctx_;
  const WorkflowOptions& options_;
  WorkflowRun& run_;

  std::vector<TextItem> items_;
  std::map<std::string, std::set<std::string>> labels_;
  std::vector<Batch> batches_;
  std::vector<std::optional<ThemeSet>> batch_sets_;
  std::optional<ThemeSet> themes_;
  std::vector<Excerpt> excerpts_;
  std::vector<std::pair<std::string, std::string>> artifacts_;
};

std::string config_hash(const WorkflowSpec& spec, TaskContext& ctx,
                        const WorkflowOptions& options) {
  ojson doc;
  doc["workflow"] = json::parse(workflow_spec_json(spec));
  doc["tagset"] = options.tagset.to_json();
  doc["model"] = ctx.model_id;
  doc["temperature"] = ctx.temperature;
  doc["budget"] = {options.context_budget, options.completion_reserve};
  ojson tpl = ojson::array();
  for (TaskKind k : kAllTaskKinds) tpl.push_back(ctx.templates.fingerprint(k));
  doc["templates"] = std::move(tpl);
  return hex64(fnv1a64(doc.dump()));
}

std::string run_info_json(const WorkflowRun& run) {
  ojson doc;
  doc["workflow"] = run.workflow;
  doc["started_at"] = run.started_at;
  doc["finished_at"] = run.finished_at;
  ojson cached = ojson::array();
  for (const auto& s : run.stages) {
    if (s.from_cache) cached.push_back(s.name);
  }
  doc["cached_stages"] = std::move(cached);
  Usage total;
  for (const auto& e : run.ledger) {
    total.prompt_tokens += e.usage.prompt_tokens;
    total.completion_tokens += e.usage.completion_tokens;
  }
  doc["calls"] = run.ledger.size();
  doc["usage"] = usage_json(total);
  return doc.dump(2) + "\n";
}

void write_run_dir(const std::filesystem::path& dir, const WorkflowRun& run,
                   const std::vector<std::pair<std::string, std::string>>& artifacts) {
  for (const auto& [name, text] : artifacts) write_file(dir / name, text);
  write_file(dir / "manifest.json", manifest_json(run));
  write_file(dir / "counts.csv",
             run.counts ? run.counts->to_csv() : CountTable{}.to_csv());
  write_file(dir / "errors.jsonl", errors_jsonl(run));
  if (run.themes) {
    write_file(dir / "themes.jsonl", themes_jsonl(*run.themes));
    write_file(dir / "themes.csv", themes_csv(*run.themes));
  }
  write_file(dir / "ledger.csv", UsageLedger(run.ledger).to_csv());
  write_file(dir / "run_info.json", run_info_json(run));
}

}  // namespace

std::string_view to_string(StageKind kind) {
  switch (kind) {
    case StageKind::kMultilabel: return "multilabel";
    case StageKind::kFilterTag: return "filter_tag";
    case StageKind::kBinary: return "binary";
    case StageKind::kExtract: return "extract";
    case StageKind::kMulticlass: return "multiclass";
    case StageKind::kDeriveThemes: return "derive_themes";
    case StageKind::kClassifyThemes: return "classify_themes";
    case StageKind::kCoalesce: return "coalesce";
  }
  return "unknown";
}

StageKind parse_stage_kind(std::string_view name) {
  for (StageKind k : {StageKind::kMultilabel, StageKind::kFilterTag, StageKind::kBinary,
                      StageKind::kExtract, StageKind::kMulticlass,
                      StageKind::kDeriveThemes, StageKind::kClassifyThemes,
                      StageKind::kCoalesce}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::kConfig, "unknown stage kind '" + std::string(name) + "'");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "bottom-up-themes", "top-down-multilabel", "improvement-suggestions",
      "content-gaps", "focused-feedback"};
  return names;
}

WorkflowSpec preset(std::string_view name) {
  if (name == "bottom-up-themes") {
    return {"bottom-up-themes",
            {{StageKind::kDeriveThemes, {}},
             {StageKind::kClassifyThemes, {}},
             {StageKind::kCoalesce, {}}}};
  }
  if (name == "top-down-multilabel") {
    return {"top-down-multilabel", {{StageKind::kMultilabel, {}}}};
  }
  if (name == "improvement-suggestions") {
    return {"improvement-suggestions",
            {{StageKind::kBinary,
              "does this comment contain suggestions for improvement?"},
             {StageKind::kExtract, "suggestions for improvement"},
             {StageKind::kMulticlass, {}}}};
  }
  if (name == "content-gaps") {
    return {"content-gaps",
            {{StageKind::kExtract, "suggestions for new course content or topics to cover"},
             {StageKind::kDeriveThemes, {}},
             {StageKind::kClassifyThemes, {}},
             {StageKind::kCoalesce, {}}}};
  }
  if (name == "focused-feedback") {
    return {"focused-feedback",
            {{StageKind::kMultilabel, {}},
             {StageKind::kFilterTag, "Teaching"},
             {StageKind::kExtract, "feedback about the teaching and explanations"}}};
  }
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown workflow preset '" + std::string(name) + "' (known: " + known + ")");
}

WorkflowSpec parse_workflow_spec(std::string_view json_text) {
  WorkflowSpec spec;
  try {
    const json doc = json::parse(json_text);
    spec.name = doc.at("name").get<std::string>();
    for (const auto& s : doc.at("stages")) {
      spec.stages.push_back(StageSpec{parse_stage_kind(s.at("kind").get<std::string>()),
                                      s.value("param", std::string())});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("workflow spec: ") + e.what());
  }
  return spec;
}

std::string workflow_spec_json(const WorkflowSpec& spec) {
  ojson doc;
  doc["name"] = spec.name;
  doc["stages"] = ojson::array();
  for (const auto& s : spec.stages) {
    doc["stages"].push_back({{"kind", to_string(s.kind)}, {"param", s.param}});
  }
  return doc.dump(2) + "\n";
}

std::int64_t CountTable::total() const {
  std::int64_t sum = 0;
  for (const auto& [_, n] : rows) sum += n;
  return sum;
}

std::string CountTable::to_csv() const {
  std::string out = csv_row({"key", "count"});
  for (const auto& [key, n] : rows) out += csv_row({key, std::to_string(n)});
  return out;
}

WorkflowRun run_workflow(const WorkflowSpec& spec, const Corpus& corpus,
                         TaskContext& ctx, const WorkflowOptions& options) {
  if (corpus.empty()) throw Error(ErrorKind::kInvalidArgument, "empty corpus");
  validate_spec(spec, options.tagset, options.prior_multilabel.has_value());

  WorkflowRun run;
  run.workflow = spec.name;
  run.model_id = ctx.model_id;
  run.corpus_size = corpus.size();
  run.config_hash = config_hash(spec, ctx, options);
  run.started_at = utc_now();
  const std::size_t ledger_start = ctx.gateway.ledger().size();

  std::vector<TextItem> items = items_from(corpus);
  std::sort(items.begin(), items.end(),
            [](const TextItem& a, const TextItem& b) { return a.id < b.id; });

  Runner runner(spec, ctx, options, run);
  runner.run(std::move(items));

  const auto entries = ctx.gateway.ledger().entries();
  run.ledger.assign(entries.begin() + static_cast<std::ptrdiff_t>(ledger_start),
                    entries.end());
  std::sort(run.ledger.begin(), run.ledger.end(), [](const auto& a, const auto& b) {
    return std::tie(a.task_kind, a.model_id, a.usage.prompt_tokens,
                    a.usage.completion_tokens) <
           std::tie(b.task_kind, b.model_id, b.usage.prompt_tokens,
                    b.usage.completion_tokens);
  });
  run.finished_at = utc_now();
  if (options.run_dir) write_run_dir(*options.run_dir, run, runner.artifacts());
  return run;
}

WorkflowRun run_bottom_up_themes(const Corpus& corpus, TaskContext& ctx,
                                 const WorkflowOptions& options) {
  return run_workflow(preset("bottom-up-themes"), corpus, ctx, options);
}

WorkflowRun run_top_down_multilabel(const Corpus& corpus, TaskContext& ctx,
                                    const WorkflowOptions& options) {
  return run_workflow(preset("top-down-multilabel"), corpus, ctx, options);
}

WorkflowRun run_improvement_suggestions(const Corpus& corpus, TaskContext& ctx,
                                        const WorkflowOptions& options) {
  return run_workflow(preset("improvement-suggestions"), corpus, ctx, options);
}

WorkflowRun run_content_gaps(const Corpus& corpus, TaskContext& ctx,
                             const WorkflowOptions& options) {
  return run_workflow(preset("content-gaps"), corpus, ctx, options);
}

WorkflowRun run_focused_feedback(const Corpus& corpus, TaskContext& ctx,
                                 const std::string& focus_tag, const std::string& goal,
                                 const WorkflowOptions& options) {
  WorkflowSpec spec = preset("focused-feedback");
  spec.stages[1].param = focus_tag;
  spec.stages[2].param = goal;
  return run_workflow(spec, corpus, ctx, options);
}

std::string manifest_json(const WorkflowRun& run) {
  ojson doc;
  doc["workflow"] = run.workflow;
  doc["model_id"] = run.model_id;
  doc["config_hash"] = run.config_hash;
  doc["corpus_size"] = run.corpus_size;
  ojson stages = ojson::array();
  for (const auto& s : run.stages) {
    ojson st;
    st["name"] = s.name;
    st["kind"] = to_string(s.kind);
    st["param"] = s.param;
    st["source"] = s.source;
    st["input_count"] = s.input_count;
    st["output_count"] = s.output_count;
    st["error_count"] = s.error_count;
    st["artifact"] = s.artifact;
    ojson stats = ojson::object();
    for (const auto& [k, v] : s.stats) stats[k] = v;
    st["stats"] = std::move(stats);
    if (s.counts) {
      ojson counts = ojson::array();
      for (const auto& [k, n] : s.counts->rows) counts.push_back({{"key", k}, {"count", n}});
      st["counts"] = std::move(counts);
    }
    stages.push_back(std::move(st));
  }
  doc["stages"] = std::move(stages);
  ojson counts = ojson::array();
  if (run.counts) {
    for (const auto& [k, n] : run.counts->rows) counts.push_back({{"key", k}, {"count", n}});
  }
  doc["counts"] = std::move(counts);
  doc["count_total"] = run.counts ? run.counts->total() : 0;
  doc["error_count"] = run.errors.size();
  return doc.dump(2) + "\n";
}

std::string errors_jsonl(const WorkflowRun& run) {
  std::string out;
  for (const auto& e : run.errors) {
    ojson line;
    line["stage"] = e.stage;
    line["id"] = e.id;
    line["kind"] = to_string(e.error.kind);
    line["message"] = e.error.message;
    line["attempts"] = e.error.attempts;
    out += line.dump() + "\n";
  }
  return out;
}

}  // namespace surveylens
