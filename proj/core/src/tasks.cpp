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

#include "surveylens/tasks.hpp"

#include <algorithm>

#include "surveylens/error.hpp"

namespace surveylens {
namespace {

const std::vector<std::string>& sentiment_names() {
  static const std::vector<std::string> names{
      "negative", "slightly_negative", "neutral", "slightly_positive", "positive"};
  return names;
}

const std::vector<std::string>& rubric_fields() {
  static const std::vector<std::string> names{
      "missed_excerpts",     "ambiguous_excerpts", "missed_existing_context",
      "irrelevant_excerpts", "irrelevant_context", "implied_goal_focus",
      "non_quotes",          "non_contiguous_excerpts", "redundant_excerpts"};
  return names;
}

std::vector<std::string> names_of(const std::vector<Tag>& labels) {
  std::vector<std::string> out;
  for (const auto& t : labels) out.push_back(t.name);
  return out;
}

std::string render_comments(const std::vector<std::string>& comments) {
  std::string out;
  for (std::size_t i = 0; i < comments.size(); ++i) {
    if (i) out += '\n';
    out += std::to_string(i + 1) + ". " + comments[i];
  }
  return out;
}

std::string render_excerpts(const std::vector<std::string>& excerpts) {
  if (excerpts.empty()) return "(none)";
  std::string out;
  for (std::size_t i = 0; i < excerpts.size(); ++i) {
    if (i) out += '\n';
    out += "- \"" + excerpts[i] + "\"";
  }
  return out;
}

std::optional<std::string> check_reasoning(const json& doc) {
  const auto& r = doc.at("reasoning");
  if (trim(r.get_ref<const std::string&>()).empty()) {
    return "field 'reasoning' must explain the answer step by step";
  }
  return std::nullopt;
}

PayloadValidator extra_checks(TaskKind kind, const PromptInputs& inputs) {
  switch (kind) {
    case TaskKind::kMultilabel:
      if (inputs.allow_empty_labels) return {};
      return [](const json& doc) -> std::optional<std::string> {
        if (doc.at("labels").empty()) {
          return "field 'labels' must name at least one label from the list";
        }
        return std::nullopt;
      };
    case TaskKind::kExtract:
      return [](const json& doc) -> std::optional<std::string> {
        for (const auto& e : doc.at("excerpts")) {
          if (trim(e.get_ref<const std::string&>()).empty()) {
            return "field 'excerpts' must not contain empty strings";
          }
        }
        return std::nullopt;
      };
    default:
      return {};
  }
}

CallInfo call_info(const TaskOutcome& o) {
  return CallInfo{o.model_id, o.temperature, o.usage, o.attempts};
}

template <class T, class Fill>
std::vector<Slot<T>> run_items(std::span<const TextItem> items,
                               const std::vector<PromptBundle>& bundles,
                               TaskContext& ctx, Fill fill) {
  auto outcomes = ctx.gateway.run_parallel(bundles);
  std::vector<Slot<T>> out;
  out.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& slot = outcomes[i];
    if (!slot.ok()) {
      out.push_back(Slot<T>::failure(*slot.error, items[i].id));
      continue;
    }
    const TaskOutcome& o = *slot.value;
    T v;
    v.id = items[i].id;
    v.reasoning = o.reasoning;
    v.call = call_info(o);
    fill(items[i], o.payload, v);
    out.push_back(Slot<T>::success(std::move(v), items[i].id));
  }
  return out;
}

template <class Setup>
std::vector<PromptBundle> bundles_for(std::span<const TextItem> items, TaskKind kind,
                                      TaskContext& ctx, Setup setup) {
  std::vector<PromptBundle> bundles;
  bundles.reserve(items.size());
  for (const auto& item : items) {
    PromptInputs in;
    in.question = item.question_text;
    in.comment = item.text;
    setup(in);
    bundles.push_back(build_prompt(kind, in, ctx.templates, ctx.model_id, ctx.temperature));
  }
  return bundles;
}

}  // namespace

std::vector<TextItem> items_from(const Corpus& corpus) {
  std::vector<TextItem> items;
  items.reserve(corpus.size());
  for (const auto& r : corpus.responses()) {
    items.push_back(TextItem{r.id, r.text, r.question_text});
  }
  return items;
}

std::string render_labels(const std::vector<Tag>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += '\n';
    out += "- " + labels[i].name + ": " + labels[i].description;
  }
  return out;
}

OutputSchema task_schema(TaskKind kind, const std::vector<Tag>& labels) {
  switch (kind) {
    case TaskKind::kBinary:
      return OutputSchema("classify_binary",
                          "Record the reasoning and the yes/no answer.",
                          {FieldSpec::string_enum("answer", {"yes", "no"},
                                                  "Whether the criterion is met.")});
    case TaskKind::kMultilabel:
      return OutputSchema("classify_multilabel",
                          "Record the reasoning and every applicable label.",
                          {FieldSpec::string_list("labels", names_of(labels),
                                                  "All labels that apply.")});
    case TaskKind::kMulticlass:
      return OutputSchema("classify_multiclass",
                          "Record the reasoning and the single best label.",
                          {FieldSpec::string_enum("label", names_of(labels),
                                                  "The one label that fits best.")});
    case TaskKind::kExtract:
      return OutputSchema("extract_excerpts",
                          "Record the reasoning and the extracted excerpts.",
                          {FieldSpec::string_list("excerpts", {},
                                                  "Exact contiguous quotes.")});
    case TaskKind::kSentiment:
      return OutputSchema("analyze_sentiment",
                          "Record the reasoning and the sentiment.",
                          {FieldSpec::string_enum("sentiment", sentiment_names(),
                                                  "Sentiment of the comment.")});
    case TaskKind::kThemes:
      return OutputSchema(
          "derive_themes", "Record the reasoning and the derived themes.",
          {FieldSpec::object_list("themes",
                                  {FieldSpec::string("title", "Short theme title."),
                                   FieldSpec::string("description",
                                                     "One to two sentences.")})});
    case TaskKind::kCoalesce:
      return OutputSchema(
          "coalesce_themes", "Record the reasoning and the merged themes.",
          {FieldSpec::object_list(
              "themes",
              {FieldSpec::string("title", "Short theme title."),
               FieldSpec::string("description", "One to two sentences."),
               FieldSpec::object_list("members",
                                      {FieldSpec::string("set", "Set id, e.g. S1."),
                                       FieldSpec::string("title",
                                                         "Exact input theme title.")},
                                      "Input themes merged into this theme.")})});
    case TaskKind::kJudge: {
      std::vector<FieldSpec> fields;
      for (const auto& name : rubric_fields()) {
        fields.push_back(FieldSpec::string_enum(name, {"yes", "no"}));
      }
      return OutputSchema("judge_extraction",
                          "Record the reasoning and the nine rubric answers.",
                          std::move(fields));
    }
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown task kind");
}

PromptBundle build_prompt(TaskKind kind, const PromptInputs& inputs,
                          const TemplateLibrary& templates,
                          const std::string& model_id, double temperature) {
  const std::map<std::string, std::string> values{
      {"question", inputs.question},
      {"comment", inputs.comment},
      {"labels", render_labels(inputs.labels)},
      {"goal", inputs.goal},
      {"criterion", inputs.criterion},
      {"comments", render_comments(inputs.comments)},
      {"themes", inputs.themes},
      {"excerpts", render_excerpts(inputs.excerpts)},
  };
  const PromptTemplate& tpl = templates.get(kind);
  PromptBundle bundle;
  bundle.task_kind = std::string(to_string(kind));
  bundle.system_text = render_template(tpl.system, values);
  bundle.user_text = render_template(tpl.user, values);
  bundle.schema = task_schema(kind, inputs.labels);
  bundle.model_id = model_id;
  bundle.temperature = temperature;
  PayloadValidator extra = extra_checks(kind, inputs);
  bundle.validator = [extra](const json& doc) -> std::optional<std::string> {
    if (auto err = check_reasoning(doc)) return err;
    if (extra) return extra(doc);
    return std::nullopt;
  };
  return bundle;
}

std::string_view to_string(Sentiment5 level) {
  return sentiment_names()[static_cast<std::size_t>(level)];
}

std::string_view to_string(Sentiment3 level) {
  switch (level) {
    case Sentiment3::kNegative: return "negative";
    case Sentiment3::kNeutral: return "neutral";
    case Sentiment3::kPositive: return "positive";
  }
  return "neutral";
}

Sentiment5 parse_sentiment5(std::string_view name) {
  const auto& names = sentiment_names();
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw Error(ErrorKind::kInvalidArgument, "unknown sentiment '" + std::string(name) + "'");
  }
  return static_cast<Sentiment5>(it - names.begin());
}

Sentiment3 parse_sentiment3(std::string_view name) {
  for (Sentiment3 s : {Sentiment3::kNegative, Sentiment3::kNeutral, Sentiment3::kPositive}) {
    if (to_string(s) == name) return s;
  }
  // Five-level names are accepted and collapsed.
  return collapse_sentiment(parse_sentiment5(name));
}

Sentiment3 collapse_sentiment(Sentiment5 level) {
  switch (level) {
    case Sentiment5::kNegative:
    case Sentiment5::kSlightlyNegative:
      return Sentiment3::kNegative;
    case Sentiment5::kNeutral:
      return Sentiment3::kNeutral;
    case Sentiment5::kSlightlyPositive:
    case Sentiment5::kPositive:
      return Sentiment3::kPositive;
  }
  return Sentiment3::kNeutral;
}

std::vector<Slot<BinaryResult>> classify_binary(std::span<const TextItem> items,
                                                const std::string& criterion,
                                                TaskContext& ctx) {
  if (trim(criterion).empty()) {
    throw Error(ErrorKind::kInvalidArgument, "criterion must not be empty");
  }
  auto bundles = bundles_for(items, TaskKind::kBinary, ctx,
                             [&](PromptInputs& in) { in.criterion = criterion; });
  return run_items<BinaryResult>(items, bundles, ctx,
                                 [](const TextItem&, const json& p, BinaryResult& r) {
                                   r.answer = p.at("answer") == "yes";
                                 });
}

std::vector<Slot<MultiLabelResult>> classify_multilabel(
    std::span<const TextItem> items, const TagSet& tagset, TaskContext& ctx) {
  auto bundles = bundles_for(items, TaskKind::kMultilabel, ctx, [&](PromptInputs& in) {
    in.labels = tagset.tags();
    in.allow_empty_labels = tagset.allow_empty();
  });
  return run_items<MultiLabelResult>(
      items, bundles, ctx, [](const TextItem&, const json& p, MultiLabelResult& r) {
        for (const auto& l : p.at("labels")) r.labels.insert(l.get<std::string>());
      });
}

std::vector<Slot<MultiClassResult>> classify_multiclass(
    std::span<const TextItem> items, const std::vector<Tag>& labels,
    TaskContext& ctx) {
  if (labels.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "multiclass needs at least one label");
  }
  auto bundles = bundles_for(items, TaskKind::kMulticlass, ctx,
                             [&](PromptInputs& in) { in.labels = labels; });
  return run_items<MultiClassResult>(
      items, bundles, ctx, [](const TextItem&, const json& p, MultiClassResult& r) {
        r.label = p.at("label").get<std::string>();
      });
}

std::vector<Slot<ExtractionResult>> extract_excerpts(
    std::span<const TextItem> items, const std::string& goal, TaskContext& ctx) {
  if (trim(goal).empty()) {
    throw Error(ErrorKind::kInvalidArgument, "extraction goal must not be empty");
  }
  auto bundles = bundles_for(items, TaskKind::kExtract, ctx,
                             [&](PromptInputs& in) { in.goal = goal; });
  return run_items<ExtractionResult>(
      items, bundles, ctx,
      [](const TextItem& item, const json& p, ExtractionResult& r) {
        for (const auto& e : p.at("excerpts")) {
          std::string text = e.get<std::string>();
          auto span = locate_excerpt(item.text, text);
          r.excerpts.push_back(Excerpt{item.id, std::move(text), span});
        }
      });
}

std::vector<Slot<SentimentResult>> analyze_sentiment(std::span<const TextItem> items,
                                                     TaskContext& ctx) {
  auto bundles = bundles_for(items, TaskKind::kSentiment, ctx, [](PromptInputs&) {});
  return run_items<SentimentResult>(
      items, bundles, ctx, [](const TextItem&, const json& p, SentimentResult& r) {
        r.level = parse_sentiment5(p.at("sentiment").get<std::string>());
      });
}

nlohmann::ordered_json payload_json(const BinaryResult& r) {
  return {{"answer", r.answer ? "yes" : "no"}};
}

nlohmann::ordered_json payload_json(const MultiLabelResult& r) {
  return {{"labels", r.labels}};
}

nlohmann::ordered_json payload_json(const MultiClassResult& r) {
  return {{"label", r.label}};
}

nlohmann::ordered_json payload_json(const ExtractionResult& r) {
  auto list = nlohmann::ordered_json::array();
  for (const auto& e : r.excerpts) {
    nlohmann::ordered_json item;
    item["text"] = e.text;
    if (e.span) {
      item["span"] = {e.span->begin, e.span->end};
    } else {
      item["span"] = nullptr;
    }
    list.push_back(std::move(item));
  }
  nlohmann::ordered_json out;
  out["excerpts"] = std::move(list);
  return out;
}

nlohmann::ordered_json payload_json(const SentimentResult& r) {
  return {{"sentiment", to_string(r.level)}};
}

void read_payload(const json& payload, BinaryResult& r) {
  r.answer = payload.at("answer") == "yes";
}

void read_payload(const json& payload, MultiLabelResult& r) {
  r.labels = payload.at("labels").get<std::set<std::string>>();
}

void read_payload(const json& payload, MultiClassResult& r) {
  r.label = payload.at("label").get<std::string>();
}

void read_payload(const json& payload, ExtractionResult& r) {
  for (const auto& e : payload.at("excerpts")) {
    Excerpt ex{r.id, e.at("text").get<std::string>(), std::nullopt};
    if (const auto& s = e.at("span"); s.is_array()) {
      ex.span = CharSpan{s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()};
    }
    r.excerpts.push_back(std::move(ex));
  }
}

void read_payload(const json& payload, SentimentResult& r) {
  r.level = parse_sentiment5(payload.at("sentiment").get<std::string>());
}

nlohmann::ordered_json error_json(const SlotError& error) {
  nlohmann::ordered_json e;
  e["kind"] = to_string(error.kind);
  e["message"] = error.message;
  e["attempts"] = error.attempts;
  if (!error.raw_text.empty()) e["raw_text"] = error.raw_text;
  return e;
}

SlotError error_from_json(const json& doc) {
  return SlotError{parse_error_kind(doc.at("kind").get<std::string>()),
                   doc.at("message").get<std::string>(),
                   doc.value("attempts", 0), doc.value("raw_text", std::string())};
}

nlohmann::ordered_json usage_json(const Usage& usage) {
  nlohmann::ordered_json u;
  u["prompt_tokens"] = usage.prompt_tokens;
  u["completion_tokens"] = usage.completion_tokens;
  return u;
}

}  // namespace surveylens
