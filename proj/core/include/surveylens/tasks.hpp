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

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "surveylens/corpus.hpp"
#include "surveylens/gateway.hpp"
#include "surveylens/tagset.hpp"
#include "surveylens/templates.hpp"
#include "surveylens/text.hpp"

namespace surveylens {

// Something a task runs over: a whole response or an excerpt of one.
struct TextItem {
  std::string id;
  std::string text;
  std::string question_text;

  bool operator==(const TextItem&) const = default;
};

std::vector<TextItem> items_from(const Corpus& corpus);

// Raw material for one prompt. Only the fields the task uses matter.
struct PromptInputs {
  std::string question;
  std::string comment;
  std::vector<std::string> comments;
  std::vector<Tag> labels;
  std::string goal;
  std::string criterion;
  std::string themes;  // pre-rendered theme-set listing
  std::vector<std::string> excerpts;
  bool allow_empty_labels = false;
};

// Output schema for a task; `labels` feed the enum of label-bearing tasks.
OutputSchema task_schema(TaskKind kind, const std::vector<Tag>& labels = {});

// Deterministic: identical arguments give byte-identical bundles. The
// validator always requires non-empty reasoning.
PromptBundle build_prompt(TaskKind kind, const PromptInputs& inputs,
                          const TemplateLibrary& templates,
                          const std::string& model_id, double temperature = 0.0);

std::string render_labels(const std::vector<Tag>& labels);

struct TaskContext {
  Gateway& gateway;
  const TemplateLibrary& templates;
  std::string model_id;
  double temperature = 0.0;
};

struct CallInfo {
  std::string model_id;
  double temperature = 0.0;
  Usage usage;
  int attempts = 0;

  bool operator==(const CallInfo&) const = default;
};

struct BinaryResult {
  std::string id;
  bool answer = false;  // true is "yes"
  std::string reasoning;
  CallInfo call;

  bool operator==(const BinaryResult&) const = default;
};

struct MultiLabelResult {
  std::string id;
  std::set<std::string> labels;
  std::string reasoning;
  CallInfo call;

  bool operator==(const MultiLabelResult&) const = default;
};

struct MultiClassResult {
  std::string id;
  std::string label;
  std::string reasoning;
  CallInfo call;

  bool operator==(const MultiClassResult&) const = default;
};

struct Excerpt {
  std::string response_id;
  std::string text;
  std::optional<CharSpan> span;  // byte offsets into the source text

  bool operator==(const Excerpt&) const = default;
};

struct ExtractionResult {
  std::string id;
  std::vector<Excerpt> excerpts;
  std::string reasoning;
  CallInfo call;

  bool operator==(const ExtractionResult&) const = default;
};

enum class Sentiment5 {
  kNegative,
  kSlightlyNegative,
  kNeutral,
  kSlightlyPositive,
  kPositive,
};
enum class Sentiment3 { kNegative, kNeutral, kPositive };

std::string_view to_string(Sentiment5 level);
std::string_view to_string(Sentiment3 level);
Sentiment5 parse_sentiment5(std::string_view name);
Sentiment3 parse_sentiment3(std::string_view name);
Sentiment3 collapse_sentiment(Sentiment5 level);

struct SentimentResult {
  std::string id;
  Sentiment5 level = Sentiment5::kNeutral;
  std::string reasoning;
  CallInfo call;

  bool operator==(const SentimentResult&) const = default;
};

// Each function returns one slot per input item, in input order. Gateway
// failures stay in their slot.
std::vector<Slot<BinaryResult>> classify_binary(std::span<const TextItem> items,
                                                const std::string& criterion,
                                                TaskContext& ctx);
std::vector<Slot<MultiLabelResult>> classify_multilabel(
    std::span<const TextItem> items, const TagSet& tagset, TaskContext& ctx);
// `labels` may hold a single entry (one derived theme, for instance).
std::vector<Slot<MultiClassResult>> classify_multiclass(
    std::span<const TextItem> items, const std::vector<Tag>& labels,
    TaskContext& ctx);
std::vector<Slot<ExtractionResult>> extract_excerpts(
    std::span<const TextItem> items, const std::string& goal, TaskContext& ctx);
std::vector<Slot<SentimentResult>> analyze_sentiment(
    std::span<const TextItem> items, TaskContext& ctx);

// jsonl persistence: {"id", "status": "ok", "payload", "reasoning",
// "model_id", "temperature", "usage", "attempts"} or {"id", "status":
// "error", "error": {...}}.
nlohmann::ordered_json payload_json(const BinaryResult& r);
nlohmann::ordered_json payload_json(const MultiLabelResult& r);
nlohmann::ordered_json payload_json(const MultiClassResult& r);
nlohmann::ordered_json payload_json(const ExtractionResult& r);
nlohmann::ordered_json payload_json(const SentimentResult& r);
void read_payload(const json& payload, BinaryResult& r);
void read_payload(const json& payload, MultiLabelResult& r);
void read_payload(const json& payload, MultiClassResult& r);
void read_payload(const json& payload, ExtractionResult& r);
void read_payload(const json& payload, SentimentResult& r);

nlohmann::ordered_json error_json(const SlotError& error);
SlotError error_from_json(const json& doc);
nlohmann::ordered_json usage_json(const Usage& usage);

template <class T>
nlohmann::ordered_json to_record(const Slot<T>& slot) {
  nlohmann::ordered_json r;
  r["id"] = slot.id;
  if (slot.ok()) {
    const T& v = *slot.value;
    r["status"] = "ok";
    r["payload"] = payload_json(v);
    r["reasoning"] = v.reasoning;
    r["model_id"] = v.call.model_id;
    r["temperature"] = v.call.temperature;
    r["usage"] = usage_json(v.call.usage);
    r["attempts"] = v.call.attempts;
  } else {
    r["status"] = "error";
    r["error"] = error_json(*slot.error);
  }
  return r;
}

template <class T>
Slot<T> from_record(const json& r) {
  const std::string id = r.at("id").get<std::string>();
  if (r.at("status").get<std::string>() != "ok") {
    return Slot<T>::failure(error_from_json(r.at("error")), id);
  }
  T v;
  v.id = id;
  read_payload(r.at("payload"), v);
  v.reasoning = r.at("reasoning").get<std::string>();
  v.call.model_id = r.at("model_id").get<std::string>();
  v.call.temperature = r.at("temperature").get<double>();
  v.call.usage = Usage{r.at("usage").at("prompt_tokens").get<std::int64_t>(),
                       r.at("usage").at("completion_tokens").get<std::int64_t>()};
  v.call.attempts = r.at("attempts").get<int>();
  return Slot<T>::success(std::move(v), id);
}

template <class T>
std::string to_jsonl(const std::vector<Slot<T>>& slots) {
  std::string out;
  for (const auto& s : slots) out += to_record(s).dump() + "\n";
  return out;
}

template <class T>
std::vector<Slot<T>> parse_jsonl_records(std::string_view jsonl) {
  std::vector<Slot<T>> out;
  std::size_t start = 0;
  while (start < jsonl.size()) {
    auto end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    const auto line = trim(jsonl.substr(start, end - start));
    if (!line.empty()) out.push_back(from_record<T>(json::parse(line)));
    start = end + 1;
  }
  return out;
}

}  // namespace surveylens
