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

#include <algorithm>

#include "surveylens/csv.hpp"
#include "surveylens/evaluation.hpp"

namespace surveylens {
namespace {

std::size_t category_index(std::string_view category) {
  auto it = std::find(kRubricCategories.begin(), kRubricCategories.end(), category);
  if (it == kRubricCategories.end()) {
    throw Error(ErrorKind::kInvalidArgument,
                "unknown rubric category '" + std::string(category) + "'");
  }
  return static_cast<std::size_t>(it - kRubricCategories.begin());
}

PromptBundle judge_bundle(const JudgeInput& input, const std::string& goal,
                          TaskContext& ctx) {
  if (trim(goal).empty()) {
    throw Error(ErrorKind::kInvalidArgument, "extraction goal must not be empty");
  }
  PromptInputs in;
  in.question = input.item.question_text;
  in.comment = input.item.text;
  in.goal = goal;
  in.excerpts = input.excerpts;
  return build_prompt(TaskKind::kJudge, in, ctx.templates, ctx.model_id, ctx.temperature);
}

RubricVerdict verdict_from(const std::string& id, const TaskOutcome& o) {
  RubricVerdict v;
  v.id = id;
  v.reasoning = o.reasoning;
  v.call = CallInfo{o.model_id, o.temperature, o.usage, o.attempts};
  read_payload(o.payload, v);
  return v;
}

}  // namespace

bool RubricVerdict::flag(std::string_view category) const {
  return flags[category_index(category)];
}

nlohmann::ordered_json payload_json(const RubricVerdict& v) {
  nlohmann::ordered_json out;
  for (std::size_t i = 0; i < kRubricCategories.size(); ++i) {
    out[std::string(kRubricCategories[i])] = v.flags[i] ? "yes" : "no";
  }
  return out;
}

void read_payload(const json& payload, RubricVerdict& v) {
  for (std::size_t i = 0; i < kRubricCategories.size(); ++i) {
    v.flags[i] = payload.at(std::string(kRubricCategories[i])) == "yes";
  }
}

RubricVerdict judge_extraction(const JudgeInput& input, const std::string& goal,
                               TaskContext& ctx) {
  return verdict_from(input.item.id,
                      ctx.gateway.complete_structured(judge_bundle(input, goal, ctx)));
}

std::vector<Slot<RubricVerdict>> judge_extractions(std::span<const JudgeInput> inputs,
                                                   const std::string& goal,
                                                   TaskContext& ctx) {
  std::vector<PromptBundle> bundles;
  for (const auto& in : inputs) bundles.push_back(judge_bundle(in, goal, ctx));
  auto outcomes = ctx.gateway.run_parallel(bundles);
  std::vector<Slot<RubricVerdict>> out;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const std::string& id = inputs[i].item.id;
    if (outcomes[i].ok()) {
      out.push_back(Slot<RubricVerdict>::success(verdict_from(id, *outcomes[i].value), id));
    } else {
      out.push_back(Slot<RubricVerdict>::failure(*outcomes[i].error, id));
    }
  }
  return out;
}

std::vector<RubricRate> rubric_error_rates(std::span<const RubricVerdict> verdicts) {
  if (verdicts.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "rubric rates need at least one verdict");
  }
  const auto total = static_cast<std::int64_t>(verdicts.size());
  std::vector<RubricRate> rates;
  for (std::size_t i = 0; i < kRubricCategories.size(); ++i) {
    std::int64_t flagged = 0;
    for (const auto& v : verdicts) flagged += v.flags[i];
    rates.push_back(RubricRate{std::string(kRubricCategories[i]), flagged, total,
                               Decimal::rounded_ratio(Decimal::from_int(flagged), 100,
                                                      total, 2)});
  }
  return rates;
}

std::string rubric_rates_csv(const std::vector<RubricRate>& rates) {
  std::string out = csv_row({"category", "flagged", "total", "percent"});
  for (const auto& r : rates) {
    out += csv_row({r.category, std::to_string(r.flagged), std::to_string(r.total),
                    r.percent.to_string(2)});
  }
  return out;
}

}  // namespace surveylens
