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

#include "surveylens/csv.hpp"
#include "surveylens/evaluation.hpp"

namespace surveylens {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kVerbatim: return "verbatim";
    case Verdict::kMinorEdit: return "minor_edit";
    case Verdict::kHallucination: return "hallucination";
  }
  return "hallucination";
}

FidelityVerdict check_excerpt(std::string_view source, std::string_view excerpt,
                              double minor_edit_threshold) {
  FidelityVerdict v;
  v.excerpt = std::string(excerpt);
  const std::string ns = normalize_for_matching(source).text;
  const std::string ne = normalize_for_matching(excerpt).text;
  if (ne.empty()) {
    v.verdict = Verdict::kHallucination;
    v.edit_ratio = 1.0;
    return v;
  }
  if (ns.find(ne) != std::string::npos) {
    v.verdict = Verdict::kVerbatim;
    v.edit_ratio = 0.0;
    return v;
  }
  const std::size_t distance = best_substring_edit_distance(ne, ns);
  v.edit_ratio = static_cast<double>(distance) / static_cast<double>(ne.size());
  v.verdict = v.edit_ratio <= minor_edit_threshold ? Verdict::kMinorEdit
                                                   : Verdict::kHallucination;
  return v;
}

FidelityReport verify_excerpts(std::span<const Excerpt> excerpts, const Corpus& sources,
                               double minor_edit_threshold) {
  FidelityReport report;
  for (const auto& e : excerpts) {
    const SurveyResponse* src = sources.find(e.response_id);
    if (src == nullptr) {
      throw Error(ErrorKind::kInvalidArgument,
                  "excerpt references unknown source id '" + e.response_id + "'");
    }
    FidelityVerdict v = check_excerpt(src->text, e.text, minor_edit_threshold);
    v.response_id = e.response_id;
    switch (v.verdict) {
      case Verdict::kVerbatim: ++report.verbatim; break;
      case Verdict::kMinorEdit: ++report.minor_edit; break;
      case Verdict::kHallucination: ++report.hallucination; break;
    }
    report.verdicts.push_back(std::move(v));
  }
  if (!report.verdicts.empty()) {
    report.hallucination_rate = Decimal::rounded_ratio(
        Decimal::from_int(static_cast<std::int64_t>(report.hallucination)), 100,
        static_cast<std::int64_t>(report.verdicts.size()), 2);
  }
  return report;
}

std::string fidelity_jsonl(const FidelityReport& report) {
  std::string out;
  for (const auto& v : report.verdicts) {
    nlohmann::ordered_json line;
    line["id"] = v.response_id;
    line["excerpt"] = v.excerpt;
    line["verdict"] = to_string(v.verdict);
    line["edit_ratio"] = std::stod(format_metric(v.edit_ratio, 6));
    out += line.dump() + "\n";
  }
  return out;
}

std::string fidelity_summary_csv(const FidelityReport& report) {
  return csv_row({"excerpts", "verbatim", "minor_edit", "hallucination",
                  "hallucination_rate"}) +
         csv_row({std::to_string(report.verdicts.size()), std::to_string(report.verbatim),
                  std::to_string(report.minor_edit), std::to_string(report.hallucination),
                  report.hallucination_rate.to_string(2)});
}

}  // namespace surveylens
