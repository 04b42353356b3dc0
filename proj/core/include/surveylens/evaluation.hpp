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

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "surveylens/corpus.hpp"
#include "surveylens/decimal.hpp"
#include "surveylens/error.hpp"
#include "surveylens/tasks.hpp"

namespace surveylens {

using LabelSets = std::map<std::string, std::set<std::string>>;

// Rows x tags boolean matrix. Row and tag order are kept as given.
class LabelMatrix {
 public:
  LabelMatrix() = default;
  // Every id in `row_ids` must have an entry in `rows`, and every label must
  // be one of `tags`; throws Error(kInvalidArgument) otherwise.
  LabelMatrix(std::vector<std::string> row_ids, std::vector<std::string> tags,
              const LabelSets& rows);
  // Rows in id order.
  static LabelMatrix from_sets(const LabelSets& rows, std::vector<std::string> tags);

  const std::vector<std::string>& row_ids() const { return ids_; }
  const std::vector<std::string>& tags() const { return tags_; }
  std::size_t rows() const { return ids_.size(); }
  std::size_t tag_count() const { return tags_.size(); }
  bool at(std::size_t row, std::size_t tag) const {
    return cells_[row * tags_.size() + tag] != 0;
  }
  std::set<std::string> labels(std::size_t row) const;
  LabelSets to_sets() const;

  // Same tags, rows restricted to `ids` (in the order given).
  LabelMatrix restrict_to(const std::vector<std::string>& ids) const;

  bool operator==(const LabelMatrix&) const = default;

 private:
  std::vector<std::string> ids_;
  std::vector<std::string> tags_;
  std::vector<unsigned char> cells_;
};

// |a n b| / |a u b|; two empty sets agree perfectly (1.0).
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

// A ratio whose denominator was zero is reported as 0 with its flag set.
struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_flagged = false;
  bool recall_flagged = false;
  bool f1_flagged = false;
};

// Confusion-count PRF; F1 = 2tp / (2tp + fp + fn).
Prf prf_from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn);

struct TagScore {
  std::string tag;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t support = 0;  // rows carrying the tag in truth
  Prf prf;
};

struct MultilabelReport {
  std::size_t rows = 0;
  std::size_t tags = 0;
  double mean_jaccard = 0.0;
  // Example-based: per-row precision/recall averaged over rows. A row with
  // an empty prediction has precision 1 when its truth is empty, else 0;
  // recall mirrors that for an empty truth.
  double avg_precision = 0.0;
  double avg_recall = 0.0;
  std::vector<TagScore> per_tag;
  Prf macro;  // unweighted mean over tags
  Prf micro;  // global confusion counts
  double hamming_loss = 0.0;
  double subset_accuracy = 0.0;
};

// Rows are matched by id. Throws Error(kInvalidArgument) listing the ids
// present in only one matrix, or when the tag lists differ.
MultilabelReport multilabel_report(const LabelMatrix& pred, const LabelMatrix& truth);

struct BinaryReport {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;
  double accuracy = 0.0;
  bool accuracy_flagged = false;
  Prf prf;  // "yes" is the positive class
};

BinaryReport binary_report(const std::map<std::string, bool>& pred,
                           const std::map<std::string, bool>& truth);

struct ClassScore {
  Sentiment3 label = Sentiment3::kNeutral;
  std::int64_t support = 0;
  Prf prf;
};

struct SentimentReport {
  std::int64_t n = 0;
  double accuracy = 0.0;
  bool accuracy_flagged = false;
  std::array<ClassScore, 3> per_class;  // negative, neutral, positive
  Prf macro;  // flags are set when any class had that metric flagged
  std::array<std::array<std::int64_t, 3>, 3> confusion{};  // [truth][pred]
};

SentimentReport sentiment_report(const std::map<std::string, Sentiment3>& pred,
                                 const std::map<std::string, Sentiment3>& truth);

// Throws Error(kInvalidArgument) naming ids present in only one key set.
template <class A, class B>
void require_same_ids(const std::map<std::string, A>& a, const std::map<std::string, B>& b);
std::string describe_id_mismatch(const std::set<std::string>& only_a,
                                 const std::set<std::string>& only_b);

// Fixed-point rendering used in every report ("0.7500").
std::string format_metric(double value, int places = 4);

std::string per_tag_csv(const MultilabelReport& report);
// `verbose` appends avg_recall plus the per-tag means of precision and recall.
std::string summary_csv(const MultilabelReport& report, bool verbose = false);
std::string binary_report_csv(const BinaryReport& report);
std::string sentiment_report_csv(const SentimentReport& report);

// ---- consensus and agreement -------------------------------------------

enum class ConsensusMode { kRows, kLabels };

std::string_view to_string(ConsensusMode mode);
ConsensusMode parse_consensus_mode(std::string_view name);

struct RowVotes {
  std::string id;
  std::map<std::string, int> yes_votes;  // per tag
  bool retained = false;
};

struct ConsensusResult {
  ConsensusMode mode = ConsensusMode::kLabels;
  std::size_t annotators = 0;
  std::vector<std::string> retained_ids;
  LabelMatrix truth;  // retained rows only
  std::vector<RowVotes> votes;  // every row, id order
};

// A tag is selected when strictly more than half the annotators chose it.
// Rows mode keeps only rows where every tag has a strict majority either
// way. Needs >= 3 annotators with identical row ids.
ConsensusResult consensus(std::span<const AnnotationSet> annotations,
                          const std::vector<std::string>& tags, ConsensusMode mode);

AnnotationSet consensus_annotations(const ConsensusResult& result,
                                    std::string annotator_id = "consensus");

struct AgreementMatrix {
  std::vector<std::string> raters;
  // Percent (0..100). Diagonal cells hold 100 and are not part of any mean.
  std::vector<std::vector<double>> cells;

  std::size_t index_of(std::string_view rater) const;
};

// Cell (i, j) = 100 x mean over rows of jaccard(rater i, rater j).
AgreementMatrix agreement_matrix(std::span<const AnnotationSet> raters);

// Unweighted mean of the off-diagonal cells among `members`, each pair
// counted once, computed in exact decimal and rounded half-even.
Decimal subgroup_average(const AgreementMatrix& matrix,
                         const std::vector<std::string>& members, int places = 2);

struct Subgroup {
  std::string name;
  std::vector<std::string> members;
};

// Square table with a `rater` header column and one footer row per subgroup.
std::string agreement_csv(const AgreementMatrix& matrix,
                          const std::vector<Subgroup>& subgroups);

// ---- excerpt fidelity ---------------------------------------------------

enum class Verdict { kVerbatim, kMinorEdit, kHallucination };

std::string_view to_string(Verdict verdict);

struct FidelityVerdict {
  std::string response_id;
  std::string excerpt;
  Verdict verdict = Verdict::kVerbatim;
  double edit_ratio = 0.0;  // edit distance / normalized excerpt length
};

// Compares normalized text (see normalize_for_matching). Verbatim when the
// excerpt is a contiguous substring; otherwise the ratio against the best
// matching source window decides between minor_edit and hallucination.
FidelityVerdict check_excerpt(std::string_view source, std::string_view excerpt,
                              double minor_edit_threshold = 0.1);

struct FidelityReport {
  std::vector<FidelityVerdict> verdicts;
  std::size_t verbatim = 0;
  std::size_t minor_edit = 0;
  std::size_t hallucination = 0;
  Decimal hallucination_rate;  // percent, two places
};

// Throws Error(kInvalidArgument) when an excerpt names an unknown source id.
FidelityReport verify_excerpts(std::span<const Excerpt> excerpts, const Corpus& sources,
                               double minor_edit_threshold = 0.1);

std::string fidelity_jsonl(const FidelityReport& report);
std::string fidelity_summary_csv(const FidelityReport& report);

// ---- extraction rubric --------------------------------------------------

inline constexpr std::array<std::string_view, 9> kRubricCategories{
    "missed_excerpts",     "ambiguous_excerpts", "missed_existing_context",
    "irrelevant_excerpts", "irrelevant_context", "implied_goal_focus",
    "non_quotes",          "non_contiguous_excerpts", "redundant_excerpts"};

struct RubricVerdict {
  std::string id;
  std::array<bool, 9> flags{};  // indexed like kRubricCategories
  std::string reasoning;
  CallInfo call;

  bool flag(std::string_view category) const;
  bool operator==(const RubricVerdict&) const = default;
};

nlohmann::ordered_json payload_json(const RubricVerdict& v);
void read_payload(const json& payload, RubricVerdict& v);

struct JudgeInput {
  TextItem item;
  std::vector<std::string> excerpts;
};

// Throws on gateway or structured-output failure.
RubricVerdict judge_extraction(const JudgeInput& input, const std::string& goal,
                               TaskContext& ctx);
std::vector<Slot<RubricVerdict>> judge_extractions(std::span<const JudgeInput> inputs,
                                                   const std::string& goal,
                                                   TaskContext& ctx);

struct RubricRate {
  std::string category;
  std::int64_t flagged = 0;
  std::int64_t total = 0;
  Decimal percent;  // flagged / total x 100, half-even to two places
};

// Throws Error(kInvalidArgument) on an empty verdict list.
std::vector<RubricRate> rubric_error_rates(std::span<const RubricVerdict> verdicts);
std::string rubric_rates_csv(const std::vector<RubricRate>& rates);

// ---- template definitions ----------------------------------------------

template <class A, class B>
void require_same_ids(const std::map<std::string, A>& a,
                      const std::map<std::string, B>& b) {
  std::set<std::string> only_a;
  std::set<std::string> only_b;
  for (const auto& [id, _] : a) {
    if (!b.contains(id)) only_a.insert(id);
  }
  for (const auto& [id, _] : b) {
    if (!a.contains(id)) only_b.insert(id);
  }
  if (!only_a.empty() || !only_b.empty()) {
    throw Error(ErrorKind::kInvalidArgument, describe_id_mismatch(only_a, only_b));
  }
}

}  // namespace surveylens
