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

// Throws unless every set covers exactly the row ids of the first one.
void require_same_coverage(std::span<const AnnotationSet> sets) {
  for (std::size_t i = 1; i < sets.size(); ++i) {
    try {
      require_same_ids(sets[0].rows, sets[i].rows);
    } catch (const Error& e) {
      throw Error(ErrorKind::kInvalidArgument,
                  "annotators '" + sets[0].annotator_id + "' and '" +
                      sets[i].annotator_id + "' cover different rows: " + e.what());
    }
  }
}

}  // namespace

std::string_view to_string(ConsensusMode mode) {
  return mode == ConsensusMode::kRows ? "rows" : "labels";
}

ConsensusMode parse_consensus_mode(std::string_view name) {
  if (name == "rows") return ConsensusMode::kRows;
  if (name == "labels") return ConsensusMode::kLabels;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown consensus mode '" + std::string(name) + "' (rows or labels)");
}

ConsensusResult consensus(std::span<const AnnotationSet> annotations,
                          const std::vector<std::string>& tags, ConsensusMode mode) {
  if (annotations.size() < 3) {
    throw Error(ErrorKind::kInvalidArgument, "consensus needs at least three annotators");
  }
  require_same_coverage(annotations);
  const std::set<std::string> tag_set(tags.begin(), tags.end());
  for (const auto& a : annotations) validate_annotations(a, tag_set);

  const int n = static_cast<int>(annotations.size());
  ConsensusResult result;
  result.mode = mode;
  result.annotators = annotations.size();
  LabelSets truth;
  for (const auto& [id, _] : annotations[0].rows) {
    RowVotes votes{id, {}, true};
    std::set<std::string> selected;
    for (const auto& tag : tags) {
      int yes = 0;
      for (const auto& a : annotations) yes += a.rows.at(id).count(tag);
      votes.yes_votes[tag] = yes;
      if (2 * yes > n) {
        selected.insert(tag);
      } else if (mode == ConsensusMode::kRows && 2 * (n - yes) <= n) {
        votes.retained = false;  // neither side holds a strict majority
      }
    }
    if (votes.retained) {
      result.retained_ids.push_back(id);
      truth[id] = std::move(selected);
    }
    result.votes.push_back(std::move(votes));
  }
  result.truth = LabelMatrix(result.retained_ids, tags, truth);
  return result;
}

AnnotationSet consensus_annotations(const ConsensusResult& result,
                                    std::string annotator_id) {
  return AnnotationSet{std::move(annotator_id), result.truth.to_sets()};
}

std::size_t AgreementMatrix::index_of(std::string_view rater) const {
  auto it = std::find(raters.begin(), raters.end(), rater);
  if (it == raters.end()) {
    throw Error(ErrorKind::kInvalidArgument, "unknown rater '" + std::string(rater) + "'");
  }
  return static_cast<std::size_t>(it - raters.begin());
}

AgreementMatrix agreement_matrix(std::span<const AnnotationSet> raters) {
  if (raters.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "agreement needs at least two raters");
  }
  require_same_coverage(raters);
  AgreementMatrix m;
  const std::size_t k = raters.size();
  for (const auto& r : raters) m.raters.push_back(r.annotator_id);
  std::set<std::string> unique(m.raters.begin(), m.raters.end());
  if (unique.size() != k) {
    throw Error(ErrorKind::kDuplicateId, "rater ids must be unique");
  }
  m.cells.assign(k, std::vector<double>(k, 100.0));
  const double rows = static_cast<double>(raters[0].rows.size());
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double sum = 0;
      for (const auto& [id, labels] : raters[i].rows) {
        sum += jaccard(labels, raters[j].rows.at(id));
      }
      const double pct = rows == 0 ? 100.0 : 100.0 * sum / rows;
      m.cells[i][j] = pct;
      m.cells[j][i] = pct;
    }
  }
  return m;
}

Decimal subgroup_average(const AgreementMatrix& matrix,
                         const std::vector<std::string>& members, int places) {
  std::vector<std::size_t> idx;
  for (const auto& name : members) idx.push_back(matrix.index_of(name));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "a subgroup needs at least two raters");
  }
  Decimal sum;
  std::int64_t pairs = 0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      sum += Decimal::parse(format_metric(matrix.cells[idx[a]][idx[b]], 9));
      ++pairs;
    }
  }
  return Decimal::rounded_ratio(sum, 1, pairs, places);
}

std::string agreement_csv(const AgreementMatrix& matrix,
                          const std::vector<Subgroup>& subgroups) {
  const std::size_t k = matrix.raters.size();
  std::vector<std::string> header{"rater"};
  header.insert(header.end(), matrix.raters.begin(), matrix.raters.end());
  std::string out = csv_row(header);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::string> row{matrix.raters[i]};
    for (std::size_t j = 0; j < k; ++j) {
      row.push_back(i == j ? std::string() : format_metric(matrix.cells[i][j], 2));
    }
    out += csv_row(row);
  }
  for (const auto& g : subgroups) {
    std::vector<std::string> row{"average:" + g.name,
                                 subgroup_average(matrix, g.members).to_string(2)};
    row.resize(k + 1);
    out += csv_row(row);
  }
  return out;
}

}  // namespace surveylens
