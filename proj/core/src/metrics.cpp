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
#include <cstdio>

#include "surveylens/csv.hpp"
#include "surveylens/evaluation.hpp"

namespace surveylens {
namespace {

double ratio_or_zero(double num, double den, bool& flagged) {
  if (den == 0) {
    flagged = true;
    return 0.0;
  }
  flagged = false;
  return num / den;
}

std::string join_ids(const std::set<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

std::string prf_row(const std::string& name, const Prf& p) {
  return csv_row({name, format_metric(p.precision), format_metric(p.recall),
                  format_metric(p.f1)});
}

}  // namespace

LabelMatrix::LabelMatrix(std::vector<std::string> row_ids, std::vector<std::string> tags,
                         const LabelSets& rows)
    : ids_(std::move(row_ids)), tags_(std::move(tags)) {
  std::map<std::string, std::size_t> tag_index;
  for (std::size_t t = 0; t < tags_.size(); ++t) {
    if (!tag_index.emplace(tags_[t], t).second) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate tag '" + tags_[t] + "'");
    }
  }
  cells_.assign(ids_.size() * tags_.size(), 0);
  for (std::size_t r = 0; r < ids_.size(); ++r) {
    auto row = rows.find(ids_[r]);
    if (row == rows.end()) {
      throw Error(ErrorKind::kInvalidArgument, "no labels for row '" + ids_[r] + "'");
    }
    for (const auto& label : row->second) {
      auto it = tag_index.find(label);
      if (it == tag_index.end()) {
        throw Error(ErrorKind::kInvalidArgument,
                    "row '" + ids_[r] + "' has label '" + label + "' outside the tag set");
      }
      cells_[r * tags_.size() + it->second] = 1;
    }
  }
}

LabelMatrix LabelMatrix::from_sets(const LabelSets& rows, std::vector<std::string> tags) {
  std::vector<std::string> ids;
  for (const auto& [id, _] : rows) ids.push_back(id);
  return LabelMatrix(std::move(ids), std::move(tags), rows);
}

std::set<std::string> LabelMatrix::labels(std::size_t row) const {
  std::set<std::string> out;
  for (std::size_t t = 0; t < tags_.size(); ++t) {
    if (at(row, t)) out.insert(tags_[t]);
  }
  return out;
}

LabelSets LabelMatrix::to_sets() const {
  LabelSets out;
  for (std::size_t r = 0; r < ids_.size(); ++r) out[ids_[r]] = labels(r);
  return out;
}

LabelMatrix LabelMatrix::restrict_to(const std::vector<std::string>& ids) const {
  return LabelMatrix(ids, tags_, to_sets());
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

Prf prf_from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  Prf p;
  p.precision = ratio_or_zero(tp, tp + fp, p.precision_flagged);
  p.recall = ratio_or_zero(tp, tp + fn, p.recall_flagged);
  p.f1 = ratio_or_zero(2.0 * tp, 2.0 * tp + fp + fn, p.f1_flagged);
  return p;
}

std::string describe_id_mismatch(const std::set<std::string>& only_a,
                                 const std::set<std::string>& only_b) {
  std::string msg = "row ids differ:";
  if (!only_a.empty()) msg += " only in predictions [" + join_ids(only_a) + "]";
  if (!only_b.empty()) msg += " only in truth [" + join_ids(only_b) + "]";
  return msg;
}

MultilabelReport multilabel_report(const LabelMatrix& pred, const LabelMatrix& truth) {
  if (pred.tags() != truth.tags()) {
    throw Error(ErrorKind::kInvalidArgument, "prediction and truth use different tag lists");
  }
  std::map<std::string, std::size_t> pred_row;
  for (std::size_t r = 0; r < pred.rows(); ++r) pred_row[pred.row_ids()[r]] = r;
  std::map<std::string, std::size_t> truth_row;
  for (std::size_t r = 0; r < truth.rows(); ++r) truth_row[truth.row_ids()[r]] = r;
  require_same_ids(pred_row, truth_row);
  if (truth.rows() == 0) {
    throw Error(ErrorKind::kInvalidArgument, "cannot score an empty label matrix");
  }

  const std::size_t n = truth.rows();
  const std::size_t k = truth.tag_count();
  MultilabelReport rep;
  rep.rows = n;
  rep.tags = k;
  rep.per_tag.resize(k);
  for (std::size_t t = 0; t < k; ++t) rep.per_tag[t].tag = truth.tags()[t];

  double jac_sum = 0;
  double prec_sum = 0;
  double rec_sum = 0;
  std::size_t mismatched = 0;
  std::size_t exact = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t pr = pred_row.at(truth.row_ids()[r]);
    std::size_t inter = 0;
    std::size_t p_count = 0;
    std::size_t t_count = 0;
    std::size_t row_mismatch = 0;
    for (std::size_t t = 0; t < k; ++t) {
      const bool p = pred.at(pr, t);
      const bool y = truth.at(r, t);
      inter += p && y;
      p_count += p;
      t_count += y;
      row_mismatch += p != y;
      TagScore& s = rep.per_tag[t];
      s.tp += p && y;
      s.fp += p && !y;
      s.fn += !p && y;
      s.support += y;
    }
    const std::size_t uni = p_count + t_count - inter;
    jac_sum += uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
    prec_sum += p_count == 0 ? (t_count == 0 ? 1.0 : 0.0)
                             : static_cast<double>(inter) / static_cast<double>(p_count);
    rec_sum += t_count == 0 ? (p_count == 0 ? 1.0 : 0.0)
                            : static_cast<double>(inter) / static_cast<double>(t_count);
    mismatched += row_mismatch;
    exact += row_mismatch == 0;
  }
  const double dn = static_cast<double>(n);
  rep.mean_jaccard = jac_sum / dn;
  rep.avg_precision = prec_sum / dn;
  rep.avg_recall = rec_sum / dn;
  rep.hamming_loss = k == 0 ? 0.0 : static_cast<double>(mismatched) / (dn * static_cast<double>(k));
  rep.subset_accuracy = static_cast<double>(exact) / dn;

  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  for (auto& s : rep.per_tag) {
    s.prf = prf_from_counts(s.tp, s.fp, s.fn);
    rep.macro.precision += s.prf.precision;
    rep.macro.recall += s.prf.recall;
    rep.macro.f1 += s.prf.f1;
    rep.macro.precision_flagged |= s.prf.precision_flagged;
    rep.macro.recall_flagged |= s.prf.recall_flagged;
    rep.macro.f1_flagged |= s.prf.f1_flagged;
    tp += s.tp;
    fp += s.fp;
    fn += s.fn;
  }
  if (k > 0) {
    rep.macro.precision /= static_cast<double>(k);
    rep.macro.recall /= static_cast<double>(k);
    rep.macro.f1 /= static_cast<double>(k);
  }
  rep.micro = prf_from_counts(tp, fp, fn);
  return rep;
}

BinaryReport binary_report(const std::map<std::string, bool>& pred,
                           const std::map<std::string, bool>& truth) {
  require_same_ids(pred, truth);
  BinaryReport rep;
  for (const auto& [id, y] : truth) {
    const bool p = pred.at(id);
    rep.tp += p && y;
    rep.fp += p && !y;
    rep.fn += !p && y;
    rep.tn += !p && !y;
  }
  rep.accuracy = ratio_or_zero(rep.tp + rep.tn, static_cast<double>(truth.size()),
                               rep.accuracy_flagged);
  rep.prf = prf_from_counts(rep.tp, rep.fp, rep.fn);
  return rep;
}

SentimentReport sentiment_report(const std::map<std::string, Sentiment3>& pred,
                                 const std::map<std::string, Sentiment3>& truth) {
  require_same_ids(pred, truth);
  SentimentReport rep;
  rep.n = static_cast<std::int64_t>(truth.size());
  std::int64_t correct = 0;
  for (const auto& [id, y] : truth) {
    const Sentiment3 p = pred.at(id);
    ++rep.confusion[static_cast<std::size_t>(y)][static_cast<std::size_t>(p)];
    correct += p == y;
  }
  rep.accuracy = ratio_or_zero(correct, static_cast<double>(rep.n), rep.accuracy_flagged);
  for (std::size_t c = 0; c < 3; ++c) {
    std::int64_t tp = rep.confusion[c][c];
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    for (std::size_t o = 0; o < 3; ++o) {
      if (o == c) continue;
      fp += rep.confusion[o][c];
      fn += rep.confusion[c][o];
    }
    ClassScore& s = rep.per_class[c];
    s.label = static_cast<Sentiment3>(c);
    s.support = tp + fn;
    s.prf = prf_from_counts(tp, fp, fn);
    rep.macro.precision += s.prf.precision / 3.0;
    rep.macro.recall += s.prf.recall / 3.0;
    rep.macro.f1 += s.prf.f1 / 3.0;
    rep.macro.precision_flagged |= s.prf.precision_flagged;
    rep.macro.recall_flagged |= s.prf.recall_flagged;
    rep.macro.f1_flagged |= s.prf.f1_flagged;
  }
  return rep;
}

std::string format_metric(double value, int places) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, value);
  std::string out = buf;
  if (out.rfind("-0.", 0) == 0 && out.find_first_not_of("-0.") == std::string::npos) {
    out.erase(0, 1);
  }
  return out;
}

std::string per_tag_csv(const MultilabelReport& report) {
  std::string out = csv_row({"tag", "precision", "recall", "f1"});
  for (const auto& s : report.per_tag) out += prf_row(s.tag, s.prf);
  out += prf_row("macro", report.macro);
  return out;
}

std::string summary_csv(const MultilabelReport& report, bool verbose) {
  std::vector<std::string> header{"jaccard",  "avg_precision", "macro_p",
                                  "macro_r",  "macro_f1",      "micro_p",
                                  "micro_r",  "micro_f1",      "hamming_loss",
                                  "subset_accuracy"};
  std::vector<std::string> row{
      format_metric(report.mean_jaccard),    format_metric(report.avg_precision),
      format_metric(report.macro.precision), format_metric(report.macro.recall),
      format_metric(report.macro.f1),        format_metric(report.micro.precision),
      format_metric(report.micro.recall),    format_metric(report.micro.f1),
      format_metric(report.hamming_loss),    format_metric(report.subset_accuracy)};
  if (verbose) {
    header.insert(header.end(), {"avg_recall", "tag_mean_precision", "tag_mean_recall"});
    row.insert(row.end(), {format_metric(report.avg_recall),
                           format_metric(report.macro.precision),
                           format_metric(report.macro.recall)});
  }
  return csv_row(header) + csv_row(row);
}

std::string binary_report_csv(const BinaryReport& report) {
  return csv_row({"accuracy", "precision", "recall", "f1", "tp", "fp", "fn", "tn"}) +
         csv_row({format_metric(report.accuracy), format_metric(report.prf.precision),
                  format_metric(report.prf.recall), format_metric(report.prf.f1),
                  std::to_string(report.tp), std::to_string(report.fp),
                  std::to_string(report.fn), std::to_string(report.tn)});
}

std::string sentiment_report_csv(const SentimentReport& report) {
  std::string out = csv_row({"class", "precision", "recall", "f1", "support"});
  for (const auto& s : report.per_class) {
    out += csv_row({std::string(to_string(s.label)), format_metric(s.prf.precision),
                    format_metric(s.prf.recall), format_metric(s.prf.f1),
                    std::to_string(s.support)});
  }
  out += csv_row({"macro", format_metric(report.macro.precision),
                  format_metric(report.macro.recall), format_metric(report.macro.f1),
                  std::to_string(report.n)});
  out += csv_row({"accuracy", format_metric(report.accuracy), "", "",
                  std::to_string(report.n)});
  return out;
}

}  // namespace surveylens
