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

#include "surveylens/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "surveylens/csv.hpp"
#include "surveylens/error.hpp"
#include "surveylens/text.hpp"

namespace surveylens {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kRuleEmpty = "empty";

std::string line_label(std::size_t line) {
  return "line " + std::to_string(line);
}

SurveyResponse make_response(std::string id, std::string question_id,
                             std::string question_text, std::string text,
                             std::map<std::string, std::string> metadata) {
  if (question_text.empty()) {
    question_text = default_question_text(question_id).value_or("");
  }
  return SurveyResponse{std::move(id), std::move(question_id),
                        std::move(question_text), std::move(text),
                        std::move(metadata)};
}

Corpus parse_csv_corpus(std::string_view data, std::string source) {
  const auto records = parse_csv(data);
  if (records.empty()) {
    throw Error(ErrorKind::kParse, source + ": missing csv header");
  }
  const auto& header = records.front().fields;
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto id_col = column("id");
  const auto qid_col = column("question_id");
  const auto qtext_col = column("question_text");
  const auto text_col = column("text");
  for (auto [col, name] : {std::pair{id_col, "id"},
                           std::pair{qid_col, "question_id"},
                           std::pair{text_col, "text"}}) {
    if (!col) {
      throw Error(ErrorKind::kParse,
                  source + ": csv header lacks required column '" + name + "'");
    }
  }

  std::vector<SurveyResponse> rows;
  rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    auto field = [&](std::size_t col, const char* name) -> std::string {
      if (col >= rec.fields.size()) {
        throw Error(ErrorKind::kParse, source + ": " + line_label(rec.line) +
                                           ": missing field '" + name + "'");
      }
      return rec.fields[col];
    };
    std::map<std::string, std::string> metadata;
    for (std::size_t c = 0; c < header.size() && c < rec.fields.size(); ++c) {
      if (c == *id_col || c == *qid_col || c == *text_col ||
          (qtext_col && c == *qtext_col)) {
        continue;
      }
      if (!rec.fields[c].empty()) metadata[header[c]] = rec.fields[c];
    }
    rows.push_back(make_response(
        field(*id_col, "id"), field(*qid_col, "question_id"),
        qtext_col && *qtext_col < rec.fields.size() ? rec.fields[*qtext_col]
                                                    : std::string(),
        field(*text_col, "text"), std::move(metadata)));
  }
  return Corpus(std::move(rows), Provenance{std::move(source), std::nullopt});
}

Corpus parse_jsonl_corpus(std::string_view data, std::string source) {
  std::vector<SurveyResponse> rows;
  std::size_t line_no = 0;
  std::istringstream in{std::string(data)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParse, source + ": " + line_label(line_no) +
                                         ": invalid json: " + e.what());
    }
    if (!obj.is_object()) {
      throw Error(ErrorKind::kParse,
                  source + ": " + line_label(line_no) + ": expected an object");
    }
    auto required = [&](const char* key) -> std::string {
      auto it = obj.find(key);
      if (it == obj.end() || !it->is_string()) {
        throw Error(ErrorKind::kParse, source + ": " + line_label(line_no) +
                                           ": missing field '" + key + "'");
      }
      return it->get<std::string>();
    };
    std::string id = required("id");
    std::string qid = required("question_id");
    std::string text = required("text");
    std::string qtext;
    if (auto it = obj.find("question_text"); it != obj.end() && it->is_string()) {
      qtext = it->get<std::string>();
    }
    std::map<std::string, std::string> metadata;
    if (auto it = obj.find("metadata"); it != obj.end() && it->is_object()) {
      for (auto& [k, v] : it->items()) {
        metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
    rows.push_back(make_response(std::move(id), std::move(qid),
                                 std::move(qtext), std::move(text),
                                 std::move(metadata)));
  }
  return Corpus(std::move(rows), Provenance{std::move(source), std::nullopt});
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "csv") return CorpusFormat::kCsv;
  if (name == "jsonl") return CorpusFormat::kJsonl;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown corpus format '" + std::string(name) + "'");
}

std::optional<std::string> default_question_text(std::string_view question_id) {
  if (question_id == "Q1") return "Please describe the best parts of this course.";
  if (question_id == "Q2") {
    return "What parts of the experience enhanced your learning of the "
           "concepts most?";
  }
  if (question_id == "Q3") return "What can we do to improve this course?";
  if (question_id == "Q4") {
    return "Please provide any further suggestions, comments, or ideas you "
           "have for this series.";
  }
  return std::nullopt;
}

std::size_t CleaningReport::total_dropped() const {
  std::size_t total = 0;
  for (const auto& [rule, n] : dropped) total += n;
  return total;
}

Corpus::Corpus(std::vector<SurveyResponse> responses, Provenance provenance)
    : responses_(std::move(responses)), provenance_(std::move(provenance)) {
  std::vector<std::string> duplicates;
  for (std::size_t i = 0; i < responses_.size(); ++i) {
    auto [it, inserted] = index_.emplace(responses_[i].id, i);
    if (!inserted) duplicates.push_back(responses_[i].id);
  }
  if (!duplicates.empty()) {
    std::string msg = "duplicate id";
    msg += duplicates.size() > 1 ? "s: " : ": ";
    for (std::size_t i = 0; i < duplicates.size(); ++i) {
      if (i > 0) msg += ", ";
      msg += duplicates[i];
    }
    throw Error(ErrorKind::kDuplicateId, msg);
  }
}

const SurveyResponse* Corpus::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &responses_[it->second];
}

std::vector<std::string> default_sentinels() {
  return {"na", "n/a", "none", "nothing", "-", ""};
}

Corpus parse_corpus(std::string_view data, CorpusFormat format,
                    std::string source) {
  return format == CorpusFormat::kCsv
             ? parse_csv_corpus(data, std::move(source))
             : parse_jsonl_corpus(data, std::move(source));
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  return parse_corpus(read_file(path), format, path.string());
}

Corpus clean(const Corpus& corpus, const std::vector<std::string>& sentinels) {
  std::set<std::string> normalized;
  for (const auto& s : sentinels) normalized.insert(to_lower_ascii(trim(s)));

  // Re-cleaning accumulates into the existing report so clean stays
  // idempotent; a report from before a filter/sample is not reused.
  const auto& prior = corpus.provenance().cleaning;
  CleaningReport report = prior && prior->retained_rows == corpus.size()
                              ? *prior
                              : CleaningReport{corpus.size(), corpus.size(), {}};
  std::vector<SurveyResponse> kept;
  kept.reserve(corpus.size());
  for (const auto& r : corpus.responses()) {
    const std::string_view trimmed = trim(r.text);
    const std::string key = to_lower_ascii(trimmed);
    if (trimmed.empty()) {
      ++report.dropped[kRuleEmpty];
      continue;
    }
    if (normalized.count(key)) {
      ++report.dropped["sentinel:" + key];
      continue;
    }
    SurveyResponse copy = r;
    copy.text = std::string(trimmed);
    kept.push_back(std::move(copy));
  }
  report.retained_rows = kept.size();
  return Corpus(std::move(kept),
                Provenance{corpus.provenance().source, std::move(report)});
}

Corpus filter(const Corpus& corpus, const std::set<std::string>& question_ids) {
  if (question_ids.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "filter needs at least one question id");
  }
  std::vector<SurveyResponse> kept;
  for (const auto& r : corpus.responses()) {
    if (question_ids.count(r.question_id)) kept.push_back(r);
  }
  return Corpus(std::move(kept), corpus.provenance());
}

Corpus sample(const Corpus& corpus, std::size_t n_per_question,
              std::uint64_t seed) {
  if (n_per_question < 1) {
    throw Error(ErrorKind::kInvalidArgument, "n_per_question must be >= 1");
  }
  std::map<std::string, std::vector<std::size_t>> by_question;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    by_question[corpus.responses()[i].question_id].push_back(i);
  }
  std::string seed_bytes = std::to_string(seed);
  std::vector<std::size_t> chosen;
  for (auto& [qid, indices] : by_question) {
    if (indices.size() > n_per_question) {
      std::mt19937_64 rng(fnv1a64(qid, fnv1a64(seed_bytes)));
      for (std::size_t i = 0; i < n_per_question; ++i) {
        const std::size_t j = i + bounded(rng, indices.size() - i);
        std::swap(indices[i], indices[j]);
      }
      indices.resize(n_per_question);
    }
    chosen.insert(chosen.end(), indices.begin(), indices.end());
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<SurveyResponse> kept;
  kept.reserve(chosen.size());
  for (std::size_t i : chosen) kept.push_back(corpus.responses()[i]);
  return Corpus(std::move(kept), corpus.provenance());
}

std::string serialize_corpus(const Corpus& corpus, CorpusFormat format) {
  std::string out;
  if (format == CorpusFormat::kJsonl) {
    for (const auto& r : corpus.responses()) {
      ordered_json obj;
      obj["id"] = r.id;
      obj["question_id"] = r.question_id;
      obj["question_text"] = r.question_text;
      obj["text"] = r.text;
      if (!r.metadata.empty()) obj["metadata"] = r.metadata;
      out += obj.dump();
      out += '\n';
    }
    return out;
  }
  std::set<std::string> meta_keys;
  for (const auto& r : corpus.responses()) {
    for (const auto& [k, v] : r.metadata) meta_keys.insert(k);
  }
  std::vector<std::string> header{"id", "question_id", "question_text", "text"};
  header.insert(header.end(), meta_keys.begin(), meta_keys.end());
  out += csv_row(header);
  for (const auto& r : corpus.responses()) {
    std::vector<std::string> row{r.id, r.question_id, r.question_text, r.text};
    for (const auto& k : meta_keys) {
      auto it = r.metadata.find(k);
      row.push_back(it == r.metadata.end() ? std::string() : it->second);
    }
    out += csv_row(row);
  }
  return out;
}

std::string serialize_cleaning_report(const CleaningReport& report) {
  ordered_json obj;
  obj["raw_rows"] = report.raw_rows;
  obj["retained_rows"] = report.retained_rows;
  obj["dropped"] = report.dropped;
  return obj.dump(2) + "\n";
}

void export_corpus(const Corpus& corpus, const std::filesystem::path& path,
                   CorpusFormat format) {
  write_file(path, serialize_corpus(corpus, format));
  if (const auto& report = corpus.provenance().cleaning) {
    ordered_json sidecar;
    sidecar["source"] = corpus.provenance().source;
    sidecar["cleaning_report"] = json::parse(serialize_cleaning_report(*report));
    write_file(path.string() + ".cleaning_report.json", sidecar.dump(2) + "\n");
  }
}

AnnotationSet parse_annotations(std::string_view jsonl,
                                std::string annotator_id) {
  AnnotationSet set{std::move(annotator_id), {}};
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParse,
                  set.annotator_id + ": " + line_label(line_no) + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string() ||
        !obj.contains("labels") || !obj["labels"].is_array()) {
      throw Error(ErrorKind::kParse, set.annotator_id + ": " +
                                         line_label(line_no) +
                                         ": expected {\"id\", \"labels\"}");
    }
    std::set<std::string> labels;
    for (const auto& l : obj["labels"]) {
      if (!l.is_string()) {
        throw Error(ErrorKind::kParse, set.annotator_id + ": " +
                                           line_label(line_no) +
                                           ": labels must be strings");
      }
      labels.insert(l.get<std::string>());
    }
    const std::string id = obj["id"].get<std::string>();
    if (!set.rows.emplace(id, std::move(labels)).second) {
      throw Error(ErrorKind::kDuplicateId,
                  set.annotator_id + ": duplicate id: " + id);
    }
  }
  return set;
}

AnnotationSet load_annotations(const std::filesystem::path& path) {
  return parse_annotations(read_file(path), path.stem().string());
}

std::string serialize_annotations(const AnnotationSet& set) {
  std::string out;
  for (const auto& [id, labels] : set.rows) {
    ordered_json obj;
    obj["id"] = id;
    obj["labels"] = labels;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void validate_annotations(const AnnotationSet& set,
                          const std::set<std::string>& tag_names,
                          const Corpus* corpus) {
  for (const auto& [id, labels] : set.rows) {
    for (const auto& l : labels) {
      if (!tag_names.count(l)) {
        throw Error(ErrorKind::kInvalidArgument,
                    set.annotator_id + ": row " + id + ": unknown label '" + l + "'");
      }
    }
    if (corpus && !corpus->find(id)) {
      throw Error(ErrorKind::kInvalidArgument,
                  set.annotator_id + ": row id not in corpus: " + id);
    }
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view data) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

}  // namespace surveylens
