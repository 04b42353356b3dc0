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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace surveylens {

enum class CorpusFormat { kCsv, kJsonl };

CorpusFormat parse_corpus_format(std::string_view name);

// The four open-ended end-of-course survey prompts.
std::optional<std::string> default_question_text(std::string_view question_id);

struct SurveyResponse {
  std::string id;
  std::string question_id;  // "Q1".."Q4" or a custom identifier
  std::string question_text;
  std::string text;
  std::map<std::string, std::string> metadata;

  bool operator==(const SurveyResponse&) const = default;
};

// Rows dropped per cleaning rule, keyed by the rule name.
struct CleaningReport {
  std::size_t raw_rows = 0;
  std::size_t retained_rows = 0;
  std::map<std::string, std::size_t> dropped;

  std::size_t total_dropped() const;
  bool operator==(const CleaningReport&) const = default;
};

struct Provenance {
  std::string source;
  std::optional<CleaningReport> cleaning;

  bool operator==(const Provenance&) const = default;
};

// Ordered, id-unique collection of responses. Immutable once built; every
// transformation returns a new Corpus.
class Corpus {
 public:
  Corpus() = default;
  // Throws Error(kDuplicateId) listing the repeated ids.
  explicit Corpus(std::vector<SurveyResponse> responses,
                  Provenance provenance = {});

  const std::vector<SurveyResponse>& responses() const { return responses_; }
  const Provenance& provenance() const { return provenance_; }
  std::size_t size() const { return responses_.size(); }
  bool empty() const { return responses_.empty(); }

  const SurveyResponse* find(std::string_view id) const;

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<SurveyResponse> responses_;
  Provenance provenance_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

std::vector<std::string> default_sentinels();

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);
Corpus parse_corpus(std::string_view data, CorpusFormat format,
                    std::string source = "<memory>");

// Trims every text and drops rows whose trimmed, lowercased text equals a
// sentinel. Idempotent.
Corpus clean(const Corpus& corpus,
             const std::vector<std::string>& sentinels = default_sentinels());

Corpus filter(const Corpus& corpus, const std::set<std::string>& question_ids);

// Per question id, min(n, available) rows without replacement. Deterministic
// in `seed`; each question draws from its own stream so the choice for one
// question never depends on the others. Output keeps corpus order.
Corpus sample(const Corpus& corpus, std::size_t n_per_question,
              std::uint64_t seed);

std::string serialize_corpus(const Corpus& corpus, CorpusFormat format);
std::string serialize_cleaning_report(const CleaningReport& report);

// Writes the corpus and, when cleaning happened, a
// `<path>.cleaning_report.json` sidecar next to it.
void export_corpus(const Corpus& corpus, const std::filesystem::path& path,
                   CorpusFormat format);

struct AnnotationSet {
  std::string annotator_id;
  std::map<std::string, std::set<std::string>> rows;

  bool operator==(const AnnotationSet&) const = default;
};

AnnotationSet parse_annotations(std::string_view jsonl,
                                std::string annotator_id);
AnnotationSet load_annotations(const std::filesystem::path& path);
std::string serialize_annotations(const AnnotationSet& set);

// Checks label membership and (when given) that every row id is in `corpus`.
void validate_annotations(const AnnotationSet& set,
                          const std::set<std::string>& tag_names,
                          const Corpus* corpus = nullptr);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);

}  // namespace surveylens
