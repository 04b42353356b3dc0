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

#include <benchmark/benchmark.h>

#include <random>

#include "surveylens/evaluation.hpp"
#include "surveylens/text.hpp"

namespace surveylens {
namespace {

LabelSets random_sets(std::mt19937_64& rng, int rows, const std::vector<std::string>& tags) {
  LabelSets out;
  std::bernoulli_distribution pick(0.25);
  for (int r = 0; r < rows; ++r) {
    auto& row = out["r" + std::to_string(r)];
    for (const auto& t : tags) {
      if (pick(rng)) row.insert(t);
    }
  }
  return out;
}

const std::vector<std::string> kTags = {"Curriculum", "Teaching", "Assessment", "Resources",
                                        "Pace", "Platform", "Community", "Other"};

void BM_MultilabelReport(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int rows = static_cast<int>(state.range(0));
  const auto pred = LabelMatrix::from_sets(random_sets(rng, rows, kTags), kTags);
  const auto truth = LabelMatrix::from_sets(random_sets(rng, rows, kTags), kTags);
  for (auto _ : state) benchmark::DoNotOptimize(multilabel_report(pred, truth));
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_MultilabelReport)->Arg(100)->Arg(2500);

void BM_AgreementMatrix(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<AnnotationSet> raters;
  for (int a = 0; a < 5; ++a) raters.push_back({"a" + std::to_string(a), random_sets(rng, 625, kTags)});
  for (auto _ : state) benchmark::DoNotOptimize(agreement_matrix(raters));
}
BENCHMARK(BM_AgreementMatrix);

void BM_CheckExcerpt(benchmark::State& state) {
  std::string source;
  for (int i = 0; i < state.range(0); ++i) source += "the videos should come with slides ";
  for (auto _ : state) benchmark::DoNotOptimize(check_excerpt(source, "the vidoes should come with transcripts"));
}
BENCHMARK(BM_CheckExcerpt)->Arg(4)->Arg(64);

}  // namespace
}  // namespace surveylens

BENCHMARK_MAIN();
