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

// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <mutex>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "consensus_oracle.hpp"
#include "fidelity_suite.hpp"
#include "metric_oracle.hpp"
#include "random_thematic.hpp"
#include "surveylens/corpus.hpp"
#include "surveylens/evaluation.hpp"
#include "surveylens/gateway.hpp"
#include "surveylens/ledger.hpp"
#include "surveylens/providers.hpp"
#include "surveylens/workflows.hpp"
#include "workflow_fixture.hpp"

namespace surveylens::acceptance {
namespace {

namespace fs = std::filesystem;
using namespace std::chrono_literals;
using Steady = std::chrono::steady_clock;

// Each check returns "" on success or a reason.
using Check = std::function<std::string()>;

double seconds_since(Steady::time_point t0) {
  return std::chrono::duration<double>(Steady::now() - t0).count();
}

fs::path scratch(const std::string& name) {
  static std::mt19937_64 rng(std::random_device{}());
  const fs::path dir = fs::temp_directory_path() / ("surveylens-ac-" + name + "-" + std::to_string(rng()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string ac1() {
  const auto t0 = Steady::now();
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const std::string bad = oracle::check_instance(oracle::random_instance(rng));
    if (!bad.empty()) return "trial " + std::to_string(i) + ": " + bad;
  }
  const double secs = seconds_since(t0);
  if (secs >= 30) return "took " + std::to_string(secs) + " s";
  return {};
}

std::string ac2() {
  AgreementMatrix m;
  m.raters = {"Annotator1", "Annotator2", "GPT-4", "Annotator3", "Annotator4"};
  m.cells = {{100, 81.27, 80.18, 83.37, 82.35},
             {81.27, 100, 79.40, 80.84, 78.42},
             {80.18, 79.40, 100, 80.74, 78.22},
             {83.37, 80.84, 80.74, 100, 81.18},
             {82.35, 78.42, 78.22, 81.18, 100}};
  const std::string humans =
      subgroup_average(m, {"Annotator1", "Annotator2", "Annotator3", "Annotator4"}).to_string(2);
  const std::string all = subgroup_average(m, m.raters).to_string(2);
  if (humans != "81.24" || all != "80.60") return "got " + humans + " and " + all;
  return {};
}

std::string ac3() {
  std::vector<RubricVerdict> v(716);
  v[0].flags[3] = true;
  v[1].flags[5] = true;
  v[2].flags[5] = true;
  const auto rates = rubric_error_rates(v);
  const std::string one = rates[3].percent.to_string(2);
  const std::string two = rates[5].percent.to_string(2);
  if (one != "0.14" || two != "0.28") return "got " + one + " and " + two;
  return {};
}

std::string ac4() {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const auto pv = oracle::plant_votes(rng, 1 + trial % 20, 1 + trial % 8);
    const std::string bad = oracle::check_planted(pv);
    if (!bad.empty()) return "instance " + std::to_string(trial) + ": " + bad;
  }
  return {};
}

std::string ac5() {
  const auto t0 = Steady::now();
  const Corpus corpus = oracle::fixture_corpus();
  for (const auto& name : preset_names()) {
    const fs::path golden = fs::path(SURVEYLENS_GOLDEN_DIR) / "workflows" / name;
    if (!fs::exists(golden)) return "no golden artifacts for " + name;
    std::vector<Corpus> inputs{corpus, corpus, corpus, oracle::shuffled(corpus, 1), oracle::shuffled(corpus, 2)};
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const fs::path dir = scratch(name);
      const WorkflowRun run = oracle::run_fixture_preset(name, inputs[i], dir);
      if (run.partial()) return name + " run " + std::to_string(i) + " had errors";
      const std::string diff = oracle::compare_dirs(golden, dir);
      fs::remove_all(dir);
      if (!diff.empty()) return name + " run " + std::to_string(i) + ": " + diff;
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 10) return "took " + std::to_string(secs) + " s";
  return {};
}

std::string ac6() {
  std::mt19937_64 rng(6);
  int coalesced = 0, nonempty = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 24)(rng);
    std::vector<SurveyResponse> rows;
    std::vector<std::string> texts;
    for (int i = 0; i < n; ++i) {
      std::string text = "comment " + std::to_string(i) + " of trial " + std::to_string(trial) + ":";
      for (int w = std::uniform_int_distribution<int>(3, 40)(rng); w > 0; --w) text += " word";
      texts.push_back(text);
      rows.push_back({"t" + std::to_string(i), "Q3", "What can we do to improve this course?", text, {}});
    }
    const std::string name = trial % 2 == 0 ? "bottom-up-themes" : "content-gaps";
    auto provider = std::make_shared<oracle::RandomThematicProvider>(rng(), texts);
    Gateway gateway(GatewayConfig{}, provider, std::make_shared<VirtualClock>());
    TemplateLibrary templates;
    TaskContext ctx{gateway, templates, "gpt-4-0613", 0.0};
    WorkflowOptions options;
    options.context_budget = std::uniform_int_distribution<int>(450, 900)(rng);
    options.completion_reserve = 0;
    const WorkflowRun run = run_workflow(preset(name), Corpus(std::move(rows)), ctx, options);
    if (run.partial()) return "trial " + std::to_string(trial) + " had errors: " + errors_jsonl(run);
    std::size_t classified = 0;
    for (const auto& s : run.stages) {
      if (s.kind == StageKind::kClassifyThemes) classified = s.output_count;
    }
    const std::int64_t total = run.themes ? run.themes->total_count() : 0;
    if (total != static_cast<std::int64_t>(classified)) {
      return "trial " + std::to_string(trial) + ": themes sum to " + std::to_string(total) + " but " +
             std::to_string(classified) + " items were classified";
    }
    if (total > 0) ++nonempty;
    for (const auto& e : gateway.ledger().entries()) {
      if (e.task_kind == "coalesce") {
        ++coalesced;
        break;
      }
    }
  }
  if (coalesced < 20 || nonempty < 100) {
    return "too few informative trials (" + std::to_string(coalesced) + " coalesced, " +
           std::to_string(nonempty) + " non-empty)";
  }
  return {};
}

std::string ac7() {
  const auto cases = oracle::fidelity_suite();
  std::vector<SurveyResponse> rows;
  std::vector<Excerpt> excerpts;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const std::string id = "f" + std::to_string(i);
    rows.push_back({id, "Q3", "", cases[i].source, {}});
    excerpts.push_back({id, cases[i].excerpt, std::nullopt});
  }
  const FidelityReport report = verify_excerpts(excerpts, Corpus(std::move(rows)));
  int correct = 0;
  std::string first_wrong;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (report.verdicts[i].verdict == cases[i].expected) {
      ++correct;
    } else if (first_wrong.empty()) {
      first_wrong = " (first miss: '" + cases[i].excerpt + "')";
    }
  }
  if (correct != 30 || cases.size() != 30) return std::to_string(correct) + "/30" + first_wrong;
  return {};
}

PromptBundle numbered_bundle(int i) {
  PromptBundle b;
  b.task_kind = "binary";
  b.system_text = "Answer yes or no.";
  b.user_text = "comment <" + std::to_string(i) + ">";
  b.schema = OutputSchema("answer", "", {FieldSpec::string_enum("answer", {"yes", "no"})});
  b.model_id = "m";
  return b;
}

std::vector<ScriptEntry> numbered_script(int n) {
  std::vector<ScriptEntry> s;
  for (int i = 0; i < n; ++i) {
    ScriptEntry e;
    e.match = "<" + std::to_string(i) + ">";
    e.replies.push_back(ScriptedReply::payload({{"reasoning", std::to_string(i)}, {"answer", "yes"}}));
    s.push_back(std::move(e));
  }
  return s;
}

// Records the virtual time of every send.
class TimedProvider final : public Provider {
 public:
  TimedProvider(std::shared_ptr<Provider> inner, std::shared_ptr<Clock> clock)
      : inner_(std::move(inner)), clock_(std::move(clock)) {}
  ProviderReply send(const ChatRequest& request) override {
    {
      std::lock_guard lock(mu_);
      times_.push_back(clock_->now());
    }
    return inner_->send(request);
  }
  std::vector<Millis> times() {
    std::lock_guard lock(mu_);
    auto t = times_;
    std::sort(t.begin(), t.end());
    return t;
  }

 private:
  std::shared_ptr<Provider> inner_;
  std::shared_ptr<Clock> clock_;
  std::mutex mu_;
  std::vector<Millis> times_;
};

std::string ac8() {
  {
    GatewayConfig cfg;
    cfg.max_in_flight = 10;
    auto provider = std::make_shared<ScriptedProvider>(numbered_script(100), 3ms);
    Gateway g(cfg, provider, std::make_shared<VirtualClock>());
    std::vector<PromptBundle> bundles;
    for (int i = 0; i < 100; ++i) bundles.push_back(numbered_bundle(i));
    g.run_parallel(bundles);
    if (provider->max_concurrency() > 10) {
      return "in-flight reached " + std::to_string(provider->max_concurrency());
    }
  }
  {
    GatewayConfig cfg;
    cfg.max_in_flight = 4;
    cfg.requests_per_minute = 7;
    auto clock = std::make_shared<VirtualClock>();
    auto timed = std::make_shared<TimedProvider>(std::make_shared<ScriptedProvider>(numbered_script(40)), clock);
    Gateway g(cfg, timed, clock);
    std::vector<PromptBundle> bundles;
    for (int i = 0; i < 40; ++i) bundles.push_back(numbered_bundle(i));
    g.run_parallel(bundles);
    const auto t = timed->times();
    for (std::size_t i = 0; i + 7 < t.size(); ++i) {
      if (t[i + 7] - t[i] < 60000ms) return "more than 7 requests within one minute";
    }
  }
  {
    ScriptEntry e;
    e.replies = {ScriptedReply::failure(503), ScriptedReply::failure(429), ScriptedReply::failure(502),
                 ScriptedReply::payload({{"reasoning", "r"}, {"answer", "no"}})};
    auto clock = std::make_shared<VirtualClock>();
    Gateway g(GatewayConfig{}, std::make_shared<ScriptedProvider>(std::vector<ScriptEntry>{e}), clock);
    g.complete_structured(numbered_bundle(0));
    if (clock->sleeps() != std::vector<Millis>{1000ms, 2000ms, 4000ms}) return "backoff sequence differs";
  }
  std::mt19937 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    GatewayConfig cfg;
    cfg.max_in_flight = 1 + trial % 8;
    Gateway g(cfg, std::make_shared<ScriptedProvider>(numbered_script(20)), std::make_shared<VirtualClock>());
    std::vector<int> order(20);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<PromptBundle> bundles;
    for (int i : order) bundles.push_back(numbered_bundle(i));
    const auto slots = g.run_parallel(bundles);
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if (!slots[k].ok() || slots[k].value->reasoning != std::to_string(order[k])) {
        return "permutation trial " + std::to_string(trial) + " slot " + std::to_string(k);
      }
    }
  }
  return {};
}

std::string nanos_to_string(unsigned __int128 nanos) {
  std::string digits;
  do {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(nanos % 10)));
    nanos /= 10;
  } while (nanos > 0);
  while (digits.size() < 10) digits.insert(digits.begin(), '0');
  return digits.substr(0, digits.size() - 9) + "." + digits.substr(digits.size() - 9);
}

std::string micros_to_string(std::int64_t micros) {
  std::string s = std::to_string(micros);
  while (s.size() < 7) s.insert(s.begin(), '0');
  return s.substr(0, s.size() - 6) + "." + s.substr(s.size() - 6);
}

std::string ac9() {
  {
    Pricing p;
    p.set("gpt-4-0613", "0.03", "0.06");
    const std::vector<LedgerEntry> e{{"multilabel", "gpt-4-0613", Usage{200000, 50000}}};
    const std::string got = UsageLedger(e).total_cost(p).to_string(2);
    if (got != "9.00") return "worked example gave " + got;
  }
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::int64_t> price(0, 200000), tokens(0, 400000);
  std::uniform_int_distribution<int> length(1, 60);
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t pp = price(rng), cp = price(rng);
    Pricing p;
    p.set("m", micros_to_string(pp), micros_to_string(cp));
    std::vector<LedgerEntry> entries;
    unsigned __int128 nanos = 0;
    for (int i = length(rng); i > 0; --i) {
      const Usage u{tokens(rng), tokens(rng)};
      entries.push_back({"binary", "m", u});
      nanos += static_cast<unsigned __int128>(u.prompt_tokens) * pp +
               static_cast<unsigned __int128>(u.completion_tokens) * cp;
    }
    const auto rows = cost_report(entries, p, 100);
    if (rows.size() != 1 || rows[0].total_cost.to_string(9) != nanos_to_string(nanos)) {
      return "ledger " + std::to_string(trial) + " total differs";
    }
  }
  return {};
}

std::string ac10() {
  const Corpus raw = load_corpus(fs::path(SURVEYLENS_TEST_DATA_DIR) / "cleaning.csv", CorpusFormat::kCsv);
  const Corpus once = clean(raw);
  std::vector<std::string> ids;
  for (const auto& r : once.responses()) {
    if (r.text != trim(r.text) || r.text.empty()) return "row " + r.id + " is not trimmed";
    ids.push_back(r.id);
  }
  if (ids != std::vector<std::string>{"c01", "c07", "c11", "c12"}) return "retained the wrong rows";
  if (!(clean(once) == once)) return "clean is not idempotent";
  return {};
}

}  // namespace
}  // namespace surveylens::acceptance

int main() {
  using namespace surveylens::acceptance;
  struct Criterion {
    const char* id;
    const char* title;
    Check check;
  };
  const std::vector<Criterion> criteria = {
      {"AC1", "metric oracle equivalence", ac1},   {"AC2", "subgroup averages", ac2},
      {"AC3", "rubric rate arithmetic", ac3},      {"AC4", "consensus correctness", ac4},
      {"AC5", "workflow determinism", ac5},        {"AC6", "theme count conservation", ac6},
      {"AC7", "fidelity triage", ac7},             {"AC8", "gateway contracts", ac8},
      {"AC9", "ledger exactness", ac9},            {"AC10", "cleaning rules", ac10}};
  int failures = 0;
  for (const auto& c : criteria) {
    std::string reason;
    try {
      reason = c.check();
    } catch (const std::exception& e) {
      reason = std::string("exception: ") + e.what();
    }
    if (reason.empty()) {
      std::cout << c.id << " PASS " << c.title << std::endl;
    } else {
      ++failures;
      std::cout << c.id << " FAIL " << c.title << ": " << reason << std::endl;
    }
  }
  return failures == 0 ? 0 : 1;
}
