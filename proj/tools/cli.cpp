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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>

#include "surveylens/config.hpp"
#include "surveylens/corpus.hpp"
#include "surveylens/csv.hpp"
#include "surveylens/error.hpp"
#include "surveylens/evaluation.hpp"
#include "surveylens/gateway.hpp"
#include "surveylens/providers.hpp"
#include "surveylens/tasks.hpp"
#include "surveylens/thematic.hpp"
#include "surveylens/workflows.hpp"

namespace surveylens::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct Globals {
  std::string config;
  std::string provider = "live";
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string model;
  std::optional<int> max_in_flight;
  std::optional<std::int64_t> context_budget;
  std::string tagset;
  std::string templates;
};

CorpusFormat format_for(const std::string& path, const std::string& flag) {
  if (!flag.empty()) return parse_corpus_format(flag);
  return fs::path(path).extension() == ".csv" ? CorpusFormat::kCsv : CorpusFormat::kJsonl;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string line(trim(std::string_view(text).substr(start, end - start)));
    if (!line.empty()) out.push_back(line);
    start = end + 1;
  }
  return out;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string item(trim(std::string_view(text).substr(start, end - start)));
    if (!item.empty()) out.push_back(item);
    start = end + 1;
  }
  return out;
}

// Shared state for one invocation, built after parsing.
class Session {
 public:
  Session(const Globals& g, std::ostream& err) : g_(g), err_(err) {
    cfg_ = g.config.empty() ? AppConfig{} : AppConfig::load(g.config);
    if (g.seed) cfg_.seed = *g.seed;
    if (!g.out.empty()) cfg_.output_dir = g.out;
    if (!g.model.empty()) {
      cfg_.primary_model = g.model;
      if (!cfg_.pricing.contains(g.model)) cfg_.pricing.set(g.model, "0", "0");
    }
    if (g.max_in_flight) cfg_.gateway.max_in_flight = *g.max_in_flight;
    if (g.context_budget) cfg_.context_budget = *g.context_budget;
    if (!g.tagset.empty()) cfg_.tagset = g.tagset;
    if (!g.templates.empty()) cfg_.templates_dir = fs::path(g.templates);
    cfg_.validate();
  }

  const AppConfig& config() const { return cfg_; }
  fs::path out_dir() const { return cfg_.output_dir; }

  const TagSet& tagset() {
    if (!tagset_) tagset_ = cfg_.load_tagset();
    return *tagset_;
  }

  const TemplateLibrary& templates() {
    if (!templates_) templates_ = cfg_.load_templates();
    return *templates_;
  }

  Gateway& gateway() {
    if (!gateway_) {
      std::shared_ptr<Provider> provider;
      if (g_.provider == "live") {
        provider = std::make_shared<HttpProvider>(cfg_.gateway);
      } else if (g_.provider.rfind("mock:", 0) == 0) {
        provider =
            std::make_shared<ScriptedProvider>(ScriptedProvider::load_script(g_.provider.substr(5)));
      } else {
        throw Error(ErrorKind::kConfig,
                    "--provider must be 'live' or 'mock:<script>', got '" + g_.provider + "'");
      }
      gateway_ = std::make_unique<Gateway>(cfg_.gateway, std::move(provider));
    }
    return *gateway_;
  }

  TaskContext context(bool judge = false) {
    return TaskContext{gateway(), templates(), judge ? cfg_.judge_model : cfg_.primary_model,
                       cfg_.temperature};
  }

  void write(const std::string& name, const std::string& text) {
    write_file(out_dir() / name, text);
    err_ << "wrote " << (out_dir() / name).string() << "\n";
  }

  // Sorted so parallel completion order never shows in the file.
  void write_ledger() {
    if (!gateway_) return;
    auto entries = gateway_->ledger().entries();
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      return std::tie(a.task_kind, a.model_id, a.usage.prompt_tokens,
                      a.usage.completion_tokens) <
             std::tie(b.task_kind, b.model_id, b.usage.prompt_tokens,
                      b.usage.completion_tokens);
    });
    write("ledger.csv", UsageLedger(entries).to_csv());
  }

 private:
  const Globals& g_;
  std::ostream& err_;
  AppConfig cfg_;
  std::optional<TagSet> tagset_;
  std::optional<TemplateLibrary> templates_;
  std::unique_ptr<Gateway> gateway_;
};

template <class T>
int finish_slots(Session& s, const std::string& name, const std::vector<Slot<T>>& slots,
                 std::ostream& out, std::ostream& err) {
  s.write(name + ".jsonl", to_jsonl(slots));
  std::string errors;
  std::size_t failed = 0;
  for (const auto& slot : slots) {
    if (slot.ok()) continue;
    ++failed;
    ojson line;
    line["stage"] = name;
    line["id"] = slot.id;
    line["kind"] = to_string(slot.error->kind);
    line["message"] = slot.error->message;
    line["attempts"] = slot.error->attempts;
    errors += line.dump() + "\n";
  }
  s.write("errors.jsonl", errors);
  s.write_ledger();
  out << csv_row({"task", "items", "ok", "failed"})
      << csv_row({name, std::to_string(slots.size()), std::to_string(slots.size() - failed),
                  std::to_string(failed)});
  if (failed > 0) {
    err << failed << " item(s) failed; see errors.jsonl\n";
    return kExitPartial;
  }
  return kExitOk;
}

Corpus read_corpus(const std::string& path, const std::string& format) {
  return load_corpus(path, format_for(path, format));
}

// Multilabel predictions from task records or plain {"id","labels"} lines.
// Failed records are skipped and their ids returned in `failed`.
LabelSets read_label_predictions(const std::string& path, std::set<std::string>& failed) {
  LabelSets sets;
  for (const auto& line : split_lines(read_file(path))) {
    const json doc = json::parse(line);
    const std::string id = doc.at("id").get<std::string>();
    if (doc.contains("status")) {
      if (doc.at("status") != "ok") {
        failed.insert(id);
        continue;
      }
      const json& payload = doc.at("payload");
      if (payload.contains("labels")) {
        sets[id] = payload.at("labels").get<std::set<std::string>>();
      } else {
        sets[id] = {payload.at("label").get<std::string>()};
      }
    } else {
      sets[id] = doc.at("labels").get<std::set<std::string>>();
    }
  }
  return sets;
}

bool yes_no(const json& v) {
  if (v.is_boolean()) return v.get<bool>();
  const std::string s = to_lower_ascii(v.get<std::string>());
  if (s == "yes" || s == "true") return true;
  if (s == "no" || s == "false") return false;
  throw Error(ErrorKind::kParse, "expected yes or no, got '" + s + "'");
}

std::map<std::string, bool> read_binary(const std::string& path, std::set<std::string>& failed) {
  std::map<std::string, bool> out;
  for (const auto& line : split_lines(read_file(path))) {
    const json doc = json::parse(line);
    const std::string id = doc.at("id").get<std::string>();
    if (doc.contains("status")) {
      if (doc.at("status") != "ok") {
        failed.insert(id);
        continue;
      }
      out[id] = yes_no(doc.at("payload").at("answer"));
    } else {
      out[id] = yes_no(doc.at("answer"));
    }
  }
  return out;
}

std::map<std::string, Sentiment3> read_sentiment(const std::string& path,
                                                 std::set<std::string>& failed) {
  std::map<std::string, Sentiment3> out;
  for (const auto& line : split_lines(read_file(path))) {
    const json doc = json::parse(line);
    const std::string id = doc.at("id").get<std::string>();
    if (doc.contains("status")) {
      if (doc.at("status") != "ok") {
        failed.insert(id);
        continue;
      }
      out[id] = parse_sentiment3(doc.at("payload").at("sentiment").get<std::string>());
    } else {
      out[id] = parse_sentiment3(doc.at("sentiment").get<std::string>());
    }
  }
  return out;
}

template <class M>
void drop_ids(M& m, const std::set<std::string>& ids) {
  for (const auto& id : ids) m.erase(id);
}

std::vector<Excerpt> read_excerpts(const std::string& path) {
  std::vector<Excerpt> out;
  for (const auto& slot : parse_jsonl_records<ExtractionResult>(read_file(path))) {
    if (!slot.ok()) continue;
    out.insert(out.end(), slot.value->excerpts.begin(), slot.value->excerpts.end());
  }
  return out;
}

std::vector<AnnotationSet> read_annotation_sets(const std::vector<std::string>& paths) {
  std::vector<AnnotationSet> sets;
  for (const auto& p : paths) sets.push_back(load_annotations(p));
  return sets;
}

void add_corpus_options(CLI::App* sub, std::string& input, std::string& format) {
  sub->add_option("--input", input, "Corpus file (csv or jsonl)")->required()->check(
      CLI::ExistingFile);
  sub->add_option("--format", format, "Corpus format: csv or jsonl (default: by extension)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Survey comment analysis with structured LLM tasks", "surveylens"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "TOML-style configuration file")->check(CLI::ExistingFile);
  app.add_option("--provider", g.provider, "live, or mock:<script.jsonl> for scripted replies")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for sampling (overrides the config)");
  app.add_option("--out", g.out, "Output directory (overrides the config)");
  app.add_option("--model", g.model, "Primary model id (overrides the config)");
  app.add_option("--max-in-flight", g.max_in_flight, "Concurrent request bound");
  app.add_option("--context-budget", g.context_budget, "Token budget per theme batch");
  app.add_option("--tagset", g.tagset, "Tag set json file, or 'default'");
  app.add_option("--templates", g.templates, "Directory overriding prompt templates");

  std::function<int()> action;
  auto session = [&]() { return std::make_unique<Session>(g, err); };

  // ingest
  std::string input, format, output, output_format = "jsonl", questions;
  std::optional<std::size_t> sample_n;
  auto* ingest = app.add_subcommand("ingest", "Load, clean, filter and export a corpus");
  add_corpus_options(ingest, input, format);
  ingest->add_option("--questions", questions, "Comma-separated question ids to keep");
  ingest->add_option("--sample", sample_n, "Rows to sample per question (uses --seed)");
  ingest->add_option("--output", output, "Output file (default: <out>/corpus.<format>)");
  ingest->add_option("--output-format", output_format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
  ingest->callback([&] {
    action = [&] {
      auto s = session();
      Corpus c = clean(read_corpus(input, format), s->config().sentinels);
      if (!questions.empty()) {
        const auto ids = split_commas(questions);
        c = filter(c, std::set<std::string>(ids.begin(), ids.end()));
      }
      if (sample_n) c = sample(c, *sample_n, s->config().seed);
      const CorpusFormat fmt = parse_corpus_format(output_format);
      const fs::path dest =
          output.empty() ? s->out_dir() / ("corpus." + output_format) : fs::path(output);
      export_corpus(c, dest, fmt);
      const CleaningReport report = c.provenance().cleaning.value_or(CleaningReport{});
      out << csv_row({"raw_rows", "retained_rows", "exported_rows"})
          << csv_row({std::to_string(report.raw_rows), std::to_string(report.retained_rows),
                      std::to_string(c.size())});
      err << "wrote " << dest.string() << "\n";
      return kExitOk;
    };
  });

  // classify
  std::string criterion;
  auto* classify = app.add_subcommand("classify", "Classify every comment");
  classify->require_subcommand(1);
  auto* c_binary = classify->add_subcommand("binary", "Yes/no question per comment");
  add_corpus_options(c_binary, input, format);
  c_binary->add_option("--criterion", criterion, "The yes/no question")->required();
  c_binary->callback([&] {
    action = [&] {
      auto s = session();
      auto ctx = s->context();
      const auto items = items_from(read_corpus(input, format));
      return finish_slots(*s, "binary", classify_binary(items, criterion, ctx), out, err);
    };
  });
  auto* c_multi = classify->add_subcommand("multilabel", "Any number of tags per comment");
  add_corpus_options(c_multi, input, format);
  c_multi->callback([&] {
    action = [&] {
      auto s = session();
      auto ctx = s->context();
      const auto items = items_from(read_corpus(input, format));
      return finish_slots(*s, "multilabel", classify_multilabel(items, s->tagset(), ctx), out,
                          err);
    };
  });
  auto* c_class = classify->add_subcommand("multiclass", "Exactly one tag per comment");
  add_corpus_options(c_class, input, format);
  c_class->callback([&] {
    action = [&] {
      auto s = session();
      auto ctx = s->context();
      const auto items = items_from(read_corpus(input, format));
      return finish_slots(*s, "multiclass",
                          classify_multiclass(items, s->tagset().tags(), ctx), out, err);
    };
  });

  // extract
  std::string goal;
  auto* extract = app.add_subcommand("extract", "Extract verbatim excerpts for a goal");
  add_corpus_options(extract, input, format);
  extract->add_option("--goal", goal, "What the excerpts should be about")->required();
  extract->callback([&] {
    action = [&] {
      auto s = session();
      auto ctx = s->context();
      const auto items = items_from(read_corpus(input, format));
      return finish_slots(*s, "extract", extract_excerpts(items, goal, ctx), out, err);
    };
  });

  // sentiment
  auto* sentiment = app.add_subcommand("sentiment", "Five-level sentiment per comment");
  add_corpus_options(sentiment, input, format);
  sentiment->callback([&] {
    action = [&] {
      auto s = session();
      auto ctx = s->context();
      const auto items = items_from(read_corpus(input, format));
      return finish_slots(*s, "sentiment", analyze_sentiment(items, ctx), out, err);
    };
  });

  // themes
  bool no_cache = false;
  auto* themes = app.add_subcommand("themes", "Derive and coalesce themes in context-sized batches");
  add_corpus_options(themes, input, format);
  themes->add_flag("--no-cache", no_cache, "Recompute every stage");

  // workflow
  std::string preset_name, spec_path, focus_tag, prior_path;
  auto* workflow = app.add_subcommand("workflow", "Multi-stage workflows");
  workflow->require_subcommand(1);
  auto* w_list = workflow->add_subcommand("list", "List the workflow presets");
  w_list->callback([&] {
    action = [&] {
      for (const auto& name : preset_names()) out << name << "\n";
      return kExitOk;
    };
  });
  auto* w_run = workflow->add_subcommand("run", "Run a preset (or --spec) over a corpus");
  w_run->add_option("preset", preset_name, "Preset name (see 'workflow list')");
  add_corpus_options(w_run, input, format);
  w_run->add_option("--spec", spec_path, "Workflow spec json instead of a preset")
      ->check(CLI::ExistingFile);
  w_run->add_option("--focus-tag", focus_tag, "focused-feedback: tag to keep");
  w_run->add_option("--goal", goal, "Extraction goal overriding the preset's");
  w_run->add_option("--prior", prior_path, "Earlier multilabel.jsonl to reuse")
      ->check(CLI::ExistingFile);
  w_run->add_flag("--no-cache", no_cache, "Recompute every stage");

  auto run_spec = [&](WorkflowSpec spec) {
    auto s = session();
    auto ctx = s->context();
    WorkflowOptions options;
    options.tagset = s->tagset();
    options.context_budget = s->config().context_budget;
    options.completion_reserve = s->config().completion_reserve;
    options.run_dir = s->out_dir();
    options.use_cache = !no_cache;
    if (!prior_path.empty()) {
      options.prior_multilabel = parse_jsonl_records<MultiLabelResult>(read_file(prior_path));
    }
    const WorkflowRun run = run_workflow(spec, read_corpus(input, format), ctx, options);
    out << csv_row({"stage", "source", "input", "output", "errors"});
    for (const auto& st : run.stages) {
      out << csv_row({st.name, st.source, std::to_string(st.input_count),
                      std::to_string(st.output_count), std::to_string(st.error_count)});
    }
    err << "run directory " << s->out_dir().string() << "\n";
    if (run.partial()) {
      err << run.errors.size() << " error(s); see errors.jsonl\n";
      return kExitPartial;
    }
    return kExitOk;
  };

  themes->callback([&] {
    action = [&] {
      return run_spec(WorkflowSpec{
          "themes", {{StageKind::kDeriveThemes, {}}, {StageKind::kCoalesce, {}}}});
    };
  });
  w_run->callback([&] {
    action = [&] {
      WorkflowSpec spec;
      if (!spec_path.empty()) {
        if (!preset_name.empty()) {
          throw CLI::ValidationError("give either a preset or --spec, not both");
        }
        spec = parse_workflow_spec(read_file(spec_path));
      } else if (preset_name.empty()) {
        throw CLI::ValidationError("a preset name or --spec is required");
      } else {
        spec = preset(preset_name);
      }
      for (auto& st : spec.stages) {
        if (st.kind == StageKind::kFilterTag && !focus_tag.empty()) st.param = focus_tag;
        if (st.kind == StageKind::kExtract && !goal.empty()) st.param = goal;
      }
      return run_spec(spec);
    };
  });

  // eval
  std::string predictions, truth, extractions;
  bool verbose = false;
  auto* eval = app.add_subcommand("eval", "Score predictions against ground truth");
  eval->require_subcommand(1);
  auto add_pred_truth = [&](CLI::App* sub) {
    sub->add_option("--predictions", predictions, "Task records or {id, ...} jsonl")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--truth", truth, "Ground-truth jsonl")->required()->check(CLI::ExistingFile);
  };
  auto skipped = [&](const std::set<std::string>& failed) {
    if (!failed.empty()) {
      err << failed.size() << " failed prediction(s) excluded from scoring\n";
    }
  };
  auto* e_multi = eval->add_subcommand("multilabel", "Multi-label metrics");
  add_pred_truth(e_multi);
  e_multi->add_flag("--verbose", verbose, "Add the extra averages to summary.csv");
  e_multi->callback([&] {
    action = [&] {
      auto s = session();
      std::set<std::string> failed;
      LabelSets pred = read_label_predictions(predictions, failed);
      LabelSets gold = load_annotations(truth).rows;
      drop_ids(gold, failed);
      skipped(failed);
      const auto tags = s->tagset().names();
      const auto report = multilabel_report(LabelMatrix::from_sets(pred, tags),
                                            LabelMatrix::from_sets(gold, tags));
      s->write("per_tag.csv", per_tag_csv(report));
      s->write("summary.csv", summary_csv(report, verbose));
      out << summary_csv(report, verbose);
      return kExitOk;
    };
  });
  auto* e_bin = eval->add_subcommand("binary", "Binary yes/no metrics");
  add_pred_truth(e_bin);
  e_bin->callback([&] {
    action = [&] {
      auto s = session();
      std::set<std::string> failed;
      auto pred = read_binary(predictions, failed);
      std::set<std::string> unused;
      auto gold = read_binary(truth, unused);
      drop_ids(gold, failed);
      skipped(failed);
      const std::string csv = binary_report_csv(binary_report(pred, gold));
      s->write("binary_eval.csv", csv);
      out << csv;
      return kExitOk;
    };
  });
  auto* e_sent = eval->add_subcommand("sentiment", "Three-class sentiment metrics");
  add_pred_truth(e_sent);
  e_sent->callback([&] {
    action = [&] {
      auto s = session();
      std::set<std::string> failed;
      auto pred = read_sentiment(predictions, failed);
      std::set<std::string> unused;
      auto gold = read_sentiment(truth, unused);
      drop_ids(gold, failed);
      skipped(failed);
      const std::string csv = sentiment_report_csv(sentiment_report(pred, gold));
      s->write("sentiment_eval.csv", csv);
      out << csv;
      return kExitOk;
    };
  });
  auto* e_ext = eval->add_subcommand("extraction", "Judge extractions against the rubric");
  add_corpus_options(e_ext, input, format);
  e_ext->add_option("--extractions", extractions, "extract.jsonl task records")
      ->required()
      ->check(CLI::ExistingFile);
  e_ext->add_option("--goal", goal, "The extraction goal that was used")->required();
  e_ext->callback([&] {
    action = [&] {
      auto s = session();
      auto ctx = s->context(/*judge=*/true);
      const Corpus corpus = read_corpus(input, format);
      std::vector<JudgeInput> inputs;
      for (const auto& slot :
           parse_jsonl_records<ExtractionResult>(read_file(extractions))) {
        if (!slot.ok()) continue;
        const SurveyResponse* r = corpus.find(slot.id);
        if (r == nullptr) {
          throw Error(ErrorKind::kInvalidArgument,
                      "extraction for unknown id '" + slot.id + "'");
        }
        JudgeInput in{TextItem{r->id, r->text, r->question_text}, {}};
        for (const auto& e : slot.value->excerpts) in.excerpts.push_back(e.text);
        inputs.push_back(std::move(in));
      }
      const auto slots = judge_extractions(inputs, goal, ctx);
      std::vector<RubricVerdict> verdicts;
      for (const auto& v : slots) {
        if (v.ok()) verdicts.push_back(*v.value);
      }
      std::string records;
      std::string errors;
      for (const auto& v : slots) {
        records += to_record(v).dump() + "\n";
        if (!v.ok()) {
          ojson line;
          line["stage"] = "judge";
          line["id"] = v.id;
          line["kind"] = to_string(v.error->kind);
          line["message"] = v.error->message;
          line["attempts"] = v.error->attempts;
          errors += line.dump() + "\n";
        }
      }
      s->write("judge.jsonl", records);
      s->write("errors.jsonl", errors);
      s->write_ledger();
      if (!verdicts.empty()) {
        const std::string csv = rubric_rates_csv(rubric_error_rates(verdicts));
        s->write("rubric_rates.csv", csv);
        out << csv;
      }
      return verdicts.size() == slots.size() ? kExitOk : kExitPartial;
    };
  });

  // agreement
  std::vector<std::string> annotation_paths, groups;
  auto* agreement = app.add_subcommand("agreement", "Pairwise Jaccard agreement between raters");
  agreement->add_option("--annotations", annotation_paths, "Annotation jsonl, one per rater")
      ->required()
      ->check(CLI::ExistingFile);
  agreement->add_option("--group", groups, "Subgroup average: name=rater,rater,...");
  agreement->callback([&] {
    action = [&] {
      auto s = session();
      const auto sets = read_annotation_sets(annotation_paths);
      std::vector<Subgroup> subgroups;
      for (const auto& spec : groups) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw CLI::ValidationError("--group", "expected name=rater,rater,...");
        }
        subgroups.push_back(Subgroup{spec.substr(0, eq), split_commas(spec.substr(eq + 1))});
      }
      if (subgroups.empty()) {
        Subgroup all{"all", {}};
        for (const auto& a : sets) all.members.push_back(a.annotator_id);
        subgroups.push_back(std::move(all));
      }
      const std::string csv = agreement_csv(agreement_matrix(sets), subgroups);
      s->write("agreement.csv", csv);
      out << csv;
      return kExitOk;
    };
  });

  // consensus
  std::string mode = "rows";
  auto* cons = app.add_subcommand("consensus", "Majority-vote ground truth from three or more raters");
  cons->add_option("--annotations", annotation_paths, "Annotation jsonl, one per rater")
      ->required()
      ->check(CLI::ExistingFile);
  cons->add_option("--mode", mode, "rows (drop undecided rows) or labels")
      ->check(CLI::IsMember({"rows", "labels"}))
      ->capture_default_str();
  cons->callback([&] {
    action = [&] {
      auto s = session();
      const auto sets = read_annotation_sets(annotation_paths);
      const auto result = consensus(sets, s->tagset().names(), parse_consensus_mode(mode));
      const std::string name = "consensus_" + mode;
      s->write(name + ".jsonl", serialize_annotations(consensus_annotations(result, name)));
      out << csv_row({"mode", "annotators", "rows", "retained"})
          << csv_row({mode, std::to_string(result.annotators),
                      std::to_string(result.votes.size()),
                      std::to_string(result.retained_ids.size())});
      return kExitOk;
    };
  });

  // verify-excerpts
  std::optional<double> threshold;
  auto* verify = app.add_subcommand("verify-excerpts", "Check excerpts against their sources");
  add_corpus_options(verify, input, format);
  verify->add_option("--extractions", extractions, "extract.jsonl task records")
      ->required()
      ->check(CLI::ExistingFile);
  verify->add_option("--threshold", threshold, "Largest edit ratio still counted as a minor edit");
  verify->callback([&] {
    action = [&] {
      auto s = session();
      const auto report =
          verify_excerpts(read_excerpts(extractions), read_corpus(input, format),
                          threshold.value_or(s->config().minor_edit_threshold));
      s->write("fidelity.jsonl", fidelity_jsonl(report));
      const std::string csv = fidelity_summary_csv(report);
      s->write("fidelity_summary.csv", csv);
      out << csv;
      return kExitOk;
    };
  });

  // cost-report
  std::vector<std::string> ledgers, comment_counts;
  std::int64_t per_n = 100;
  auto* cost = app.add_subcommand("cost-report", "Cost per N comments from usage ledgers");
  cost->add_option("--ledger", ledgers, "ledger.csv files (default: <out>/ledger.csv)");
  cost->add_option("--per", per_n, "Report cost per this many comments")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cost->add_option("--comments", comment_counts, "Comment count per task kind: kind=N");
  cost->callback([&] {
    action = [&] {
      auto s = session();
      if (ledgers.empty()) ledgers.push_back((s->out_dir() / "ledger.csv").string());
      std::vector<LedgerEntry> entries;
      for (const auto& p : ledgers) {
        const auto part = UsageLedger::from_csv(read_file(p)).entries();
        entries.insert(entries.end(), part.begin(), part.end());
      }
      std::map<std::string, std::int64_t> counts;
      for (const auto& c : comment_counts) {
        const auto eq = c.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--comments", "expected kind=N");
        try {
          counts[c.substr(0, eq)] = std::stoll(c.substr(eq + 1));
        } catch (const std::exception&) {
          throw CLI::ValidationError("--comments", "expected kind=N");
        }
      }
      const std::string csv =
          cost_report_csv(cost_report(entries, s->config().pricing, per_n, counts), per_n);
      s->write("cost_report.csv", csv);
      out << csv;
      return kExitOk;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace surveylens::cli
