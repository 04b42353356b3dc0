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

#include <gtest/gtest.h>

#include "surveylens/tasks.hpp"
#include "test_support.hpp"

namespace surveylens {
namespace {

using testing::any_reply;
using testing::items;
using testing::MockRig;
using testing::reply_to;

constexpr const char* kCheckpoints =
    "Implement more checkpoints that review previous material throughout the course.";
constexpr const char* kVideos =
    "The course was fantastic. The videos should come with either a transcript or slides.";

TEST(Prompts, MultilabelPromptHasAllLabelsInOrder) {
  const TagSet tags = TagSet::course_feedback();
  PromptInputs in;
  in.question = "What can we do to improve this course?";
  in.comment = kCheckpoints;
  in.labels = tags.tags();
  const PromptBundle b = build_prompt(TaskKind::kMultilabel, in, TemplateLibrary(), "m");
  for (const Tag& t : tags.tags()) {
    EXPECT_NE(b.user_text.find(t.name + ": " + t.description), std::string::npos) << t.name;
  }
  const auto instr = b.user_text.find("step-by-step");
  const auto labels = b.user_text.find("Course logistics and fit");
  const auto question = b.user_text.find("What can we do to improve this course?");
  const auto comment = b.user_text.find(kCheckpoints);
  EXPECT_LT(instr, labels);
  EXPECT_LT(labels, question);
  EXPECT_LT(question, comment);
  EXPECT_NE(b.system_text.find("You are"), std::string::npos);
  EXPECT_EQ(b.schema.fields().front().name, "reasoning");
  EXPECT_EQ(b.task_kind, "multilabel");
}

TEST(Prompts, AssemblyIsDeterministic) {
  PromptInputs in;
  in.question = "Q";
  in.comment = "C";
  in.goal = "G";
  const TemplateLibrary lib;
  EXPECT_EQ(build_prompt(TaskKind::kExtract, in, lib, "m"), build_prompt(TaskKind::kExtract, in, lib, "m"));
  EXPECT_EQ(build_prompt(TaskKind::kExtract, in, lib, "m").user_text,
            build_prompt(TaskKind::kExtract, in, lib, "m").user_text);
}

TEST(Prompts, TemplateOverrideWithUnknownPlaceholder) {
  TemplateLibrary lib;
  try {
    lib.set(TaskKind::kBinary, {"sys", "Hi {{foo}}"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "unknown placeholder foo");
  }
}

TEST(Binary, ScriptedAnswers) {
  MockRig rig({reply_to(kCheckpoints, "binary", {{"reasoning", "asks for checkpoints"}, {"answer", "yes"}}),
               reply_to("Thank you!", "binary", {{"reasoning", "just thanks"}, {"answer", "no"}})});
  const auto in = items({{"r1", kCheckpoints}, {"r2", "Thank you!"}});
  const auto out = classify_binary(in, "does this comment contain suggestions for improvement?", rig.ctx);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_TRUE(out[0].value->answer);
  EXPECT_EQ(out[0].value->reasoning, "asks for checkpoints");
  EXPECT_FALSE(out[1].value->answer);
  EXPECT_EQ(out[1].id, "r2");
  EXPECT_EQ(out[0].value->call.model_id, "test-model");
  EXPECT_EQ(out[0].value->call.temperature, 0.0);
  EXPECT_TRUE(classify_binary({}, "x", rig.ctx).empty());
  EXPECT_THROW(classify_binary(in, " ", rig.ctx), Error);
}

TEST(Binary, QuestionIsInjected) {
  MockRig rig({any_reply("binary", {{"reasoning", "r"}, {"answer", "no"}})});
  classify_binary(items({{"r1", "ok"}}), "c", rig.ctx);
  EXPECT_NE(rig.provider->user_texts()[0].find("What can we do to improve this course?"),
            std::string::npos);
}

TEST(Binary, EmptyReasoningIsRepairedThenFails) {
  MockRig rig({any_reply("binary", {{"reasoning", "  "}, {"answer", "no"}})});
  const auto out = classify_binary(items({{"r1", "ok"}}), "c", rig.ctx);
  ASSERT_FALSE(out[0].ok());
  EXPECT_EQ(out[0].error->kind, ErrorKind::kStructuredOutput);
  EXPECT_EQ(out[0].error->attempts, 2);
  EXPECT_EQ(out[0].id, "r1");
}

TEST(Multilabel, PassThroughAndDedup) {
  MockRig rig({reply_to("<quiz and teacher>", "multilabel", {{"reasoning", "r"}, {"labels", {"Assessment", "Teaching"}}}),
               reply_to("<exam>", "multilabel", {{"reasoning", "r"}, {"labels", {"Assessment", "Assessment"}}})});
  const auto out = classify_multilabel(items({{"a", "<quiz and teacher>"}, {"b", "<exam>"}}),
                                       TagSet::course_feedback(), rig.ctx);
  EXPECT_EQ(out[0].value->labels, (std::set<std::string>{"Assessment", "Teaching"}));
  EXPECT_EQ(out[1].value->labels, (std::set<std::string>{"Assessment"}));
}

TEST(Multilabel, OutOfSetLabelFailsAfterRepair) {
  MockRig rig({any_reply("multilabel", {{"reasoning", "r"}, {"labels", {"Banana"}}})});
  const auto out = classify_multilabel(items({{"a", "x"}}), TagSet::course_feedback(), rig.ctx);
  ASSERT_FALSE(out[0].ok());
  EXPECT_EQ(out[0].error->kind, ErrorKind::kStructuredOutput);
  EXPECT_NE(out[0].error->message.find("Banana"), std::string::npos);
  EXPECT_EQ(rig.provider->calls(), 2u);
}

TEST(Multilabel, EmptySetDependsOnCatchAll) {
  const json empty = {{"reasoning", "r"}, {"labels", json::array()}};
  MockRig strict({any_reply("multilabel", empty)});
  EXPECT_FALSE(classify_multilabel(items({{"a", "x"}}), TagSet::course_feedback(), strict.ctx)[0].ok());
  MockRig lax({any_reply("multilabel", empty)});
  const TagSet custom({{"A", "a"}, {"B", "b"}}, true);
  const auto out = classify_multilabel(items({{"a", "x"}}), custom, lax.ctx);
  ASSERT_TRUE(out[0].ok());
  EXPECT_TRUE(out[0].value->labels.empty());
}

TEST(Multiclass, ScriptedLabel) {
  const auto tags = TagSet::course_feedback().tags();
  MockRig rig({reply_to("<more practice quizzes>", "multiclass", {{"reasoning", "r"}, {"label", "Assessment"}}),
               reply_to("<pizza>", "multiclass", {{"reasoning", "r"}, {"label", "Pizza"}})});
  const auto one = classify_multiclass(items({{"e1", "<more practice quizzes>"}}), tags, rig.ctx);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].value->label, "Assessment");
  const auto bad = classify_multiclass(items({{"e2", "<pizza>"}}), tags, rig.ctx);
  EXPECT_FALSE(bad[0].ok());
}

TEST(Multiclass, SingleLabelListIsAllowed) {
  MockRig rig({any_reply("multiclass", {{"reasoning", "r"}, {"label", "Only"}})});
  const auto out = classify_multiclass(items({{"e", "x"}}), {{"Only", "the one theme"}}, rig.ctx);
  EXPECT_EQ(out[0].value->label, "Only");
}

TEST(Extract, LocatesSpans) {
  MockRig rig({reply_to(kVideos, "extract",
                        {{"reasoning", "r"},
                         {"excerpts", {"The videos should come with either a transcript", "free pizza"}}}),
               reply_to("Thank you!", "extract", {{"reasoning", "r"}, {"excerpts", json::array()}})});
  const auto out = extract_excerpts(items({{"r1", kVideos}, {"r2", "Thank you!"}}),
                                    "suggestions for improvement", rig.ctx);
  const auto& ex = out[0].value->excerpts;
  ASSERT_EQ(ex.size(), 2u);
  ASSERT_TRUE(ex[0].span.has_value());
  EXPECT_EQ(std::string(kVideos).substr(ex[0].span->begin, ex[0].span->end - ex[0].span->begin),
            "The videos should come with either a transcript");
  EXPECT_EQ(ex[0].response_id, "r1");
  EXPECT_FALSE(ex[1].span.has_value());
  EXPECT_TRUE(out[1].value->excerpts.empty());
  EXPECT_NE(rig.provider->user_texts()[0].find("suggestions for improvement"), std::string::npos);
}

TEST(Sentiment, LevelsAndCollapse) {
  MockRig rig({reply_to("nice", "sentiment", {{"reasoning", "r"}, {"sentiment", "slightly_positive"}}),
               reply_to("meh", "sentiment", {{"reasoning", "r"}, {"sentiment", "lukewarm"}})});
  const auto out = analyze_sentiment(items({{"a", "nice"}, {"b", "meh"}}), rig.ctx);
  EXPECT_EQ(out[0].value->level, Sentiment5::kSlightlyPositive);
  EXPECT_FALSE(out[1].ok());
  EXPECT_TRUE(analyze_sentiment({}, rig.ctx).empty());
}

TEST(Sentiment, CollapseIsTotalAndSurjective) {
  EXPECT_EQ(collapse_sentiment(Sentiment5::kSlightlyNegative), Sentiment3::kNegative);
  EXPECT_EQ(collapse_sentiment(Sentiment5::kNegative), Sentiment3::kNegative);
  EXPECT_EQ(collapse_sentiment(Sentiment5::kNeutral), Sentiment3::kNeutral);
  EXPECT_EQ(collapse_sentiment(Sentiment5::kSlightlyPositive), Sentiment3::kPositive);
  EXPECT_EQ(collapse_sentiment(Sentiment5::kPositive), Sentiment3::kPositive);
  for (auto s : {Sentiment5::kNegative, Sentiment5::kSlightlyNegative, Sentiment5::kNeutral,
                 Sentiment5::kSlightlyPositive, Sentiment5::kPositive}) {
    EXPECT_EQ(parse_sentiment5(to_string(s)), s);
    const Sentiment3 c = collapse_sentiment(s);
    EXPECT_EQ(parse_sentiment3(to_string(c)), c);
  }
  EXPECT_THROW(parse_sentiment5("great"), Error);
}

TEST(Tasks, PermutationEquivariant) {
  MockRig a({reply_to("alpha", "binary", {{"reasoning", "a"}, {"answer", "yes"}}),
             reply_to("beta", "binary", {{"reasoning", "b"}, {"answer", "no"}})});
  const auto fwd = classify_binary(items({{"1", "alpha"}, {"2", "beta"}}), "c", a.ctx);
  const auto rev = classify_binary(items({{"2", "beta"}, {"1", "alpha"}}), "c", a.ctx);
  EXPECT_EQ(*fwd[0].value, *rev[1].value);
  EXPECT_EQ(*fwd[1].value, *rev[0].value);
}

TEST(Tasks, JsonlRecordsRoundTrip) {
  MockRig rig({reply_to("good", "multilabel", {{"reasoning", "r"}, {"labels", {"Teaching"}}}),
               reply_to("bad", "multilabel", {{"reasoning", "r"}, {"labels", {"Nope"}}})});
  const auto out = classify_multilabel(items({{"a", "good"}, {"b", "bad"}}), TagSet::course_feedback(), rig.ctx);
  const std::string jsonl = to_jsonl(out);
  const auto back = parse_jsonl_records<MultiLabelResult>(jsonl);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(*back[0].value, *out[0].value);
  EXPECT_EQ(*back[1].error, *out[1].error);
  EXPECT_EQ(to_jsonl(back), jsonl);
}

TEST(Tasks, ItemsFromCorpus) {
  const Corpus c = parse_corpus("id,question_id,text\nr1,Q3,hello\n", CorpusFormat::kCsv);
  const auto it = items_from(c);
  ASSERT_EQ(it.size(), 1u);
  EXPECT_EQ(it[0], (TextItem{"r1", "hello", "What can we do to improve this course?"}));
}

}  // namespace
}  // namespace surveylens
