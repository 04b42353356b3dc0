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

#include "surveylens/corpus.hpp"
#include "surveylens/error.hpp"
#include "surveylens/templates.hpp"
#include "test_support.hpp"

namespace surveylens {
namespace {

std::filesystem::path shipped(TaskKind kind) {
  return std::filesystem::path(SURVEYLENS_TEMPLATES_DIR) / (std::string(to_string(kind)) + ".txt");
}

TEST(Templates, ShippedFilesMatchBuiltInDefaults) {
  const TemplateLibrary lib;
  for (TaskKind kind : kAllTaskKinds) {
    SCOPED_TRACE(std::string(to_string(kind)));
    EXPECT_EQ(parse_template_file(read_file(shipped(kind))), lib.get(kind));
  }
}

TEST(Templates, EveryDefaultAsksForReasoningFirst) {
  const TemplateLibrary lib;
  for (TaskKind kind : kAllTaskKinds) {
    EXPECT_NE(lib.get(kind).user.find("step-by-step"), std::string::npos) << to_string(kind);
  }
}

TEST(Templates, TaskKindNames) {
  for (TaskKind kind : kAllTaskKinds) EXPECT_EQ(parse_task_kind(to_string(kind)), kind);
  EXPECT_EQ(to_string(TaskKind::kMultilabel), "multilabel");
  EXPECT_THROW(parse_task_kind("summarize"), Error);
}

TEST(Templates, ParseAndFormatRoundTrip) {
  const PromptTemplate tpl = parse_template_file("[system]\nBe careful.\n[user]\nLine one\n\nLine {{comment}}\n");
  EXPECT_EQ(tpl.system, "Be careful.");
  EXPECT_EQ(tpl.user, "Line one\n\nLine {{comment}}");
  EXPECT_EQ(parse_template_file(format_template_file(tpl)), tpl);
}

TEST(Templates, MalformedFilesAreRejected) {
  EXPECT_THROW(parse_template_file("no markers"), Error);
  EXPECT_THROW(parse_template_file("[user]\nx\n[system]\ny\n"), Error);
  EXPECT_THROW(parse_template_file("[system]\nx\n"), Error);
}

TEST(Templates, UnknownPlaceholderIsNamed) {
  try {
    placeholders_of("Hello {{commnet}}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTemplate);
    EXPECT_STREQ(e.what(), "unknown placeholder commnet");
  }
  EXPECT_EQ(placeholders_of("{{comment}} and {{goal}} and {{comment}}"),
            (std::set<std::string>{"comment", "goal"}));
  TemplateLibrary lib;
  EXPECT_THROW(lib.set(TaskKind::kBinary, {"s", "{{bogus}}"}), Error);
}

TEST(Templates, RenderSubstitutes) {
  EXPECT_EQ(render_template("Q: {{question}} / C: {{comment}}", {{"question", "why?"}, {"comment", "{{goal}}"}}),
            "Q: why? / C: {{goal}}");
  EXPECT_EQ(render_template("[{{goal}}]", {}), "[]");
}

TEST(Templates, DirectoryOverridesAndFingerprints) {
  const auto dir = testing::scratch_dir("tpl");
  write_file(dir / "binary.txt", "[system]\nCustom.\n[user]\nIs {{comment}} about {{criterion}}?\n");
  const TemplateLibrary defaults;
  const TemplateLibrary lib = TemplateLibrary::from_directory(dir);
  EXPECT_EQ(lib.get(TaskKind::kBinary).system, "Custom.");
  EXPECT_EQ(lib.get(TaskKind::kExtract), defaults.get(TaskKind::kExtract));
  EXPECT_NE(lib.fingerprint(TaskKind::kBinary), defaults.fingerprint(TaskKind::kBinary));
  EXPECT_EQ(lib.fingerprint(TaskKind::kExtract), defaults.fingerprint(TaskKind::kExtract));
  EXPECT_THROW(TemplateLibrary::from_directory(dir / "missing"), Error);
}

}  // namespace
}  // namespace surveylens
