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

#include "surveylens/error.hpp"
#include "surveylens/schema.hpp"

namespace surveylens {
namespace {

OutputSchema themes_schema() {
  return OutputSchema(
      "report_themes", "Themes found in the comments.",
      {FieldSpec::object_list("themes", {FieldSpec::string("title"), FieldSpec::string("description")})});
}

TEST(Schema, ReasoningComesFirst) {
  const OutputSchema s("answer", "", {FieldSpec::string_enum("answer", {"yes", "no"})});
  ASSERT_EQ(s.fields().size(), 2u);
  EXPECT_EQ(s.fields()[0].name, "reasoning");
  EXPECT_FALSE(s.validate({{"answer", "yes"}}) == std::nullopt);
  EXPECT_EQ(s.validate({{"reasoning", "r"}, {"answer", "yes"}}), std::nullopt);
}

TEST(Schema, EnumViolationNamesValue) {
  const OutputSchema s("answer", "", {FieldSpec::string_enum("answer", {"yes", "no"})});
  const auto err = s.validate({{"reasoning", "r"}, {"answer", "maybe"}});
  ASSERT_TRUE(err.has_value());
  EXPECT_NE(err->find("maybe"), std::string::npos);
  EXPECT_NE(err->find("\"yes\", \"no\""), std::string::npos);
}

TEST(Schema, RestrictedListRejectsUnknownLabel) {
  const OutputSchema s("labels", "", {FieldSpec::string_list("labels", {"Teaching", "Other"})});
  EXPECT_EQ(s.validate({{"reasoning", ""}, {"labels", json::array()}}), std::nullopt);
  EXPECT_EQ(s.validate({{"reasoning", ""}, {"labels", {"Other"}}}), std::nullopt);
  const auto err = s.validate({{"reasoning", ""}, {"labels", {"Teachng"}}});
  ASSERT_TRUE(err.has_value());
  EXPECT_NE(err->find("Teachng"), std::string::npos);
  EXPECT_TRUE(s.validate({{"reasoning", ""}, {"labels", {1}}}).has_value());
  EXPECT_TRUE(s.validate({{"reasoning", ""}, {"labels", "Other"}}).has_value());
}

TEST(Schema, NestedObjectPathsInMessages) {
  const OutputSchema s = themes_schema();
  EXPECT_EQ(s.validate({{"reasoning", ""},
                        {"themes", {{{"title", "A"}, {"description", "d"}}}}}),
            std::nullopt);
  const auto err = s.validate({{"reasoning", ""}, {"themes", {{{"title", "A"}}}}});
  ASSERT_TRUE(err.has_value());
  EXPECT_NE(err->find("themes[0].description"), std::string::npos) << *err;
  EXPECT_TRUE(s.validate(json::array()).has_value());
}

TEST(Schema, ExtraFieldsAreTolerated) {
  EXPECT_EQ(themes_schema().validate({{"reasoning", ""}, {"themes", json::array()}, {"x", 1}}),
            std::nullopt);
}

TEST(Schema, RejectsMalformedDefinitions) {
  EXPECT_THROW(OutputSchema("", "", {}), Error);
  EXPECT_THROW(OutputSchema("s", "", {FieldSpec::string("reasoning")}), Error);
  EXPECT_THROW(OutputSchema("s", "", {FieldSpec::string_enum("a", {})}), Error);
  EXPECT_THROW(OutputSchema("s", "", {FieldSpec::object_list("a", {})}), Error);
}

TEST(Schema, JsonSchemaShape) {
  const json js = themes_schema().to_json_schema();
  EXPECT_EQ(js["type"], "object");
  EXPECT_EQ(js["required"], json({"reasoning", "themes"}));
  const json& items = js["properties"]["themes"]["items"];
  EXPECT_EQ(items["type"], "object");
  EXPECT_EQ(items["required"], json({"title", "description"}));
  const OutputSchema s("answer", "", {FieldSpec::string_list("labels", {"A", "B"})});
  EXPECT_EQ(s.to_json_schema()["properties"]["labels"]["items"]["enum"], json({"A", "B"}));
}

}  // namespace
}  // namespace surveylens
