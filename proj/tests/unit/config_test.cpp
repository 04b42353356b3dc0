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

#include "surveylens/config.hpp"
#include "surveylens/error.hpp"
#include "test_support.hpp"

namespace surveylens {
namespace {

TEST(ConfigDocument, ParsesScalarsArraysAndComments) {
  const ConfigDocument doc = parse_config_document(
      "# top\n"
      "[gateway]\n"
      "max_in_flight = 4  # inline\n"
      "base_url = \"http://localhost:8080/v1\"\n"
      "retryable_statuses = [429, 503]\n"
      "[analysis]\n"
      "sentinels = [\"n/a\", \"skip\"]\n"
      "\"quoted key\" = true\n");
  EXPECT_EQ(doc.at("gateway").at("max_in_flight").as_int("k"), 4);
  EXPECT_EQ(doc.at("gateway").at("base_url").as_string("k"), "http://localhost:8080/v1");
  EXPECT_EQ(doc.at("gateway").at("retryable_statuses").items.size(), 2u);
  EXPECT_EQ(doc.at("analysis").at("sentinels").as_string_list("k"),
            (std::vector<std::string>{"n/a", "skip"}));
  EXPECT_TRUE(doc.at("analysis").at("quoted key").as_bool("k"));
}

TEST(ConfigDocument, ErrorsCiteLine) {
  for (const char* text : {"[a]\nx = \n", "[a]\nx = 1\nx = 2\n", "[a]\nx = 1 junk\n",
                           "[a]\nx = \"open\n"}) {
    try {
      parse_config_document(text);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kConfig);
      EXPECT_NE(std::string(e.what()).find("line "), std::string::npos) << e.what();
    }
  }
}

TEST(ConfigDocument, SecretKeysAreRejected) {
  for (const char* key : {"api_key", "openai_api_key", "client_secret", "password", "bearer"}) {
    const std::string text = std::string("[gateway]\n") + key + " = \"sk-abc\"\n";
    try {
      parse_config_document(text);
      FAIL() << key;
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find("environment"), std::string::npos);
      EXPECT_EQ(std::string(e.what()).find("sk-abc"), std::string::npos);
    }
  }
  EXPECT_NO_THROW(parse_config_document("[gateway]\napi_key_env = \"MY_KEY\"\n"));
}

TEST(AppConfig, DefaultsValidate) {
  const AppConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.primary_model, "gpt-4-0613");
  EXPECT_EQ(cfg.gateway.max_in_flight, 10);
  EXPECT_EQ(cfg.load_tagset().names().size(), 8u);
}

TEST(AppConfig, FromDocumentOverridesAndResolvesPaths) {
  const AppConfig cfg = AppConfig::from_document(
      parse_config_document("[models]\nprimary = \"m1\"\njudge = \"m1\"\ntemperature = 0.5\n"
                            "[pricing]\nm1 = [\"0.001\", \"0.002\"]\n"
                            "[analysis]\noutput_dir = \"out\"\ncontext_budget = 4000\n"
                            "sentinels = [\" N/A \"]\n"
                            "[gateway]\nbase_backoff_ms = 10\nmax_attempts = 3\n"),
      "/base");
  EXPECT_EQ(cfg.primary_model, "m1");
  EXPECT_DOUBLE_EQ(cfg.temperature, 0.5);
  EXPECT_EQ(cfg.pricing.at("m1").prompt_per_1k, Decimal::parse("0.001"));
  EXPECT_FALSE(cfg.pricing.contains("gpt-4-0613"));
  EXPECT_EQ(cfg.output_dir, std::filesystem::path("/base/out"));
  EXPECT_EQ(cfg.context_budget, 4000);
  EXPECT_EQ(cfg.sentinels, (std::vector<std::string>{"n/a"}));
  EXPECT_EQ(cfg.gateway.retry.base_backoff, Millis{10});
  EXPECT_EQ(cfg.gateway.retry.max_attempts, 3);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(AppConfig, UnknownKeysAndTypesFail) {
  EXPECT_THROW(AppConfig::from_document(parse_config_document("[models]\nprimery = \"x\"\n")), Error);
  EXPECT_THROW(AppConfig::from_document(parse_config_document("[nope]\nx = 1\n")), Error);
  EXPECT_THROW(AppConfig::from_document(parse_config_document("[gateway]\nmax_in_flight = \"ten\"\n")),
               Error);
  EXPECT_THROW(AppConfig::from_document(parse_config_document("[pricing]\nm = [\"-1\", \"0\"]\n")), Error);
}

TEST(AppConfig, ValidateCatchesInconsistencies) {
  AppConfig cfg;
  cfg.primary_model = "unpriced";
  EXPECT_THROW(cfg.validate(), Error);
  cfg = AppConfig{};
  cfg.context_budget = 100;
  cfg.completion_reserve = 100;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = AppConfig{};
  cfg.gateway.max_in_flight = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = AppConfig{};
  cfg.tagset = "/does/not/exist.json";
  EXPECT_THROW(cfg.validate(), Error);
  cfg = AppConfig{};
  cfg.templates_dir = "/does/not/exist";
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(AppConfig, LoadNamesFile) {
  const auto dir = testing::scratch_dir("cfg");
  write_file(dir / "bad.toml", "[gateway]\nmax_in_flight = 0\n");
  try {
    AppConfig::load(dir / "bad.toml");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("bad.toml"), std::string::npos);
  }
  write_file(dir / "ok.toml", "[analysis]\ntemplates_dir = \"tpl\"\n");
  std::filesystem::create_directories(dir / "tpl");
  EXPECT_EQ(*AppConfig::load(dir / "ok.toml").templates_dir, dir / "tpl");
}

}  // namespace
}  // namespace surveylens
