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
#include <string>
#include <string_view>
#include <vector>

#include "surveylens/gateway.hpp"
#include "surveylens/ledger.hpp"
#include "surveylens/tagset.hpp"
#include "surveylens/templates.hpp"

namespace surveylens {

// A value from a TOML-style document. Numbers keep their literal text so
// prices stay exact.
struct ConfigValue {
  enum class Type { kString, kNumber, kBool, kArray };

  Type type = Type::kString;
  std::string text;
  std::vector<ConfigValue> items;
  int line = 0;

  std::string as_string(std::string_view key) const;
  std::int64_t as_int(std::string_view key) const;
  double as_double(std::string_view key) const;
  bool as_bool(std::string_view key) const;
  std::vector<std::string> as_string_list(std::string_view key) const;
};

// section -> key -> value. Keys before the first header live in section "".
using ConfigDocument = std::map<std::string, std::map<std::string, ConfigValue>>;

// Supports `[section]`, `key = value`, quoted keys, `#` comments, basic
// strings with the usual escapes, integers, floats, booleans and
// single-line arrays. Throws Error(kConfig) with the line number.
ConfigDocument parse_config_document(std::string_view text);

inline constexpr std::string_view kDefaultTagSet = "default";

struct AppConfig {
  GatewayConfig gateway;
  std::string primary_model = "gpt-4-0613";
  std::string judge_model = "gpt-4-0613";
  double temperature = 0.0;
  Pricing pricing = default_pricing();
  std::string tagset = std::string(kDefaultTagSet);  // or a path
  std::optional<std::filesystem::path> templates_dir;
  std::int64_t context_budget = 8192;
  std::int64_t completion_reserve = 1024;
  std::vector<std::string> sentinels;
  double minor_edit_threshold = 0.1;
  std::filesystem::path output_dir = "surveylens-out";
  std::uint64_t seed = 0;

  AppConfig();

  static Pricing default_pricing();

  // Relative paths resolve against `base_dir`. Unknown keys and secret-like
  // keys are rejected.
  static AppConfig from_document(const ConfigDocument& doc,
                                 const std::filesystem::path& base_dir = {});
  static AppConfig load(const std::filesystem::path& path);

  // Checks gateway invariants, referenced paths and pricing coverage.
  void validate() const;

  TagSet load_tagset() const;
  TemplateLibrary load_templates() const;
};

}  // namespace surveylens
