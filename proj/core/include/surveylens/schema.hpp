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

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace surveylens {

using json = nlohmann::json;

enum class FieldKind {
  kString,
  kStringEnum,    // one of `values`
  kStringList,    // list of strings; restricted to `values` when non-empty
  kObjectList,    // list of objects described by `fields`
};

struct FieldSpec {
  std::string name;
  FieldKind kind = FieldKind::kString;
  std::vector<std::string> values;
  std::vector<FieldSpec> fields;
  bool required = true;
  std::string description;

  bool operator==(const FieldSpec&) const = default;

  static FieldSpec string(std::string name, std::string description = {});
  static FieldSpec string_enum(std::string name, std::vector<std::string> values,
                               std::string description = {});
  static FieldSpec string_list(std::string name,
                               std::vector<std::string> values = {},
                               std::string description = {});
  static FieldSpec object_list(std::string name, std::vector<FieldSpec> fields,
                               std::string description = {});
};

// Shape of a tool-call arguments document. Every schema starts with a
// required `reasoning` string so chain-of-thought is always captured.
class OutputSchema {
 public:
  OutputSchema() = default;

  // Prepends the reasoning field to `payload_fields`. Throws
  // Error(kInvalidArgument) on duplicate names or empty enum lists.
  OutputSchema(std::string name, std::string description,
               std::vector<FieldSpec> payload_fields);

  const std::string& name() const { return name_; }
  const std::string& description() const { return description_; }
  const std::vector<FieldSpec>& fields() const { return fields_; }

  // First violation found, phrased for a repair prompt; nullopt when valid.
  std::optional<std::string> validate(const json& document) const;

  // JSON-Schema object used as the function `parameters`.
  json to_json_schema() const;

  bool operator==(const OutputSchema&) const = default;

 private:
  std::string name_;
  std::string description_;
  std::vector<FieldSpec> fields_;
};

}  // namespace surveylens
