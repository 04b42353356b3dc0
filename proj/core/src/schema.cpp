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

#include "surveylens/schema.hpp"

#include <algorithm>
#include <set>

#include "surveylens/error.hpp"

namespace surveylens {
namespace {

void check_fields(const std::vector<FieldSpec>& fields, const std::string& where) {
  std::set<std::string> names;
  for (const auto& f : fields) {
    if (f.name.empty()) {
      throw Error(ErrorKind::kInvalidArgument, where + ": empty field name");
    }
    if (!names.insert(f.name).second) {
      throw Error(ErrorKind::kInvalidArgument,
                  where + ": duplicate field '" + f.name + "'");
    }
    if (f.kind == FieldKind::kStringEnum && f.values.empty()) {
      throw Error(ErrorKind::kInvalidArgument,
                  where + ": enum field '" + f.name + "' has no values");
    }
    if (f.kind == FieldKind::kObjectList) {
      if (f.fields.empty()) {
        throw Error(ErrorKind::kInvalidArgument,
                    where + ": object list '" + f.name + "' has no fields");
      }
      check_fields(f.fields, where + "." + f.name);
    }
  }
}

bool contains(const std::vector<std::string>& values, const std::string& v) {
  return std::find(values.begin(), values.end(), v) != values.end();
}

std::string quoted_list(const std::vector<std::string>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += "\"" + values[i] + "\"";
  }
  return out;
}

std::optional<std::string> validate_object(const std::vector<FieldSpec>& fields,
                                           const json& doc,
                                           const std::string& path) {
  if (!doc.is_object()) {
    return (path.empty() ? std::string("arguments") : path) +
           " must be a JSON object";
  }
  for (const auto& f : fields) {
    const std::string where = path.empty() ? f.name : path + "." + f.name;
    auto it = doc.find(f.name);
    if (it == doc.end() || it->is_null()) {
      if (f.required) return "missing required field '" + where + "'";
      continue;
    }
    const json& v = *it;
    switch (f.kind) {
      case FieldKind::kString:
        if (!v.is_string()) return "field '" + where + "' must be a string";
        break;
      case FieldKind::kStringEnum:
        if (!v.is_string()) return "field '" + where + "' must be a string";
        if (!contains(f.values, v.get<std::string>())) {
          return "field '" + where + "' has value \"" + v.get<std::string>() +
                 "\" which is not one of " + quoted_list(f.values);
        }
        break;
      case FieldKind::kStringList:
        if (!v.is_array()) return "field '" + where + "' must be an array";
        for (const auto& e : v) {
          if (!e.is_string()) {
            return "field '" + where + "' must contain only strings";
          }
          if (!f.values.empty() && !contains(f.values, e.get<std::string>())) {
            return "field '" + where + "' contains \"" + e.get<std::string>() +
                   "\" which is not one of " + quoted_list(f.values);
          }
        }
        break;
      case FieldKind::kObjectList:
        if (!v.is_array()) return "field '" + where + "' must be an array";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (auto err = validate_object(f.fields, v[i],
                                         where + "[" + std::to_string(i) + "]")) {
            return err;
          }
        }
        break;
    }
  }
  return std::nullopt;
}

json field_schema(const FieldSpec& f) {
  json s;
  switch (f.kind) {
    case FieldKind::kString:
      s = {{"type", "string"}};
      break;
    case FieldKind::kStringEnum:
      s = {{"type", "string"}, {"enum", f.values}};
      break;
    case FieldKind::kStringList:
      s = {{"type", "array"}, {"items", {{"type", "string"}}}};
      if (!f.values.empty()) s["items"]["enum"] = f.values;
      break;
    case FieldKind::kObjectList: {
      json props = json::object();
      json required = json::array();
      for (const auto& sub : f.fields) {
        props[sub.name] = field_schema(sub);
        if (sub.required) required.push_back(sub.name);
      }
      s = {{"type", "array"},
           {"items", {{"type", "object"},
                      {"properties", props},
                      {"required", required}}}};
      break;
    }
  }
  if (!f.description.empty()) s["description"] = f.description;
  return s;
}

}  // namespace

FieldSpec FieldSpec::string(std::string name, std::string description) {
  return FieldSpec{std::move(name), FieldKind::kString, {}, {}, true,
                   std::move(description)};
}

FieldSpec FieldSpec::string_enum(std::string name, std::vector<std::string> values,
                                 std::string description) {
  return FieldSpec{std::move(name), FieldKind::kStringEnum, std::move(values),
                   {}, true, std::move(description)};
}

FieldSpec FieldSpec::string_list(std::string name, std::vector<std::string> values,
                                 std::string description) {
  return FieldSpec{std::move(name), FieldKind::kStringList, std::move(values),
                   {}, true, std::move(description)};
}

FieldSpec FieldSpec::object_list(std::string name, std::vector<FieldSpec> fields,
                                 std::string description) {
  return FieldSpec{std::move(name), FieldKind::kObjectList, {},
                   std::move(fields), true, std::move(description)};
}

OutputSchema::OutputSchema(std::string name, std::string description,
                           std::vector<FieldSpec> payload_fields)
    : name_(std::move(name)), description_(std::move(description)) {
  if (name_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "schema needs a name");
  }
  fields_.push_back(FieldSpec::string(
      "reasoning", "Step-by-step reasoning that leads to the answer."));
  for (auto& f : payload_fields) fields_.push_back(std::move(f));
  check_fields(fields_, name_);
}

std::optional<std::string> OutputSchema::validate(const json& document) const {
  return validate_object(fields_, document, "");
}

json OutputSchema::to_json_schema() const {
  json props = json::object();
  json required = json::array();
  for (const auto& f : fields_) {
    props[f.name] = field_schema(f);
    if (f.required) required.push_back(f.name);
  }
  return {{"type", "object"}, {"properties", props}, {"required", required}};
}

}  // namespace surveylens
