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

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace surveylens {

struct Tag {
  std::string name;
  std::string description;  // one to three sentences of applicability guidance

  bool operator==(const Tag&) const = default;
};

class TagSet {
 public:
  // At least two tags, unique non-empty names, non-empty descriptions.
  explicit TagSet(std::vector<Tag> tags, bool allow_empty = false);

  // The eight course-feedback tags with "Other" as the catch-all.
  static TagSet course_feedback();

  // {"tags": [{"name": ..., "description": ...}], "allow_empty": bool}.
  // allow_empty defaults to true unless a tag named "Other" exists.
  static TagSet parse(std::string_view json_text);
  static TagSet load(const std::filesystem::path& path);

  const std::vector<Tag>& tags() const { return tags_; }
  std::vector<std::string> names() const;
  std::set<std::string> name_set() const;
  bool contains(std::string_view name) const;
  const Tag* find(std::string_view name) const;
  bool allow_empty() const { return allow_empty_; }

  std::string to_json() const;

  bool operator==(const TagSet&) const = default;

 private:
  std::vector<Tag> tags_;
  bool allow_empty_ = false;
};

}  // namespace surveylens
