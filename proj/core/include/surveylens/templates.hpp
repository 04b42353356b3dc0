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

#include <array>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace surveylens {

enum class TaskKind {
  kBinary,
  kMultilabel,
  kMulticlass,
  kExtract,
  kSentiment,
  kThemes,
  kCoalesce,
  kJudge,
};

inline constexpr std::array<TaskKind, 8> kAllTaskKinds{
    TaskKind::kBinary,    TaskKind::kMultilabel, TaskKind::kMulticlass,
    TaskKind::kExtract,   TaskKind::kSentiment,  TaskKind::kThemes,
    TaskKind::kCoalesce,  TaskKind::kJudge,
};

std::string_view to_string(TaskKind kind);
TaskKind parse_task_kind(std::string_view name);

// Placeholders a template may use, written as {{name}}.
const std::set<std::string, std::less<>>& known_placeholders();

struct PromptTemplate {
  std::string system;
  std::string user;

  bool operator==(const PromptTemplate&) const = default;
};

// Template files hold a "[system]" section followed by a "[user]" section,
// each marker on a line of its own.
PromptTemplate parse_template_file(std::string_view text,
                                   std::string_view origin = "<template>");
std::string format_template_file(const PromptTemplate& tpl);

// Placeholder names used by `text`. Throws Error(kTemplate)
// "unknown placeholder <name>" for names outside known_placeholders().
std::set<std::string> placeholders_of(std::string_view text);

// Substitutes every {{name}}; known names without a value render empty.
std::string render_template(std::string_view text,
                            const std::map<std::string, std::string>& values);

class TemplateLibrary {
 public:
  // The shipped defaults.
  TemplateLibrary();

  // Defaults overridden by `<dir>/<task>.txt` wherever such a file exists.
  static TemplateLibrary from_directory(const std::filesystem::path& dir);

  const PromptTemplate& get(TaskKind kind) const;
  // Validates placeholders before accepting.
  void set(TaskKind kind, PromptTemplate tpl);

  // Stable hash of one template, used in cache keys.
  std::string fingerprint(TaskKind kind) const;

 private:
  std::map<TaskKind, PromptTemplate> templates_;
};

}  // namespace surveylens
