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

#include "surveylens/templates.hpp"

#include <sstream>

#include "embedded_templates.hpp"
#include "surveylens/corpus.hpp"
#include "surveylens/error.hpp"
#include "surveylens/text.hpp"

namespace surveylens {
namespace {

constexpr std::string_view kOpen = "{{";
constexpr std::string_view kClose = "}}";

// Calls fn(name) for each placeholder and returns the literal pieces joined
// with the callback results.
template <class Fn>
std::string scan_placeholders(std::string_view text, Fn&& fn) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find(kOpen, pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    const auto close = text.find(kClose, open + kOpen.size());
    if (close == std::string_view::npos) {
      throw Error(ErrorKind::kTemplate, "unterminated placeholder near offset " +
                                            std::to_string(open));
    }
    out.append(text.substr(pos, open - pos));
    const std::string name(trim(text.substr(open + kOpen.size(),
                                            close - open - kOpen.size())));
    if (!known_placeholders().contains(name)) {
      throw Error(ErrorKind::kTemplate, "unknown placeholder " + name);
    }
    out.append(fn(name));
    pos = close + kClose.size();
  }
  return out;
}

std::string strip_trailing_newlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::kBinary: return "binary";
    case TaskKind::kMultilabel: return "multilabel";
    case TaskKind::kMulticlass: return "multiclass";
    case TaskKind::kExtract: return "extract";
    case TaskKind::kSentiment: return "sentiment";
    case TaskKind::kThemes: return "themes";
    case TaskKind::kCoalesce: return "coalesce";
    case TaskKind::kJudge: return "judge";
  }
  return "unknown";
}

TaskKind parse_task_kind(std::string_view name) {
  for (TaskKind k : kAllTaskKinds) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown task kind '" + std::string(name) + "'");
}

const std::set<std::string, std::less<>>& known_placeholders() {
  static const std::set<std::string, std::less<>> names{
      "question", "comment", "labels",   "goal",
      "criterion", "comments", "themes", "excerpts"};
  return names;
}

PromptTemplate parse_template_file(std::string_view text, std::string_view origin) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::string* current = nullptr;
  PromptTemplate tpl;
  bool saw_system = false;
  bool saw_user = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "[system]") {
      if (saw_system) {
        throw Error(ErrorKind::kTemplate, std::string(origin) + ": repeated [system]");
      }
      saw_system = true;
      current = &tpl.system;
      continue;
    }
    if (line == "[user]") {
      if (saw_user) {
        throw Error(ErrorKind::kTemplate, std::string(origin) + ": repeated [user]");
      }
      if (!saw_system) {
        throw Error(ErrorKind::kTemplate, std::string(origin) + ": [user] before [system]");
      }
      saw_user = true;
      current = &tpl.user;
      continue;
    }
    if (current == nullptr) {
      if (trim(line).empty()) continue;
      throw Error(ErrorKind::kTemplate,
                  std::string(origin) + ": text before the [system] section");
    }
    current->append(line).push_back('\n');
  }
  if (!saw_system || !saw_user) {
    throw Error(ErrorKind::kTemplate,
                std::string(origin) + ": needs [system] and [user] sections");
  }
  tpl.system = strip_trailing_newlines(std::move(tpl.system));
  tpl.user = strip_trailing_newlines(std::move(tpl.user));
  return tpl;
}

std::string format_template_file(const PromptTemplate& tpl) {
  return "[system]\n" + tpl.system + "\n[user]\n" + tpl.user + "\n";
}

std::set<std::string> placeholders_of(std::string_view text) {
  std::set<std::string> names;
  scan_placeholders(text, [&](const std::string& name) {
    names.insert(name);
    return std::string();
  });
  return names;
}

std::string render_template(std::string_view text,
                            const std::map<std::string, std::string>& values) {
  return scan_placeholders(text, [&](const std::string& name) {
    auto it = values.find(name);
    return it == values.end() ? std::string() : it->second;
  });
}

TemplateLibrary::TemplateLibrary() {
  const auto& files = detail::embedded_template_files();
  for (TaskKind kind : kAllTaskKinds) {
    const std::string name(to_string(kind));
    auto it = files.find(name);
    if (it == files.end()) {
      throw Error(ErrorKind::kTemplate, "no built-in template for " + name);
    }
    templates_[kind] = parse_template_file(it->second, name + ".txt");
  }
}

TemplateLibrary TemplateLibrary::from_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::kIo, "templates directory not found: " + dir.string());
  }
  TemplateLibrary lib;
  for (TaskKind kind : kAllTaskKinds) {
    const auto path = dir / (std::string(to_string(kind)) + ".txt");
    if (!std::filesystem::exists(path)) continue;
    try {
      lib.set(kind, parse_template_file(read_file(path), path.string()));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kTemplate) throw;
      const std::string what = e.what();
      if (what.rfind(path.string(), 0) == 0) throw;
      throw Error(ErrorKind::kTemplate, path.string() + ": " + what);
    }
  }
  return lib;
}

const PromptTemplate& TemplateLibrary::get(TaskKind kind) const {
  return templates_.at(kind);
}

void TemplateLibrary::set(TaskKind kind, PromptTemplate tpl) {
  placeholders_of(tpl.system);
  placeholders_of(tpl.user);
  templates_[kind] = std::move(tpl);
}

std::string TemplateLibrary::fingerprint(TaskKind kind) const {
  return hex64(fnv1a64(format_template_file(get(kind))));
}

}  // namespace surveylens
