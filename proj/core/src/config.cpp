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

#include "surveylens/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "surveylens/corpus.hpp"
#include "surveylens/error.hpp"
#include "surveylens/text.hpp"

namespace surveylens {
namespace {

[[noreturn]] void fail(int line, const std::string& message) {
  throw Error(ErrorKind::kConfig, "config line " + std::to_string(line) + ": " + message);
}

[[noreturn]] void wrong_type(std::string_view key, int line, const char* want) {
  fail(line, "'" + std::string(key) + "' must be " + want);
}

class LineParser {
 public:
  LineParser(std::string_view text, int line) : s_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool at_end_or_comment() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(line_, std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string key() {
    skip_ws();
    if (peek() == '"') return quoted();
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
            s_[pos_] == '-' || s_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ == start) fail(line_, "expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  ConfigValue value() {
    skip_ws();
    ConfigValue v;
    v.line = line_;
    const char c = peek();
    if (c == '"') {
      v.type = ConfigValue::Type::kString;
      v.text = quoted();
    } else if (c == '[') {
      ++pos_;
      v.type = ConfigValue::Type::kArray;
      skip_ws();
      if (peek() == ']') {
        ++pos_;
        return v;
      }
      while (true) {
        ConfigValue item = value();
        if (item.type == ConfigValue::Type::kArray) fail(line_, "nested arrays are not supported");
        v.items.push_back(std::move(item));
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          skip_ws();
          if (peek() == ']') {
            ++pos_;
            break;
          }
          continue;
        }
        expect(']');
        break;
      }
    } else {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#' &&
             s_[pos_] != ' ' && s_[pos_] != '\t') {
        ++pos_;
      }
      v.text = std::string(s_.substr(start, pos_ - start));
      if (v.text == "true" || v.text == "false") {
        v.type = ConfigValue::Type::kBool;
      } else if (is_number(v.text)) {
        v.type = ConfigValue::Type::kNumber;
      } else {
        fail(line_, v.text.empty() ? "missing value" : "bad value '" + v.text + "'");
      }
    }
    return v;
  }

 private:
  static bool is_number(std::string_view t) {
    std::size_t i = (t.size() > 0 && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    bool digits = false;
    bool dot = false;
    bool exp = false;
    for (; i < t.size(); ++i) {
      const char c = t[i];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '_') {
        digits = true;
      } else if (c == '.' && !dot && !exp) {
        dot = true;
      } else if ((c == 'e' || c == 'E') && digits && !exp) {
        exp = true;
        if (i + 1 < t.size() && (t[i + 1] == '-' || t[i + 1] == '+')) ++i;
      } else {
        return false;
      }
    }
    return digits;
  }

  std::string quoted() {
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char c = s_[pos_++];
      if (c == '\\') {
        if (pos_ >= s_.size()) break;
        const char e = s_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(line_, std::string("unsupported escape \\") + e);
        }
      } else {
        out += c;
      }
    }
    if (pos_ >= s_.size()) fail(line_, "unterminated string");
    ++pos_;
    return out;
  }

  std::string_view s_;
  int line_;
  std::size_t pos_ = 0;
};

bool looks_secret(std::string_view key) {
  const std::string k = to_lower_ascii(key);
  if (k == "api_key_env") return false;
  for (std::string_view word : {"api_key", "apikey", "secret", "password", "token_value",
                                "authorization", "bearer"}) {
    if (k.find(word) != std::string::npos) return true;
  }
  return false;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path;
}

}  // namespace

std::string ConfigValue::as_string(std::string_view key) const {
  if (type != Type::kString) wrong_type(key, line, "a string");
  return text;
}

std::int64_t ConfigValue::as_int(std::string_view key) const {
  if (type != Type::kNumber) wrong_type(key, line, "an integer");
  std::string digits;
  for (char c : text) {
    if (c != '_') digits += c;
  }
  std::int64_t v = 0;
  const char* first = digits.data() + (digits.size() > 0 && digits[0] == '+' ? 1 : 0);
  auto [ptr, ec] = std::from_chars(first, digits.data() + digits.size(), v);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    wrong_type(key, line, "an integer");
  }
  return v;
}

double ConfigValue::as_double(std::string_view key) const {
  if (type != Type::kNumber) wrong_type(key, line, "a number");
  try {
    std::string clean;
    for (char c : text) {
      if (c != '_') clean += c;
    }
    return std::stod(clean);
  } catch (const std::exception&) {
    wrong_type(key, line, "a number");
  }
}

bool ConfigValue::as_bool(std::string_view key) const {
  if (type != Type::kBool) wrong_type(key, line, "true or false");
  return text == "true";
}

std::vector<std::string> ConfigValue::as_string_list(std::string_view key) const {
  if (type != Type::kArray) wrong_type(key, line, "an array of strings");
  std::vector<std::string> out;
  for (const auto& item : items) out.push_back(item.as_string(key));
  return out;
}

ConfigDocument parse_config_document(std::string_view text) {
  ConfigDocument doc;
  std::string section;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = end + 1;

    LineParser p(line, line_no);
    if (p.at_end_or_comment()) {
      if (end == text.size()) break;
      continue;
    }
    if (p.peek() == '[') {
      p.expect('[');
      section = p.key();
      p.expect(']');
      doc[section];
    } else {
      const std::string key = p.key();
      if (looks_secret(key)) {
        fail(line_no, "'" + key +
                          "' looks like a secret; secrets are read from the environment only");
      }
      p.expect('=');
      ConfigValue v = p.value();
      auto& entries = doc[section];
      if (entries.contains(key)) fail(line_no, "duplicate key '" + key + "'");
      entries.emplace(key, std::move(v));
    }
    if (!p.at_end_or_comment()) fail(line_no, "unexpected trailing text");
    if (end == text.size()) break;
  }
  return doc;
}

AppConfig::AppConfig() : sentinels(default_sentinels()) {}

Pricing AppConfig::default_pricing() {
  Pricing p;
  p.set("gpt-4-0613", "0.03", "0.06");
  p.set("gpt-4", "0.03", "0.06");
  return p;
}

AppConfig AppConfig::from_document(const ConfigDocument& doc,
                                   const std::filesystem::path& base_dir) {
  AppConfig cfg;
  bool custom_pricing = false;
  for (const auto& [section, entries] : doc) {
    for (const auto& [key, v] : entries) {
      const std::string where = section.empty() ? key : section + "." + key;
      auto unknown = [&] { fail(v.line, "unknown key '" + where + "'"); };
      if (section == "gateway") {
        auto& g = cfg.gateway;
        if (key == "base_url") g.base_url = v.as_string(where);
        else if (key == "api_key_env") g.api_key_env = v.as_string(where);
        else if (key == "max_in_flight") g.max_in_flight = static_cast<int>(v.as_int(where));
        else if (key == "tokens_per_minute") g.tokens_per_minute = v.as_int(where);
        else if (key == "requests_per_minute") g.requests_per_minute = v.as_int(where);
        else if (key == "request_timeout_ms") g.request_timeout = Millis{v.as_int(where)};
        else if (key == "max_attempts") g.retry.max_attempts = static_cast<int>(v.as_int(where));
        else if (key == "base_backoff_ms") g.retry.base_backoff = Millis{v.as_int(where)};
        else if (key == "backoff_multiplier") g.retry.multiplier = v.as_double(where);
        else if (key == "retryable_statuses") {
          if (v.type != ConfigValue::Type::kArray) wrong_type(where, v.line, "an array");
          g.retry.retryable_statuses.clear();
          for (const auto& item : v.items) {
            g.retry.retryable_statuses.insert(static_cast<int>(item.as_int(where)));
          }
        } else unknown();
      } else if (section == "models") {
        if (key == "primary") cfg.primary_model = v.as_string(where);
        else if (key == "judge") cfg.judge_model = v.as_string(where);
        else if (key == "temperature") cfg.temperature = v.as_double(where);
        else unknown();
      } else if (section == "pricing") {
        if (v.type != ConfigValue::Type::kArray || v.items.size() != 2) {
          wrong_type(where, v.line, "[prompt_per_1k, completion_per_1k]");
        }
        if (!custom_pricing) {
          cfg.pricing = Pricing{};
          custom_pricing = true;
        }
        try {
          cfg.pricing.set(key, v.items[0].text, v.items[1].text);
        } catch (const Error& e) {
          fail(v.line, "'" + where + "': " + e.what());
        }
      } else if (section == "analysis") {
        if (key == "tagset") {
          const std::string t = v.as_string(where);
          cfg.tagset = t == kDefaultTagSet ? t : resolve(base_dir, t).string();
        } else if (key == "templates_dir") {
          cfg.templates_dir = resolve(base_dir, v.as_string(where));
        } else if (key == "context_budget") cfg.context_budget = v.as_int(where);
        else if (key == "completion_reserve") cfg.completion_reserve = v.as_int(where);
        else if (key == "sentinels") cfg.sentinels = v.as_string_list(where);
        else if (key == "minor_edit_threshold") cfg.minor_edit_threshold = v.as_double(where);
        else if (key == "output_dir") cfg.output_dir = resolve(base_dir, v.as_string(where));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(v.as_int(where));
        else unknown();
      } else {
        unknown();
      }
    }
  }
  for (auto& s : cfg.sentinels) s = to_lower_ascii(trim(s));
  return cfg;
}

AppConfig AppConfig::load(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    AppConfig cfg = from_document(parse_config_document(text), path.parent_path());
    cfg.validate();
    return cfg;
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfig, path.string() + ": " + e.what());
  }
}

void AppConfig::validate() const {
  gateway.validate();
  if (primary_model.empty() || judge_model.empty()) {
    throw Error(ErrorKind::kConfig, "model ids must not be empty");
  }
  for (const auto& model : {primary_model, judge_model}) {
    if (!pricing.contains(model)) {
      throw Error(ErrorKind::kConfig, "no pricing configured for model '" + model + "'");
    }
  }
  if (context_budget < 1 || completion_reserve < 0 ||
      completion_reserve >= context_budget) {
    throw Error(ErrorKind::kConfig,
                "context_budget must exceed completion_reserve (both nonnegative)");
  }
  if (minor_edit_threshold < 0) {
    throw Error(ErrorKind::kConfig, "minor_edit_threshold must be nonnegative");
  }
  if (tagset != kDefaultTagSet && !std::filesystem::is_regular_file(tagset)) {
    throw Error(ErrorKind::kConfig, "tag set file not found: " + tagset);
  }
  if (templates_dir && !std::filesystem::is_directory(*templates_dir)) {
    throw Error(ErrorKind::kConfig,
                "templates directory not found: " + templates_dir->string());
  }
}

TagSet AppConfig::load_tagset() const {
  return tagset == kDefaultTagSet ? TagSet::course_feedback() : TagSet::load(tagset);
}

TemplateLibrary AppConfig::load_templates() const {
  return templates_dir ? TemplateLibrary::from_directory(*templates_dir) : TemplateLibrary();
}

}  // namespace surveylens
