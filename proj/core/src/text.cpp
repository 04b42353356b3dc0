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

#include "surveylens/text.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace surveylens {
namespace {

bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::size_t utf8_char_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

enum class CharClass { kContent, kSeparator, kDeleted };

CharClass classify(std::string_view ch) {
  if (ch.size() == 1) {
    const auto c = static_cast<unsigned char>(ch[0]);
    if (c == '\'') return CharClass::kDeleted;
    if (is_ascii_space(c)) return CharClass::kSeparator;
    if (c < 0x80 && std::ispunct(c)) return CharClass::kSeparator;
    return CharClass::kContent;
  }
  if (ch == "\xC2\xA0") return CharClass::kSeparator;  // no-break space
  if (ch.size() == 3 && static_cast<unsigned char>(ch[0]) == 0xE2 &&
      static_cast<unsigned char>(ch[1]) == 0x80) {
    switch (static_cast<unsigned char>(ch[2])) {
      case 0x98:  // left single quote
      case 0x99:  // right single quote
        return CharClass::kDeleted;
      case 0x93:  // en dash
      case 0x94:  // em dash
      case 0x9C:  // left double quote
      case 0x9D:  // right double quote
      case 0xA6:  // ellipsis
        return CharClass::kSeparator;
      default:
        break;
    }
  }
  return CharClass::kContent;
}

}  // namespace

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_ascii_space(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_ascii_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.size();) {
    i += utf8_char_length(static_cast<unsigned char>(s[i]));
    ++count;
  }
  return count;
}

std::int64_t estimate_tokens(std::string_view s) {
  const auto chars = static_cast<std::int64_t>(utf8_length(s));
  return (chars + 3) / 4;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

NormalizedText normalize_for_matching(std::string_view source) {
  NormalizedText out;
  out.text.reserve(source.size());
  bool pending_space = false;
  std::size_t sep_begin = 0;
  std::size_t sep_end = 0;
  for (std::size_t i = 0; i < source.size();) {
    std::size_t len = std::min(
        utf8_char_length(static_cast<unsigned char>(source[i])),
        source.size() - i);
    const std::string_view ch = source.substr(i, len);
    switch (classify(ch)) {
      case CharClass::kDeleted:
        break;
      case CharClass::kSeparator:
        if (!pending_space) sep_begin = i;
        sep_end = i + len;
        pending_space = true;
        break;
      case CharClass::kContent:
        if (pending_space && !out.text.empty()) {
          out.text.push_back(' ');
          out.source_begin.push_back(sep_begin);
          out.source_end.push_back(sep_end);
        }
        pending_space = false;
        for (char c : ch) {
          out.text.push_back(c >= 'A' && c <= 'Z'
                                 ? static_cast<char>(c - 'A' + 'a')
                                 : c);
          out.source_begin.push_back(i);
          out.source_end.push_back(i + len);
        }
        break;
    }
    i += len;
  }
  return out;
}

std::optional<CharSpan> locate_excerpt(std::string_view source,
                                       std::string_view excerpt) {
  const std::string_view needle = trim(excerpt);
  if (needle.empty()) return std::nullopt;
  if (auto pos = source.find(needle); pos != std::string_view::npos) {
    return CharSpan{pos, pos + needle.size()};
  }
  const NormalizedText src = normalize_for_matching(source);
  const NormalizedText ex = normalize_for_matching(needle);
  if (ex.text.empty()) return std::nullopt;
  const auto pos = src.text.find(ex.text);
  if (pos == std::string::npos) return std::nullopt;
  return CharSpan{src.source_begin[pos],
                  src.source_end[pos + ex.text.size() - 1]};
}

std::size_t best_substring_edit_distance(std::string_view pattern,
                                         std::string_view text) {
  const std::size_t n = text.size();
  // Row 0 is all zeros: the match may start anywhere in `text`.
  std::vector<std::size_t> prev(n + 1, 0);
  std::vector<std::size_t> cur(n + 1, 0);
  for (std::size_t i = 1; i <= pattern.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t sub =
          prev[j - 1] + (pattern[i - 1] == text[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return *std::min_element(prev.begin(), prev.end());
}

}  // namespace surveylens
