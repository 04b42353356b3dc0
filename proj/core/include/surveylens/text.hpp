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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace surveylens {

std::string_view trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);

// Number of UTF-8 code points; invalid lead bytes count as one each.
std::size_t utf8_length(std::string_view s);

// Coarse pre-dispatch token estimate: ceil(code points / 4).
std::int64_t estimate_tokens(std::string_view s);

std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

// Text reduced for fidelity comparison. Each byte of `text` remembers the
// half-open byte range of the source character it came from, so a match in
// normalized space maps back to a span of the original.
struct NormalizedText {
  std::string text;
  std::vector<std::size_t> source_begin;
  std::vector<std::size_t> source_end;
};

// Lowercases ASCII, deletes apostrophes, turns other punctuation into
// spaces, collapses whitespace runs and trims.
NormalizedText normalize_for_matching(std::string_view source);

struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const CharSpan&) const = default;
};

// Exact byte search first, then normalized search mapped back to source
// offsets. Empty or all-punctuation needles never locate.
std::optional<CharSpan> locate_excerpt(std::string_view source,
                                       std::string_view excerpt);

// Minimum Levenshtein distance between `pattern` and any contiguous
// substring of `text` (Sellers' semi-global alignment).
std::size_t best_substring_edit_distance(std::string_view pattern,
                                         std::string_view text);

}  // namespace surveylens
