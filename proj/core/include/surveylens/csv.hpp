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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace surveylens {

struct CsvRecord {
  std::size_t line = 0;  // 1-based physical line where the record starts
  std::vector<std::string> fields;
};

// RFC-4180 reader: comma separated, CRLF or LF terminated, double-quoted
// fields may embed commas, quotes ("") and line breaks. Blank lines are
// skipped. Throws Error(kParse) naming the line of an unterminated quote.
std::vector<CsvRecord> parse_csv(std::string_view data);

std::string csv_escape(std::string_view field);
std::string csv_row(std::span<const std::string> fields);
std::string csv_row(std::initializer_list<std::string> fields);

}  // namespace surveylens
