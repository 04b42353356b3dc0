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

#include "surveylens/csv.hpp"

#include "surveylens/error.hpp"

namespace surveylens {

std::vector<CsvRecord> parse_csv(std::string_view data) {
  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_has_content = false;
  std::size_t line = 1;
  std::size_t quote_line = 0;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    if (record_has_content || !current.fields.empty()) {
      end_field();
      records.push_back(std::move(current));
    }
    current = CsvRecord{};
    field.clear();
    field_was_quoted = false;
    record_has_content = false;
  };

  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw Error(ErrorKind::kParse,
                      "csv line " + std::to_string(line) +
                          ": quote inside unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
        record_has_content = true;
        quote_line = line;
        break;
      case ',':
        end_field();
        record_has_content = true;
        break;
      case '\r':
        if (i + 1 < data.size() && data[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        current.line = line;
        break;
      default:
        if (field_was_quoted) {
          throw Error(ErrorKind::kParse,
                      "csv line " + std::to_string(line) +
                          ": characters after closing quote");
        }
        field.push_back(c);
        record_has_content = true;
        break;
    }
  }
  if (in_quotes) {
    throw Error(ErrorKind::kParse, "csv line " + std::to_string(quote_line) +
                                       ": unterminated quoted field");
  }
  end_record();
  return records;
}

std::string csv_escape(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!field.empty() && (field.front() == ' ' || field.back() == ' ')) {
    needs_quotes = true;
  }
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string csv_row(std::span<const std::string> fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += csv_escape(fields[i]);
  }
  out.push_back('\n');
  return out;
}

std::string csv_row(std::initializer_list<std::string> fields) {
  return csv_row(std::span<const std::string>(fields.begin(), fields.size()));
}

}  // namespace surveylens
