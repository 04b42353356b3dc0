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

#include "surveylens/error.hpp"

namespace surveylens {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kDuplicateId: return "duplicate_id";
    case ErrorKind::kTemplate: return "template";
    case ErrorKind::kStructuredOutput: return "structured_output";
    case ErrorKind::kTransport: return "transport";
    case ErrorKind::kAuthentication: return "authentication";
    case ErrorKind::kUnscripted: return "unscripted";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

ErrorKind parse_error_kind(std::string_view name) {
  for (int k = 0; k <= static_cast<int>(ErrorKind::kIo); ++k) {
    const auto kind = static_cast<ErrorKind>(k);
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorKind::kParse, "unknown error kind '" + std::string(name) + "'");
}

}  // namespace surveylens
