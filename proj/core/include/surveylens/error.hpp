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

#include <stdexcept>
#include <string>
#include <string_view>

namespace surveylens {

enum class ErrorKind {
  kInvalidArgument,
  kParse,
  kDuplicateId,
  kTemplate,
  kStructuredOutput,
  kTransport,
  kAuthentication,
  kUnscripted,
  kConfig,
  kIo,
};

std::string_view to_string(ErrorKind kind);
// Inverse of to_string; throws Error(kParse) for an unknown name.
ErrorKind parse_error_kind(std::string_view name);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// The model replied, but the reply never satisfied the output schema.
class StructuredOutputError : public Error {
 public:
  StructuredOutputError(const std::string& message, std::string raw_text,
                        int attempts)
      : Error(ErrorKind::kStructuredOutput, message),
        raw_text_(std::move(raw_text)),
        attempts_(attempts) {}

  const std::string& raw_text() const noexcept { return raw_text_; }
  int attempts() const noexcept { return attempts_; }

 private:
  std::string raw_text_;
  int attempts_;
};

class TransportError : public Error {
 public:
  TransportError(ErrorKind kind, const std::string& message, int status,
                 int attempts)
      : Error(kind, message), status_(status), attempts_(attempts) {}

  int status() const noexcept { return status_; }
  int attempts() const noexcept { return attempts_; }

 private:
  int status_;
  int attempts_;
};

}  // namespace surveylens
