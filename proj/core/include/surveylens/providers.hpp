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

#include <atomic>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "surveylens/gateway.hpp"

namespace surveylens {

// One canned answer. `status` != 200 scripts a failure.
struct ScriptedReply {
  int status = 200;
  std::string arguments;
  std::optional<Usage> usage;
  std::string error_message;

  static ScriptedReply payload(const json& arguments);
  static ScriptedReply raw(std::string arguments);
  static ScriptedReply failure(int status, std::string message = {});
};

// A script entry answers requests it matches. Replies are consumed in order
// per entry; the last one repeats forever.
struct ScriptEntry {
  std::optional<std::string> match;  // substring of the original user text
  std::optional<std::string> task;   // task kind filter
  std::optional<std::size_t> position;  // 0-based global call index
  std::vector<ScriptedReply> replies;
};

// Deterministic offline provider. Position entries win over substring
// entries, which win over catch-all entries; ties go to script order.
// Unmatched requests throw Error(kUnscripted) quoting the user text.
class ScriptedProvider final : public Provider {
 public:
  explicit ScriptedProvider(std::vector<ScriptEntry> script,
                            Millis latency = Millis{0});

  // jsonl; one entry per line:
  //   {"match": "...", "task": "binary", "position": 3,
  //    "payload": {...} | "raw": "..." | "status": 503,
  //    "usage": {"prompt_tokens": n, "completion_tokens": m},
  //    "replies": [ {...same reply keys...}, ... ]}
  static std::vector<ScriptEntry> parse_script(std::string_view jsonl);
  static std::vector<ScriptEntry> load_script(const std::filesystem::path& path);

  ProviderReply send(const ChatRequest& request) override;

  std::size_t calls() const { return calls_.load(); }
  int max_concurrency() const { return max_concurrency_.load(); }
  std::vector<std::string> user_texts() const;

 private:
  std::vector<ScriptEntry> script_;
  Millis latency_;
  mutable std::mutex mu_;
  std::vector<std::size_t> cursors_;
  std::vector<std::string> seen_;
  std::atomic<std::size_t> calls_{0};
  std::atomic<int> current_{0};
  std::atomic<int> max_concurrency_{0};
};

// OpenAI-compatible chat-completions body with a forced function tool call.
json build_chat_request_body(const ChatRequest& request);

// Extracts tool-call arguments and usage from a chat-completions response.
ProviderReply parse_chat_response(int status, std::string_view body);

// HTTPS (or plain HTTP) client for any chat-completions compatible server.
class HttpProvider final : public Provider {
 public:
  // Reads the API key from the named environment variable; an unset variable
  // is allowed (local servers) and sends no Authorization header.
  explicit HttpProvider(const GatewayConfig& config);

  ProviderReply send(const ChatRequest& request) override;

 private:
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::string api_key_;
  Millis timeout_;
};

}  // namespace surveylens
