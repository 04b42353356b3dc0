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

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "surveylens/clock.hpp"
#include "surveylens/error.hpp"
#include "surveylens/ledger.hpp"
#include "surveylens/schema.hpp"

namespace surveylens {

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::string task_kind;  // bookkeeping only, never sent on the wire
  std::string model_id;
  double temperature = 0.0;
  std::vector<ChatMessage> messages;
  const OutputSchema* schema = nullptr;
};

// What a provider got back for one send. `status` is the HTTP status, or 0
// when the transport failed before a response arrived.
struct ProviderReply {
  int status = 200;
  std::string arguments;  // tool-call arguments document (raw text)
  std::optional<Usage> usage;
  std::string error_message;

  bool ok() const { return status >= 200 && status < 300; }
};

class Provider {
 public:
  virtual ~Provider() = default;
  // May be called from several threads at once.
  virtual ProviderReply send(const ChatRequest& request) = 0;
};

struct RetryPolicy {
  int max_attempts = 5;
  Millis base_backoff{1000};
  double multiplier = 2.0;
  std::set<int> retryable_statuses{0, 408, 429, 500, 502, 503, 504};

  // Wait before attempt `attempt + 1`, given `attempt` >= 1 failures so far:
  // base_backoff * multiplier^(attempt - 1).
  Millis backoff_after(int attempt) const;
  bool retryable(int status) const;
};

struct GatewayConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key_env = "OPENAI_API_KEY";
  int max_in_flight = 10;
  std::int64_t tokens_per_minute = 90000;
  std::int64_t requests_per_minute = 3500;
  RetryPolicy retry;
  Millis request_timeout{120000};

  // Throws Error(kConfig) when an invariant does not hold.
  void validate() const;
};

using PayloadValidator = std::function<std::optional<std::string>(const json&)>;

struct PromptBundle {
  std::string task_kind;
  std::string system_text;
  std::string user_text;
  OutputSchema schema;
  std::string model_id;
  double temperature = 0.0;
  // Extra semantic checks beyond the schema (e.g. partition rules). A
  // failure is treated like a schema violation and triggers the repair.
  PayloadValidator validator;

  // Compares everything except the validator.
  bool operator==(const PromptBundle& o) const {
    return task_kind == o.task_kind && system_text == o.system_text &&
           user_text == o.user_text && schema == o.schema &&
           model_id == o.model_id && temperature == o.temperature;
  }
};

struct TaskOutcome {
  std::string reasoning;
  json payload;
  Usage usage;  // summed over every send for this bundle
  std::string model_id;
  double temperature = 0.0;
  int attempts = 0;
};

struct SlotError {
  ErrorKind kind = ErrorKind::kTransport;
  std::string message;
  int attempts = 0;
  std::string raw_text;

  bool operator==(const SlotError&) const = default;
};

SlotError to_slot_error(const std::exception& e);

// Per-item result of a batch: exactly one of value / error is set. `id`
// names the item when the batch is keyed (empty for raw gateway batches).
template <class T>
struct Slot {
  std::string id;
  std::optional<T> value;
  std::optional<SlotError> error;

  bool ok() const { return value.has_value(); }
  static Slot success(T v, std::string id = {}) {
    return Slot{std::move(id), std::move(v), std::nullopt};
  }
  static Slot failure(SlotError e, std::string id = {}) {
    return Slot{std::move(id), std::nullopt, std::move(e)};
  }
};

// Sliding 60 s window over dispatched requests and their token weights.
class RequestBudget {
 public:
  RequestBudget(std::int64_t requests_per_minute, std::int64_t tokens_per_minute,
                std::shared_ptr<Clock> clock);

  // Blocks (through the clock) until one more request of `tokens` fits.
  // Returns a ticket whose token weight settle() may later correct.
  std::uint64_t acquire(std::int64_t tokens);
  void settle(std::uint64_t ticket, std::int64_t actual_tokens);

  std::vector<Millis> dispatch_times() const;

 private:
  struct Dispatch {
    std::uint64_t ticket;
    Millis at;
    std::int64_t tokens;
  };
  void prune_locked(Millis now);

  std::int64_t rpm_;
  std::int64_t tpm_;
  std::shared_ptr<Clock> clock_;
  mutable std::mutex mu_;
  std::deque<Dispatch> window_;
  std::int64_t window_tokens_ = 0;
  std::uint64_t next_ticket_ = 0;
  std::vector<Millis> history_;
};

// Issues structured-output chat completions. Thread-safe: budgets and the
// in-flight bound are global to one Gateway instance.
class Gateway {
 public:
  Gateway(GatewayConfig config, std::shared_ptr<Provider> provider,
          std::shared_ptr<Clock> clock = std::make_shared<SystemClock>(),
          std::shared_ptr<UsageLedger> ledger = std::make_shared<UsageLedger>());

  // Retries transient failures with exponential backoff and re-asks once
  // with the validation error appended when the payload is invalid.
  // Throws StructuredOutputError, TransportError or Error(kUnscripted).
  TaskOutcome complete_structured(const PromptBundle& bundle);

  // Output slot i belongs to bundles[i]; failures stay in their slot.
  std::vector<Slot<TaskOutcome>> run_parallel(std::span<const PromptBundle> bundles);

  const GatewayConfig& config() const { return config_; }
  UsageLedger& ledger() { return *ledger_; }
  std::shared_ptr<UsageLedger> ledger_ptr() const { return ledger_; }
  const RequestBudget& budget() const { return budget_; }

 private:
  ProviderReply send_with_retry(const ChatRequest& request, int& attempts);

  GatewayConfig config_;
  std::shared_ptr<Provider> provider_;
  std::shared_ptr<Clock> clock_;
  std::shared_ptr<UsageLedger> ledger_;
  RequestBudget budget_;

  std::mutex slots_mu_;
  std::condition_variable slots_cv_;
  int in_flight_ = 0;
};

}  // namespace surveylens
