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

#include "surveylens/gateway.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "surveylens/text.hpp"

namespace surveylens {
namespace {

constexpr Millis kWindow{60000};

std::int64_t estimate_request_tokens(const ChatRequest& request) {
  std::int64_t total = 0;
  for (const auto& m : request.messages) total += estimate_tokens(m.content);
  return total;
}

// Holds one of the gateway's max_in_flight slots for its lifetime.
class InFlightSlot {
 public:
  InFlightSlot(std::mutex& mu, std::condition_variable& cv, int& in_flight,
               int limit)
      : mu_(mu), cv_(cv), in_flight_(in_flight) {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < limit; });
    ++in_flight_;
  }
  ~InFlightSlot() {
    {
      std::lock_guard lock(mu_);
      --in_flight_;
    }
    cv_.notify_one();
  }
  InFlightSlot(const InFlightSlot&) = delete;
  InFlightSlot& operator=(const InFlightSlot&) = delete;

 private:
  std::mutex& mu_;
  std::condition_variable& cv_;
  int& in_flight_;
};

std::string status_text(const ProviderReply& reply) {
  std::string s = "status " + std::to_string(reply.status);
  if (!reply.error_message.empty()) s += ": " + reply.error_message;
  return s;
}

}  // namespace

Millis RetryPolicy::backoff_after(int attempt) const {
  const double factor = std::pow(multiplier, std::max(0, attempt - 1));
  return Millis{static_cast<Millis::rep>(
      std::llround(static_cast<double>(base_backoff.count()) * factor))};
}

bool RetryPolicy::retryable(int status) const {
  return retryable_statuses.count(status) > 0;
}

void GatewayConfig::validate() const {
  if (max_in_flight < 1) throw Error(ErrorKind::kConfig, "max_in_flight must be >= 1");
  if (tokens_per_minute < 1) {
    throw Error(ErrorKind::kConfig, "tokens_per_minute must be >= 1");
  }
  if (requests_per_minute < 1) {
    throw Error(ErrorKind::kConfig, "requests_per_minute must be >= 1");
  }
  if (retry.max_attempts < 1) throw Error(ErrorKind::kConfig, "max_attempts must be >= 1");
  if (retry.multiplier < 1.0) throw Error(ErrorKind::kConfig, "backoff multiplier must be >= 1");
  if (retry.base_backoff < Millis::zero()) {
    throw Error(ErrorKind::kConfig, "base backoff must be >= 0");
  }
}

SlotError to_slot_error(const std::exception& e) {
  if (auto* s = dynamic_cast<const StructuredOutputError*>(&e)) {
    return SlotError{s->kind(), s->what(), s->attempts(), s->raw_text()};
  }
  if (auto* t = dynamic_cast<const TransportError*>(&e)) {
    return SlotError{t->kind(), t->what(), t->attempts(), {}};
  }
  if (auto* g = dynamic_cast<const Error*>(&e)) {
    return SlotError{g->kind(), g->what(), 0, {}};
  }
  return SlotError{ErrorKind::kTransport, e.what(), 0, {}};
}

RequestBudget::RequestBudget(std::int64_t requests_per_minute,
                             std::int64_t tokens_per_minute,
                             std::shared_ptr<Clock> clock)
    : rpm_(requests_per_minute), tpm_(tokens_per_minute), clock_(std::move(clock)) {}

void RequestBudget::prune_locked(Millis now) {
  while (!window_.empty() && window_.front().at + kWindow <= now) {
    window_tokens_ -= window_.front().tokens;
    window_.pop_front();
  }
}

std::uint64_t RequestBudget::acquire(std::int64_t tokens) {
  std::unique_lock lock(mu_);
  for (;;) {
    const Millis now = clock_->now();
    prune_locked(now);
    const bool request_fits = static_cast<std::int64_t>(window_.size()) < rpm_;
    // An oversized request still runs once the window is empty.
    const bool tokens_fit = window_.empty() || window_tokens_ + tokens <= tpm_;
    if (request_fits && tokens_fit) {
      const std::uint64_t ticket = next_ticket_++;
      window_.push_back(Dispatch{ticket, now, tokens});
      window_tokens_ += tokens;
      history_.push_back(now);
      return ticket;
    }
    const Millis wait = std::max(window_.front().at + kWindow - now, Millis{1});
    lock.unlock();
    clock_->sleep_for(wait);
    lock.lock();
  }
}

void RequestBudget::settle(std::uint64_t ticket, std::int64_t actual_tokens) {
  std::lock_guard lock(mu_);
  for (auto& d : window_) {
    if (d.ticket == ticket) {
      window_tokens_ += actual_tokens - d.tokens;
      d.tokens = actual_tokens;
      return;
    }
  }
}

std::vector<Millis> RequestBudget::dispatch_times() const {
  std::lock_guard lock(mu_);
  return history_;
}

Gateway::Gateway(GatewayConfig config, std::shared_ptr<Provider> provider,
                 std::shared_ptr<Clock> clock, std::shared_ptr<UsageLedger> ledger)
    : config_(std::move(config)),
      provider_(std::move(provider)),
      clock_(std::move(clock)),
      ledger_(std::move(ledger)),
      budget_(config_.requests_per_minute, config_.tokens_per_minute, clock_) {
  config_.validate();
  if (!provider_) throw Error(ErrorKind::kConfig, "gateway needs a provider");
}

ProviderReply Gateway::send_with_retry(const ChatRequest& request, int& attempts) {
  const std::int64_t estimate = estimate_request_tokens(request);
  for (int tries = 1;; ++tries) {
    ++attempts;
    ProviderReply reply;
    {
      InFlightSlot slot(slots_mu_, slots_cv_, in_flight_, config_.max_in_flight);
      const std::uint64_t ticket = budget_.acquire(estimate);
      reply = provider_->send(request);
      budget_.settle(ticket, reply.usage ? reply.usage->total() : estimate);
    }
    if (reply.ok()) return reply;
    if (reply.status == 401 || reply.status == 403) {
      throw TransportError(ErrorKind::kAuthentication,
                           "authentication failed (" + status_text(reply) + ")",
                           reply.status, attempts);
    }
    if (!config_.retry.retryable(reply.status)) {
      throw TransportError(ErrorKind::kTransport,
                           "non-retryable failure (" + status_text(reply) + ")",
                           reply.status, attempts);
    }
    if (tries >= config_.retry.max_attempts) {
      throw TransportError(ErrorKind::kTransport,
                           "giving up after " + std::to_string(tries) +
                               " attempts (" + status_text(reply) + ")",
                           reply.status, attempts);
    }
    clock_->sleep_for(config_.retry.backoff_after(tries));
  }
}

TaskOutcome Gateway::complete_structured(const PromptBundle& bundle) {
  ChatRequest request{bundle.task_kind,
                      bundle.model_id,
                      bundle.temperature,
                      {{"system", bundle.system_text}, {"user", bundle.user_text}},
                      &bundle.schema};
  int attempts = 0;
  Usage total;
  for (int round = 0;; ++round) {
    const ProviderReply reply = send_with_retry(request, attempts);
    const Usage usage = reply.usage.value_or(
        Usage{estimate_request_tokens(request), estimate_tokens(reply.arguments)});
    total.prompt_tokens += usage.prompt_tokens;
    total.completion_tokens += usage.completion_tokens;
    ledger_->record(LedgerEntry{bundle.task_kind, bundle.model_id, usage});

    std::optional<std::string> problem;
    json doc;
    try {
      doc = json::parse(reply.arguments);
    } catch (const json::exception& e) {
      problem = std::string("arguments are not valid JSON: ") + e.what();
    }
    if (!problem) problem = bundle.schema.validate(doc);
    if (!problem && bundle.validator) problem = bundle.validator(doc);
    if (!problem) {
      std::string reasoning = doc["reasoning"].get<std::string>();
      return TaskOutcome{std::move(reasoning), std::move(doc), total,
                         bundle.model_id, bundle.temperature, attempts};
    }
    if (round >= 1) {
      throw StructuredOutputError("invalid structured output after repair: " + *problem,
                                  reply.arguments, attempts);
    }
    request.messages.push_back({"assistant", reply.arguments});
    request.messages.push_back(
        {"user", "The arguments you supplied to " + bundle.schema.name() +
                     " were invalid: " + *problem +
                     ". Call " + bundle.schema.name() +
                     " again with arguments that satisfy the schema."});
  }
}

std::vector<Slot<TaskOutcome>> Gateway::run_parallel(
    std::span<const PromptBundle> bundles) {
  std::vector<Slot<TaskOutcome>> results(bundles.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= bundles.size()) return;
      try {
        results[i] = Slot<TaskOutcome>::success(complete_structured(bundles[i]));
      } catch (const std::exception& e) {
        results[i] = Slot<TaskOutcome>::failure(to_slot_error(e));
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(config_.max_in_flight), bundles.size());
  if (workers <= 1) {
    work();
    return results;
  }
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work);
  threads.clear();  // joins
  return results;
}

}  // namespace surveylens
