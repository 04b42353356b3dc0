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

#include <sstream>
#include <thread>

#include "surveylens/corpus.hpp"
#include "surveylens/providers.hpp"
#include "surveylens/text.hpp"

namespace surveylens {
namespace {

ScriptedReply parse_reply(const json& obj, std::size_t line) {
  ScriptedReply reply;
  if (auto it = obj.find("status"); it != obj.end()) reply.status = it->get<int>();
  if (auto it = obj.find("payload"); it != obj.end()) {
    reply.arguments = it->dump();
  } else if (auto raw = obj.find("raw"); raw != obj.end()) {
    reply.arguments = raw->get<std::string>();
  } else if (reply.status == 200) {
    throw Error(ErrorKind::kParse, "script line " + std::to_string(line) +
                                       ": reply needs payload, raw or status");
  }
  if (auto it = obj.find("error"); it != obj.end()) {
    reply.error_message = it->get<std::string>();
  }
  if (auto it = obj.find("usage"); it != obj.end()) {
    reply.usage = Usage{it->at("prompt_tokens").get<std::int64_t>(),
                        it->at("completion_tokens").get<std::int64_t>()};
  }
  return reply;
}

std::string user_text_of(const ChatRequest& request) {
  for (const auto& m : request.messages) {
    if (m.role == "user") return m.content;
  }
  return {};
}

// Decrements the concurrency probe on scope exit.
struct ConcurrencyProbe {
  std::atomic<int>& current;
  ~ConcurrencyProbe() { current.fetch_sub(1); }
};

}  // namespace

ScriptedReply ScriptedReply::payload(const json& arguments) {
  return ScriptedReply{200, arguments.dump(), std::nullopt, {}};
}

ScriptedReply ScriptedReply::raw(std::string arguments) {
  return ScriptedReply{200, std::move(arguments), std::nullopt, {}};
}

ScriptedReply ScriptedReply::failure(int status, std::string message) {
  return ScriptedReply{status, {}, std::nullopt, std::move(message)};
}

ScriptedProvider::ScriptedProvider(std::vector<ScriptEntry> script, Millis latency)
    : script_(std::move(script)), latency_(latency), cursors_(script_.size(), 0) {
  for (std::size_t i = 0; i < script_.size(); ++i) {
    if (script_[i].replies.empty()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "script entry " + std::to_string(i) + " has no replies");
    }
  }
}

std::vector<ScriptEntry> ScriptedProvider::parse_script(std::string_view jsonl) {
  std::vector<ScriptEntry> entries;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    try {
      const json obj = json::parse(line);
      ScriptEntry entry;
      if (auto it = obj.find("match"); it != obj.end()) entry.match = it->get<std::string>();
      if (auto it = obj.find("task"); it != obj.end()) entry.task = it->get<std::string>();
      if (auto it = obj.find("position"); it != obj.end()) {
        entry.position = it->get<std::size_t>();
      }
      if (auto it = obj.find("replies"); it != obj.end()) {
        for (const auto& r : *it) entry.replies.push_back(parse_reply(r, line_no));
      } else {
        entry.replies.push_back(parse_reply(obj, line_no));
      }
      entries.push_back(std::move(entry));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParse,
                  "script line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return entries;
}

std::vector<ScriptEntry> ScriptedProvider::load_script(
    const std::filesystem::path& path) {
  return parse_script(read_file(path));
}

ProviderReply ScriptedProvider::send(const ChatRequest& request) {
  const int now_running = current_.fetch_add(1) + 1;
  ConcurrencyProbe probe{current_};
  int seen_max = max_concurrency_.load();
  while (now_running > seen_max &&
         !max_concurrency_.compare_exchange_weak(seen_max, now_running)) {
  }
  const std::size_t call_index = calls_.fetch_add(1);
  const std::string user_text = user_text_of(request);

  ScriptedReply reply;
  {
    std::lock_guard lock(mu_);
    seen_.push_back(user_text);
    auto task_ok = [&](const ScriptEntry& e) {
      return !e.task || *e.task == request.task_kind;
    };
    std::optional<std::size_t> chosen;
    for (std::size_t i = 0; i < script_.size() && !chosen; ++i) {
      if (script_[i].position && *script_[i].position == call_index &&
          task_ok(script_[i])) {
        chosen = i;
      }
    }
    for (std::size_t i = 0; i < script_.size() && !chosen; ++i) {
      const auto& e = script_[i];
      if (!e.position && e.match && task_ok(e) &&
          user_text.find(*e.match) != std::string::npos) {
        chosen = i;
      }
    }
    for (std::size_t i = 0; i < script_.size() && !chosen; ++i) {
      const auto& e = script_[i];
      if (!e.position && !e.match && task_ok(e)) chosen = i;
    }
    if (!chosen) {
      throw Error(ErrorKind::kUnscripted,
                  "unscripted request: " + user_text.substr(0, 80));
    }
    auto& cursor = cursors_[*chosen];
    const auto& replies = script_[*chosen].replies;
    reply = replies[std::min(cursor, replies.size() - 1)];
    ++cursor;
  }
  if (latency_ > Millis::zero()) std::this_thread::sleep_for(latency_);

  ProviderReply out;
  out.status = reply.status;
  out.error_message = reply.error_message;
  if (reply.status == 200) {
    out.arguments = reply.arguments;
    if (reply.usage) {
      out.usage = reply.usage;
    } else {
      std::int64_t prompt = 0;
      for (const auto& m : request.messages) prompt += estimate_tokens(m.content);
      out.usage = Usage{prompt, estimate_tokens(reply.arguments)};
    }
  }
  return out;
}

std::vector<std::string> ScriptedProvider::user_texts() const {
  std::lock_guard lock(mu_);
  return seen_;
}

}  // namespace surveylens
