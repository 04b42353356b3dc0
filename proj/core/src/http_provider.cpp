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

#include <cstdlib>

#include "httplib.h"
#include "surveylens/providers.hpp"

namespace surveylens {

json build_chat_request_body(const ChatRequest& request) {
  if (request.schema == nullptr) {
    throw Error(ErrorKind::kInvalidArgument, "chat request without an output schema");
  }
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  const OutputSchema& schema = *request.schema;
  json function = {{"name", schema.name()},
                   {"parameters", schema.to_json_schema()}};
  if (!schema.description().empty()) function["description"] = schema.description();
  return {
      {"model", request.model_id},
      {"temperature", request.temperature},
      {"messages", messages},
      {"tools", json::array({{{"type", "function"}, {"function", function}}})},
      {"tool_choice", {{"type", "function"},
                       {"function", {{"name", schema.name()}}}}},
  };
}

ProviderReply parse_chat_response(int status, std::string_view body) {
  ProviderReply reply;
  reply.status = status;
  json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (status < 200 || status >= 300) {
    if (doc.is_object() && doc.contains("error") && doc["error"].is_object() &&
        doc["error"].contains("message") && doc["error"]["message"].is_string()) {
      reply.error_message = doc["error"]["message"].get<std::string>();
    } else {
      reply.error_message = std::string(body.substr(0, 200));
    }
    return reply;
  }
  if (doc.is_discarded() || !doc.is_object()) {
    reply.status = 502;
    reply.error_message = "response body is not a JSON object";
    return reply;
  }
  if (auto u = doc.find("usage"); u != doc.end() && u->is_object()) {
    reply.usage = Usage{u->value("prompt_tokens", std::int64_t{0}),
                        u->value("completion_tokens", std::int64_t{0})};
  }
  const json* message = nullptr;
  if (auto c = doc.find("choices"); c != doc.end() && c->is_array() && !c->empty()) {
    if (auto m = (*c)[0].find("message"); m != (*c)[0].end() && m->is_object()) {
      message = &*m;
    }
  }
  if (message == nullptr) {
    reply.status = 502;
    reply.error_message = "response has no choices[0].message";
    return reply;
  }
  if (auto calls = message->find("tool_calls");
      calls != message->end() && calls->is_array() && !calls->empty()) {
    const json& fn = (*calls)[0].value("function", json::object());
    reply.arguments = fn.value("arguments", std::string());
  } else if (auto fc = message->find("function_call");
             fc != message->end() && fc->is_object()) {
    reply.arguments = fc->value("arguments", std::string());
  } else if (auto content = message->find("content");
             content != message->end() && content->is_string()) {
    // No tool call: hand the text to schema validation, which will repair.
    reply.arguments = content->get<std::string>();
  }
  return reply;
}

HttpProvider::HttpProvider(const GatewayConfig& config)
    : timeout_(config.request_timeout) {
  const std::string& url = config.base_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::kConfig, "base_url needs a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  if (path_start != std::string::npos) path_prefix_ = url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  if (const char* key = std::getenv(config.api_key_env.c_str())) api_key_ = key;
}

ProviderReply HttpProvider::send(const ChatRequest& request) {
  httplib::Client client(scheme_host_port_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  client.set_connection_timeout(seconds);
  client.set_read_timeout(seconds);
  client.set_write_timeout(seconds);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  const std::string body = build_chat_request_body(request).dump();
  auto result = client.Post(path_prefix_ + "/chat/completions", headers, body,
                            "application/json");
  if (!result) {
    ProviderReply reply;
    reply.status = 0;
    reply.error_message = httplib::to_string(result.error());
    return reply;
  }
  return parse_chat_response(result->status, result->body);
}

}  // namespace surveylens
