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

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "surveylens/gateway.hpp"
#include "surveylens/text.hpp"

namespace surveylens::oracle {

// Stateless provider that answers thematic requests with random but valid
// payloads. The reply depends only on the seed and the request text.
class RandomThematicProvider final : public Provider {
 public:
  RandomThematicProvider(std::uint64_t seed, std::vector<std::string> comments)
      : seed_(seed), comments_(std::move(comments)) {}

  ProviderReply send(const ChatRequest& request) override {
    std::string user;
    for (const auto& m : request.messages) {
      if (m.role == "user") {
        user = m.content;
        break;
      }
    }
    std::mt19937_64 rng(seed_ ^ fnv1a64(user));
    json out = {{"reasoning", "random"}};
    const std::string& kind = request.task_kind;
    if (kind == "themes") {
      const int n = std::uniform_int_distribution<int>(1, 4)(rng);
      out["themes"] = json::array();
      for (int i = 0; i < n; ++i) {
        out["themes"].push_back({{"title", "Theme " + std::to_string(i)}, {"description", "d"}});
      }
    } else if (kind == "multiclass") {
      const auto& values = request.schema->fields().at(1).values;
      out["label"] = values.at(std::uniform_int_distribution<std::size_t>(0, values.size() - 1)(rng));
    } else if (kind == "coalesce") {
      std::vector<json> members;
      std::istringstream lines(user);
      std::string line, set;
      while (std::getline(lines, line)) {
        if (line.rfind("Set S", 0) == 0 && line.back() == ':') {
          set = line.substr(4, line.size() - 5);
        } else if (!set.empty() && line.rfind("- ", 0) == 0) {
          members.push_back({{"set", set}, {"title", line.substr(2, line.find(": ") - 2)}});
        } else if (!line.empty()) {
          set.clear();
        }
      }
      std::shuffle(members.begin(), members.end(), rng);
      const std::size_t g = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, members.size()))(rng);
      out["themes"] = json::array();
      for (std::size_t k = 0; k < g; ++k) {
        out["themes"].push_back({{"title", "G" + std::to_string(k)}, {"description", "d"}, {"members", json::array()}});
      }
      for (std::size_t m = 0; m < members.size(); ++m) out["themes"][m % g]["members"].push_back(members[m]);
    } else if (kind == "extract") {
      out["excerpts"] = json::array();
      for (const auto& c : comments_) {
        if (user.find(c) == std::string::npos) continue;
        const int n = std::uniform_int_distribution<int>(0, 2)(rng);
        for (int i = 0; i < n; ++i) out["excerpts"].push_back(c.substr(0, c.size() / (i + 1)));
        break;
      }
    } else {
      return ProviderReply{400, "", std::nullopt, "unexpected task " + kind};
    }
    return ProviderReply{200, out.dump(), std::nullopt, ""};
  }

 private:
  std::uint64_t seed_;
  std::vector<std::string> comments_;
};

}  // namespace surveylens::oracle
