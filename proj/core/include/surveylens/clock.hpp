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

#include <chrono>
#include <mutex>
#include <vector>

namespace surveylens {

using Millis = std::chrono::milliseconds;

// Injection point for every wait the gateway performs (rate budgeting and
// retry backoff), so tests can substitute virtual time.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual Millis now() = 0;
  virtual void sleep_for(Millis d) = 0;
};

class SystemClock final : public Clock {
 public:
  Millis now() override;
  void sleep_for(Millis d) override;
};

// Time advances only when somebody sleeps. Concurrent sleeps each advance
// the shared clock, which only ever over-estimates elapsed time.
class VirtualClock final : public Clock {
 public:
  explicit VirtualClock(Millis start = Millis{0}) : now_(start) {}

  Millis now() override;
  void sleep_for(Millis d) override;
  void advance(Millis d);

  std::vector<Millis> sleeps() const;

 private:
  mutable std::mutex mu_;
  Millis now_;
  std::vector<Millis> sleeps_;
};

}  // namespace surveylens
