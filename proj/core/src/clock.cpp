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

#include "surveylens/clock.hpp"

#include <thread>

namespace surveylens {

Millis SystemClock::now() {
  return std::chrono::duration_cast<Millis>(
      std::chrono::steady_clock::now().time_since_epoch());
}

void SystemClock::sleep_for(Millis d) {
  if (d > Millis::zero()) std::this_thread::sleep_for(d);
}

Millis VirtualClock::now() {
  std::lock_guard lock(mu_);
  return now_;
}

void VirtualClock::sleep_for(Millis d) {
  std::lock_guard lock(mu_);
  sleeps_.push_back(d);
  if (d > Millis::zero()) now_ += d;
}

void VirtualClock::advance(Millis d) {
  std::lock_guard lock(mu_);
  now_ += d;
}

std::vector<Millis> VirtualClock::sleeps() const {
  std::lock_guard lock(mu_);
  return sleeps_;
}

}  // namespace surveylens
