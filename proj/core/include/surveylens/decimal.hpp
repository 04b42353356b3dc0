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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace surveylens {

__extension__ typedef __int128 Int128;

// Fixed-point decimal with 12 fractional digits. Addition, subtraction and
// integer multiplication are exact; division only happens through the
// explicitly rounded helpers below.
class Decimal {
 public:
  static constexpr int kFractionDigits = 12;

  constexpr Decimal() = default;

  static Decimal from_int(std::int64_t value);
  static Decimal from_units(Int128 units);

  // Accepts [-]digits[.digits] with at most 12 fractional digits.
  static Decimal parse(std::string_view text);

  // round_half_even(value * mul / div) at `places` fractional digits.
  static Decimal rounded_ratio(const Decimal& value, std::int64_t mul,
                               std::int64_t div, int places);

  // Exact value / div; throws if the quotient is not representable.
  Decimal divided_exactly(std::int64_t div) const;

  Decimal rounded(int places) const;

  Int128 units() const { return units_; }
  double to_double() const;

  // Fixed number of fractional digits, rounding half-even if needed.
  std::string to_string(int places) const;
  // Shortest representation without trailing zeros (at least one digit).
  std::string to_string() const;

  Decimal operator+(const Decimal& o) const { return from_units(units_ + o.units_); }
  Decimal operator-(const Decimal& o) const { return from_units(units_ - o.units_); }
  Decimal operator*(std::int64_t k) const { return from_units(units_ * k); }
  Decimal& operator+=(const Decimal& o) {
    units_ += o.units_;
    return *this;
  }

  friend bool operator==(const Decimal&, const Decimal&) = default;
  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
    return a.units_ <=> b.units_;
  }

 private:
  Int128 units_ = 0;
};

// Integer division of p / q (q > 0) rounded half-to-even.
Int128 divide_round_half_even(Int128 p, Int128 q);

}  // namespace surveylens
