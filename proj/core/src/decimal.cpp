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

#include "surveylens/decimal.hpp"

#include <algorithm>

#include "surveylens/error.hpp"

namespace surveylens {
namespace {

Int128 pow10(int n) {
  Int128 r = 1;
  for (int i = 0; i < n; ++i) r *= 10;
  return r;
}

const Int128 kScale = pow10(Decimal::kFractionDigits);

std::string int128_to_string(Int128 v) {
  if (v == 0) return "0";
  const bool negative = v < 0;
  std::string digits;
  while (v != 0) {
    int d = static_cast<int>(v % 10);
    digits.push_back(static_cast<char>('0' + (d < 0 ? -d : d)));
    v /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

void check_places(int places) {
  if (places < 0 || places > Decimal::kFractionDigits) {
    throw Error(ErrorKind::kInvalidArgument,
                "decimal places out of range: " + std::to_string(places));
  }
}

}  // namespace

Int128 divide_round_half_even(Int128 p, Int128 q) {
  if (q <= 0) throw Error(ErrorKind::kInvalidArgument, "non-positive divisor");
  Int128 quotient = p / q;
  Int128 remainder = p % q;
  if (remainder < 0) {  // floor division
    quotient -= 1;
    remainder += q;
  }
  const Int128 twice = remainder * 2;
  if (twice > q || (twice == q && (quotient % 2 != 0))) quotient += 1;
  return quotient;
}

Decimal Decimal::from_int(std::int64_t value) {
  return from_units(static_cast<Int128>(value) * kScale);
}

Decimal Decimal::from_units(Int128 units) {
  Decimal d;
  d.units_ = units;
  return d;
}

Decimal Decimal::parse(std::string_view text) {
  auto fail = [&] {
    return Error(ErrorKind::kParse,
                 "invalid decimal literal '" + std::string(text) + "'");
  };
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  Int128 whole = 0;
  int whole_digits = 0;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
    whole = whole * 10 + (text[i] - '0');
    ++whole_digits;
    ++i;
    if (whole_digits > 24) throw fail();
  }
  Int128 frac = 0;
  int frac_digits = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
      if (frac_digits == kFractionDigits) throw fail();
      frac = frac * 10 + (text[i] - '0');
      ++frac_digits;
      ++i;
    }
  }
  if (i != text.size() || (whole_digits == 0 && frac_digits == 0)) throw fail();
  Int128 units = whole * kScale + frac * pow10(kFractionDigits - frac_digits);
  return from_units(negative ? -units : units);
}

Decimal Decimal::rounded_ratio(const Decimal& value, std::int64_t mul,
                               std::int64_t div, int places) {
  check_places(places);
  const Int128 p = value.units_ * mul * pow10(places);
  const Int128 q = static_cast<Int128>(div) * kScale;
  return from_units(divide_round_half_even(p, q) *
                    pow10(kFractionDigits - places));
}

Decimal Decimal::divided_exactly(std::int64_t div) const {
  if (div == 0 || units_ % div != 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "decimal division is not exact at 12 fractional digits");
  }
  return from_units(units_ / div);
}

Decimal Decimal::rounded(int places) const {
  return rounded_ratio(*this, 1, 1, places);
}

double Decimal::to_double() const {
  return static_cast<double>(units_) / static_cast<double>(kScale);
}

std::string Decimal::to_string(int places) const {
  check_places(places);
  const Int128 scaled =
      divide_round_half_even(units_, pow10(kFractionDigits - places));
  const bool negative = scaled < 0;
  const Int128 mag = negative ? -scaled : scaled;
  const Int128 base = pow10(places);
  std::string out = negative ? "-" : "";
  out += int128_to_string(mag / base);
  if (places > 0) {
    std::string frac = int128_to_string(mag % base);
    out += '.';
    out += std::string(static_cast<std::size_t>(places) - frac.size(), '0');
    out += frac;
  }
  return out;
}

std::string Decimal::to_string() const {
  int places = kFractionDigits;
  while (places > 0 && units_ % pow10(kFractionDigits - places + 1) == 0) {
    --places;
  }
  return to_string(places);
}

}  // namespace surveylens
