// Copyright 2026 The ASTRA Negotiation Authors
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

#include "astra/rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace astra {
namespace {

__int128 wide_abs(__int128 v) { return v < 0 ? -v : v; }

__int128 wide_gcd(__int128 a, __int128 b) {
  a = wide_abs(a);
  b = wide_abs(b);
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  if (!fits(num) || !fits(den)) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::parse(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash), whole),
                    parse_int(text.substr(slash + 1), whole));
  }

  int exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    exponent = static_cast<int>(parse_int(exp_text, whole));
    text = text.substr(0, e);
  }

  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::string digits;
  auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    digits = std::string(text);
  } else {
    digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
    exponent -= static_cast<int>(text.size() - dot - 1);
  }
  if (digits.empty()) throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
  for (char c : digits) {
    if (c < '0' || c > '9') throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
  }
  // Trailing zeros would only inflate the intermediate.
  while (digits.size() > 1 && digits.back() == '0' && exponent < 0) {
    digits.pop_back();
    ++exponent;
  }
  __int128 num = 0;
  for (char c : digits) {
    num = num * 10 + (c - '0');
    if (!fits(num)) throw std::overflow_error("number too large: '" + std::string(whole) + "'");
  }
  __int128 den = 1;
  for (; exponent > 0; --exponent) num *= 10;
  for (; exponent < 0; ++exponent) den *= 10;
  if (negative) num = -num;
  return from_wide(num, den);
}

Rational Rational::from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite number");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::invalid_argument("unrepresentable number");
  return parse(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

std::int64_t Rational::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

std::int64_t Rational::round() const {
  Rational half(1, 2);
  return num_ >= 0 ? (*this + half).floor() : -((-*this) + half).floor();
}

std::string Rational::to_string() const {
  // A fraction terminates in base 10 iff its reduced denominator is 2^a 5^b.
  std::int64_t d = den_;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);

  const int places = std::max(twos, fives);
  if (places == 0) return std::to_string(num_);
  __int128 scaled = num_;
  __int128 scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  scaled = scaled * (scale / den_);
  const bool negative = scaled < 0;
  scaled = wide_abs(scaled);
  auto int_part = static_cast<std::int64_t>(scaled / scale);
  auto frac_part = static_cast<std::int64_t>(scaled % scale);
  std::string frac = std::to_string(frac_part);
  frac.insert(0, static_cast<std::size_t>(places) - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  std::string out = negative ? "-" : "";
  out += std::to_string(int_part);
  if (!frac.empty()) out += "." + frac;
  return out;
}

Rational& Rational::operator+=(const Rational& o) {
  *this = from_wide(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                    static_cast<__int128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  *this = from_wide(static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_,
                    static_cast<__int128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  *this = from_wide(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  *this = from_wide(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace astra
