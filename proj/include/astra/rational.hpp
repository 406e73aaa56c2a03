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

#ifndef ASTRA_RATIONAL_HPP_
#define ASTRA_RATIONAL_HPP_

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace astra {

// Exact rational number with a normalized int64 numerator/denominator pair.
// Every score, weight, multiplier and Stage-3 assessment value in the engine
// is a Rational so that values such as 12.4 or 0.35 * 0.29 compare exactly.
// Intermediate products are computed in 128 bits; a result that does not fit
// back into int64 after reduction throws std::overflow_error.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den);

  // Accepts "12", "-3", "12.4", "0.075", "7/18" and "1e-3" style input.
  static Rational parse(std::string_view text);
  // Converts a double through its shortest round-trip decimal form, so
  // 0.2 becomes exactly 1/5 rather than the nearest binary fraction.
  static Rational from_double(double value);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // Nearest integer, halves rounded away from zero.
  std::int64_t round() const;
  std::int64_t floor() const;

  // Exact decimal when the expansion terminates ("12.4"), otherwise "n/d".
  std::string to_string() const;

  Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational clamp(const Rational& v, const Rational& lo, const Rational& hi) {
  return v < lo ? lo : (hi < v ? hi : v);
}

}  // namespace astra

#endif  // ASTRA_RATIONAL_HPP_
