/* Copyright 2026 The ISW Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "isw/exact.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace isw {

namespace {

// x = mantissa * 2^exponent with mantissa holding the top 63 bits of |x|.
struct Scaled {
  double mantissa;
  long exponent;
};

Scaled scale(const BigInt& x) {
  const long top = static_cast<long>(boost::multiprecision::msb(x));
  const long shift = top > 62 ? top - 62 : 0;
  const BigInt head = x >> shift;
  return {static_cast<double>(head.convert_to<std::uint64_t>()), shift};
}

}  // namespace

double to_double(const Rational& q) {
  BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (num == 0) return 0.0;
  const bool negative = num < 0;
  if (negative) num = -num;
  const Scaled n = scale(num);
  const Scaled d = scale(den);
  const double value = std::ldexp(n.mantissa / d.mantissa, static_cast<int>(n.exponent - d.exponent));
  return negative ? -value : value;
}

double log2_rational(const Rational& q) {
  if (q <= 0) throw std::domain_error("log2 of a nonpositive rational");
  const Scaled n = scale(boost::multiprecision::numerator(q));
  const Scaled d = scale(boost::multiprecision::denominator(q));
  return std::log2(n.mantissa) - std::log2(d.mantissa) + static_cast<double>(n.exponent - d.exponent);
}

double neg_log2(const Rational& p) {
  if (p <= 0 || p > 1) throw std::domain_error("neg_log2 expects p in (0, 1]");
  if (p > Rational(1, 2)) return -std::log1p(to_double(p - 1)) / std::numbers::ln2;
  return -log2_rational(p);
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

Rational power(const Rational& base, std::uint64_t exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent) {
    if (exponent & 1u) result *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return result;
}

}  // namespace isw
