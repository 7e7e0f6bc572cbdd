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

#pragma once

// Exact rationals and the conversions the analysis code needs when numerators
// and denominators run to thousands of bits.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace isw {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Nearest double, valid far beyond the range where num and den fit a double.
double to_double(const Rational& q);
inline double to_double(double x) noexcept { return x; }

/// log2 of a positive rational.
double log2_rational(const Rational& q);

/// -log2(p) for p in (0, 1], accurate when p is within 1e-300 of one.
double neg_log2(const Rational& p);

BigInt binomial(std::uint64_t n, std::uint64_t k);
Rational power(const Rational& base, std::uint64_t exponent);

}  // namespace isw
