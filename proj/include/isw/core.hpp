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

// The imaginary sliding window: a frequency vector of fixed total w that is
// updated by incrementing the arriving letter and decrementing a letter drawn
// with probability count/w. No window contents are ever stored.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "isw/bits.hpp"

namespace isw {

/// Zero-based letter index in [0, m).
using Symbol = std::size_t;

/// Unreduced nonnegative fraction num/den.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Ratio& a, const Ratio& b) noexcept {
    return static_cast<unsigned __int128>(a.num) * b.den ==
           static_cast<unsigned __int128>(b.num) * a.den;
  }
};

/// floor(w/m) each, remainder spread one per letter from index 0 upwards.
std::vector<std::uint32_t> balanced_counts(std::size_t m, std::uint32_t w);

/// Bits needed to hold any value in [0, w].
unsigned counter_width(std::uint64_t w) noexcept;

class IswState {
 public:
  /// Balanced initialisation.
  IswState(std::size_t m, std::uint32_t w);
  /// Explicit initial counts; must have m entries, each >= 0, summing to w.
  IswState(std::size_t m, std::uint32_t w, std::span<const std::int64_t> initial);
  /// Takes the counts as given; w is their sum.
  explicit IswState(std::vector<std::uint32_t> counts);

  std::size_t alphabet_size() const noexcept { return counts_.size(); }
  std::uint32_t window_length() const noexcept { return w_; }
  std::span<const std::uint32_t> counts() const noexcept { return counts_; }
  std::uint32_t count(Symbol a) const;

  /// One transition: `arrived` gains one, `evicted` loses one. Throws if
  /// `evicted` has zero count.
  void apply(Symbol arrived, Symbol evicted);

  /// m counters of counter_width(w) bits.
  std::uint64_t storage_bits() const noexcept;

  friend bool operator==(const IswState&, const IswState&) = default;

 private:
  std::vector<std::uint32_t> counts_;
  std::uint32_t w_ = 0;
};

/// Maps z in [0, w) to the letter j with Q_j <= z < Q_{j+1}, Q the exclusive
/// prefix sums of the counts. Letters with zero count are never returned.
Symbol select_naive(const IswState& state, std::uint64_t z);

/// Eviction rule plug point; the verification suite swaps in mutants.
using Selector = std::function<Symbol(const IswState&, std::uint64_t)>;

/// Draws z = draw_uniform(bits, w), evicts select(z), admits `arrived`.
/// Returns the evicted letter.
Symbol isw_step(IswState& state, Symbol arrived, BitSource& bits);
Symbol isw_step(IswState& state, Symbol arrived, BitSource& bits, const Selector& select);

/// Add-1/2 estimate (2*count + 1) / (2w + m). Positive for every letter and
/// sums to exactly one over the alphabet.
Ratio estimate_probability(const IswState& state, Symbol a);

}  // namespace isw
