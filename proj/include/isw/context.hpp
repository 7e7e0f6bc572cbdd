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

// Order-mu extension: one imaginary window per context word in A^mu, plus the
// real window of the last mu letters that picks which one is used.

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "isw/bits.hpp"
#include "isw/core.hpp"
#include "isw/sumtree.hpp"

namespace isw {

class ContextModel {
 public:
  /// Cumulative-frequency slot of a letter under the add-1/2 estimate.
  struct Interval {
    std::uint64_t low;
    std::uint64_t width;
    std::uint64_t total;
  };

  /// `seed` is the initial context, exactly `order` letters, oldest first.
  ContextModel(std::size_t m, std::size_t order, std::uint32_t w, std::span<const Symbol> seed);

  std::size_t alphabet_size() const noexcept { return m_; }
  std::size_t order() const noexcept { return order_; }
  std::uint32_t window_length() const noexcept { return w_; }
  /// m^order.
  std::uint64_t window_slots() const noexcept { return slots_; }
  std::size_t materialized_windows() const noexcept { return windows_.size(); }

  std::span<const Symbol> context() const noexcept { return context_; }
  /// The context word read as a base-m number, oldest letter most significant.
  std::uint64_t context_key() const noexcept { return key_; }
  static std::uint64_t key_of(std::span<const Symbol> word, std::size_t m);

  /// Estimate from the window of the current context.
  Ratio probability(Symbol a) const;
  Interval interval(Symbol a) const;
  /// Letter whose interval contains `target` in [0, 2w + m).
  Symbol symbol_at(std::uint64_t target) const;

  /// Steps the window of the current context with `a`, then shifts `a` into
  /// the context. Returns the evicted letter.
  Symbol step(Symbol a, BitSource& bits);

  /// Counts of the window for a context key (defaults if never visited).
  std::span<const std::uint32_t> window_counts(std::uint64_t key) const;

 private:
  const SumTree& current() const;

  std::size_t m_;
  std::size_t order_;
  std::uint32_t w_;
  std::uint64_t slots_ = 1;
  std::vector<Symbol> context_;
  std::uint64_t key_ = 0;
  SumTree fresh_;
  std::unordered_map<std::uint64_t, SumTree> windows_;
};

}  // namespace isw
