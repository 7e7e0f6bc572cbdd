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

// Reference windows the ISW is measured against: the literal sliding window
// and the box model with uniformly random replacement.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "isw/bits.hpp"
#include "isw/core.hpp"

namespace isw {

/// The last w letters, oldest first, with their histogram.
class TrueWindow {
 public:
  /// `seed_word` fills the whole window; its length is w.
  TrueWindow(std::size_t m, std::vector<Symbol> seed_word);

  /// Appends `a`, drops the oldest letter and returns it.
  Symbol push(Symbol a);

  std::size_t alphabet_size() const noexcept { return counts_.size(); }
  std::size_t window_length() const noexcept { return ring_.size(); }
  std::span<const std::uint32_t> counts() const noexcept { return counts_; }
  /// Contents oldest to newest.
  std::vector<Symbol> contents() const;

  /// w * ceil(log2 m): what the buffer needs, whatever this class allocates.
  std::uint64_t storage_bits() const noexcept;
  static std::uint64_t storage_bits(std::size_t m, std::uint64_t w) noexcept;

 private:
  std::vector<Symbol> ring_;
  std::size_t head_ = 0;  // oldest
  std::vector<std::uint32_t> counts_;
};

/// w boxes each holding a letter. A step empties a uniformly chosen box and
/// puts the new letter there. `touched` remembers boxes replaced since start.
class SwrreBoxes {
 public:
  SwrreBoxes(std::size_t m, std::vector<Symbol> boxes);

  /// Draws the box with draw_uniform and replaces it; returns the box index.
  std::size_t step(Symbol a, BitSource& bits);
  void replace(std::size_t box, Symbol a);

  std::size_t alphabet_size() const noexcept { return m_; }
  std::size_t window_length() const noexcept { return boxes_.size(); }
  std::span<const Symbol> boxes() const noexcept { return boxes_; }
  const std::vector<bool>& touched() const noexcept { return touched_; }
  std::vector<std::uint32_t> counts() const;

  /// Boxes never replaced so far.
  std::size_t untouched_count() const noexcept;

 private:
  std::size_t m_;
  std::vector<Symbol> boxes_;
  std::vector<bool> touched_;
};

}  // namespace isw
