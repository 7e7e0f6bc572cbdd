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

// Hierarchical partial sums over the ISW counters. Leaves are the counts,
// padded with zero leaves up to a power of two; every internal node is the sum
// of its two children. Selecting the evicted letter and the two +-1 updates
// each walk one root-to-leaf path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "isw/bits.hpp"
#include "isw/core.hpp"

namespace isw {

class SumTree {
 public:
  explicit SumTree(std::span<const std::uint32_t> counts);
  explicit SumTree(const IswState& state) : SumTree(state.counts()) {}

  /// Number of real letters m.
  std::size_t size() const noexcept { return m_; }
  /// Leaf slots including zero padding, bit_ceil(m).
  std::size_t leaf_capacity() const noexcept { return leaves_; }
  /// Levels from leaves (1) to root, log2(leaf_capacity) + 1.
  std::size_t level_count() const noexcept { return depth_ + 1; }
  std::size_t node_count() const noexcept { return 2 * leaves_ - 1; }

  std::uint64_t total() const noexcept { return nodes_[1]; }
  std::uint32_t count(Symbol j) const;
  /// The m real leaf counts.
  std::span<const std::uint32_t> leaves() const noexcept {
    return {nodes_.data() + leaves_, m_};
  }
  /// Level k, 1 = padded leaves, level_count() = the root alone.
  std::span<const std::uint32_t> level(std::size_t k) const;

  /// Leaf j with prefix(j) <= z < prefix(j + 1). z in [0, total()).
  Symbol select(std::uint64_t z) const;
  /// Same walk with leaf weight scale*count + bias (padding leaves weigh 0).
  /// z in [0, scale*total() + bias*size()).
  Symbol select_weighted(std::uint64_t z, std::uint64_t scale, std::uint64_t bias) const;
  /// Sum of the counts of leaves 0..j-1.
  std::uint64_t prefix_sum(Symbol j) const;

  /// Adds delta (+1 or -1) to leaf j and every ancestor.
  void update(Symbol j, int delta);

  /// Nodes read by select or written by update since the last reset.
  std::uint64_t touched_nodes() const noexcept { return touched_; }
  void reset_touch_counter() const noexcept { touched_ = 0; }

  /// node_count() counters of counter_width(total()) bits.
  std::uint64_t storage_bits() const noexcept;

  friend bool operator==(const SumTree& a, const SumTree& b) noexcept {
    return a.m_ == b.m_ && a.nodes_ == b.nodes_;
  }

 private:
  std::size_t m_ = 0;
  std::size_t leaves_ = 0;
  std::size_t depth_ = 0;
  std::vector<std::uint32_t> nodes_;  // implicit heap, root at 1, leaves at [leaves_, 2*leaves_)
  mutable std::uint64_t touched_ = 0;
};

/// The same transition as isw_step, driven through the tree. Given the same
/// bits it produces exactly the counts isw_step produces. Returns the evicted letter.
Symbol isw_step_fast(SumTree& tree, Symbol arrived, BitSource& bits);

}  // namespace isw
