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

#include "isw/sumtree.hpp"

#include <bit>
#include <stdexcept>

namespace isw {

SumTree::SumTree(std::span<const std::uint32_t> counts) : m_(counts.size()) {
  if (counts.empty()) throw std::invalid_argument("SumTree: empty count vector");
  leaves_ = std::bit_ceil(m_);
  depth_ = static_cast<std::size_t>(std::countr_zero(leaves_));
  nodes_.assign(2 * leaves_, 0);
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < m_; ++j) {
    nodes_[leaves_ + j] = counts[j];
    total += counts[j];
  }
  if (total > UINT32_MAX) throw std::invalid_argument("SumTree: total overflows 32 bits");
  for (std::size_t node = leaves_ - 1; node >= 1; --node)
    nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
}

std::uint32_t SumTree::count(Symbol j) const {
  if (j >= m_) throw std::out_of_range("leaf index out of range");
  return nodes_[leaves_ + j];
}

std::span<const std::uint32_t> SumTree::level(std::size_t k) const {
  if (k < 1 || k > level_count()) throw std::out_of_range("level index out of range");
  const std::size_t first = leaves_ >> (k - 1);
  return {nodes_.data() + first, first};
}

Symbol SumTree::select(std::uint64_t z) const {
  if (z >= total()) throw std::out_of_range("select: z outside [0, total)");
  std::size_t node = 1;
  ++touched_;
  while (node < leaves_) {
    const std::size_t left = 2 * node;
    if (z < nodes_[left]) {
      node = left;
    } else {
      z -= nodes_[left];
      node = left + 1;
    }
    ++touched_;
  }
  return node - leaves_;
}

Symbol SumTree::select_weighted(std::uint64_t z, std::uint64_t scale, std::uint64_t bias) const {
  if (z >= scale * total() + bias * m_) throw std::out_of_range("select_weighted: z out of range");
  std::size_t node = 1;
  std::size_t first_leaf = 0;   // first leaf under `node`
  std::size_t span = leaves_;   // leaves under `node`
  while (node < leaves_) {
    span /= 2;
    const std::size_t left = 2 * node;
    const std::size_t real = first_leaf >= m_ ? 0 : std::min(span, m_ - first_leaf);
    const std::uint64_t left_weight = scale * nodes_[left] + bias * real;
    if (z < left_weight) {
      node = left;
    } else {
      z -= left_weight;
      node = left + 1;
      first_leaf += span;
    }
  }
  return node - leaves_;
}

std::uint64_t SumTree::prefix_sum(Symbol j) const {
  if (j > m_) throw std::out_of_range("prefix_sum: index out of range");
  if (j == leaves_) return total();
  std::uint64_t sum = 0;
  for (std::size_t node = leaves_ + j; node > 1; node /= 2)
    if (node & 1u) sum += nodes_[node - 1];
  return sum;
}

void SumTree::update(Symbol j, int delta) {
  if (j >= m_) throw std::out_of_range("leaf index out of range");
  if (delta != 1 && delta != -1) throw std::invalid_argument("update: delta must be +1 or -1");
  std::size_t node = leaves_ + j;
  if (delta < 0 && nodes_[node] == 0) throw std::logic_error("update: leaf would become negative");
  if (delta > 0 && nodes_[1] == UINT32_MAX) throw std::overflow_error("update: total overflows");
  for (; node >= 1; node /= 2) {
    nodes_[node] = delta > 0 ? nodes_[node] + 1 : nodes_[node] - 1;
    ++touched_;
  }
}

std::uint64_t SumTree::storage_bits() const noexcept {
  return node_count() * static_cast<std::uint64_t>(counter_width(total()));
}

Symbol isw_step_fast(SumTree& tree, Symbol arrived, BitSource& bits) {
  if (arrived >= tree.size()) throw std::out_of_range("symbol out of range");
  const Symbol evicted = tree.select(draw_uniform(bits, tree.total()));
  tree.update(evicted, -1);
  tree.update(arrived, +1);
  return evicted;
}

}  // namespace isw
