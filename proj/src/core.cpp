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

#include "isw/core.hpp"

#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

namespace isw {

namespace {

void check_shape(std::size_t m, std::uint32_t w) {
  if (m < 2) throw std::invalid_argument("alphabet size must be at least 2");
  if (w < 1) throw std::invalid_argument("window length must be at least 1");
}

}  // namespace

std::vector<std::uint32_t> balanced_counts(std::size_t m, std::uint32_t w) {
  if (m == 0) throw std::invalid_argument("balanced_counts: empty alphabet");
  std::vector<std::uint32_t> counts(m, static_cast<std::uint32_t>(w / m));
  const std::size_t rest = w % m;
  for (std::size_t i = 0; i < rest; ++i) ++counts[i];
  return counts;
}

unsigned counter_width(std::uint64_t w) noexcept {
  return static_cast<unsigned>(std::bit_width(w));
}

IswState::IswState(std::size_t m, std::uint32_t w) : w_(w) {
  check_shape(m, w);
  counts_ = balanced_counts(m, w);
}

IswState::IswState(std::size_t m, std::uint32_t w, std::span<const std::int64_t> initial) : w_(w) {
  check_shape(m, w);
  if (initial.size() != m)
    throw std::invalid_argument("initial counts: expected " + std::to_string(m) + " entries, got " +
                                std::to_string(initial.size()));
  std::int64_t sum = 0;
  for (std::int64_t c : initial) {
    if (c < 0) throw std::invalid_argument("initial counts must be nonnegative");
    sum += c;
  }
  if (sum != static_cast<std::int64_t>(w))
    throw std::invalid_argument("initial counts must sum to w");
  counts_.assign(initial.begin(), initial.end());
}

IswState::IswState(std::vector<std::uint32_t> counts) : counts_(std::move(counts)) {
  const std::uint64_t sum = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  if (sum > UINT32_MAX) throw std::invalid_argument("window length overflows 32 bits");
  w_ = static_cast<std::uint32_t>(sum);
  check_shape(counts_.size(), w_);
}

std::uint32_t IswState::count(Symbol a) const {
  if (a >= counts_.size()) throw std::out_of_range("symbol out of range");
  return counts_[a];
}

void IswState::apply(Symbol arrived, Symbol evicted) {
  if (arrived >= counts_.size() || evicted >= counts_.size())
    throw std::out_of_range("symbol out of range");
  if (counts_[evicted] == 0) throw std::logic_error("evicting a letter with zero count");
  --counts_[evicted];
  ++counts_[arrived];
}

std::uint64_t IswState::storage_bits() const noexcept {
  return counts_.size() * static_cast<std::uint64_t>(counter_width(w_));
}

Symbol select_naive(const IswState& state, std::uint64_t z) {
  if (z >= state.window_length()) throw std::out_of_range("select: z outside [0, w)");
  std::uint64_t upper = 0;  // Q_{j+1}
  const auto counts = state.counts();
  for (Symbol j = 0; j < counts.size(); ++j) {
    upper += counts[j];
    if (z < upper) return j;
  }
  throw std::logic_error("select: counts do not sum to w");
}

Symbol isw_step(IswState& state, Symbol arrived, BitSource& bits) {
  if (arrived >= state.alphabet_size()) throw std::out_of_range("symbol out of range");
  const Symbol evicted = select_naive(state, draw_uniform(bits, state.window_length()));
  state.apply(arrived, evicted);
  return evicted;
}

Symbol isw_step(IswState& state, Symbol arrived, BitSource& bits, const Selector& select) {
  if (arrived >= state.alphabet_size()) throw std::out_of_range("symbol out of range");
  const Symbol evicted = select(state, draw_uniform(bits, state.window_length()));
  state.apply(arrived, evicted);
  return evicted;
}

Ratio estimate_probability(const IswState& state, Symbol a) {
  return {2ull * state.count(a) + 1, 2ull * state.window_length() + state.alphabet_size()};
}

}  // namespace isw
