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

#include "isw/context.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace isw {

namespace {

std::vector<std::uint32_t> checked_defaults(std::size_t m, std::uint32_t w) {
  if (m < 2) throw std::invalid_argument("alphabet size must be at least 2");
  if (w < 1) throw std::invalid_argument("window length must be at least 1");
  return balanced_counts(m, w);
}

}  // namespace

ContextModel::ContextModel(std::size_t m, std::size_t order, std::uint32_t w,
                           std::span<const Symbol> seed)
    : m_(m), order_(order), w_(w), context_(seed.begin(), seed.end()),
      fresh_(checked_defaults(m, w)) {
  if (seed.size() != order)
    throw std::invalid_argument("seed context must have exactly " + std::to_string(order) +
                                " letters");
  for (std::size_t i = 0; i < order; ++i) {
    if (slots_ > UINT64_MAX / m) throw std::invalid_argument("m^order overflows 64 bits");
    slots_ *= m;
  }
  for (Symbol a : context_)
    if (a >= m) throw std::out_of_range("seed context symbol out of range");
  key_ = key_of(context_, m_);
}

std::uint64_t ContextModel::key_of(std::span<const Symbol> word, std::size_t m) {
  std::uint64_t key = 0;
  for (Symbol a : word) key = key * m + a;
  return key;
}

const SumTree& ContextModel::current() const {
  const auto it = windows_.find(key_);
  return it == windows_.end() ? fresh_ : it->second;
}

Ratio ContextModel::probability(Symbol a) const {
  if (a >= m_) throw std::out_of_range("symbol out of range");
  return {2ull * current().count(a) + 1, 2ull * w_ + m_};
}

ContextModel::Interval ContextModel::interval(Symbol a) const {
  if (a >= m_) throw std::out_of_range("symbol out of range");
  const SumTree& tree = current();
  return {2 * tree.prefix_sum(a) + a, 2ull * tree.count(a) + 1, 2ull * w_ + m_};
}

Symbol ContextModel::symbol_at(std::uint64_t target) const {
  return current().select_weighted(target, 2, 1);
}

Symbol ContextModel::step(Symbol a, BitSource& bits) {
  if (a >= m_) throw std::out_of_range("symbol out of range");
  auto it = windows_.find(key_);
  if (it == windows_.end()) it = windows_.emplace(key_, fresh_).first;
  const Symbol evicted = isw_step_fast(it->second, a, bits);
  if (order_ > 0) {
    std::shift_left(context_.begin(), context_.end(), 1);
    context_.back() = a;
    key_ = (key_ % (slots_ / m_)) * m_ + a;
  }
  return evicted;
}

std::span<const std::uint32_t> ContextModel::window_counts(std::uint64_t key) const {
  if (key >= slots_) throw std::out_of_range("context key out of range");
  const auto it = windows_.find(key);
  return it == windows_.end() ? fresh_.leaves() : it->second.leaves();
}

}  // namespace isw
