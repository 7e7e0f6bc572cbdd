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

#include "isw/window_models.hpp"

#include <algorithm>
#include <stdexcept>

namespace isw {

namespace {

void check_letters(std::size_t m, std::span<const Symbol> word) {
  if (m < 2) throw std::invalid_argument("alphabet size must be at least 2");
  if (word.empty()) throw std::invalid_argument("window length must be at least 1");
  for (Symbol a : word)
    if (a >= m) throw std::out_of_range("symbol out of range");
}

}  // namespace

TrueWindow::TrueWindow(std::size_t m, std::vector<Symbol> seed_word)
    : ring_(std::move(seed_word)), counts_(m, 0) {
  check_letters(m, ring_);
  for (Symbol a : ring_) ++counts_[a];
}

Symbol TrueWindow::push(Symbol a) {
  if (a >= counts_.size()) throw std::out_of_range("symbol out of range");
  const Symbol oldest = ring_[head_];
  --counts_[oldest];
  ++counts_[a];
  ring_[head_] = a;
  head_ = (head_ + 1) % ring_.size();
  return oldest;
}

std::vector<Symbol> TrueWindow::contents() const {
  std::vector<Symbol> out(ring_.begin() + static_cast<std::ptrdiff_t>(head_), ring_.end());
  out.insert(out.end(), ring_.begin(), ring_.begin() + static_cast<std::ptrdiff_t>(head_));
  return out;
}

std::uint64_t TrueWindow::storage_bits() const noexcept {
  return storage_bits(counts_.size(), ring_.size());
}

std::uint64_t TrueWindow::storage_bits(std::size_t m, std::uint64_t w) noexcept {
  return w * ceil_log2(m);
}

SwrreBoxes::SwrreBoxes(std::size_t m, std::vector<Symbol> boxes)
    : m_(m), boxes_(std::move(boxes)), touched_(boxes_.size(), false) {
  check_letters(m, boxes_);
}

std::size_t SwrreBoxes::step(Symbol a, BitSource& bits) {
  if (a >= m_) throw std::out_of_range("symbol out of range");
  const auto box = static_cast<std::size_t>(draw_uniform(bits, boxes_.size()));
  replace(box, a);
  return box;
}

void SwrreBoxes::replace(std::size_t box, Symbol a) {
  if (a >= m_) throw std::out_of_range("symbol out of range");
  if (box >= boxes_.size()) throw std::out_of_range("box index out of range");
  boxes_[box] = a;
  touched_[box] = true;
}

std::vector<std::uint32_t> SwrreBoxes::counts() const {
  std::vector<std::uint32_t> counts(m_, 0);
  for (Symbol a : boxes_) ++counts[a];
  return counts;
}

std::size_t SwrreBoxes::untouched_count() const noexcept {
  return static_cast<std::size_t>(std::count(touched_.begin(), touched_.end(), false));
}

}  // namespace isw
