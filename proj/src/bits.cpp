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

#include "isw/bits.hpp"

#include <bit>
#include <stdexcept>

namespace isw {

std::uint64_t BitSource::next_bits(unsigned count) {
  if (count > 64) throw std::invalid_argument("next_bits: count > 64");
  std::uint64_t value = 0;
  for (unsigned i = 0; i < count; ++i) value = (value << 1) | (next_bit() ? 1u : 0u);
  return value;
}

bool SeededBitSource::next_bit() {
  if (left_ == 0) {
    word_ = engine_();
    left_ = 64;
  }
  --left_;
  return (word_ >> left_) & 1u;
}

TableBitSource TableBitSource::from_bytes(std::span<const std::uint8_t> bytes) {
  std::vector<bool> bits;
  bits.reserve(bytes.size() * 8);
  for (std::uint8_t b : bytes)
    for (int i = 7; i >= 0; --i) bits.push_back((b >> i) & 1u);
  return TableBitSource(std::move(bits));
}

bool TableBitSource::next_bit() {
  if (pos_ >= bits_.size()) throw std::out_of_range("TableBitSource exhausted");
  return bits_[pos_++];
}

unsigned ceil_log2(std::uint64_t n) noexcept {
  return n <= 1 ? 0u : static_cast<unsigned>(std::bit_width(n - 1));
}

std::uint64_t draw_uniform(BitSource& bits, std::uint64_t w) {
  if (w == 0) throw std::invalid_argument("draw_uniform: w must be positive");
  const unsigned u = ceil_log2(w);
  for (;;) {
    const std::uint64_t z = bits.next_bits(u);
    if (z < w) return z;
  }
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace isw
