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

// Sources of fair bits. Everything random in the library is pulled through a
// BitSource that the caller owns, so a run is replayable from its inputs.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace isw {

enum class BitSourceMode : std::uint8_t { seeded_prng, table, self_feed };

class BitSource {
 public:
  virtual ~BitSource() = default;

  virtual bool next_bit() = 0;
  virtual BitSourceMode mode() const noexcept = 0;

  /// Reads `count` bits (count <= 64) and returns them big-endian, first bit
  /// read is the most significant.
  std::uint64_t next_bits(unsigned count);
};

/// Bits from std::mt19937_64, each 64-bit output drained MSB first.
class SeededBitSource final : public BitSource {
 public:
  explicit SeededBitSource(std::uint64_t seed) : engine_(seed) {}

  bool next_bit() override;
  BitSourceMode mode() const noexcept override { return BitSourceMode::seeded_prng; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t word_ = 0;
  unsigned left_ = 0;
};

/// A fixed table of digits. Running past the end throws std::out_of_range.
class TableBitSource final : public BitSource {
 public:
  explicit TableBitSource(std::vector<bool> bits) : bits_(std::move(bits)) {}

  /// Unpacks bytes MSB first.
  static TableBitSource from_bytes(std::span<const std::uint8_t> bytes);

  bool next_bit() override;
  BitSourceMode mode() const noexcept override { return BitSourceMode::table; }

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bits_.size() - pos_; }

 private:
  std::vector<bool> bits_;
  std::size_t pos_ = 0;
};

/// ceil(log2 n) for n >= 1; the number of bits draw_uniform reads per try.
unsigned ceil_log2(std::uint64_t n) noexcept;

/// Uniform integer in [0, w). Powers of two consume exactly log2(w) bits;
/// other w reject draws >= w and retry. w == 1 consumes nothing.
std::uint64_t draw_uniform(BitSource& bits, std::uint64_t w);

/// SplitMix64 output function; used to derive independent per-trial seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace isw
