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

// Adaptive range coder driven by an order-mu ContextModel. Encoder and decoder
// keep their windows in lockstep because they draw eviction bits from the same
// source: either a PRNG seeded from the header or the compressed bytes
// themselves fed through a small register.
//
// Stream layout, integers big-endian:
//   "ISW1" | version u8 | m u16 | mu u8 | w u32 | rng_mode u8 | seed u64 |
//   symbol_count u64 | mu literal letters, ceil(log2 m) bits each, MSB first,
//   zero-padded to a byte | range-coded payload

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "isw/bits.hpp"
#include "isw/context.hpp"
#include "isw/core.hpp"

namespace isw {

enum class RngMode : std::uint8_t { seeded_prng = 0, self_feed = 1 };

inline constexpr std::uint8_t kStreamVersion = 1;
inline constexpr std::uint64_t kMaxFrequencyTotal = 1ull << 24;

struct CoderConfig {
  std::size_t m = 256;
  std::size_t order = 0;
  std::uint32_t w = 4096;
  RngMode rng_mode = RngMode::seeded_prng;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless 2 <= m <= 65535, order <= 255,
  /// w >= 1, 2w + m <= 2^24 and m^order fits in 64 bits.
  void validate() const;

  friend bool operator==(const CoderConfig&, const CoderConfig&) = default;
};

struct StreamHeader {
  CoderConfig config;
  std::uint64_t symbol_count = 0;  // including the literal ones; may be < mu (padded literals)
  std::vector<Symbol> literals;

  std::vector<std::uint8_t> serialize() const;
  /// Parses a header from the front of `bytes`; `consumed` receives its size.
  /// Throws CorruptStream.
  static StreamHeader parse(std::span<const std::uint8_t> bytes, std::size_t& consumed);

  friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

class CorruptStream : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Self-feed bits. A 64-bit register starts at the seed; every compressed byte
/// is shifted in as it is emitted (encoder) or consumed (decoder) and adds 8
/// fresh bits, up to 64. A request takes the next fresh bit, MSB first, of the
/// whitened register. With no fresh bits left the register takes one
/// xorshift step and all 64 bits count as fresh again.
class FeedbackBitSource final : public BitSource {
 public:
  explicit FeedbackBitSource(std::uint64_t seed) : register_(seed) {}

  void push_byte(std::uint8_t byte) noexcept;
  bool next_bit() override;
  BitSourceMode mode() const noexcept override { return BitSourceMode::self_feed; }

  std::uint64_t register_value() const noexcept { return register_; }
  unsigned fresh_bits() const noexcept { return fresh_; }
  std::uint64_t feedback_steps() const noexcept { return steps_; }

  static std::uint64_t whiten(std::uint64_t x) noexcept;
  static std::uint64_t recycle(std::uint64_t x) noexcept;

 private:
  std::uint64_t register_;
  unsigned fresh_ = 64;
  std::uint64_t steps_ = 0;
};

/// Reads `count` bits from a self-feed source; any other mode is an error.
std::uint64_t next_shared_bits(BitSource& bits, unsigned count);

/// Observation hooks for coupled encoder/decoder runs.
struct CoderProbe {
  /// After letter t (0-based, literals excluded) has been coded and its window stepped.
  std::function<void(std::size_t, const ContextModel&)> on_symbol;
  /// Every eviction bit, in the order drawn.
  std::function<void(bool)> on_bit;
};

std::vector<std::uint8_t> encode(std::span<const Symbol> symbols, const CoderConfig& config,
                                 const CoderProbe* probe = nullptr);

/// Throws CorruptStream on a bad header, truncation or an impossible code value.
std::vector<Symbol> decode(std::span<const std::uint8_t> stream, const CoderProbe* probe = nullptr);

}  // namespace isw
