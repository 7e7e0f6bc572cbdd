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

#include "isw/coder.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace isw {

namespace {

constexpr std::uint8_t kMagic[4] = {'I', 'S', 'W', '1'};
constexpr std::size_t kFixedHeaderBytes = 4 + 1 + 2 + 1 + 4 + 1 + 8 + 8;

// Carry-less range coder: 64-bit low and range, one byte out per shift.
constexpr std::uint64_t kTop = 1ull << 56;
constexpr std::uint64_t kBottom = 1ull << 32;

class RangeEncoder {
 public:
  RangeEncoder(std::vector<std::uint8_t>& out, std::function<void(std::uint8_t)> on_byte)
      : out_(out), on_byte_(std::move(on_byte)) {}

  void encode(std::uint64_t low, std::uint64_t width, std::uint64_t total) {
    range_ /= total;
    low_ += low * range_;
    range_ *= width;
    while ((low_ ^ (low_ + range_)) < kTop || (range_ < kBottom && ((range_ = (0 - low_) & (kBottom - 1)), true))) {
      const auto byte = static_cast<std::uint8_t>(low_ >> 56);
      out_.push_back(byte);
      if (on_byte_) on_byte_(byte);
      low_ <<= 8;
      range_ <<= 8;
    }
  }

  void flush() {
    for (int i = 0; i < 8; ++i) {
      out_.push_back(static_cast<std::uint8_t>(low_ >> 56));
      low_ <<= 8;
    }
  }

 private:
  std::vector<std::uint8_t>& out_;
  std::function<void(std::uint8_t)> on_byte_;
  std::uint64_t low_ = 0;
  std::uint64_t range_ = ~0ull;
};

class RangeDecoder {
 public:
  RangeDecoder(std::span<const std::uint8_t> payload, std::function<void(std::uint8_t)> on_byte)
      : payload_(payload), on_byte_(std::move(on_byte)) {
    for (int i = 0; i < 8; ++i) code_ = (code_ << 8) | next();
  }

  std::uint64_t target(std::uint64_t total) {
    step_ = range_ / total;
    const std::uint64_t value = (code_ - low_) / step_;
    if (value >= total) throw CorruptStream("code value outside the coding interval");
    return value;
  }

  void consume(std::uint64_t low, std::uint64_t width) {
    low_ += low * step_;
    range_ = step_ * width;
    while ((low_ ^ (low_ + range_)) < kTop || (range_ < kBottom && ((range_ = (0 - low_) & (kBottom - 1)), true))) {
      // The encoder emitted payload byte `shifts_` at this same shift.
      if (on_byte_) on_byte_(payload_[shifts_]);
      ++shifts_;
      code_ = (code_ << 8) | next();
      low_ <<= 8;
      range_ <<= 8;
    }
  }

 private:
  std::uint8_t next() {
    if (pos_ >= payload_.size()) throw CorruptStream("stream truncated");
    return payload_[pos_++];
  }

  std::span<const std::uint8_t> payload_;
  std::function<void(std::uint8_t)> on_byte_;
  std::size_t pos_ = 0;
  std::size_t shifts_ = 0;
  std::uint64_t low_ = 0;
  std::uint64_t range_ = ~0ull;
  std::uint64_t code_ = 0;
  std::uint64_t step_ = 1;
};

void put_be(std::vector<std::uint8_t>& out, std::uint64_t value, int bytes) {
  for (int i = bytes - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

std::uint64_t get_be(std::span<const std::uint8_t> in, std::size_t& pos, int bytes) {
  std::uint64_t value = 0;
  for (int i = 0; i < bytes; ++i) value = (value << 8) | in[pos++];
  return value;
}

// Forwards to another source, reporting each bit.
class RecordingBitSource final : public BitSource {
 public:
  RecordingBitSource(BitSource& inner, const std::function<void(bool)>& sink) : inner_(inner), sink_(sink) {}
  bool next_bit() override {
    const bool bit = inner_.next_bit();
    sink_(bit);
    return bit;
  }
  BitSourceMode mode() const noexcept override { return inner_.mode(); }

 private:
  BitSource& inner_;
  const std::function<void(bool)>& sink_;
};

// Owns the eviction bit source for one coding run.
struct SharedBits {
  SharedBits(const CoderConfig& config, const CoderProbe* probe) {
    if (config.rng_mode == RngMode::self_feed) {
      auto fb = std::make_unique<FeedbackBitSource>(config.seed);
      feedback = fb.get();
      base = std::move(fb);
    } else {
      base = std::make_unique<SeededBitSource>(config.seed);
    }
    if (probe && probe->on_bit) recorder = std::make_unique<RecordingBitSource>(*base, probe->on_bit);
  }

  BitSource& source() { return recorder ? *recorder : *base; }
  std::function<void(std::uint8_t)> byte_sink() {
    if (!feedback) return {};
    return [fb = feedback](std::uint8_t b) { fb->push_byte(b); };
  }

  std::unique_ptr<BitSource> base;
  std::unique_ptr<BitSource> recorder;
  FeedbackBitSource* feedback = nullptr;
};

}  // namespace

void CoderConfig::validate() const {
  if (m < 2 || m > 65535) throw std::invalid_argument("m must be in [2, 65535]");
  if (order > 255) throw std::invalid_argument("mu must be at most 255");
  if (w < 1) throw std::invalid_argument("w must be at least 1");
  if (2ull * w + m > kMaxFrequencyTotal) throw std::invalid_argument("2w + m exceeds 2^24");
  if (rng_mode != RngMode::seeded_prng && rng_mode != RngMode::self_feed)
    throw std::invalid_argument("unknown rng mode");
  std::uint64_t slots = 1;
  for (std::size_t i = 0; i < order; ++i) {
    if (slots > UINT64_MAX / m) throw std::invalid_argument("m^mu overflows 64 bits");
    slots *= m;
  }
}

std::vector<std::uint8_t> StreamHeader::serialize() const {
  config.validate();
  if (literals.size() != config.order) throw std::invalid_argument("header needs exactly mu literals");
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_be(out, kStreamVersion, 1);
  put_be(out, config.m, 2);
  put_be(out, config.order, 1);
  put_be(out, config.w, 4);
  put_be(out, static_cast<std::uint8_t>(config.rng_mode), 1);
  put_be(out, config.seed, 8);
  put_be(out, symbol_count, 8);

  const unsigned width = ceil_log2(config.m);
  std::uint32_t acc = 0;
  unsigned filled = 0;
  for (Symbol a : literals) {
    if (a >= config.m) throw std::out_of_range("literal symbol out of range");
    for (int b = static_cast<int>(width) - 1; b >= 0; --b) {
      acc = (acc << 1) | ((a >> b) & 1u);
      if (++filled == 8) {
        out.push_back(static_cast<std::uint8_t>(acc));
        acc = 0;
        filled = 0;
      }
    }
  }
  if (filled) out.push_back(static_cast<std::uint8_t>(acc << (8 - filled)));
  return out;
}

StreamHeader StreamHeader::parse(std::span<const std::uint8_t> bytes, std::size_t& consumed) {
  if (bytes.size() < kFixedHeaderBytes) throw CorruptStream("stream shorter than its header");
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) throw CorruptStream("bad magic");
  std::size_t pos = 4;
  if (get_be(bytes, pos, 1) != kStreamVersion) throw CorruptStream("unsupported format version");
  StreamHeader h;
  h.config.m = static_cast<std::size_t>(get_be(bytes, pos, 2));
  h.config.order = static_cast<std::size_t>(get_be(bytes, pos, 1));
  h.config.w = static_cast<std::uint32_t>(get_be(bytes, pos, 4));
  const auto mode = get_be(bytes, pos, 1);
  if (mode > 1) throw CorruptStream("unknown rng mode");
  h.config.rng_mode = static_cast<RngMode>(mode);
  h.config.seed = get_be(bytes, pos, 8);
  h.symbol_count = get_be(bytes, pos, 8);
  try {
    h.config.validate();
  } catch (const std::invalid_argument& e) {
    throw CorruptStream(std::string("bad header: ") + e.what());
  }

  const unsigned width = ceil_log2(h.config.m);
  const std::size_t literal_bytes = (h.config.order * width + 7) / 8;
  if (bytes.size() - pos < literal_bytes) throw CorruptStream("stream truncated in literals");
  std::size_t bit = 0;
  for (std::size_t i = 0; i < h.config.order; ++i) {
    Symbol a = 0;
    for (unsigned b = 0; b < width; ++b, ++bit) a = (a << 1) | ((bytes[pos + bit / 8] >> (7 - bit % 8)) & 1u);
    if (a >= h.config.m) throw CorruptStream("literal symbol out of range");
    h.literals.push_back(a);
  }
  consumed = pos + literal_bytes;
  return h;
}

void FeedbackBitSource::push_byte(std::uint8_t byte) noexcept {
  register_ = (register_ << 8) | byte;
  fresh_ = std::min(64u, fresh_ + 8);
}

bool FeedbackBitSource::next_bit() {
  if (fresh_ == 0) {
    register_ = recycle(register_);
    fresh_ = 64;
    ++steps_;
  }
  --fresh_;
  return (whiten(register_) >> fresh_) & 1u;
}

std::uint64_t FeedbackBitSource::whiten(std::uint64_t x) noexcept { return splitmix64(x); }

std::uint64_t FeedbackBitSource::recycle(std::uint64_t x) noexcept {
  if (x == 0) x = 0x9E3779B97F4A7C15ull;
  x ^= x << 13;
  x ^= x >> 7;
  x ^= x << 17;
  return x;
}

std::uint64_t next_shared_bits(BitSource& bits, unsigned count) {
  if (bits.mode() != BitSourceMode::self_feed) throw std::logic_error("shared bits need self-feed mode");
  return bits.next_bits(count);
}

std::vector<std::uint8_t> encode(std::span<const Symbol> symbols, const CoderConfig& config, const CoderProbe* probe) {
  config.validate();
  for (Symbol a : symbols)
    if (a >= config.m) throw std::out_of_range("symbol out of range");

  StreamHeader header;
  header.config = config;
  header.symbol_count = symbols.size();
  // An input shorter than the context is all literals, zero-padded.
  header.literals.assign(config.order, 0);
  std::copy_n(symbols.begin(), std::min(config.order, symbols.size()), header.literals.begin());
  std::vector<std::uint8_t> out = header.serialize();

  ContextModel model(config.m, config.order, config.w, header.literals);
  SharedBits bits(config, probe);
  RangeEncoder coder(out, bits.byte_sink());
  for (std::size_t t = config.order; t < symbols.size(); ++t) {
    const auto slot = model.interval(symbols[t]);
    coder.encode(slot.low, slot.width, slot.total);
    model.step(symbols[t], bits.source());
    if (probe && probe->on_symbol) probe->on_symbol(t - config.order, model);
  }
  coder.flush();
  return out;
}

std::vector<Symbol> decode(std::span<const std::uint8_t> stream, const CoderProbe* probe) {
  std::size_t header_size = 0;
  const StreamHeader header = StreamHeader::parse(stream, header_size);
  const CoderConfig& config = header.config;
  const auto payload = stream.subspan(header_size);

  // Every coded letter costs at least log2(total / (2w + 1)) bits.
  const std::uint64_t total = 2ull * config.w + config.m;
  const double min_bits = std::log2(static_cast<double>(total) / static_cast<double>(2ull * config.w + 1));
  const double coded = static_cast<double>(header.symbol_count - std::min<std::uint64_t>(header.symbol_count, config.order));
  if (coded * min_bits > 8.0 * static_cast<double>(payload.size()) + 128.0)
    throw CorruptStream("symbol count inconsistent with payload size");

  std::vector<Symbol> out(header.literals.begin(),
                          header.literals.begin() + static_cast<std::ptrdiff_t>(
                                                        std::min<std::uint64_t>(header.symbol_count, config.order)));
  out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(header.symbol_count, 1u << 24)));
  ContextModel model(config.m, config.order, config.w, header.literals);
  SharedBits bits(config, probe);
  RangeDecoder coder(payload, bits.byte_sink());
  for (std::uint64_t t = config.order; t < header.symbol_count; ++t) {
    const Symbol a = model.symbol_at(coder.target(total));
    const auto slot = model.interval(a);
    coder.consume(slot.low, slot.width);
    model.step(a, bits.source());
    out.push_back(a);
    if (probe && probe->on_symbol) probe->on_symbol(static_cast<std::size_t>(t - config.order), model);
  }
  return out;
}

}  // namespace isw
