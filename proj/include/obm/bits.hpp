#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace obm {

// splitmix64, the usual seed scrambler. Also used to derive per-trial seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Trial t of an experiment with base seed s draws from mix_seed(s, t).
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

class BitSource {
 public:
  virtual ~BitSource() = default;
  virtual bool next_bit() = 0;

  std::uint64_t bits_consumed() const { return bits_consumed_; }

  // k bits, first bit drawn becomes the most significant.
  std::uint64_t next_bits(int k) {
    std::uint64_t v = 0;
    for (int i = 0; i < k; ++i) v = (v << 1) | (next_bit() ? 1u : 0u);
    return v;
  }

  // Uniform value in [0, bound) by rejection sampling on bit_width(bound-1) bits.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
    if (bound == 1) return 0;
    const int w = std::bit_width(bound - 1);
    for (;;) {
      const std::uint64_t v = next_bits(w);
      if (v < bound) return v;
    }
  }

 protected:
  std::uint64_t bits_consumed_ = 0;
};

// Seeded PRNG bit stream with exact consumption accounting.
class MeteredBitSource final : public BitSource {
 public:
  explicit MeteredBitSource(std::uint64_t seed)
      : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  bool next_bit() override {
    if (buffered_ == 0) {
      word_ = engine_();
      buffered_ = 64;
    }
    const bool b = (word_ & 1u) != 0;
    word_ >>= 1;
    --buffered_;
    ++bits_consumed_;
    return b;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t word_ = 0;
  int buffered_ = 0;
};

// Replays a fixed bit string; running past the end is an error.
class FixedBitSource final : public BitSource {
 public:
  explicit FixedBitSource(std::vector<bool> bits) : bits_(std::move(bits)) {}

  bool next_bit() override {
    if (pos_ >= bits_.size())
      throw std::out_of_range("FixedBitSource: bit string exhausted");
    ++bits_consumed_;
    return bits_[pos_++];
  }

  bool exhausted() const { return pos_ == bits_.size(); }

 private:
  std::vector<bool> bits_;
  std::size_t pos_ = 0;
};

}  // namespace obm
