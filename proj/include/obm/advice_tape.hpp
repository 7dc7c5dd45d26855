#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace obm {

struct TapeUnderrun : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Append-only bit string with a sequential read cursor. The oracle writes,
// the online algorithm reads; both ends account bits exactly.
class AdviceTape {
 public:
  AdviceTape() = default;
  explicit AdviceTape(std::vector<bool> bits) : bits_(std::move(bits)) {}

  std::uint64_t bits_written() const { return bits_.size(); }
  std::uint64_t bits_read() const { return cursor_; }
  const std::vector<bool>& bits() const { return bits_; }

  void rewind() { cursor_ = 0; }

  void write_bit(bool b) { bits_.push_back(b); }

  bool read_bit() {
    if (cursor_ >= bits_.size())
      throw TapeUnderrun("AdviceTape: read past end (" +
                         std::to_string(bits_.size()) + " bits written)");
    return bits_[cursor_++];
  }

  // Fixed width, most significant bit first.
  void write_fixed(std::uint64_t value, int width) {
    if (width < 0 || width > 64)
      throw std::invalid_argument("AdviceTape: bad field width");
    if (width < 64 && (value >> width) != 0)
      throw std::invalid_argument("AdviceTape: value does not fit field");
    for (int i = width - 1; i >= 0; --i) write_bit(((value >> i) & 1u) != 0);
  }

  std::uint64_t read_fixed(int width) {
    if (width < 0 || width > 64)
      throw std::invalid_argument("AdviceTape: bad field width");
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | (read_bit() ? 1u : 0u);
    return v;
  }

  // Self-delimited encoding of x >= 0: with L = bit length of x+1, emit
  // L-1 zeros followed by the L bits of x+1. Prefix-free, 2L-1 bits total.
  void write_self_delimited(std::uint64_t x) {
    if (x == UINT64_MAX)
      throw std::invalid_argument("AdviceTape: value too large");
    const int len = std::bit_width(x + 1);
    for (int i = 0; i < len - 1; ++i) write_bit(false);
    write_fixed(x + 1, len);
  }

  std::uint64_t read_self_delimited() {
    int zeros = 0;
    while (!read_bit()) ++zeros;
    std::uint64_t v = 1;
    for (int i = 0; i < zeros; ++i) v = (v << 1) | (read_bit() ? 1u : 0u);
    return v - 1;
  }

  static std::uint64_t self_delimited_length(std::uint64_t x) {
    return 2u * static_cast<std::uint64_t>(std::bit_width(x + 1)) - 1;
  }

  // "bits=<count>;<hex>", bits packed MSB-first into bytes, zero padded.
  std::string serialize() const {
    std::string out = "bits=" + std::to_string(bits_.size()) + ";";
    static const char* digits = "0123456789abcdef";
    for (std::size_t i = 0; i < bits_.size(); i += 8) {
      unsigned byte = 0;
      for (std::size_t j = 0; j < 8; ++j)
        byte = (byte << 1) | (i + j < bits_.size() && bits_[i + j] ? 1u : 0u);
      out += digits[byte >> 4];
      out += digits[byte & 0xF];
    }
    return out;
  }

  static AdviceTape deserialize(const std::string& text) {
    if (text.rfind("bits=", 0) != 0)
      throw std::invalid_argument("AdviceTape: expected 'bits=' prefix");
    const auto semi = text.find(';');
    if (semi == std::string::npos)
      throw std::invalid_argument("AdviceTape: missing ';'");
    std::uint64_t count = 0;
    try {
      count = std::stoull(text.substr(5, semi - 5));
    } catch (const std::exception&) {
      throw std::invalid_argument("AdviceTape: bad bit count");
    }
    const std::string hex = text.substr(semi + 1);
    if (hex.size() != (count + 7) / 8 * 2)
      throw std::invalid_argument("AdviceTape: hex length does not match count");
    std::vector<bool> bits;
    bits.reserve(count);
    auto nibble = [](char c) -> unsigned {
      if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
      if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
      if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
      throw std::invalid_argument("AdviceTape: bad hex digit");
    };
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::size_t byte_idx = static_cast<std::size_t>(i / 8) * 2;
      const unsigned byte = (nibble(hex[byte_idx]) << 4) | nibble(hex[byte_idx + 1]);
      bits.push_back(((byte >> (7 - i % 8)) & 1u) != 0);
    }
    return AdviceTape(std::move(bits));
  }

  friend bool operator==(const AdviceTape& x, const AdviceTape& y) {
    return x.bits_ == y.bits_;
  }

 private:
  std::vector<bool> bits_;
  std::size_t cursor_ = 0;
};

}  // namespace obm
