#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qubogoal {

/// Fixed-length packed binary vector. Bit i lives in word i/64 at position
/// i%64. The canonical encoding (hex of little-endian bytes) is injective
/// over bit patterns of a given length and is the key used for duplicate
/// removal and deterministic tie-breaking.
class BitVector {
 public:
  BitVector() = default;

  explicit BitVector(std::uint32_t n) : n_(n), words_((n + 63) / 64, 0) {}

  /// Parses "0101..." with variable 0 first.
  static BitVector from_string(const std::string& s) {
    BitVector v(static_cast<std::uint32_t>(s.size()));
    for (std::uint32_t i = 0; i < v.n_; ++i) {
      if (s[i] == '1') {
        v.set(i, true);
      } else if (s[i] != '0') {
        throw std::invalid_argument("BitVector::from_string: invalid character");
      }
    }
    return v;
  }

  std::uint32_t size() const { return n_; }

  bool test(std::uint32_t i) const {
    check_index(i);
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  void set(std::uint32_t i, bool value) {
    check_index(i);
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  void flip(std::uint32_t i) {
    check_index(i);
    words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
  }

  /// Hamming weight.
  std::uint32_t popcount() const {
    std::uint32_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::uint32_t>(std::popcount(w));
    return c;
  }

  /// "0101..." with variable 0 first.
  std::string to_string() const {
    std::string s(n_, '0');
    for (std::uint32_t i = 0; i < n_; ++i)
      if (test(i)) s[i] = '1';
    return s;
  }

  /// Canonical hex encoding: ceil(n/8) little-endian bytes, two lowercase
  /// digits each, high nibble first within a byte.
  std::string to_hex() const {
    static const char* digits = "0123456789abcdef";
    const std::uint32_t nbytes = (n_ + 7) / 8;
    std::string s;
    s.reserve(2 * nbytes);
    for (std::uint32_t b = 0; b < nbytes; ++b) {
      const std::uint8_t byte = byte_at(b);
      s.push_back(digits[byte >> 4]);
      s.push_back(digits[byte & 0xF]);
    }
    return s;
  }

  static BitVector from_hex(const std::string& hex, std::uint32_t n) {
    const std::uint32_t nbytes = (n + 7) / 8;
    if (hex.size() != 2 * nbytes)
      throw std::invalid_argument("BitVector::from_hex: length mismatch");
    BitVector v(n);
    for (std::uint32_t b = 0; b < nbytes; ++b) {
      const int hi = hex_digit(hex[2 * b]);
      const int lo = hex_digit(hex[2 * b + 1]);
      const std::uint64_t byte = static_cast<std::uint64_t>((hi << 4) | lo);
      v.words_[b >> 3] |= byte << (8 * (b & 7));
    }
    // Bits beyond n must be zero or the encoding would not be injective.
    if (n % 64 != 0 && !v.words_.empty()) {
      const std::uint64_t tail_mask = ~std::uint64_t{0} << (n % 64);
      if ((v.words_.back() & tail_mask) != 0)
        throw std::invalid_argument("BitVector::from_hex: nonzero padding bits");
    }
    return v;
  }

  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

  /// Total order matching ascending canonical (byte-wise) encoding.
  friend std::strong_ordering operator<=>(const BitVector& a, const BitVector& b) {
    if (a.n_ != b.n_) return a.n_ <=> b.n_;
    const std::uint32_t nbytes = (a.n_ + 7) / 8;
    for (std::uint32_t i = 0; i < nbytes; ++i) {
      const auto c = a.byte_at(i) <=> b.byte_at(i);
      if (c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ n_;
    for (std::uint64_t w : words_) {
      h ^= w;
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return h;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  void check_index(std::uint32_t i) const {
    if (i >= n_) throw std::out_of_range("BitVector: index out of range");
  }

  std::uint8_t byte_at(std::uint32_t b) const {
    return static_cast<std::uint8_t>(words_[b >> 3] >> (8 * (b & 7)));
  }

  static int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("BitVector::from_hex: invalid hex digit");
  }

  std::uint32_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitVectorHash {
  std::uint64_t operator()(const BitVector& v) const { return v.hash(); }
};

}  // namespace qubogoal
