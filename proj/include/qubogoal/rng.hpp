#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace qubogoal {

/// Exact rational used for weights, densities and percentage targets.
using Rational = boost::multiprecision::cpp_rational;

/// 128-bit signed integer for achievement values ((f-t)^2 overflows 64 bits).
using Int128 = boost::multiprecision::int128_t;

/// SplitMix64 finalizer. Used to derive independent per-target seeds.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/// Seed for the k-th member of a seeded family of runs. Pinned so that
/// parallel and sequential executions agree bit-for-bit.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  return splitmix64_mix(base_seed + 0x9E3779B97F4A7C15ULL * (index + 1));
}

/// mt19937_64 with hand-rolled bounded draws. std::uniform_int_distribution
/// is implementation-defined, so all sampling here is pinned to the engine's
/// standard-specified output stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform draw in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % bound;
  }

  /// Uniform draw in [lo, hi], inclusive. Requires hi - lo < 2^63.
  std::int64_t uniform_in(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("Rng::uniform_in: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + below(span));
  }

  /// Bernoulli trial with exact rational probability: accepts iff a uniform
  /// 64-bit draw falls below p * 2^64, compared in exact integer arithmetic.
  bool bernoulli(const Rational& p) {
    using boost::multiprecision::cpp_int;
    if (p < 0 || p > 1) throw std::invalid_argument("Rng::bernoulli: p outside [0,1]");
    const std::uint64_t r = engine_();
    const cpp_int lhs = cpp_int(r) * boost::multiprecision::denominator(p);
    const cpp_int rhs = cpp_int(boost::multiprecision::numerator(p)) << 64;
    return lhs < rhs;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qubogoal
