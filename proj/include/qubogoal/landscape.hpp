#pragma once

#include <cstdint>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "qubogoal/rng.hpp"

namespace qubogoal {

/// 100 decimal digits; every landscape figure is reported well past the
/// 50-digit mark. At n ~ 10^4 both 2^n and the exp arguments are far outside
/// double range, so all four formulas run in arbitrary precision.
using BigFloat = boost::multiprecision::cpp_bin_float_100;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::uint32_t kMaxLandscapeN = 10'000;

namespace detail {

inline void check_landscape_args(std::uint32_t n, std::uint32_t l) {
  if (n < 1 || n > kMaxLandscapeN)
    throw std::invalid_argument("landscape: n outside [1, 10^4]");
  if (l > n) throw std::invalid_argument("landscape: l > n");
}

}  // namespace detail

/// Sum of binomial coefficients C(n, 0) + ... + C(n, l), exact.
inline BigInt binomial_prefix_sum(std::uint32_t n, std::uint32_t l) {
  detail::check_landscape_args(n, l);
  BigInt sum = 1;  // C(n, 0)
  BigInt c = 1;
  for (std::uint32_t i = 1; i <= l; ++i) {
    c = c * (n - i + 1) / i;  // exact: C(n,i-1)*(n-i+1) is divisible by i
    sum += c;
  }
  return sum;
}

/// Local-optima count estimated as the ratio of the solution-space size to
/// the size of the set reachable in at most l moves.
inline BigFloat estimate_ratio(const BigFloat& space_size, const BigFloat& reachable_size) {
  if (space_size <= 0 || reachable_size <= 0)
    throw std::invalid_argument("estimate_ratio: sizes must be positive");
  return space_size / reachable_size;
}

/// The QUBO specialization of the ratio estimate, exact: 2^n / sum_{i<=l} C(n,i).
inline Rational estimate_binomial_exact(std::uint32_t n, std::uint32_t l) {
  detail::check_landscape_args(n, l);
  return Rational(BigInt(1) << n, binomial_prefix_sum(n, l));
}

inline BigFloat estimate_binomial(std::uint32_t n, std::uint32_t l) {
  const Rational r = estimate_binomial_exact(n, l);
  return BigFloat(boost::multiprecision::numerator(r)) /
         BigFloat(boost::multiprecision::denominator(r));
}

/// Upper bound on the binomial prefix sum, exactly as printed:
/// 2^(n-1) * exp(-(n-2l-2)^2 / (4(1+l-n))). The denominator is negative for
/// l <= n-2, making the exponent nonnegative; the equivalent positive form
/// (n-2l-2)^2 / (4(n-l-1)) is the one the closed-form estimate divides by.
inline BigFloat binomial_sum_bound(std::uint32_t n, std::uint32_t l) {
  detail::check_landscape_args(n, l);
  if (l + 2 > n) throw std::invalid_argument("binomial_sum_bound: requires l <= n-2");
  const std::int64_t a = static_cast<std::int64_t>(n) - 2 * static_cast<std::int64_t>(l) - 2;
  const std::int64_t denom = 4 * (1 + static_cast<std::int64_t>(l) - static_cast<std::int64_t>(n));
  const BigFloat exponent = -(BigFloat(a) * a) / BigFloat(denom);
  return boost::multiprecision::ldexp(BigFloat(1), static_cast<int>(n) - 1) *
         boost::multiprecision::exp(exponent);
}

/// Closed-form local-optima estimate 2 exp(-(n-2l-2)^2 / (4(n-l-1))),
/// obtained by substituting the prefix-sum bound into the binomial estimate.
/// Strictly increasing in l while n >= 2l+2, peaking at exactly 2.
inline BigFloat estimate_closed_form(std::uint32_t n, std::uint32_t l) {
  detail::check_landscape_args(n, l);
  if (l + 2 > n) throw std::invalid_argument("estimate_closed_form: requires l <= n-2");
  const std::int64_t a = static_cast<std::int64_t>(n) - 2 * static_cast<std::int64_t>(l) - 2;
  const std::int64_t denom = 4 * (static_cast<std::int64_t>(n) - static_cast<std::int64_t>(l) - 1);
  const BigFloat exponent = -(BigFloat(a) * a) / BigFloat(denom);
  return 2 * boost::multiprecision::exp(exponent);
}

enum class EstimateMethod { ratio, binomial, closed_form };

/// A local-optima estimate together with the inputs that produced it.
struct LandscapeEstimate {
  std::uint32_t n;
  std::uint32_t l;
  BigFloat estimate;
  EstimateMethod method;
};

inline LandscapeEstimate make_estimate(std::uint32_t n, std::uint32_t l, EstimateMethod m) {
  switch (m) {
    case EstimateMethod::ratio:
    case EstimateMethod::binomial:
      return {n, l, estimate_binomial(n, l), m};
    case EstimateMethod::closed_form:
      return {n, l, estimate_closed_form(n, l), m};
  }
  throw std::logic_error("make_estimate: unreachable");
}

}  // namespace qubogoal
