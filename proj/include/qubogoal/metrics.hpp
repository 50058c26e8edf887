#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qubogoal/bitvector.hpp"
#include "qubogoal/rng.hpp"
#include "qubogoal/solution.hpp"

namespace qubogoal {

/// Number of differing bits.
inline std::uint32_t hamming(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming: length mismatch");
  std::uint32_t d = 0;
  for (std::size_t w = 0; w < a.words().size(); ++w)
    d += static_cast<std::uint32_t>(std::popcount(a.words()[w] ^ b.words()[w]));
  return d;
}

/// Pairwise Hamming-distance statistics over a solution set. The mean is
/// exact; the median uses the midpoint average for even pair counts.
struct DiversityReport {
  std::uint64_t set_size = 0;
  std::uint64_t pair_count = 0;
  Rational mean;
  Rational median;
  std::uint32_t min = 0;
  std::uint32_t max = 0;

  friend bool operator==(const DiversityReport&, const DiversityReport&) = default;
};

inline DiversityReport diversity_report(const SolutionSet& set) {
  const std::size_t m = set.records.size();
  if (m < 2)
    throw std::invalid_argument("diversity_report: needs at least two solutions");

  std::vector<std::uint32_t> distances;
  distances.reserve(m * (m - 1) / 2);
  std::uint64_t sum = 0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const std::uint32_t d = hamming(set.records[a].x, set.records[b].x);
      distances.push_back(d);
      sum += d;
    }
  }
  std::sort(distances.begin(), distances.end());

  DiversityReport report;
  report.set_size = m;
  report.pair_count = distances.size();
  report.mean = Rational(sum, distances.size());
  const std::size_t mid = distances.size() / 2;
  report.median = distances.size() % 2 == 1
                      ? Rational(distances[mid])
                      : Rational(std::uint64_t{distances[mid - 1]} + distances[mid], 2);
  report.min = distances.front();
  report.max = distances.back();
  return report;
}

/// Decimal rendering of a rational, exact when it terminates within the
/// digit budget, otherwise rounded (half away from zero) at `digits` places.
inline std::string rational_to_decimal(const Rational& r, unsigned digits = 10) {
  using boost::multiprecision::cpp_int;
  cpp_int num = boost::multiprecision::numerator(r);
  const cpp_int den = boost::multiprecision::denominator(r);
  const bool negative = num < 0;
  if (negative) num = -num;
  cpp_int whole = num / den;
  cpp_int rem = num % den;
  std::string frac;
  for (unsigned k = 0; k < digits && rem != 0; ++k) {
    rem *= 10;
    frac.push_back(static_cast<char>('0' + static_cast<int>(rem / den)));
    rem %= den;
  }
  if (rem != 0) {  // round the last kept digit
    if (2 * rem >= den) {
      std::size_t k = frac.size();
      while (k > 0 && frac[k - 1] == '9') frac[--k] = '0';
      if (k == 0) {
        ++whole;
      } else {
        ++frac[k - 1];
      }
    }
  }
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  std::ostringstream os;
  if (negative && (whole != 0 || !frac.empty())) os << '-';
  os << whole;
  if (!frac.empty()) os << '.' << frac;
  return os.str();
}

inline std::string diversity_csv_header() {
  return "set_size,pair_count,mean_hamming,median_hamming,min_hamming,max_hamming";
}

inline std::string diversity_csv_row(const DiversityReport& r) {
  std::ostringstream os;
  os << r.set_size << ',' << r.pair_count << ',' << rational_to_decimal(r.mean) << ','
     << rational_to_decimal(r.median) << ',' << r.min << ',' << r.max;
  return os.str();
}

}  // namespace qubogoal
