#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qubogoal/bitvector.hpp"
#include "qubogoal/qubo.hpp"
#include "qubogoal/rng.hpp"

namespace qubogoal {

/// Pseudo-Boolean polynomial of degree at most 4 over binary variables,
/// keyed by sorted index sets (x_i^2 = x_i is absorbed on insertion). The
/// empty set is the constant term.
class PseudoBooleanPoly {
 public:
  using Key = std::vector<std::uint32_t>;

  explicit PseudoBooleanPoly(std::uint32_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("PseudoBooleanPoly: n must be positive");
  }

  std::uint32_t n() const { return n_; }
  const std::map<Key, std::int64_t>& terms() const { return terms_; }

  std::uint32_t degree() const {
    std::size_t d = 0;
    for (const auto& [key, coeff] : terms_) d = std::max(d, key.size());
    return static_cast<std::uint32_t>(d);
  }

  /// Adds coeff * product of the given variables; duplicate indices are
  /// absorbed, zero results are erased.
  void add_term(Key vars, std::int64_t coeff) {
    for (std::uint32_t v : vars)
      if (v >= n_) throw std::invalid_argument("PseudoBooleanPoly: index out of range");
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (vars.size() > 4)
      throw std::invalid_argument("PseudoBooleanPoly: degree above 4 not supported");
    const Int128 sum = Int128(term_coeff(vars)) + coeff;
    store(std::move(vars), sum);
  }

  std::int64_t term_coeff(const Key& sorted_vars) const {
    const auto it = terms_.find(sorted_vars);
    return it == terms_.end() ? 0 : it->second;
  }

  std::int64_t evaluate(const BitVector& x) const {
    if (x.size() != n_)
      throw std::invalid_argument("PseudoBooleanPoly: vector length mismatch");
    std::int64_t total = 0;
    for (const auto& [key, coeff] : terms_) {
      bool all = true;
      for (std::uint32_t v : key)
        if (!x.test(v)) {
          all = false;
          break;
        }
      if (all) total += coeff;
    }
    return total;
  }

  /// Sum of |coefficient| over all terms, constant included.
  Int128 coeff_magnitude_sum() const {
    Int128 s = 0;
    for (const auto& [key, coeff] : terms_) s += coeff < 0 ? -Int128(coeff) : Int128(coeff);
    return s;
  }

 private:
  friend PseudoBooleanPoly square_objective(const QuboInstance&, std::int64_t);

  void store(Key vars, const Int128& value) {
    if (value > INT64_MAX || value < INT64_MIN)
      throw std::overflow_error("PseudoBooleanPoly: coefficient overflow");
    if (value == 0) {
      terms_.erase(vars);
    } else {
      terms_[std::move(vars)] = static_cast<std::int64_t>(value);
    }
  }

  std::uint32_t n_;
  std::map<Key, std::int64_t> terms_;
};

/// Desk-scale guard: the squared objective has O(|coeffs|^2) terms.
inline constexpr std::uint32_t kMaxSquareN = 16;

/// Expands (x'Qx - t)^2 into an explicit quartic polynomial, with x_i^2 = x_i
/// absorbed and the t^2 constant included. The target is given in the
/// instance's original sense.
inline PseudoBooleanPoly square_objective(const QuboInstance& inst, std::int64_t t) {
  if (inst.n() > kMaxSquareN)
    throw std::invalid_argument("square_objective: instance above the n <= 16 guard");
  const std::int64_t t_internal = inst.to_internal(t);

  // (sum_k c_k prod(S_k))^2 over the term list with the constant -t appended.
  std::vector<std::pair<PseudoBooleanPoly::Key, std::int64_t>> parts;
  parts.reserve(inst.coeffs().size() + 1);
  for (const Triple& tr : inst.coeffs()) {
    if (tr.i == tr.j) {
      parts.push_back({{tr.i}, tr.q});
    } else {
      parts.push_back({{tr.i, tr.j}, tr.q});
    }
  }
  if (t_internal != 0) parts.push_back({{}, -t_internal});

  std::map<PseudoBooleanPoly::Key, Int128> acc;
  for (const auto& [ka, ca] : parts) {
    for (const auto& [kb, cb] : parts) {
      PseudoBooleanPoly::Key merged;
      merged.reserve(ka.size() + kb.size());
      std::set_union(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(merged));
      acc[std::move(merged)] += Int128(ca) * cb;
    }
  }

  PseudoBooleanPoly poly(inst.n());
  for (const auto& [key, value] : acc) poly.store(key, value);
  return poly;
}

/// The four quadratic terms of the Rosenberg gadget
/// M (x_i x_j - 2 x_i z - 2 x_j z + 3 z): zero when z = x_i x_j and at
/// least M otherwise.
inline std::array<std::pair<std::vector<std::uint32_t>, std::int64_t>, 4> rosenberg_penalty(
    std::uint32_t i, std::uint32_t j, std::uint32_t z, std::int64_t penalty) {
  if (penalty <= 0) throw std::invalid_argument("rosenberg_penalty: M must be positive");
  return {{{{i, j}, penalty},
           {{i, z}, -2 * penalty},
           {{j, z}, -2 * penalty},
           {{z}, 3 * penalty}}};
}

/// A QUBO over n + a variables whose minimum over the a auxiliaries equals
/// poly(x) + 0 for every x (offset carries poly's constant term, which the
/// instance format cannot store).
struct QuadratizationResult {
  QuboInstance qubo;
  std::int64_t offset;
  std::vector<std::array<std::uint32_t, 3>> aux_map;  // {z, i, j}
  std::int64_t penalty;
};

/// Sufficient penalty: 1 + sum of |coefficients| of the polynomial.
inline std::int64_t default_penalty(const PseudoBooleanPoly& poly) {
  const Int128 m = poly.coeff_magnitude_sum() + 1;
  if (m > INT64_MAX) throw std::overflow_error("default_penalty: penalty overflows 64 bits");
  return static_cast<std::int64_t>(m);
}

inline constexpr std::uint32_t kMaxAuxVars = 512;

/// Iterated Rosenberg reduction: substitute the most frequent product pair
/// of original variables occurring in degree >= 3 terms with a fresh
/// auxiliary until the polynomial is quadratic. With a sufficient penalty
/// (default 1 + sum |coefficients|), min over auxiliaries of the result
/// reproduces the input polynomial exactly.
inline QuadratizationResult reduce_to_qubo(const PseudoBooleanPoly& poly,
                                           std::int64_t penalty) {
  if (penalty <= 0) throw std::invalid_argument("reduce_to_qubo: M must be positive");
  const std::uint32_t n = poly.n();

  std::map<std::vector<std::uint32_t>, Int128> terms;
  for (const auto& [key, coeff] : poly.terms()) terms[key] = coeff;

  std::vector<std::array<std::uint32_t, 3>> aux;
  while (true) {
    // Pair frequencies over original variables in degree >= 3 terms. Under
    // the degree <= 4 invariant a term holds at most one auxiliary, so an
    // original pair always exists.
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> freq;
    for (const auto& [key, coeff] : terms) {
      if (key.size() < 3) continue;
      for (std::size_t a = 0; a < key.size(); ++a) {
        if (key[a] >= n) continue;
        for (std::size_t b = a + 1; b < key.size(); ++b) {
          if (key[b] >= n) continue;
          ++freq[{key[a], key[b]}];
        }
      }
    }
    if (freq.empty()) break;

    auto best = freq.begin();
    for (auto it = std::next(freq.begin()); it != freq.end(); ++it)
      if (it->second > best->second) best = it;  // ties fall to the smallest pair
    const auto [vi, vj] = best->first;

    if (aux.size() >= kMaxAuxVars)
      throw std::invalid_argument("reduce_to_qubo: auxiliary variable budget exceeded");
    const std::uint32_t z = n + static_cast<std::uint32_t>(aux.size());
    aux.push_back({z, vi, vj});

    std::map<std::vector<std::uint32_t>, Int128> next;
    for (const auto& [key, coeff] : terms) {
      if (key.size() >= 3 && std::binary_search(key.begin(), key.end(), vi) &&
          std::binary_search(key.begin(), key.end(), vj)) {
        std::vector<std::uint32_t> replaced;
        replaced.reserve(key.size() - 1);
        for (std::uint32_t v : key)
          if (v != vi && v != vj) replaced.push_back(v);
        replaced.push_back(z);  // z is larger than every existing index
        next[std::move(replaced)] += coeff;
      } else {
        next[key] += coeff;
      }
    }
    for (const auto& [key, coeff] : rosenberg_penalty(vi, vj, z, penalty))
      next[key] += coeff;
    terms = std::move(next);
  }

  // Assemble the quadratic instance; the constant term becomes the offset.
  std::int64_t offset = 0;
  std::vector<Triple> triples;
  triples.reserve(terms.size());
  for (const auto& [key, coeff] : terms) {
    if (coeff == 0) continue;
    if (coeff > INT64_MAX || coeff < INT64_MIN)
      throw std::overflow_error("reduce_to_qubo: coefficient overflow");
    const std::int64_t c = static_cast<std::int64_t>(coeff);
    if (key.empty()) {
      offset = c;
    } else if (key.size() == 1) {
      triples.push_back({key[0], key[0], c});
    } else if (key.size() == 2) {
      triples.push_back({key[0], key[1], c});
    } else {
      throw std::logic_error("reduce_to_qubo: reduction left a term above degree 2");
    }
  }
  const std::uint32_t total_vars = n + static_cast<std::uint32_t>(aux.size());
  return {QuboInstance(total_vars, triples, Sense::minimize, ""), offset, std::move(aux),
          penalty};
}

inline QuadratizationResult reduce_to_qubo(const PseudoBooleanPoly& poly) {
  return reduce_to_qubo(poly, default_penalty(poly));
}

}  // namespace qubogoal
