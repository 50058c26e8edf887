#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "qubogoal/qubo.hpp"
#include "qubogoal/solution.hpp"
#include "qubogoal/targets.hpp"

namespace qubogoal {

/// Hard cap on 2^n enumeration work.
struct OracleLimit {
  std::uint32_t max_n = 24;
};

namespace detail {

inline void check_oracle_size(const QuboInstance& inst, const OracleLimit& limit) {
  if (limit.max_n > 30) throw std::invalid_argument("OracleLimit: max_n must be <= 30");
  if (inst.n() > limit.max_n)
    throw std::invalid_argument("oracle: instance too large for exhaustive enumeration");
}

/// Applies fn(bits, f_internal) to every vector of the instance's space,
/// visiting in binary-reflected Gray order so each step is one incremental
/// flip.
template <class Fn>
void gray_sweep(const QuboInstance& inst, Fn&& fn) {
  EvalState state(inst, BitVector(inst.n()));
  fn(state.bits(), state.objective());
  const std::uint64_t total = std::uint64_t{1} << inst.n();
  for (std::uint64_t k = 1; k < total; ++k) {
    state.apply_flip(static_cast<std::uint32_t>(std::countr_zero(k)));
    fn(state.bits(), state.objective());
  }
}

}  // namespace detail

/// Exhaustively enumerates every satisficing vector (achievement value
/// nonpositive under the target, given in original sense). Records carry
/// iter_found = 0; the set is sorted by descending original objective.
inline SolutionSet enumerate_satisficing(const QuboInstance& inst, const TargetSpec& target,
                                         const OracleLimit& limit = {}) {
  detail::check_oracle_size(inst, limit);
  const TargetSpec internal = internalize(target, inst.sense());

  SolutionSet out;
  out.context = {inst.n(), target_text(target), 0, inst.sense()};

  auto add = [&](const BitVector& x, std::int64_t f, AchievementValue af) {
    out.records.push_back({x, inst.to_original(f), std::move(af), 0, 0});
  };

  if (const ExactTarget* e = std::get_if<ExactTarget>(&internal)) {
    detail::gray_sweep(inst, [&](const BitVector& x, std::int64_t f) {
      const Int128 af = achievement_exact(f, e->t);
      if (af <= 0) add(x, f, AchievementValue(af));
    });
  } else if (const IntervalTarget* iv = std::get_if<IntervalTarget>(&internal)) {
    detail::gray_sweep(inst, [&](const BitVector& x, std::int64_t f) {
      const Int128 af = achievement_interval(f, iv->lb, iv->ub);
      if (af <= 0) add(x, f, AchievementValue(af));
    });
  } else {
    const auto& multi = std::get<WeightedMultiTarget>(internal);
    for (const auto& c : multi.components)
      if (c.instance->n() != inst.n())
        throw std::invalid_argument("oracle: component dimension does not match instance");
    // Component states advance in lockstep with the primary sweep.
    std::vector<EvalState> comps;
    comps.reserve(multi.components.size());
    for (const auto& c : multi.components) comps.emplace_back(*c.instance, BitVector(inst.n()));
    std::vector<std::int64_t> fs(comps.size());
    auto af_now = [&] {
      for (std::size_t k = 0; k < comps.size(); ++k) fs[k] = comps[k].objective();
      Rational total = 0;
      for (std::size_t k = 0; k < comps.size(); ++k) {
        const Int128 d = Int128(fs[k]) - multi.components[k].target;
        total += multi.components[k].weight * Rational(boost::multiprecision::cpp_int(d * d));
      }
      return total;
    };
    EvalState primary(inst, BitVector(inst.n()));
    auto visit = [&] {
      const Rational af = af_now();
      if (af <= 0) add(primary.bits(), primary.objective(), AchievementValue(af));
    };
    visit();
    const std::uint64_t total = std::uint64_t{1} << inst.n();
    for (std::uint64_t k = 1; k < total; ++k) {
      const auto i = static_cast<std::uint32_t>(std::countr_zero(k));
      primary.apply_flip(i);
      for (EvalState& s : comps) s.apply_flip(i);
      visit();
    }
  }

  sort_solutions(out, SolutionOrder::objective_desc);
  return out;
}

/// Number of vectors whose internal objective is <= (non-strict, default) or
/// < (strict) that of every other vector within Hamming distance l. With
/// l = n this is the number of global minimum vectors.
inline std::uint64_t count_local_optima(const QuboInstance& inst, std::uint32_t l,
                                        bool strict = false, const OracleLimit& limit = {}) {
  detail::check_oracle_size(inst, limit);
  const std::uint32_t n = inst.n();
  if (l < 1 || l > n) throw std::invalid_argument("count_local_optima: radius outside [1, n]");

  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<std::int64_t> f_table(total);
  std::uint64_t k = 0;
  detail::gray_sweep(inst, [&](const BitVector&, std::int64_t f) {
    f_table[k ^ (k >> 1)] = f;  // state after step k is the Gray code of k
    ++k;
  });

  if (l == n && !strict) {
    std::int64_t best = f_table[0];
    for (std::int64_t f : f_table)
      if (f < best) best = f;
    std::uint64_t count = 0;
    for (std::int64_t f : f_table)
      if (f == best) ++count;
    return count;
  }

  // All flip masks with popcount in [1, l], per popcount class.
  std::vector<std::uint64_t> masks;
  for (std::uint32_t d = 1; d <= l; ++d) {
    std::uint64_t mask = (std::uint64_t{1} << d) - 1;
    while (mask < total) {
      masks.push_back(mask);
      // Gosper's hack: next subset with the same popcount.
      const std::uint64_t c = mask & (~mask + 1);
      const std::uint64_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
  }

  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < total; ++x) {
    const std::int64_t fx = f_table[x];
    bool optimum = true;
    for (const std::uint64_t m : masks) {
      const std::int64_t fy = f_table[x ^ m];
      if (strict ? fy <= fx : fy < fx) {
        optimum = false;
        break;
      }
    }
    if (optimum) ++count;
  }
  return count;
}

/// Independent recheck used as the solver's soundness gate: from-scratch
/// evaluation, true iff the achievement value is nonpositive.
inline bool verify_solution(const QuboInstance& inst, const BitVector& x,
                            const TargetSpec& target) {
  if (x.size() != inst.n())
    throw std::invalid_argument("verify_solution: vector length does not match instance");
  const TargetSpec internal = internalize(target, inst.sense());
  if (const ExactTarget* e = std::get_if<ExactTarget>(&internal))
    return achievement_exact(evaluate(inst, x), e->t) <= 0;
  if (const IntervalTarget* iv = std::get_if<IntervalTarget>(&internal))
    return achievement_interval(evaluate(inst, x), iv->lb, iv->ub) <= 0;
  const auto& multi = std::get<WeightedMultiTarget>(internal);
  std::vector<std::int64_t> fs;
  fs.reserve(multi.components.size());
  for (const auto& c : multi.components) fs.push_back(evaluate(*c.instance, x));
  return achievement_multi(fs, multi) <= 0;
}

}  // namespace qubogoal
