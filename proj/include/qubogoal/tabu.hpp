#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <future>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "qubogoal/qubo.hpp"
#include "qubogoal/rng.hpp"
#include "qubogoal/solution.hpp"
#include "qubogoal/targets.hpp"

namespace qubogoal {

struct StartAllZero {};
struct StartRandom {};
struct StartGiven {
  BitVector x;
};
using StartPolicy = std::variant<StartAllZero, StartRandom, StartGiven>;

/// Tabu search parameters. At least one of iter_limit / time_limit_ms must
/// be set; iteration-bounded runs are deterministic per seed, wall-time
/// bounded runs are not.
///
/// The tenure actually applied by run() is clamped to n/2 + 1 (see
/// effective_tenure): a tenure at or above n bars every variable within n
/// iterations and the walk collapses into a deterministic round-robin orbit
/// that stops exploring. The default of 10 was tuned on 2500-variable
/// instances, so the clamp only matters for small n.
struct SolverConfig {
  std::uint32_t tenure = 10;
  std::optional<std::uint64_t> iter_limit;
  std::optional<std::uint64_t> time_limit_ms;
  std::uint64_t seed = 0;
  bool aspiration = false;
  StartPolicy start = StartAllZero{};
};

/// The tenure run() applies for an n-variable instance.
inline std::uint32_t effective_tenure(std::uint32_t tenure, std::uint32_t n) {
  return std::max<std::uint32_t>(1, std::min(tenure, n / 2 + 1));
}

/// Recency memory over variables: i is tabu while current_iter < expiry[i].
/// A variable flipped at iteration k receives expiry k + tenure, so it is
/// barred at iterations k+1 .. k+tenure-1 and free again at k+tenure.
class TabuState {
 public:
  explicit TabuState(std::uint32_t n) : expiry_(n, 0) {}

  void begin_iteration(std::uint64_t k) { current_iter_ = k; }
  std::uint64_t current_iteration() const { return current_iter_; }

  bool is_tabu(std::uint32_t i) const { return current_iter_ < expiry_[i]; }
  std::uint64_t expiry(std::uint32_t i) const { return expiry_[i]; }

  void mark_flipped(std::uint32_t i, std::uint32_t tenure) {
    expiry_[i] = current_iter_ + tenure;
  }

  /// Directly pins an expiry; test and setup helper.
  void set_expiry(std::uint32_t i, std::uint64_t e) { expiry_[i] = e; }

  std::uint32_t tabu_count() const {
    std::uint32_t c = 0;
    for (std::uint64_t e : expiry_)
      if (current_iter_ < e) ++c;
    return c;
  }

  /// Fallback when every variable is tabu: smallest expiry, then lowest index.
  std::uint32_t oldest() const {
    std::uint32_t best = 0;
    for (std::uint32_t i = 1; i < expiry_.size(); ++i)
      if (expiry_[i] < expiry_[best]) best = i;
    return best;
  }

 private:
  std::vector<std::uint64_t> expiry_;
  std::uint64_t current_iter_ = 0;
};

/// Iteration count, best values seen, and wall time of a finished run.
struct RunStats {
  std::uint64_t iterations = 0;
  std::int64_t best_f = 0;  // original sense
  AchievementValue best_af;
  std::uint64_t wall_ms = 0;
};

namespace detail {

struct ExactAf {
  std::int64_t t;
  using Value = Int128;
  Value operator()(std::int64_t f) const { return achievement_exact(f, t); }
};

struct IntervalAf {
  std::int64_t lb, ub;
  using Value = Int128;
  Value operator()(std::int64_t f) const {
    const Int128 v = (Int128(f) - lb) * (Int128(f) - ub);
    return v;
  }
};

/// Least-AF admissible move. Ties are broken uniformly at random (reservoir
/// rule, one rng draw per tie), so the choice is deterministic per seed.
template <class CandidateAf>
std::uint32_t select_move_impl(std::uint32_t n, CandidateAf&& af_of, const TabuState& tabu,
                               Rng& rng, bool aspiration) {
  using Value = decltype(af_of(std::uint32_t{0}));
  std::optional<Value> best;
  std::uint32_t best_i = 0;
  std::uint64_t ties = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    Value af = af_of(i);
    const bool admissible = !tabu.is_tabu(i) || (aspiration && af <= 0);
    if (!admissible) continue;
    if (!best || af < *best) {
      best = std::move(af);
      best_i = i;
      ties = 1;
    } else if (af == *best) {
      ++ties;
      if (rng.below(ties) == 0) best_i = i;
    }
  }
  if (best) return best_i;
  return tabu.oldest();  // every variable tabu
}

/// Walk over a single objective: one EvalState plus an achievement map.
template <class Af>
class SingleWalk {
 public:
  using Value = typename Af::Value;

  SingleWalk(EvalState& state, Af af) : state_(&state), af_(af) {}

  std::uint32_t n() const { return state_->instance().n(); }
  const BitVector& bits() const { return state_->bits(); }
  std::int64_t objective_internal() const { return state_->objective(); }

  Value current_af() const { return af_(state_->objective()); }
  Value candidate_af(std::uint32_t i) const {
    return af_(state_->objective() + state_->gain(i));
  }
  void apply(std::uint32_t i) { state_->apply_flip(i); }

  /// From-scratch recomputation, independent of the incremental caches.
  std::pair<std::int64_t, Value> recompute(const BitVector& x) const {
    const std::int64_t f = evaluate(state_->instance(), x);
    return {f, af_(f)};
  }

 private:
  EvalState* state_;
  Af af_;
};

/// Walk over a weighted multi-target: one EvalState per component objective
/// plus one for the reporting instance, all sharing the same bit vector.
class MultiWalk {
 public:
  using Value = Rational;

  MultiWalk(EvalState& primary, std::vector<EvalState>& components,
            const WeightedMultiTarget& internal_target)
      : primary_(&primary), components_(&components), target_(&internal_target) {}

  std::uint32_t n() const { return primary_->instance().n(); }
  const BitVector& bits() const { return primary_->bits(); }
  std::int64_t objective_internal() const { return primary_->objective(); }

  Value current_af() const {
    Value total = 0;
    for (std::size_t k = 0; k < components_->size(); ++k)
      total += term(k, (*components_)[k].objective());
    return total;
  }

  Value candidate_af(std::uint32_t i) const {
    Value total = 0;
    for (std::size_t k = 0; k < components_->size(); ++k) {
      const EvalState& s = (*components_)[k];
      total += term(k, s.objective() + s.gain(i));
    }
    return total;
  }

  void apply(std::uint32_t i) {
    primary_->apply_flip(i);
    for (EvalState& s : *components_) s.apply_flip(i);
  }

  std::pair<std::int64_t, Value> recompute(const BitVector& x) const {
    Value total = 0;
    for (std::size_t k = 0; k < components_->size(); ++k)
      total += term(k, evaluate(*target_->components[k].instance, x));
    return {evaluate(primary_->instance(), x), total};
  }

 private:
  Value term(std::size_t k, std::int64_t f) const {
    const Int128 d = Int128(f) - target_->components[k].target;
    return target_->components[k].weight *
           Rational(boost::multiprecision::cpp_int(d * d));
  }

  EvalState* primary_;
  std::vector<EvalState>* components_;
  const WeightedMultiTarget* target_;
};

inline BitVector make_start(const StartPolicy& policy, std::uint32_t n, Rng& rng) {
  if (std::holds_alternative<StartAllZero>(policy)) return BitVector(n);
  if (std::holds_alternative<StartRandom>(policy)) {
    BitVector x(n);
    for (std::uint32_t i = 0; i < n; ++i)
      if (rng.below(2) == 1) x.set(i, true);
    return x;
  }
  const BitVector& given = std::get<StartGiven>(policy).x;
  if (given.size() != n)
    throw std::invalid_argument("start vector length does not match instance");
  return given;
}

inline void validate_config(const SolverConfig& cfg) {
  if (cfg.tenure < 1) throw std::invalid_argument("SolverConfig: tenure must be >= 1");
  if (!cfg.iter_limit && !cfg.time_limit_ms)
    throw std::invalid_argument("SolverConfig: set an iteration or time limit");
  if (cfg.iter_limit && *cfg.iter_limit == 0)
    throw std::invalid_argument("SolverConfig: iter_limit must be positive");
}

/// The search loop shared by all target kinds: select the admissible move
/// with least achievement value, flip, mark tabu, and collect satisficing
/// vectors with streaming duplicate removal. Every collected record is
/// re-verified from scratch before return.
template <class Walk>
SolutionSet run_loop(const QuboInstance& inst, const TargetSpec& original_target,
                     Walk& walk, const SolverConfig& cfg, Rng& rng,
                     std::ostream* trace, RunStats* stats) {
  using Value = typename Walk::Value;
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const auto deadline =
      cfg.time_limit_ms
          ? std::optional<Clock::time_point>(t0 + std::chrono::milliseconds(*cfg.time_limit_ms))
          : std::nullopt;
  // Per-solution wall times are only recorded for time-limited runs;
  // iteration-bounded runs pin them to 0 so solution files are byte-stable.
  const bool record_time = cfg.time_limit_ms.has_value();

  SolutionSet out;
  out.order = SolutionOrder::discovery;
  out.context = {inst.n(), target_text(original_target), cfg.seed, inst.sense()};

  const std::uint32_t tenure = effective_tenure(cfg.tenure, inst.n());
  TabuState tabu(inst.n());
  std::unordered_set<BitVector, BitVectorHash> seen;

  Value best_af = walk.current_af();
  std::int64_t best_f = walk.objective_internal();

  auto elapsed_ms = [&] {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count());
  };
  auto collect = [&](std::uint64_t iter) {
    const Value af = walk.current_af();
    if (!(af <= 0)) return;
    if (seen.insert(walk.bits()).second)
      out.records.push_back({walk.bits(), inst.to_original(walk.objective_internal()),
                             AchievementValue(af), iter,
                             record_time ? elapsed_ms() : 0});
  };

  collect(0);  // the start vector may already meet the target

  std::uint64_t iter = 0;
  while (true) {
    if (cfg.iter_limit && iter >= *cfg.iter_limit) break;
    if (deadline && Clock::now() >= *deadline) break;
    ++iter;
    tabu.begin_iteration(iter);
    const std::uint32_t flipped = select_move_impl(
        walk.n(), [&](std::uint32_t i) { return walk.candidate_af(i); }, tabu, rng,
        cfg.aspiration);
    walk.apply(flipped);
    tabu.mark_flipped(flipped, tenure);

    const Value af = walk.current_af();
    if (af < best_af) best_af = af;
    if (walk.objective_internal() < best_f) best_f = walk.objective_internal();
    if (trace)
      *trace << iter << ',' << flipped << ',' << inst.to_original(walk.objective_internal())
             << ',' << af << ',' << tabu.tabu_count() << '\n';
    collect(iter);
  }

  // Soundness gate: no incremental-state drift can leak into the output.
  for (const SolutionRecord& r : out.records) {
    const auto [f, af] = walk.recompute(r.x);
    if (inst.to_original(f) != r.f || !(AchievementValue(af) == r.af) || !(af <= 0))
      throw std::logic_error("tabu_search: incremental state drift detected on output");
  }

  if (stats) {
    stats->iterations = iter;
    stats->best_f = inst.to_original(best_f);
    stats->best_af = AchievementValue(best_af);
    stats->wall_ms = elapsed_ms();
  }
  return out;
}

}  // namespace detail

/// The non-tabu variable whose flip minimizes the achievement function
/// (with aspiration, a tabu move with af <= 0 is admissible). Ties break
/// uniformly at random; if every variable is tabu, the oldest is returned.
/// Exact and interval targets only; weighted multi-targets are driven
/// through run().
inline std::uint32_t select_move(const EvalState& state, const TabuState& tabu,
                                 const TargetSpec& target, Rng& rng,
                                 bool aspiration = false) {
  const TargetSpec internal = internalize(target, state.instance().sense());
  const std::uint32_t n = state.instance().n();
  if (const ExactTarget* e = std::get_if<ExactTarget>(&internal))
    return detail::select_move_impl(
        n,
        [&](std::uint32_t i) {
          return achievement_exact(state.objective() + state.gain(i), e->t);
        },
        tabu, rng, aspiration);
  if (const IntervalTarget* iv = std::get_if<IntervalTarget>(&internal))
    return detail::select_move_impl(
        n,
        [&](std::uint32_t i) {
          return achievement_interval(state.objective() + state.gain(i), iv->lb, iv->ub);
        },
        tabu, rng, aspiration);
  throw std::invalid_argument("select_move: weighted multi-targets require run()");
}

/// One-flip tabu search collecting all distinct satisficing solutions
/// encountered. Deterministic given a seed and an iteration limit. The
/// target is given in the instance's original sense.
inline SolutionSet run(const QuboInstance& inst, const TargetSpec& target,
                       const SolverConfig& cfg, std::ostream* trace = nullptr,
                       RunStats* stats = nullptr) {
  detail::validate_config(cfg);
  const TargetSpec internal = internalize(target, inst.sense());

  Rng rng(cfg.seed);
  BitVector start = detail::make_start(cfg.start, inst.n(), rng);

  if (const ExactTarget* e = std::get_if<ExactTarget>(&internal)) {
    EvalState state(inst, std::move(start));
    detail::SingleWalk<detail::ExactAf> walk(state, {e->t});
    return detail::run_loop(inst, target, walk, cfg, rng, trace, stats);
  }
  if (const IntervalTarget* iv = std::get_if<IntervalTarget>(&internal)) {
    EvalState state(inst, std::move(start));
    detail::SingleWalk<detail::IntervalAf> walk(state, {iv->lb, iv->ub});
    return detail::run_loop(inst, target, walk, cfg, rng, trace, stats);
  }

  const auto& multi = std::get<WeightedMultiTarget>(internal);
  for (const auto& c : multi.components)
    if (c.instance->n() != inst.n())
      throw std::invalid_argument("run: component dimension does not match instance");
  EvalState primary(inst, start);
  std::vector<EvalState> components;
  components.reserve(multi.components.size());
  for (const auto& c : multi.components) components.emplace_back(*c.instance, start);
  detail::MultiWalk walk(primary, components, multi);
  return detail::run_loop(inst, target, walk, cfg, rng, trace, stats);
}

/// Independent runs of run() for several targets, seeded per target with
/// derive_seed(cfg.seed, index). Results are identical to sequential
/// execution; threads share only the immutable instance. Per-target errors
/// are collected and rethrown after every sibling finishes.
inline std::vector<SolutionSet> run_parallel_targets(const QuboInstance& inst,
                                                     std::span<const TargetSpec> targets,
                                                     const SolverConfig& cfg,
                                                     std::vector<RunStats>* stats = nullptr) {
  std::vector<SolutionSet> results(targets.size());
  std::vector<RunStats> per_target_stats(targets.size());
  std::vector<std::exception_ptr> errors(targets.size());
  {
    std::vector<std::future<void>> pending;
    pending.reserve(targets.size());
    for (std::size_t k = 0; k < targets.size(); ++k) {
      pending.push_back(std::async(std::launch::async, [&, k] {
        try {
          SolverConfig per_target = cfg;
          per_target.seed = derive_seed(cfg.seed, k);
          results[k] = run(inst, targets[k], per_target, nullptr, &per_target_stats[k]);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }));
    }
    for (auto& f : pending) f.wait();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  if (stats) *stats = std::move(per_target_stats);
  return results;
}

}  // namespace qubogoal
