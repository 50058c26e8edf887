#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qubogoal/qubo.hpp"
#include "qubogoal/rng.hpp"

namespace qubogoal {

/// Seek binary vectors with x'Qx = t exactly.
struct ExactTarget {
  std::int64_t t;
};

/// Seek binary vectors with x'Qx in the closed interval [lb, ub].
struct IntervalTarget {
  std::int64_t lb;
  std::int64_t ub;

  IntervalTarget(std::int64_t lower, std::int64_t upper) : lb(lower), ub(upper) {
    if (lb > ub) throw std::invalid_argument("IntervalTarget: lb > ub");
  }
};

/// One goal of a weighted multi-objective target: instance Q_k, weight w_k,
/// target t_k (t_k in the component instance's original sense).
struct WeightedComponent {
  std::shared_ptr<const QuboInstance> instance;
  Rational weight;
  std::int64_t target;
};

/// Minimize sum over components of w_k * (x'Q_k x - t_k)^2.
struct WeightedMultiTarget {
  std::vector<WeightedComponent> components;

  explicit WeightedMultiTarget(std::vector<WeightedComponent> comps)
      : components(std::move(comps)) {
    if (components.empty())
      throw std::invalid_argument("WeightedMultiTarget: needs at least one component");
    const std::uint32_t n = components.front().instance->n();
    for (const auto& c : components) {
      if (!c.instance) throw std::invalid_argument("WeightedMultiTarget: null instance");
      if (c.instance->n() != n)
        throw std::invalid_argument("WeightedMultiTarget: component dimensions differ");
      if (c.weight <= 0)
        throw std::invalid_argument("WeightedMultiTarget: weights must be positive");
    }
  }
};

using TargetSpec = std::variant<ExactTarget, IntervalTarget, WeightedMultiTarget>;

/// Achievement-function value: exact 128-bit integer for exact/interval
/// targets, exact rational for weighted multi-target. Nonpositive exactly on
/// satisficing solutions.
class AchievementValue {
 public:
  AchievementValue() : value_(Int128(0)) {}
  AchievementValue(Int128 v) : value_(std::move(v)) {}
  AchievementValue(Rational v) : value_(std::move(v)) {}

  bool is_integer() const { return std::holds_alternative<Int128>(value_); }

  Rational as_rational() const {
    if (const Int128* i = std::get_if<Int128>(&value_)) return Rational(boost::multiprecision::cpp_int(*i));
    return std::get<Rational>(value_);
  }

  bool nonpositive() const {
    if (const Int128* i = std::get_if<Int128>(&value_)) return *i <= 0;
    return std::get<Rational>(value_) <= 0;
  }

  std::string str() const {
    std::ostringstream os;
    if (const Int128* i = std::get_if<Int128>(&value_)) {
      os << *i;
    } else {
      os << std::get<Rational>(value_);
    }
    return os.str();
  }

  /// Inverse of str(). A "/" selects the rational representation.
  static AchievementValue parse(const std::string& text) {
    try {
      if (text.find('/') != std::string::npos) return AchievementValue(Rational(text));
      return AchievementValue(Int128(text));
    } catch (const std::exception&) {
      throw std::invalid_argument("AchievementValue::parse: bad value '" + text + "'");
    }
  }

  // Comparisons are numeric across representations (5 == 5/1).
  friend bool operator==(const AchievementValue& a, const AchievementValue& b) {
    if (a.is_integer() && b.is_integer())
      return std::get<Int128>(a.value_) == std::get<Int128>(b.value_);
    return a.as_rational() == b.as_rational();
  }

  friend bool operator<(const AchievementValue& a, const AchievementValue& b) {
    if (a.is_integer() && b.is_integer())
      return std::get<Int128>(a.value_) < std::get<Int128>(b.value_);
    return a.as_rational() < b.as_rational();
  }

 private:
  std::variant<Int128, Rational> value_;
};

/// (f - t)^2, exact in 128 bits.
inline Int128 achievement_exact(std::int64_t f, std::int64_t t) {
  const Int128 d = Int128(f) - t;
  return d * d;
}

/// (f - lb)(f - ub), exact in 128 bits. Nonpositive iff lb <= f <= ub.
inline Int128 achievement_interval(std::int64_t f, std::int64_t lb, std::int64_t ub) {
  if (lb > ub) throw std::invalid_argument("achievement_interval: lb > ub");
  return (Int128(f) - lb) * (Int128(f) - ub);
}

/// Sum of w_k (f_k - t_k)^2 as an exact rational.
inline Rational achievement_multi(std::span<const std::int64_t> fs,
                                  const WeightedMultiTarget& spec) {
  if (fs.size() != spec.components.size())
    throw std::invalid_argument("achievement_multi: arity mismatch");
  Rational total = 0;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const Int128 d = Int128(fs[k]) - spec.components[k].target;
    total += spec.components[k].weight * Rational(boost::multiprecision::cpp_int(d * d));
  }
  return total;
}

/// Lemma-2 characterization: a vector is satisficing iff its achievement
/// value is nonpositive.
inline bool is_satisficing(const AchievementValue& af) { return af.nonpositive(); }

/// Converts an open interval (lb, ub) over an integral-coefficient objective
/// to the equivalent closed interval [lb+1, ub-1].
inline IntervalTarget open_to_closed_integral(std::int64_t lb, std::int64_t ub) {
  if (ub - lb < 2)
    throw std::invalid_argument("open_to_closed_integral: no integer strictly inside");
  return IntervalTarget(lb + 1, ub - 1);
}

/// Percentage-of-best-known target: round-half-away-from-zero of p * bks.
/// Requires p in (0, 1].
inline std::int64_t target_from_pct(std::int64_t bks, const Rational& p) {
  using boost::multiprecision::cpp_int;
  if (p <= 0 || p > 1) throw std::invalid_argument("target_from_pct: p outside (0,1]");
  const Rational product = Rational(bks) * p;
  const cpp_int num = boost::multiprecision::numerator(product);
  const cpp_int den = boost::multiprecision::denominator(product);  // > 0
  const cpp_int twice = 2 * num + (num >= 0 ? den : -den);          // 2*num +/- den
  cpp_int rounded = twice / (2 * den);  // truncates toward zero = half away from zero
  return static_cast<std::int64_t>(rounded);
}

/// Near-optimal band for lexicographic use: [f*, f* + delta].
inline IntervalTarget lexicographic_interval(std::int64_t f_star, std::int64_t delta) {
  if (delta < 0) throw std::invalid_argument("lexicographic_interval: delta < 0");
  return IntervalTarget(f_star, f_star + delta);
}

/// Maps a target given in original sense to the internal minimization sense
/// of an instance. Negating both objective and target leaves satisficing
/// outcomes unchanged; intervals swap and negate their bounds.
inline TargetSpec internalize(const TargetSpec& spec, Sense sense) {
  if (sense == Sense::minimize) return spec;
  if (const ExactTarget* e = std::get_if<ExactTarget>(&spec)) return ExactTarget{-e->t};
  if (const IntervalTarget* iv = std::get_if<IntervalTarget>(&spec))
    return IntervalTarget(-iv->ub, -iv->lb);
  // Weighted components internalize against their own instance's sense.
  WeightedMultiTarget multi = std::get<WeightedMultiTarget>(spec);
  for (auto& c : multi.components) c.target = c.instance->to_internal(c.target);
  return multi;
}

/// Canonical textual form (original sense): exact:T, interval:LB:UB, or
/// multi:W1:T1,W2:T2,... for weighted multi-targets.
inline std::string target_text(const TargetSpec& spec) {
  std::ostringstream os;
  if (const ExactTarget* e = std::get_if<ExactTarget>(&spec)) {
    os << "exact:" << e->t;
  } else if (const IntervalTarget* iv = std::get_if<IntervalTarget>(&spec)) {
    os << "interval:" << iv->lb << ':' << iv->ub;
  } else {
    const auto& multi = std::get<WeightedMultiTarget>(spec);
    os << "multi:";
    for (std::size_t k = 0; k < multi.components.size(); ++k) {
      if (k > 0) os << ',';
      os << multi.components[k].weight << ':' << multi.components[k].target;
    }
  }
  return os.str();
}

/// Parses a decimal or fraction literal ("0.85", "4/5", "-3") exactly.
inline Rational parse_rational(const std::string& text) {
  using boost::multiprecision::cpp_int;
  if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const cpp_int num(text.substr(0, slash));
      const cpp_int den(text.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator");
      return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(cpp_int(text));
    const std::string head = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.find_first_not_of("0123456789") != std::string::npos || frac.empty())
      throw std::invalid_argument("bad fraction digits");
    cpp_int den = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    const bool negative = !head.empty() && head[0] == '-';
    const std::string int_digits = (head == "-" || head.empty()) ? "0" : head;
    const cpp_int whole(int_digits);
    cpp_int num = (negative ? -whole : whole) * den + cpp_int(frac);
    if (negative) num = -num;
    return Rational(num, den);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("parse_rational: bad literal '" + text + "'");
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("parse_rational: bad literal '" + text + "'");
  }
}

/// An unresolved target as written on a command line. pct requires a
/// best-known value to resolve; the others map directly to a TargetSpec.
struct TargetRequest {
  enum class Kind { exact, interval, pct, lex };
  Kind kind;
  std::int64_t a = 0;  // exact: t; interval: lb; lex: f*
  std::int64_t b = 0;  // interval: ub; lex: delta
  Rational pct;        // pct: p

  /// Resolves to a concrete target, given the best-known value when needed.
  TargetSpec resolve(std::optional<std::int64_t> bks = std::nullopt) const {
    switch (kind) {
      case Kind::exact:
        return ExactTarget{a};
      case Kind::interval:
        return IntervalTarget(a, b);
      case Kind::lex:
        return lexicographic_interval(a, b);
      case Kind::pct:
        if (!bks.has_value())
          throw std::invalid_argument("pct target requires a best-known value");
        return ExactTarget{target_from_pct(*bks, pct)};
    }
    throw std::logic_error("TargetRequest::resolve: unreachable");
  }
};

/// Parses the textual forms exact:T, interval:LB:UB, pct:P, lex:FSTAR:DELTA.
inline TargetRequest parse_target_request(const std::string& text) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream is(text);
  while (std::getline(is, token, ':')) parts.push_back(token);
  auto to_i64 = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const std::int64_t v = std::stoll(s, &pos);
      if (pos != s.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("bad integer '" + s + "' in target '" + text + "'");
    }
  };
  if (parts.size() == 2 && parts[0] == "exact")
    return {TargetRequest::Kind::exact, to_i64(parts[1]), 0, Rational()};
  if (parts.size() == 3 && parts[0] == "interval")
    return {TargetRequest::Kind::interval, to_i64(parts[1]), to_i64(parts[2]), Rational()};
  if (parts.size() == 2 && parts[0] == "pct")
    return {TargetRequest::Kind::pct, 0, 0, parse_rational(parts[1])};
  if (parts.size() == 3 && parts[0] == "lex")
    return {TargetRequest::Kind::lex, to_i64(parts[1]), to_i64(parts[2]), Rational()};
  throw std::invalid_argument("unrecognized target form '" + text + "'");
}

}  // namespace qubogoal
