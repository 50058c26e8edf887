#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qubogoal/bitvector.hpp"
#include "qubogoal/rng.hpp"

namespace qubogoal {

enum class Sense { minimize, maximize };

inline std::string to_string(Sense s) { return s == Sense::minimize ? "min" : "max"; }

inline Sense sense_from_string(const std::string& s) {
  if (s == "min" || s == "minimize") return Sense::minimize;
  if (s == "max" || s == "maximize") return Sense::maximize;
  throw std::invalid_argument("unknown sense: " + s);
}

/// One coefficient of x'Qx. Canonical form has i <= j and q != 0; an
/// off-diagonal triple carries the combined symmetric weight q_ij + q_ji,
/// a diagonal triple is the linear term (x_i^2 = x_i).
struct Triple {
  std::uint32_t i;
  std::uint32_t j;
  std::int64_t q;

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Total |q| budget accepted at construction. Keeps every objective value,
/// gain and 128-bit achievement value exactly representable.
inline constexpr std::int64_t kMaxCoeffMagnitudeSum = std::int64_t{1} << 62;

/// A QUBO instance: minimize (or maximize) x'Qx over binary vectors x.
///
/// Coefficients are stored internally in minimization sense; a maximize
/// instance is negated at construction and mapped back when reporting or
/// serializing, so all solver math is minimization. Immutable after
/// construction and safe to share across threads.
class QuboInstance {
 public:
  QuboInstance(std::uint32_t n, const std::vector<Triple>& coeffs,
               Sense sense = Sense::minimize, std::string name = "")
      : n_(n), sense_(sense), name_(std::move(name)) {
    if (n == 0) throw std::invalid_argument("QuboInstance: n must be positive");
    // Canonicalize: fold (j,i) into (i,j), sum duplicates, drop zeros.
    // Sums run in 128 bits so duplicate merging cannot overflow before the
    // magnitude guard is applied.
    std::map<std::pair<std::uint32_t, std::uint32_t>, Int128> merged;
    for (const Triple& t : coeffs) {
      if (t.i >= n || t.j >= n)
        throw std::invalid_argument("QuboInstance: index out of range");
      const auto key = std::minmax(t.i, t.j);
      merged[{key.first, key.second}] += t.q;
    }
    Int128 magnitude_sum = 0;
    for (const auto& [key, q] : merged)
      magnitude_sum += q < 0 ? -q : q;
    if (magnitude_sum > kMaxCoeffMagnitudeSum)
      throw std::invalid_argument(
          "QuboInstance: total coefficient magnitude exceeds 2^62; objective "
          "values would not be safely representable");
    coeffs_.reserve(merged.size());
    for (const auto& [key, q] : merged) {
      if (q == 0) continue;
      const std::int64_t q64 = static_cast<std::int64_t>(q);
      coeffs_.push_back({key.first, key.second, sense_ == Sense::maximize ? -q64 : q64});
    }
    build_adjacency();
  }

  std::uint32_t n() const { return n_; }
  Sense sense() const { return sense_; }
  const std::string& name() const { return name_; }

  /// Canonical triples in internal (minimization) sense, sorted by (i, j).
  const std::vector<Triple>& coeffs() const { return coeffs_; }

  std::int64_t diagonal(std::uint32_t i) const { return diag_[i]; }

  /// Off-diagonal neighbors of variable i with their combined weights.
  std::span<const std::pair<std::uint32_t, std::int64_t>> neighbors(std::uint32_t i) const {
    return {adj_.data() + adj_offset_[i], adj_.data() + adj_offset_[i + 1]};
  }

  /// Maps an internal (minimization) objective value to the original sense.
  std::int64_t to_original(std::int64_t internal_f) const {
    return sense_ == Sense::maximize ? -internal_f : internal_f;
  }

  /// Maps an original-sense value to the internal minimization sense.
  std::int64_t to_internal(std::int64_t original_f) const {
    return sense_ == Sense::maximize ? -original_f : original_f;
  }

  /// Sum of |q| over stored triples; bounds every reachable |f|.
  std::int64_t coeff_magnitude_sum() const {
    std::int64_t s = 0;
    for (const Triple& t : coeffs_) s += std::abs(t.q);
    return s;
  }

  friend bool operator==(const QuboInstance& a, const QuboInstance& b) {
    return a.n_ == b.n_ && a.sense_ == b.sense_ && a.coeffs_ == b.coeffs_ &&
           a.name_ == b.name_;
  }

 private:
  void build_adjacency() {
    diag_.assign(n_, 0);
    std::vector<std::uint32_t> degree(n_, 0);
    for (const Triple& t : coeffs_) {
      if (t.i == t.j) {
        diag_[t.i] = t.q;
      } else {
        ++degree[t.i];
        ++degree[t.j];
      }
    }
    adj_offset_.assign(n_ + 1, 0);
    for (std::uint32_t i = 0; i < n_; ++i) adj_offset_[i + 1] = adj_offset_[i] + degree[i];
    adj_.resize(adj_offset_[n_]);
    std::vector<std::uint32_t> cursor(adj_offset_.begin(), adj_offset_.end() - 1);
    for (const Triple& t : coeffs_) {
      if (t.i == t.j) continue;
      adj_[cursor[t.i]++] = {t.j, t.q};
      adj_[cursor[t.j]++] = {t.i, t.q};
    }
  }

  std::uint32_t n_;
  std::vector<Triple> coeffs_;  // canonical, internal sense
  std::vector<std::int64_t> diag_;
  std::vector<std::uint32_t> adj_offset_;
  std::vector<std::pair<std::uint32_t, std::int64_t>> adj_;
  Sense sense_;
  std::string name_;
};

/// From-scratch evaluation of x'Qx in internal (minimization) sense.
inline std::int64_t evaluate(const QuboInstance& inst, const BitVector& x) {
  if (x.size() != inst.n())
    throw std::invalid_argument("evaluate: vector length does not match instance");
  std::int64_t f = 0;
  for (const Triple& t : inst.coeffs())
    if (x.test(t.i) && x.test(t.j)) f += t.q;
  return f;
}

/// A binary vector with its cached objective value and one-flip gains,
/// maintained exactly under apply_flip. Single-owner; not thread-shared.
class EvalState {
 public:
  EvalState(const QuboInstance& inst, BitVector x)
      : inst_(&inst), x_(std::move(x)), gains_(inst.n()) {
    if (x_.size() != inst.n())
      throw std::invalid_argument("EvalState: vector length does not match instance");
    // s_i = q_ii + sum over neighbors j of q_ij * x_j; gain_i = (1-2x_i) * s_i.
    std::vector<std::int64_t> s(inst.n());
    for (std::uint32_t i = 0; i < inst.n(); ++i) s[i] = inst.diagonal(i);
    f_ = 0;
    for (const Triple& t : inst.coeffs()) {
      if (t.i == t.j) {
        if (x_.test(t.i)) f_ += t.q;
      } else {
        if (x_.test(t.j)) s[t.i] += t.q;
        if (x_.test(t.i)) s[t.j] += t.q;
        if (x_.test(t.i) && x_.test(t.j)) f_ += t.q;
      }
    }
    for (std::uint32_t i = 0; i < inst.n(); ++i)
      gains_[i] = x_.test(i) ? -s[i] : s[i];
  }

  const QuboInstance& instance() const { return *inst_; }
  const BitVector& bits() const { return x_; }

  /// Cached x'Qx, internal sense. Exactly equal to evaluate(instance(), bits()).
  std::int64_t objective() const { return f_; }

  /// gain(i) = objective after flipping i, minus objective now.
  std::int64_t gain(std::uint32_t i) const { return gains_[i]; }
  std::span<const std::int64_t> gains() const { return gains_; }

  /// One-flip update in O(degree of i).
  void apply_flip(std::uint32_t i) {
    if (i >= inst_->n()) throw std::out_of_range("EvalState::apply_flip: index out of range");
    const std::int64_t g = gains_[i];
    const bool was_set = x_.test(i);
    x_.flip(i);
    f_ += g;
    gains_[i] = -g;
    const std::int64_t delta = was_set ? -1 : 1;  // change in x_i
    for (const auto& [j, q] : inst_->neighbors(i)) {
      const std::int64_t ds = q * delta;  // change in s_j
      gains_[j] += x_.test(j) ? -ds : ds;
    }
  }

 private:
  const QuboInstance* inst_;
  BitVector x_;
  std::int64_t f_;
  std::vector<std::int64_t> gains_;
};

/// Parses the sparse triple format: a header line `n m`, then one `i j q`
/// triple per line with 1-based indices. `#` lines are comments. Symmetric
/// duplicates (j,i) are merged into (i,j) by summation. A header count that
/// disagrees with the actual number of triples is reported as a warning,
/// not an error.
inline QuboInstance parse_instance(std::istream& in, Sense sense = Sense::minimize,
                                   std::string name = "",
                                   std::vector<std::string>* warnings = nullptr) {
  std::string line;
  std::uint64_t lineno = 0;
  auto next_content_line = [&](std::string& out) -> bool {
    while (std::getline(in, out)) {
      ++lineno;
      const auto first = out.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (out[first] == '#') continue;
      return true;
    }
    return false;
  };

  if (!next_content_line(line)) throw std::runtime_error("parse_instance: empty input");

  std::uint64_t n = 0, m = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> m) || n == 0)
      throw std::runtime_error("parse_instance: malformed header at line " +
                               std::to_string(lineno));
    std::string extra;
    if (hs >> extra)
      throw std::runtime_error("parse_instance: trailing tokens in header at line " +
                               std::to_string(lineno));
  }

  std::vector<Triple> triples;
  triples.reserve(m);
  while (next_content_line(line)) {
    std::istringstream ls(line);
    std::int64_t i = 0, j = 0, q = 0;
    if (!(ls >> i >> j >> q))
      throw std::runtime_error("parse_instance: malformed triple at line " +
                               std::to_string(lineno));
    std::string extra;
    if (ls >> extra)
      throw std::runtime_error("parse_instance: trailing tokens at line " +
                               std::to_string(lineno));
    if (i < 1 || j < 1 || static_cast<std::uint64_t>(i) > n ||
        static_cast<std::uint64_t>(j) > n)
      throw std::runtime_error("parse_instance: index out of range at line " +
                               std::to_string(lineno));
    triples.push_back({static_cast<std::uint32_t>(i - 1),
                       static_cast<std::uint32_t>(j - 1), q});
  }

  if (triples.size() != m && warnings != nullptr)
    warnings->push_back("header declares " + std::to_string(m) + " triples, found " +
                        std::to_string(triples.size()));

  return QuboInstance(static_cast<std::uint32_t>(n), triples, sense, std::move(name));
}

/// Writes the canonical file form (original-sense coefficients, sorted,
/// 1-based). parse_instance(serialize_instance(q)) == q.
inline void serialize_instance(const QuboInstance& inst, std::ostream& out) {
  out << inst.n() << ' ' << inst.coeffs().size() << '\n';
  for (const Triple& t : inst.coeffs()) {
    const std::int64_t q = inst.sense() == Sense::maximize ? -t.q : t.q;
    out << (t.i + 1) << ' ' << (t.j + 1) << ' ' << q << '\n';
  }
}

inline std::string serialize_instance(const QuboInstance& inst) {
  std::ostringstream os;
  serialize_instance(inst, os);
  return os.str();
}

}  // namespace qubogoal
