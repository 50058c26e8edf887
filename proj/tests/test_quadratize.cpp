#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "qubogoal/instances.hpp"
#include "qubogoal/oracle.hpp"
#include "qubogoal/quadratize.hpp"

using namespace qubogoal;

namespace {

QuboInstance random_instance(std::uint32_t n, std::uint64_t seed, std::int64_t bound) {
  GeneratorSpec spec;
  spec.n = n;
  spec.density = Rational(3, 4);
  spec.coeff_min = -bound;
  spec.coeff_max = bound;
  spec.seed = seed;
  return generate(spec);
}

BitVector bits_of(std::uint64_t word, std::uint32_t n) {
  BitVector x(n);
  for (std::uint32_t i = 0; i < n; ++i)
    if ((word >> i) & 1) x.set(i, true);
  return x;
}

// Exhaustive min over the auxiliaries of the reduced instance, for one
// assignment of the original variables.
std::int64_t min_over_aux(const QuadratizationResult& result, const BitVector& x,
                          std::uint32_t n_original) {
  const std::uint32_t total = result.qubo.n();
  const std::uint32_t aux = total - n_original;
  std::int64_t best = 0;
  bool first = true;
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << aux); ++z) {
    BitVector full(total);
    for (std::uint32_t i = 0; i < n_original; ++i) full.set(i, x.test(i));
    for (std::uint32_t a = 0; a < aux; ++a) full.set(n_original + a, (z >> a) & 1);
    const std::int64_t value = evaluate(result.qubo, full) + result.offset;
    if (first || value < best) {
      best = value;
      first = false;
    }
  }
  return best;
}

std::int64_t penalty_terms_value(std::uint32_t i, std::uint32_t j, std::uint32_t z,
                                 std::int64_t M, bool xi, bool xj, bool zz) {
  std::int64_t total = 0;
  for (const auto& [key, coeff] : rosenberg_penalty(i, j, z, M)) {
    bool all = true;
    for (std::uint32_t v : key) {
      const bool bit = v == i ? xi : (v == j ? xj : zz);
      if (!bit) all = false;
    }
    if (all) total += coeff;
  }
  return total;
}

}  // namespace

TEST_CASE("square_objective") {
  SECTION("idempotence absorbs the square of a single variable") {
    QuboInstance inst(1, {{0, 0, 1}});
    const PseudoBooleanPoly poly = square_objective(inst, 0);
    REQUIRE(poly.terms().size() == 1);
    REQUIRE(poly.term_coeff({0}) == 1);
  }

  SECTION("(x0 + x1 - 1)^2 expands to the hand computation") {
    QuboInstance inst(2, {{0, 0, 1}, {1, 1, 1}});
    const PseudoBooleanPoly poly = square_objective(inst, 1);
    REQUIRE(poly.term_coeff({}) == 1);
    REQUIRE(poly.term_coeff({0}) == -1);
    REQUIRE(poly.term_coeff({1}) == -1);
    REQUIRE(poly.term_coeff({0, 1}) == 2);
    for (std::uint64_t w = 0; w < 4; ++w) {
      const BitVector x = bits_of(w, 2);
      const std::int64_t f = evaluate(inst, x);
      REQUIRE(poly.evaluate(x) == (f - 1) * (f - 1));
    }
  }

  SECTION("poly(x) equals the squared deviation on every vector") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      QuboInstance inst = random_instance(8, seed, 9);
      Rng rng(seed);
      const std::int64_t t = rng.uniform_in(-30, 30);
      const PseudoBooleanPoly poly = square_objective(inst, t);
      REQUIRE(poly.degree() <= 4);
      for (std::uint64_t w = 0; w < 256; ++w) {
        const BitVector x = bits_of(w, 8);
        const std::int64_t d = evaluate(inst, x) - t;
        REQUIRE(poly.evaluate(x) == d * d);
      }
    }
  }

  SECTION("maximize sense squares the original-sense deviation") {
    QuboInstance inst(2, {{0, 0, 3}}, Sense::maximize);
    const PseudoBooleanPoly poly = square_objective(inst, 3);
    for (std::uint64_t w = 0; w < 4; ++w) {
      const BitVector x = bits_of(w, 2);
      const std::int64_t d = inst.to_original(evaluate(inst, x)) - 3;
      REQUIRE(poly.evaluate(x) == d * d);
    }
  }

  SECTION("size guard") {
    QuboInstance inst(17, {{0, 0, 1}});
    REQUIRE_THROWS_AS(square_objective(inst, 0), std::invalid_argument);
  }
}

TEST_CASE("rosenberg_penalty is zero iff z = x_i x_j and at least M otherwise") {
  const std::int64_t M = 13;
  for (int xi = 0; xi <= 1; ++xi) {
    for (int xj = 0; xj <= 1; ++xj) {
      for (int zz = 0; zz <= 1; ++zz) {
        const std::int64_t v = penalty_terms_value(0, 1, 2, M, xi, xj, zz);
        if (zz == (xi & xj)) {
          REQUIRE(v == 0);
        } else {
          REQUIRE(v >= M);
        }
      }
    }
  }

  SECTION("the three spec cases") {
    REQUIRE(penalty_terms_value(0, 1, 2, 13, true, true, true) == 0);
    REQUIRE(penalty_terms_value(0, 1, 2, 13, true, true, false) == 13);
    REQUIRE(penalty_terms_value(0, 1, 2, 13, true, false, true) == 13);
  }

  REQUIRE_THROWS_AS(rosenberg_penalty(0, 1, 2, 0), std::invalid_argument);
}

TEST_CASE("reduce_to_qubo") {
  SECTION("an already-quadratic polynomial passes through unchanged") {
    PseudoBooleanPoly poly(3);
    poly.add_term({0}, 2);
    poly.add_term({0, 1}, -3);
    poly.add_term({}, 7);
    const QuadratizationResult result = reduce_to_qubo(poly, 100);
    REQUIRE(result.aux_map.empty());
    REQUIRE(result.qubo.n() == 3);
    REQUIRE(result.offset == 7);
    for (std::uint64_t w = 0; w < 8; ++w) {
      const BitVector x = bits_of(w, 3);
      REQUIRE(evaluate(result.qubo, x) + result.offset == poly.evaluate(x));
    }
  }

  SECTION("a cubic term reduces with one auxiliary") {
    PseudoBooleanPoly poly(3);
    poly.add_term({0, 1, 2}, 1);
    const QuadratizationResult result = reduce_to_qubo(poly, 10);
    REQUIRE(result.aux_map.size() == 1);
    REQUIRE(result.qubo.n() == 4);
    for (std::uint64_t w = 0; w < 8; ++w) {
      const BitVector x = bits_of(w, 3);
      REQUIRE(min_over_aux(result, x, 3) == poly.evaluate(x));
    }
  }

  SECTION("full pipeline: min over auxiliaries reproduces the quartic") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      QuboInstance inst = random_instance(6, 900 + seed, 7);
      Rng rng(seed);
      const std::int64_t t = rng.uniform_in(-20, 20);
      const PseudoBooleanPoly poly = square_objective(inst, t);
      const QuadratizationResult result = reduce_to_qubo(poly);
      REQUIRE(result.aux_map.size() <= 15);  // C(6,2)
      for (std::uint64_t w = 0; w < 64; ++w) {
        const BitVector x = bits_of(w, 6);
        const std::int64_t d = evaluate(inst, x) - t;
        REQUIRE(min_over_aux(result, x, 6) == d * d);
      }
    }
  }

  SECTION("auxiliary indices in the map match their substituted pair") {
    PseudoBooleanPoly poly(4);
    poly.add_term({0, 1, 2, 3}, 5);
    const QuadratizationResult result = reduce_to_qubo(poly, 50);
    REQUIRE(result.aux_map.size() == 2);
    for (const auto& [z, i, j] : result.aux_map) {
      REQUIRE(z >= 4);
      REQUIRE(i < 4);
      REQUIRE(j < 4);
      REQUIRE(i < j);
    }
  }

  SECTION("penalty validation and auxiliary budget") {
    PseudoBooleanPoly poly(3);
    poly.add_term({0, 1, 2}, 1);
    REQUIRE_THROWS_AS(reduce_to_qubo(poly, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(reduce_to_qubo(poly, -4), std::invalid_argument);
  }

  SECTION("default penalty is one above the coefficient magnitude sum") {
    PseudoBooleanPoly poly(3);
    poly.add_term({0, 1, 2}, -4);
    poly.add_term({1}, 2);
    poly.add_term({}, -1);
    REQUIRE(default_penalty(poly) == 8);
    const QuadratizationResult result = reduce_to_qubo(poly);
    REQUIRE(result.penalty == 8);
  }
}

TEST_CASE("pseudo-boolean polynomial basics") {
  PseudoBooleanPoly poly(5);
  poly.add_term({3, 1, 1, 3}, 4);  // duplicates collapse to {1, 3}
  REQUIRE(poly.term_coeff({1, 3}) == 4);
  poly.add_term({1, 3}, -4);  // cancels away
  REQUIRE(poly.terms().empty());
  REQUIRE(poly.degree() == 0);

  REQUIRE_THROWS_AS(poly.add_term({0, 1, 2, 3, 4}, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(poly.add_term({5}, 1), std::invalid_argument);

  SECTION("coefficient overflow is detected") {
    PseudoBooleanPoly p(2);
    p.add_term({0}, INT64_MAX);
    REQUIRE_THROWS_AS(p.add_term({0}, 1), std::overflow_error);
  }
}
