#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "qubogoal/instances.hpp"
#include "qubogoal/tabu.hpp"

using namespace qubogoal;

TEST_CASE("generator") {
  SECTION("full density emits every pair and diagonal") {
    GeneratorSpec spec;
    spec.n = 3;
    spec.density = 1;
    spec.seed = 4;
    const QuboInstance inst = generate(spec);
    REQUIRE(inst.coeffs().size() == 6);  // C(4,2)
    for (const Triple& t : inst.coeffs()) {
      REQUIRE(t.q != 0);
      REQUIRE(t.q >= -100);
      REQUIRE(t.q <= 100);
    }
  }

  SECTION("the same spec regenerates byte-identical files") {
    GeneratorSpec spec;
    spec.n = 40;
    spec.density = Rational(3, 10);
    spec.seed = 99;
    REQUIRE(serialize_instance(generate(spec)) == serialize_instance(generate(spec)));
  }

  SECTION("different seeds differ") {
    GeneratorSpec a, b;
    a.n = b.n = 30;
    a.seed = 1;
    b.seed = 2;
    REQUIRE(serialize_instance(generate(a)) != serialize_instance(generate(b)));
  }

  SECTION("triple count tracks the density binomially") {
    GeneratorSpec spec;
    spec.n = 50;
    spec.density = Rational(1, 10);
    const double slots = 51.0 * 50.0 / 2.0;  // C(51,2) candidate positions
    const double mean = slots * 0.1;
    const double sigma = std::sqrt(slots * 0.1 * 0.9);
    double total = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      spec.seed = seed;
      total += static_cast<double>(generate(spec).coeffs().size());
    }
    const double observed_mean = total / 100.0;
    REQUIRE(std::abs(observed_mean - mean) <= 4.0 * sigma / 10.0);  // 4 sigma of the mean
  }

  SECTION("validation") {
    GeneratorSpec spec;
    spec.n = 0;
    REQUIRE_THROWS_AS(generate(spec), std::invalid_argument);
    spec.n = 3;
    spec.density = Rational(0);
    REQUIRE_THROWS_AS(generate(spec), std::invalid_argument);
    spec.density = Rational(3, 2);
    REQUIRE_THROWS_AS(generate(spec), std::invalid_argument);
    spec.density = Rational(1, 2);
    spec.coeff_min = 5;
    spec.coeff_max = 4;
    REQUIRE_THROWS_AS(generate(spec), std::invalid_argument);
    spec.coeff_min = spec.coeff_max = 0;
    REQUIRE_THROWS_AS(generate(spec), std::invalid_argument);
  }

  SECTION("positive-only ranges work without a zero gap") {
    GeneratorSpec spec;
    spec.n = 10;
    spec.coeff_min = 1;
    spec.coeff_max = 3;
    spec.density = 1;
    const QuboInstance inst = generate(spec);
    for (const Triple& t : inst.coeffs()) {
      REQUIRE(t.q >= 1);
      REQUIRE(t.q <= 3);
    }
  }
}

TEST_CASE("bks tables") {
  SECTION("basic parse with default maximize sense") {
    std::istringstream in("2500.1 1515944\n# comment\n2500.2 1471392 max\ntiny -5 min\n");
    const BksTable table = load_bks(in);
    REQUIRE(table.size() == 3);
    REQUIRE(table.lookup("2500.1")->value == 1515944);
    REQUIRE(table.lookup("2500.1")->sense == Sense::maximize);
    REQUIRE(table.lookup("tiny")->value == -5);
    REQUIRE(table.lookup("tiny")->sense == Sense::minimize);
    REQUIRE_FALSE(table.lookup("absent").has_value());
  }

  SECTION("empty file gives an empty table") {
    std::istringstream in("");
    REQUIRE(load_bks(in).size() == 0);
  }

  SECTION("duplicate names are rejected") {
    std::istringstream in("a 1\na 2\n");
    REQUIRE_THROWS_AS(load_bks(in), std::runtime_error);
  }

  SECTION("malformed lines are rejected") {
    std::istringstream bad_value("a xyz\n");
    REQUIRE_THROWS_AS(load_bks(bad_value), std::runtime_error);
    std::istringstream missing("lonely\n");
    REQUIRE_THROWS_AS(load_bks(missing), std::runtime_error);
  }
}

TEST_CASE("solutions files") {
  QuboInstance inst(4, {{0, 0, 2}, {1, 2, -3}, {3, 3, 4}});
  SolverConfig cfg;
  cfg.iter_limit = 3000;
  cfg.seed = 11;

  SECTION("write then read restores the set") {
    SolutionSet set = run(inst, IntervalTarget(-3, 4), cfg);
    REQUIRE_FALSE(set.empty());
    const std::string text = write_solutions(set);
    std::istringstream in(text);
    const SolutionSet back = read_solutions(in);
    REQUIRE(back.records == set.records);
    REQUIRE(back.context == set.context);
    REQUIRE(write_solutions(back) == text);
  }

  SECTION("an empty set round-trips through its header") {
    SolutionSet set = run(inst, ExactTarget{999}, cfg);
    REQUIRE(set.empty());
    const std::string text = write_solutions(set);
    std::istringstream in(text);
    const SolutionSet back = read_solutions(in);
    REQUIRE(back.empty());
    REQUIRE(back.context == set.context);
  }

  SECTION("a record with positive achievement value is rejected") {
    std::istringstream in("n=4 target=exact:0 seed=0 sense=min\n01,3,9,1,0\n");
    REQUIRE_THROWS_AS(read_solutions(in), std::runtime_error);
  }

  SECTION("malformed records are rejected") {
    std::istringstream missing_field("n=4 target=exact:0 seed=0 sense=min\n01,3,0,1\n");
    REQUIRE_THROWS_AS(read_solutions(missing_field), std::runtime_error);
    std::istringstream bad_hex("n=4 target=exact:0 seed=0 sense=min\nzz,3,0,1,0\n");
    REQUIRE_THROWS_AS(read_solutions(bad_hex), std::runtime_error);
    std::istringstream bad_header("n=4 target=exact:0\n");
    REQUIRE_THROWS_AS(read_solutions(bad_header), std::runtime_error);
    std::istringstream empty("");
    REQUIRE_THROWS_AS(read_solutions(empty), std::runtime_error);
  }

  SECTION("rational achievement values survive the round trip") {
    SolutionSet set;
    set.context = {2, "multi:1/2:1", 7, Sense::minimize};
    set.records.push_back(
        {BitVector::from_string("10"), 1, AchievementValue(Rational(-1, 2)), 3, 0});
    const std::string text = write_solutions(set);
    std::istringstream in(text);
    const SolutionSet back = read_solutions(in);
    REQUIRE(back.records == set.records);
  }
}

TEST_CASE("random solution sets survive the file round trip") {
  Rng rng(2718);
  for (int trial = 0; trial < 30; ++trial) {
    SolutionSet set;
    const auto n = static_cast<std::uint32_t>(1 + rng.below(70));
    set.context.n = n;
    set.context.target = trial % 2 == 0 ? "exact:-7" : "interval:-9:-2";
    set.context.seed = rng.next();
    set.context.sense = trial % 3 == 0 ? Sense::maximize : Sense::minimize;
    const std::uint64_t count = rng.below(6);
    for (std::uint64_t k = 0; k < count; ++k) {
      BitVector x(n);
      for (std::uint32_t i = 0; i < n; ++i)
        if (rng.below(2)) x.set(i, true);
      const AchievementValue af =
          k % 2 == 0 ? AchievementValue(Int128(0) - static_cast<std::int64_t>(rng.below(1000)))
                     : AchievementValue(Rational(-static_cast<std::int64_t>(rng.below(50)), 7));
      set.records.push_back({x, rng.uniform_in(-100000, 100000), af, rng.below(100000),
                             rng.below(5000)});
    }
    const std::string text = write_solutions(set);
    std::istringstream in(text);
    const SolutionSet back = read_solutions(in);
    REQUIRE(back.records == set.records);
    REQUIRE(back.context == set.context);
  }
}

TEST_CASE("sorting orders are total and deterministic") {
  SolutionSet set;
  set.context.n = 4;
  for (const char* bits : {"0011", "1100", "0101", "1010"}) {
    SolutionRecord r{BitVector::from_string(bits), 5, AchievementValue(Int128(0)), 0, 0};
    set.records.push_back(r);  // all records share f = 5
  }
  set.records[1].f = 7;
  set.records[3].iter_found = 3;

  sort_solutions(set, SolutionOrder::objective_desc);
  REQUIRE(set.records[0].f == 7);
  // Equal objectives fall back to ascending canonical (byte-wise) encoding:
  // 1010 -> 0x05, 0101 -> 0x0a, 0011 -> 0x0c.
  REQUIRE(set.records[1].x == BitVector::from_string("1010"));
  REQUIRE(set.records[2].x == BitVector::from_string("0101"));
  REQUIRE(set.records[3].x == BitVector::from_string("0011"));

  sort_solutions(set, SolutionOrder::objective_asc);
  REQUIRE(set.records.back().f == 7);

  sort_solutions(set, SolutionOrder::discovery);
  REQUIRE(set.records.back().iter_found == 3);
}

TEST_CASE("instance files round-trip through the filesystem") {
  const auto dir = std::filesystem::temp_directory_path() / "qubogoal_test_instances";
  std::filesystem::create_directories(dir);
  const auto path = dir / "roundtrip.qubo";

  GeneratorSpec spec;
  spec.n = 12;
  spec.seed = 5;
  spec.name = "roundtrip";
  const QuboInstance inst = generate(spec);
  write_instance_file(inst, path);
  const QuboInstance back = load_instance_file(path);
  REQUIRE(back.n() == inst.n());
  REQUIRE(back.coeffs() == inst.coeffs());
  REQUIRE(back.name() == "roundtrip");  // stem of the file name

  REQUIRE_THROWS_AS(load_instance_file(dir / "missing.qubo"), std::runtime_error);
  std::filesystem::remove_all(dir);
}
