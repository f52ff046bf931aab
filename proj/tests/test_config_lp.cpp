#include <doctest.h>

#include "cmk/config_lp.hpp"
#include "cmk/errors.hpp"
#include "cmk/exact_oracle.hpp"
#include "cmk/generator.hpp"
#include "cmk/rng.hpp"

using namespace cmk;

TEST_CASE("exact small LP: cardinality one forces the best item") {
  Instance inst({{1, 1.0, 10.0}, {2, 1.0, 6.0}}, 1, 1);
  LpSolution sol = solve_exact_small(full_lp(inst, 1.0));
  CHECK(sol.objective == doctest::Approx(10.0));
  CHECK(sol.fractional.weights().at(Configuration{{1}}) == doctest::Approx(1.0));
}

TEST_CASE("exact small LP: empty item set leaves only the empty column") {
  Instance inst({}, 3, 2);
  LpSolution sol = solve_exact_small(full_lp(inst, 3.0));
  CHECK(sol.objective == doctest::Approx(0.0));
  CHECK(sol.fractional.weights().at(Configuration{}) == doctest::Approx(3.0));
}

TEST_CASE("exact small LP: cover cap keeps a single item at one") {
  Instance inst({{1, 0.5, 7.0}}, 2, 3);
  LpSolution sol = solve_exact_small(full_lp(inst, 2.0));
  CHECK(sol.objective == doctest::Approx(7.0));
  CHECK(sol.fractional.weights().at(Configuration{{1}}) == doctest::Approx(1.0));
  CHECK(sol.fractional.weights().at(Configuration{}) == doctest::Approx(1.0));
}

TEST_CASE("exact small LP refuses large item sets") {
  std::vector<Item> items;
  for (int i = 0; i < 15; ++i) items.push_back({i, 0.1, 1.0});
  Instance inst(std::move(items), 2, 3);
  CHECK_THROWS_AS(solve_exact_small(full_lp(inst, 2.0)), capacity_error);
}

TEST_CASE("column generation trivial cases") {
  Instance empty({}, 2, 2);
  LpSolution sol = solve_column_generation(full_lp(empty, 2.0), 0.1);
  CHECK(sol.objective == doctest::Approx(0.0));

  // enough bins for all singletons: everything is covered
  std::vector<Item> items;
  double total = 0.0;
  for (int i = 0; i < 6; ++i) {
    items.push_back({i, 0.9, 1.0 + i});
    total += 1.0 + i;
  }
  Instance inst(std::move(items), 6, 1);
  LpSolution full = solve_column_generation(full_lp(inst, 6.0), 0.05);
  CHECK(full.objective == doctest::Approx(total));
}

TEST_CASE("column generation sandwich against the exact LP") {
  StreamRng rng(909);
  for (int trial = 0; trial < 25; ++trial) {
    GeneratorSpec spec;
    spec.family = trial % 2 ? Family::uniform : Family::cardinality_tight;
    spec.n = 4 + static_cast<int>(rng.below(9));  // <= 12
    spec.m = 1 + static_cast<int>(rng.below(4));
    spec.k = 1 + static_cast<int>(rng.below(3));
    spec.seed = rng.next_u64();
    Instance inst = generate(spec);
    const double eps = 0.05;
    LpSolution exact = solve_exact_small(full_lp(inst, inst.m()));
    LpSolution approx = solve_column_generation(full_lp(inst, inst.m()), eps);
    CHECK(approx.objective >= (1.0 - eps) * exact.objective - 1e-9);
    CHECK(approx.objective <= exact.objective + 1e-6);
    CHECK(approx.dual_bound >= exact.objective - 1e-6);
  }
}

TEST_CASE("the relaxation dominates integral optima") {
  StreamRng rng(4242);
  for (int trial = 0; trial < 15; ++trial) {
    GeneratorSpec spec;
    spec.family = Family::uniform;
    spec.n = 4 + static_cast<int>(rng.below(5));
    spec.m = 1 + static_cast<int>(rng.below(3));
    spec.k = 1 + static_cast<int>(rng.below(3));
    spec.seed = rng.next_u64();
    Instance inst = generate(spec);
    OracleResult opt = solve_exact_cmk(inst);
    LpSolution lp = solve_exact_small(full_lp(inst, inst.m()));
    CHECK(lp.objective >= opt.value - 1e-6);
  }
}

TEST_CASE("column generation is deterministic") {
  GeneratorSpec spec;
  spec.n = 20;
  spec.m = 4;
  spec.k = 3;
  spec.seed = 77;
  Instance inst = generate(spec);
  LpSolution a = solve_column_generation(full_lp(inst, inst.m()), 0.05);
  LpSolution b = solve_column_generation(full_lp(inst, inst.m()), 0.05);
  CHECK(a.objective == b.objective);
  CHECK(a.dual_bound == b.dual_bound);
  CHECK(a.fractional.weights() == b.fractional.weights());
}

TEST_CASE("lp problem validation") {
  Instance inst({{1, 0.5, 1.0}}, 1, 1);
  CHECK_THROWS_AS(LpProblem(inst, {1}, 0.0), input_error);
  CHECK_THROWS_AS(LpProblem(inst, {2}, 1.0), input_error);
  CHECK_THROWS_AS(solve_column_generation(full_lp(inst, 1.0), 0.0), input_error);
}
