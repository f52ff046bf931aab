#include <doctest.h>

#include "cmk/constant_bins.hpp"
#include "cmk/errors.hpp"
#include "cmk/exact_oracle.hpp"
#include "cmk/generator.hpp"
#include "cmk/rng.hpp"

using namespace cmk;

TEST_CASE("local search fixed examples") {
  Instance inst({{1, 0.9, 10.0}, {2, 0.2, 1.0}, {3, 0.2, 1.0}}, 1, 1);
  CHECK(solution_value(inst, local_search(inst)) == doctest::Approx(10.0));

  Instance empty({}, 2, 1);
  CHECK(solution_value(empty, local_search(empty)) == doctest::Approx(0.0));
}

TEST_CASE("local search achieves a quarter of the optimum on tiny instances") {
  StreamRng rng(606);
  for (int trial = 0; trial < 30; ++trial) {
    GeneratorSpec spec;
    spec.family = static_cast<Family>(trial % 3);
    spec.n = 2 + static_cast<int>(rng.below(7));
    spec.m = 1 + static_cast<int>(rng.below(2));
    spec.k = 1 + static_cast<int>(rng.below(3));
    spec.seed = rng.next_u64();
    Instance inst = generate(spec);
    double opt = solve_exact_cmk(inst).value;
    double ls = solution_value(inst, local_search(inst));
    CHECK(ls >= opt / 4.0 - 1e-9);
    CHECK(ls <= opt + 1e-9);
  }
}

TEST_CASE("value bands") {
  SUBCASE("zero reference value means no valuable items") {
    Instance inst({{1, 0.5, 0.0}}, 2, 1);
    ValueBandTable t = build_value_bands(inst, 0.1, 0.0);
    CHECK(t.valuable.empty());
    CHECK(t.bands.empty());
  }
  SUBCASE("band count reaches the valuable threshold") {
    // ceil(log_{0.9}(0.1 / 8)) = 42: the grid covers ratios down to
    // eps/(4m), where the threshold sits
    Instance inst({{1, 0.5, 1.0}}, 2, 1);
    ValueBandTable t = build_value_bands(inst, 0.1, 1.0);
    CHECK(t.bands.size() == 42);
  }
  SUBCASE("ratio 0.3 at eps=0.5 lands in band 2") {
    // band 1 covers (0.5,1], band 2 covers (0.25,0.5]
    Instance inst({{1, 0.5, 1.2}}, 8, 1);
    ValueBandTable t = build_value_bands(inst, 0.5, 1.0);
    REQUIRE(t.bands.size() >= 2);
    CHECK(t.bands[1] == std::vector<ItemId>{1});
    CHECK(t.bands[0].empty());
  }
  SUBCASE("bands partition the valuable items and sort by weight") {
    Instance inst(
        {{1, 0.9, 5.0}, {2, 0.1, 3.9}, {3, 0.5, 2.9}, {4, 0.2, 0.0001}}, 2, 3);
    ValueBandTable t = build_value_bands(inst, 0.25, 1.0);
    size_t banded = 0;
    for (const auto& band : t.bands) {
      for (size_t i = 1; i < band.size(); ++i)
        CHECK(inst.weight(band[i - 1]) <= inst.weight(band[i]));
      banded += band.size();
    }
    CHECK(banded == t.valuable.size());
    CHECK(t.valuable == std::vector<ItemId>{1, 2, 3});  // 4 is below threshold
    // ratio 1.25 clamps into band 1, 0.975 lands there; sorted by weight
    CHECK(t.bands[0] == std::vector<ItemId>{2, 1});
    // ratio 0.725 sits in band 2
    CHECK(t.bands[1] == std::vector<ItemId>{3});
  }
}

TEST_CASE("first_items") {
  Instance inst({{1, 0.2, 1.0}, {2, 0.5, 1.0}, {3, 0.9, 1.0}}, 2, 3);
  ValueBandTable t = build_value_bands(inst, 0.25, 1.0);
  REQUIRE(!t.bands.empty());
  size_t r = 0;
  for (size_t i = 0; i < t.bands.size(); ++i)
    if (!t.bands[i].empty()) r = i + 1;
  REQUIRE(r >= 1);
  CHECK(first_items(t, r, 0).empty());
  CHECK(first_items(t, r, 100) == t.bands[r - 1]);
  CHECK(first_items(t, r, 2) ==
        std::vector<ItemId>(t.bands[r - 1].begin(),
                            t.bands[r - 1].begin() +
                                std::min<size_t>(2, t.bands[r - 1].size())));
  CHECK_THROWS_AS(first_items(t, 0, 1), input_error);
}

TEST_CASE("assign LP") {
  SUBCASE("overweight valuable set is infeasible") {
    Instance inst({{1, 0.7, 5.0}, {2, 0.7, 5.0}, {3, 0.1, 0.1}}, 1, 3);
    AssignLpResult r = solve_assign_lp(inst, {1, 2}, {Configuration{{1, 2}}});
    CHECK_FALSE(r.feasible);
  }
  SUBCASE("no non-valuable items leaves an empty vertex") {
    Instance inst({{1, 0.2, 5.0}}, 1, 2);
    AssignLpResult r = solve_assign_lp(inst, {1}, {Configuration{{1}}});
    CHECK(r.feasible);
    CHECK(r.objective == doctest::Approx(0.0));
    CHECK(r.entries.empty());
  }
  SUBCASE("non-valuable items must stay out of the bin sets") {
    Instance inst({{1, 0.2, 5.0}, {2, 0.2, 0.1}}, 1, 2);
    CHECK_THROWS_AS(solve_assign_lp(inst, {1}, {Configuration{{2}}}), input_error);
  }
  SUBCASE("vertices have few fractional entries") {
    StreamRng rng(8080);
    for (int trial = 0; trial < 30; ++trial) {
      GeneratorSpec spec;
      spec.n = 10 + static_cast<int>(rng.below(31));
      spec.m = 1 + static_cast<int>(rng.below(6));
      spec.k = 2 + static_cast<int>(rng.below(4));
      spec.seed = rng.next_u64();
      Instance inst = generate(spec);
      // mark a random slice of the items valuable and pre-place a few
      std::vector<ItemId> valuable;
      std::vector<Configuration> bins(spec.m);
      for (const Item& it : inst.items())
        if (rng.below(4) == 0) valuable.push_back(it.id);
      for (int b = 0; b < spec.m && b < static_cast<int>(valuable.size()); ++b) {
        Configuration c{{valuable[b]}};
        if (validate_configuration(inst, c)) bins[b] = c;
      }
      AssignLpResult r = solve_assign_lp(inst, valuable, bins);
      if (!r.feasible) continue;
      CHECK(r.fractional_count <= 4 * spec.m);  // also asserted internally
    }
  }
}

TEST_CASE("constant bins fixed examples") {
  Instance inst({{1, 1.0, 5.0}, {2, 1.0, 3.0}}, 1, 1);
  ConstantBinsParams p;
  p.eps_prime = 0.25;
  Solution s = constant_bins(inst, p);
  CHECK(solution_value(inst, s) == doctest::Approx(5.0));

  Instance zeros({{1, 0.5, 0.0}, {2, 0.5, 0.0}}, 2, 1);
  CHECK(solution_value(zeros, constant_bins(zeros, p)) == doctest::Approx(0.0));
}

TEST_CASE("constant bins approximation on tiny instances") {
  StreamRng rng(515);
  for (int trial = 0; trial < 25; ++trial) {
    GeneratorSpec spec;
    spec.family = static_cast<Family>(trial % 3);
    spec.n = 2 + static_cast<int>(rng.below(7));
    spec.m = 1 + static_cast<int>(rng.below(2));
    spec.k = 1 + static_cast<int>(rng.below(3));
    spec.seed = rng.next_u64();
    Instance inst = generate(spec);
    double opt = solve_exact_cmk(inst).value;
    ConstantBinsParams p;
    p.eps_prime = 0.25;
    p.budget = 1e7;
    double value = solution_value(inst, constant_bins(inst, p));
    CHECK(value >= 0.75 * opt - 1e-9);
    CHECK(value <= opt + 1e-9);
  }
}

TEST_CASE("constant bins budget gate") {
  std::vector<Item> items;
  StreamRng rng(1);
  for (int i = 0; i < 24; ++i) items.push_back({i, 0.3, 1.0 + 0.01 * i});
  Instance inst(std::move(items), 2, 3);
  ConstantBinsParams p;
  p.eps_prime = 0.25;
  p.budget = 4;
  CHECK_THROWS_AS(constant_bins(inst, p), budget_error);
  try {
    constant_bins(inst, p);
  } catch (const budget_error& e) {
    CHECK(e.estimated_count > 4);
  }
  // a big enough budget runs and produces a feasible solution
  p.budget = 1e7;
  Solution s = constant_bins(inst, p);
  validate_solution(inst, s);
}

TEST_CASE("dispatch picks branches") {
  DispatchParams p;
  p.eps_prime = 0.25;

  Instance small({{1, 0.4, 2.0}, {2, 0.4, 1.0}}, 5, 1);
  p.paper_mode = true;
  DispatchResult paper = dispatch(small, p);
  CHECK(paper.branch == "constant-bins");

  p.paper_mode = false;
  GeneratorSpec spec;
  spec.n = 40;
  spec.m = 64;
  spec.k = 4;
  spec.seed = 3;
  Instance wide = generate(spec);
  DispatchResult practical = dispatch(wide, p);
  CHECK(practical.branch == "iterative-rounding");
  validate_solution(wide, practical.solution);

  // tiny budget forces the fallback
  GeneratorSpec spec2;
  spec2.n = 30;
  spec2.m = 4;
  spec2.k = 5;
  spec2.seed = 9;
  Instance mid = generate(spec2);
  p.budget = 2;
  DispatchResult fallback = dispatch(mid, p);
  CHECK(fallback.branch == "local-search");
  validate_solution(mid, fallback.solution);
}
