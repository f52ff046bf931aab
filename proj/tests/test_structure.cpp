#include <doctest.h>

#include "cmk/errors.hpp"
#include "cmk/generator.hpp"
#include "cmk/rng.hpp"
#include "cmk/structure.hpp"

using namespace cmk;

namespace {

StructureContext fixture(int inv_delta, int ell, uint64_t seed) {
  PackedInstance p = generate_packed(inv_delta, ell, seed);
  return build_context(p.instance, p.packing, inv_delta);
}

RationalCover alpha_scaled_cover(const StructureContext& ctx, Rational alpha,
                                 StreamRng& rng) {
  // pointwise y_i = alpha * c_i with c_i in {0, 1/2, 1} is always
  // alpha-scaled
  RationalCover y;
  for (ItemId id : ctx.support) y[id] = alpha * Rational(rng.below(3), 2);
  return y;
}

}  // namespace

TEST_CASE("rationalize recovers small fractions from doubles") {
  CHECK(rationalize(0.3) == Rational(3, 10));
  CHECK(rationalize(1.0 / 3.0) == Rational(1, 3));
  CHECK(rationalize(0.0) == Rational(0));
  CHECK(rationalize(1.0) == Rational(1));
  CHECK(rationalize(0.5) == Rational(1, 2));
  CHECK(rationalize(7.0 / 64.0) == Rational(7, 64));
}

TEST_CASE("context construction invariants") {
  for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    StructureContext ctx = fixture(2, 3, seed);
    const int ng = ctx.num_groups();
    REQUIRE(static_cast<int>(ctx.groups.size()) == ng);

    // groups partition L in nonincreasing adjusted weight order
    size_t total = 0;
    for (const auto& g : ctx.groups) total += g.size();
    CHECK(total == ctx.large.size());
    for (size_t i = 1; i < ctx.large.size(); ++i)
      CHECK(ctx.adjusted_weight(ctx.large[i - 1]) >=
            ctx.adjusted_weight(ctx.large[i]));
    for (int g = 0; g + 1 < ng; ++g)
      CHECK(ctx.groups[g].size() >= ctx.groups[g + 1].size());

    // every large item clears the threshold, small items do not
    for (ItemId id : ctx.large) CHECK(ctx.adjusted_weight(id) >= ctx.delta());
    for (ItemId id : ctx.support)
      if (!ctx.is_large(id)) CHECK(ctx.adjusted_weight(id) < ctx.delta());

    // eta counts the packing and classes partition the small items
    int eta_total = 0;
    for (int e : ctx.eta) eta_total += e;
    CHECK(eta_total == ctx.ell());
    size_t small_total = 0;
    for (const auto& cls : ctx.classes) small_total += cls.size();
    size_t small_expected = 0;
    for (ItemId id : ctx.support)
      if (!ctx.is_large(id)) ++small_expected;
    CHECK(small_total == small_expected);

    for (int g = 0; g < ng; ++g) {
      long sum = 0;
      for (size_t t = 0; t < ctx.types.size(); ++t)
        sum += static_cast<long>(ctx.eta[t]) * ctx.types[t][g];
      CHECK(sum == static_cast<long>(ctx.groups[g].size()));
    }

    // subclasses partition non-degenerate classes
    for (size_t t = 0; t < ctx.types.size(); ++t) {
      if (ctx.degenerate[t]) continue;
      std::vector<ItemId> joined;
      for (const auto& sub : ctx.subclasses[t])
        joined.insert(joined.end(), sub.begin(), sub.end());
      CHECK(joined == ctx.classes[t]);
    }
  }
}

TEST_CASE("k below 1/delta makes every item large") {
  // adjusted weight includes 1/k >= delta
  Instance inst({{0, 0.25, 1.0}, {1, 0.125, 1.0}, {2, 0.5, 1.0}}, 2, 2);
  std::vector<Configuration> packing = {Configuration{{0, 1}},
                                        Configuration{{2}}};
  StructureContext ctx = build_context(inst, packing, 2);
  size_t small = 0;
  for (ItemId id : ctx.support)
    if (!ctx.is_large(id)) ++small;
  CHECK(small == 0);
  CHECK(ctx.large.size() == 3);
  for (const auto& cls : ctx.classes) CHECK(cls.empty());
}

TEST_CASE("context rejects bad packings") {
  PackedInstance p = generate_packed(2, 2, 8);
  std::vector<Configuration> dup = {p.packing[0], p.packing[0]};
  CHECK_THROWS_AS(build_context(p.instance, dup, 2), input_error);
  CHECK_THROWS_AS(build_context(p.instance, p.packing, 1), input_error);
}

TEST_CASE("tolerance") {
  std::vector<Item> items;
  for (int i = 0; i < 5; ++i) items.push_back({i, 0.0, 1.0});
  Instance inst(std::move(items), 2, 3);
  std::vector<Configuration> packing = {Configuration{{0, 1, 2}},
                                        Configuration{{3, 4}}};
  StructureContext ctx = build_context(inst, packing, 2);

  StructureVector ones{"ones", {}};
  for (ItemId id : ctx.support) ones.entries[id] = Rational(1);
  CHECK(tolerance(ctx, ones) == Rational(3));  // cardinality binds

  StructureVector zero{"zero", {}};
  CHECK(tolerance(ctx, zero) == Rational(0));

  StructureContext weighted = fixture(2, 3, 21);
  StructureVector w{"weights", {}};
  for (ItemId id : weighted.support) w.entries[id] = weighted.weight.at(id);
  CHECK(tolerance(weighted, w) <= Rational(1));  // capacity binds
}

TEST_CASE("item_per_bin") {
  RationalCover y{{1, Rational(1, 2)}, {2, Rational(1, 4)}};
  RationalSolution x = item_per_bin(y);
  CHECK(x.size() == Rational(3, 4));
  CHECK(x.cover() == y);

  CHECK(item_per_bin({}).weights().empty());

  RationalCover bad{{1, Rational(3, 2)}};
  CHECK_THROWS_AS(item_per_bin(bad), input_error);
}

TEST_CASE("fractional first fit packs two light items together") {
  // adjusted weight 0.3 each: both copies share one configuration
  std::vector<Item> items = {{0, 0.2, 1.0}, {1, 0.2, 1.0}};
  Instance inst(std::move(items), 1, 10);
  std::vector<Configuration> packing = {Configuration{{0, 1}}};
  StructureContext ctx = build_context(inst, packing, 2);
  RationalCover y{{0, Rational(1)}, {1, Rational(1)}};
  RationalSolution x = fractional_first_fit(ctx, y);
  CHECK(x.size() == Rational(1));
  CHECK(x.cover() == y);
  CHECK(x.weights().count(Configuration{{0, 1}}) == 1);

  CHECK(fractional_first_fit(ctx, {}).weights().empty());
}

TEST_CASE("fractional first fit rejects large items") {
  StructureContext ctx = fixture(2, 3, 4);
  REQUIRE(!ctx.large.empty());
  RationalCover y{{ctx.large[0], Rational(1, 2)}};
  CHECK_THROWS_AS(fractional_first_fit(ctx, y), input_error);
}

TEST_CASE("fractional first fit on random rational covers") {
  StreamRng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    StructureContext ctx = fixture(2 + trial % 2, 2 + trial % 3, 100 + trial);
    RationalCover y;
    for (ItemId id : ctx.support) {
      if (ctx.is_large(id)) continue;
      y[id] = Rational(rng.below(9), 8);
    }
    // cover equality and the norm bound are asserted inside
    RationalSolution x = fractional_first_fit(ctx, y);
    Rational bound(1);
    for (const auto& [id, yi] : y)
      bound += Rational(2) * yi * ctx.adjusted_weight(id);
    CHECK(x.size() <= bound);
  }
}

TEST_CASE("structure vectors and inequalities") {
  StructureContext ctx = fixture(2, 3, 77);
  std::vector<StructureVector> vectors = build_structure_vectors(ctx);
  size_t bound = 2 * ctx.types.size() * ctx.num_groups() + ctx.num_groups();
  CHECK(vectors.size() <= bound);

  RationalCover zero;
  CHECK(check_structure_inequalities(ctx, vectors, zero, Rational(1, 2),
                                     Rational(1, 100)));

  RationalCover half;
  for (ItemId id : ctx.support) half[id] = Rational(1, 2);
  CHECK(check_structure_inequalities(ctx, vectors, half, Rational(1, 2),
                                     Rational(1, 100)));

  // full selection at alpha = 1/2 must violate some vector with mass
  RationalCover full;
  for (ItemId id : ctx.support) full[id] = Rational(1);
  bool has_mass = false;
  for (const StructureVector& u : vectors)
    if (!u.entries.empty()) has_mass = true;
  REQUIRE(has_mass);
  CHECK_FALSE(check_structure_inequalities(ctx, vectors, full, Rational(1, 2),
                                           Rational(1, 1000000)));
}

TEST_CASE("degenerate-only contexts contribute only group indicators") {
  // single-bin packing of large items only: the one class is empty and
  // degenerate
  std::vector<Item> items = {{0, 0.6, 1.0}, {1, 0.35, 1.0}};
  Instance inst(std::move(items), 1, 2);
  std::vector<Configuration> packing = {Configuration{{0, 1}}};
  StructureContext ctx = build_context(inst, packing, 2);
  REQUIRE(ctx.types.size() == 1);
  CHECK(ctx.degenerate[0] == 1);
  std::vector<StructureVector> vectors = build_structure_vectors(ctx);
  CHECK(vectors.size() == static_cast<size_t>(ctx.num_groups()));
}

TEST_CASE("weak structure solution covers exactly") {
  StreamRng rng(55);
  for (int trial = 0; trial < 6; ++trial) {
    StructureContext ctx = fixture(2, 2 + trial % 2, 300 + trial);
    RationalCover y = alpha_scaled_cover(ctx, Rational(1, 2), rng);
    WeakStructureResult weak =
        build_weak_structure_solution(ctx, y, Rational(1, 2));
    RationalCover got = weak.solution.cover();
    RationalCover want = y;
    for (auto it = want.begin(); it != want.end();)
      it = it->second == Rational(0) ? want.erase(it) : std::next(it);
    CHECK(got == want);
    CHECK(weak.failed_items <= 2u * 8u);  // 2 / delta^3
  }
}

TEST_CASE("weak structure rejects unscaled input") {
  StructureContext ctx = fixture(2, 2, 91);
  REQUIRE(!ctx.support.empty());
  RationalCover y;
  for (ItemId id : ctx.support) y[id] = Rational(1);
  CHECK_THROWS_AS(build_weak_structure_solution(ctx, y, Rational(1, 4)),
                  input_error);
  try {
    build_weak_structure_solution(ctx, y, Rational(1, 4));
  } catch (const input_error& e) {
    CHECK(std::string(e.what()).find("cap") != std::string::npos);
  }
}

TEST_CASE("weak structure on the empty cover") {
  StructureContext ctx = fixture(2, 2, 14);
  WeakStructureResult weak =
      build_weak_structure_solution(ctx, {}, Rational(1, 2));
  CHECK(weak.solution.weights().empty());
  CHECK(weak.norm == Rational(0));
}

TEST_CASE("full structure pipeline keeps the exact cover") {
  StreamRng rng(808);
  for (int trial = 0; trial < 4; ++trial) {
    StructureContext ctx = fixture(2, 3, 400 + trial);
    std::vector<StructureVector> vectors = build_structure_vectors(ctx);
    RationalCover y = alpha_scaled_cover(ctx, Rational(1, 2), rng);
    StructureSolveResult res = build_structure_solution(
        ctx, vectors, y, Rational(1, 2), Rational(1, 4));
    RationalCover want = y;
    for (auto it = want.begin(); it != want.end();)
      it = it->second == Rational(0) ? want.erase(it) : std::next(it);
    CHECK(res.solution.cover() == want);
    CHECK(res.alpha_used >= Rational(1, 2));
  }
}

TEST_CASE("verify_structure_properties passes on fixtures") {
  for (int q : {2, 3}) {
    PackedInstance p = generate_packed(q, 3, 1234 + q);
    StructureContext ctx = build_context(p.instance, p.packing, q);
    for (const StructureCheck& c : verify_structure_properties(ctx, 5)) {
      INFO(c.name, ": ", c.detail);
      CHECK(c.pass);
    }
  }
}
