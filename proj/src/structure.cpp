#include "cmk/structure.hpp"

#include <algorithm>
#include <cmath>

#include "cmk/errors.hpp"
#include "cmk/knapsack_bnb.hpp"
#include "cmk/rng.hpp"
#include "cmk/simplex.hpp"

namespace cmk {

namespace {

BigInt lcm_big(const BigInt& a, const BigInt& b) {
  return a / gcd(a, b) * b;
}

bool exact_config_ok(const StructureContext& ctx, const std::vector<ItemId>& ids) {
  if (ids.size() > static_cast<size_t>(ctx.instance.k())) return false;
  Rational w(0);
  for (ItemId id : ids) w += ctx.weight.at(id);
  return w <= Rational(1);
}

void validate_cover_vector(const StructureContext& ctx, const RationalCover& y) {
  for (const auto& [id, yi] : y) {
    if (yi < Rational(0) || yi > Rational(1))
      throw input_error("cover vector entry for item " + std::to_string(id) +
                        " outside [0,1]");
    if (yi != Rational(0) && !ctx.support.count(id))
      throw input_error("cover vector supported outside S at item " +
                        std::to_string(id));
  }
}

BigInt common_denominator(const RationalCover& y, const Rational& alpha) {
  BigInt n = denominator(alpha);
  for (const auto& [id, yi] : y) n = lcm_big(n, denominator(yi));
  return n;
}

Rational cover_at(const RationalCover& y, ItemId id) {
  auto it = y.find(id);
  return it == y.end() ? Rational(0) : it->second;
}

void drop_zeros(RationalCover& y) {
  for (auto it = y.begin(); it != y.end();)
    it = it->second == Rational(0) ? y.erase(it) : std::next(it);
}

RationalCover restrict_to(const RationalCover& y, const std::set<ItemId>& ids) {
  RationalCover out;
  for (const auto& [id, yi] : y)
    if (yi != Rational(0) && ids.count(id)) out[id] = yi;
  return out;
}

}  // namespace

Rational rationalize(double x, int64_t max_den) {
  if (!(x > 0.0)) return Rational(0);
  if (!(max_den >= 1)) throw input_error("rationalize: bad denominator cap");
  // continued-fraction convergents p/q while q stays within the cap
  int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int iter = 0; iter < 64; ++iter) {
    double fa = std::floor(v);
    if (fa > 9e17) break;
    int64_t a = static_cast<int64_t>(fa);
    if (q1 != 0 && a > (max_den - q0) / q1) {
      // best semiconvergent within the cap
      int64_t k = (max_den - q0) / q1;
      int64_t ps = k * p1 + p0, qs = k * q1 + q0;
      Rational conv(p1, q1);
      Rational semi(ps, qs);
      double dc = std::abs(x - static_cast<double>(p1) / static_cast<double>(q1));
      double ds = std::abs(x - static_cast<double>(ps) / static_cast<double>(qs));
      return (qs >= 1 && ds < dc) ? semi : conv;
    }
    int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double rem = v - fa;
    if (rem < 1e-12) break;
    v = 1.0 / rem;
  }
  return Rational(p1, std::max<int64_t>(q1, 1));
}

void RationalSolution::add(const Configuration& c, const Rational& weight) {
  if (weight < Rational(0))
    throw input_error("rational solution: negative configuration weight");
  if (weight == Rational(0)) return;
  weights_[c] += weight;
}

Rational RationalSolution::size() const {
  Rational s(0);
  for (const auto& [c, w] : weights_) s += w;
  return s;
}

RationalCover RationalSolution::cover() const {
  RationalCover y;
  for (const auto& [c, w] : weights_)
    for (ItemId id : c.ids()) y[id] += w;
  drop_zeros(y);
  return y;
}

RationalSolution& RationalSolution::operator+=(const RationalSolution& other) {
  for (const auto& [c, w] : other.weights_) add(c, w);
  return *this;
}

Rational StructureContext::adjusted_weight(ItemId id) const {
  return weight.at(id) + Rational(1, instance.k());
}

Rational StructureContext::adjusted_weight_sum(const std::vector<ItemId>& ids) const {
  Rational s(0);
  for (ItemId id : ids) s += adjusted_weight(id);
  return s;
}

Rational StructureContext::weight_sum(const std::vector<ItemId>& ids) const {
  Rational s(0);
  for (ItemId id : ids) s += weight.at(id);
  return s;
}

Rational StructureContext::type_weight(const TypeVec& t) const {
  Rational s(0);
  for (int g = 0; g < num_groups(); ++g)
    s += Rational(t[g]) * rounded_weight[g];
  return s;
}

int StructureContext::type_cardinality(const TypeVec& t) const {
  int s = 0;
  for (int c : t) s += c;
  return s;
}

bool StructureContext::is_large(ItemId id) const {
  return adjusted_weight(id) >= delta();
}

StructureContext build_context(const Instance& inst,
                               const std::vector<Configuration>& packing,
                               int inv_delta) {
  if (inv_delta < 2) throw input_error("build_context: need 1/delta >= 2");
  StructureContext ctx;
  ctx.instance = inst;
  ctx.inv_delta = inv_delta;
  ctx.packing = packing;

  for (const Item& it : inst.items())
    ctx.weight[it.id] = rationalize(it.weight);

  for (const Configuration& d : packing) {
    if (!validate_configuration(inst, d))
      throw input_error("build_context: packing bin is not a configuration");
    if (!exact_config_ok(ctx, d.ids()))
      throw input_error("build_context: packing bin infeasible under exact weights");
    for (ItemId id : d.ids())
      if (!ctx.support.insert(id).second)
        throw input_error("build_context: packing bins are not disjoint");
  }

  for (ItemId id : ctx.support)
    if (ctx.is_large(id)) ctx.large.push_back(id);
  std::sort(ctx.large.begin(), ctx.large.end(), [&](ItemId a, ItemId b) {
    Rational wa = ctx.adjusted_weight(a), wb = ctx.adjusted_weight(b);
    if (wa != wb) return wa > wb;
    return a < b;
  });

  const int ng = ctx.num_groups();
  const size_t r = ctx.large.size();
  const size_t s = (r + ng - 1) / ng;  // ceil(delta^2 * r)
  ctx.groups.assign(ng, {});
  for (int g = 0; g < ng && s > 0; ++g) {
    size_t lo = s * g, hi = std::min(r, s * (g + 1));
    if (lo >= r) break;
    ctx.groups[g].assign(ctx.large.begin() + lo, ctx.large.begin() + hi);
  }
  ctx.rounded_weight.assign(ng, Rational(0));
  for (int g = 0; g < ng; ++g)
    if (!ctx.groups[g].empty())
      ctx.rounded_weight[g] = ctx.weight.at(ctx.groups[g].back());

  // realized types of the packing, in lexicographic order
  std::map<ItemId, int> group_of;
  for (int g = 0; g < ng; ++g)
    for (ItemId id : ctx.groups[g]) group_of[id] = g;
  std::map<StructureContext::TypeVec, std::vector<size_t>> by_type;
  for (size_t b = 0; b < packing.size(); ++b) {
    StructureContext::TypeVec t(ng, 0);
    for (ItemId id : packing[b].ids()) {
      auto it = group_of.find(id);
      if (it != group_of.end()) ++t[it->second];
    }
    by_type[t].push_back(b);
  }
  for (const auto& [t, bins] : by_type) {
    ctx.types.push_back(t);
    ctx.eta.push_back(static_cast<int>(bins.size()));
    std::vector<ItemId> cls;
    for (size_t b : bins)
      for (ItemId id : packing[b].ids())
        if (!ctx.is_large(id)) cls.push_back(id);
    std::sort(cls.begin(), cls.end(), [&](ItemId a, ItemId b2) {
      Rational wa = ctx.weight.at(a), wb = ctx.weight.at(b2);
      if (wa != wb) return wa > wb;
      return a < b2;
    });
    ctx.classes.push_back(std::move(cls));
  }

  // degenerate types and subclass boundaries
  const size_t num_types = ctx.types.size();
  ctx.degenerate.assign(num_types, 0);
  ctx.subclasses.assign(num_types, {});
  const Rational degen_threshold =
      num_types == 0 ? Rational(0)
                     : Rational(ctx.ell()) * ctx.delta() * ctx.delta() *
                           ctx.delta() / Rational(num_types);
  for (size_t t = 0; t < num_types; ++t) {
    Rational cls_aw = ctx.adjusted_weight_sum(ctx.classes[t]);
    if (cls_aw <= degen_threshold) {
      ctx.degenerate[t] = 1;
      continue;
    }
    const std::vector<ItemId>& cls = ctx.classes[t];
    std::vector<Rational> prefix(cls.size() + 1, Rational(0));
    for (size_t i = 0; i < cls.size(); ++i)
      prefix[i + 1] = prefix[i] + ctx.adjusted_weight(cls[i]);
    const Rational quota = cls_aw * ctx.delta() * ctx.delta();
    std::vector<std::vector<ItemId>>& subs = ctx.subclasses[t];
    subs.assign(ng, {});
    size_t prev = 0;
    for (int j = 1; j <= ng; ++j) {
      Rational target = Rational(j) * quota;
      size_t h = prev;
      while (h < cls.size() && prefix[h] < target) ++h;
      // h = min { s : prefix(s) >= j * quota }
      subs[j - 1].assign(cls.begin() + prev, cls.begin() + h);
      prev = h;
    }
    internal_check(prev == cls.size(),
                   "build_context: subclasses do not partition the class");
  }
  return ctx;
}

Rational tolerance(const StructureContext& ctx, const StructureVector& u) {
  std::vector<detail::BnbItem<Rational, Rational>> items;
  for (const auto& [id, ui] : u.entries) {
    if (ui < Rational(0))
      throw input_error("tolerance: negative entry at item " + std::to_string(id));
    if (ui > Rational(0)) items.push_back({id, ctx.weight.at(id), ui});
  }
  auto [ids, profit] =
      detail::knapsack_bnb(std::move(items), Rational(1), ctx.instance.k());
  return profit;
}

std::vector<StructureVector> build_structure_vectors(const StructureContext& ctx) {
  std::vector<StructureVector> out;
  for (size_t t = 0; t < ctx.types.size(); ++t) {
    if (ctx.degenerate[t]) continue;
    for (int j = 0; j < ctx.num_groups(); ++j) {
      const std::vector<ItemId>& sub = ctx.subclasses[t][j];
      StructureVector card{"card:type" + std::to_string(t) + ":sub" +
                               std::to_string(j + 1),
                           {}};
      StructureVector wcap{"weight:type" + std::to_string(t) + ":sub" +
                               std::to_string(j + 1),
                           {}};
      for (ItemId id : sub) {
        card.entries[id] = Rational(1);
        wcap.entries[id] = std::min(ctx.weight.at(id), Rational(1));
      }
      out.push_back(std::move(card));
      out.push_back(std::move(wcap));
    }
  }
  for (int g = 0; g < ctx.num_groups(); ++g) {
    StructureVector ind{"group:" + std::to_string(g + 1), {}};
    for (ItemId id : ctx.groups[g]) ind.entries[id] = Rational(1);
    out.push_back(std::move(ind));
  }
  return out;
}

bool check_structure_inequalities(const StructureContext& ctx,
                                  const std::vector<StructureVector>& vectors,
                                  const RationalCover& y, const Rational& alpha,
                                  const Rational& t) {
  if (!(alpha > Rational(0) && alpha <= Rational(1)))
    throw input_error("check_structure_inequalities: alpha must be in (0,1]");
  if (!(t > Rational(0)))
    throw input_error("check_structure_inequalities: t must be positive");
  validate_cover_vector(ctx, y);
  for (const StructureVector& u : vectors) {
    Rational lhs(0), mass(0);
    for (const auto& [id, ui] : u.entries) {
      lhs += ui * cover_at(y, id);
      if (ctx.support.count(id)) mass += ui;
    }
    if (lhs > alpha * mass + t * tolerance(ctx, u)) return false;
  }
  return true;
}

RationalSolution item_per_bin(const RationalCover& y) {
  RationalSolution x;
  for (const auto& [id, yi] : y) {
    if (yi < Rational(0) || yi > Rational(1))
      throw input_error("item_per_bin: entry outside [0,1]");
    if (yi > Rational(0)) x.add(Configuration{{id}}, yi);
  }
  return x;
}

RationalSolution fractional_first_fit(const StructureContext& ctx,
                                      const RationalCover& y) {
  validate_cover_vector(ctx, y);
  for (const auto& [id, yi] : y)
    if (yi != Rational(0) && ctx.is_large(id))
      throw input_error("fractional_first_fit: item " + std::to_string(id) +
                        " is large");

  const BigInt n_copies = common_denominator(y, Rational(1));
  // configurations with multiplicities; identical bins stay merged so the
  // copy count N can be large without materializing N bins
  std::map<Configuration, BigInt> bins;

  for (const auto& [id, yi] : y) {
    if (yi == Rational(0)) continue;
    BigInt demand = numerator(yi * Rational(n_copies));
    internal_check(denominator(yi * Rational(n_copies)) == 1,
                   "fractional_first_fit: non-integral demand");
    const Rational wi = ctx.weight.at(id);
    std::vector<std::pair<Configuration, BigInt>> staged;
    for (auto it = bins.begin(); it != bins.end() && demand > 0;) {
      const Configuration& c = it->first;
      bool fits = c.size() + 1 <= static_cast<size_t>(ctx.instance.k()) &&
                  ctx.weight_sum(c.ids()) + wi <= Rational(1);
      if (!fits) {
        ++it;
        continue;
      }
      BigInt take = std::min(it->second, demand);
      demand -= take;
      staged.emplace_back(c.with(id), take);
      it->second -= take;
      it = it->second == 0 ? bins.erase(it) : std::next(it);
    }
    if (demand > 0) staged.emplace_back(Configuration{{id}}, demand);
    for (auto& [c, cnt] : staged) bins[c] += cnt;
  }

  RationalSolution x;
  for (const auto& [c, cnt] : bins)
    x.add(c, Rational(cnt) / Rational(n_copies));

  // exact postconditions: cover equality and the size bound
  RationalCover got = x.cover();
  RationalCover want = y;
  drop_zeros(want);
  internal_check(got == want, "fractional_first_fit: cover mismatch");
  Rational bound(1);
  for (const auto& [id, yi] : y) bound += Rational(2) * yi * ctx.adjusted_weight(id);
  internal_check(x.size() <= bound, "fractional_first_fit: norm bound violated");
  return x;
}

namespace {

struct ScaledCheck {
  bool ok = true;
  std::string violated;
};

ScaledCheck check_alpha_scaled(const StructureContext& ctx,
                               const RationalCover& y, const Rational& alpha) {
  for (int g = 0; g < ctx.num_groups(); ++g) {
    Rational sum(0);
    for (ItemId id : ctx.groups[g]) sum += cover_at(y, id);
    if (sum > alpha * Rational(ctx.groups[g].size()))
      return {false, "group " + std::to_string(g + 1) + " cardinality cap"};
  }
  for (size_t t = 0; t < ctx.types.size(); ++t) {
    Rational cnt(0), wsum(0);
    for (ItemId id : ctx.classes[t]) {
      Rational yi = cover_at(y, id);
      cnt += yi;
      wsum += yi * ctx.weight.at(id);
    }
    if (cnt > alpha * Rational(ctx.classes[t].size()))
      return {false, "class " + std::to_string(t) + " cardinality cap"};
    if (wsum > alpha * ctx.weight_sum(ctx.classes[t]))
      return {false, "class " + std::to_string(t) + " weight cap"};
  }
  return {true, {}};
}

}  // namespace

WeakStructureResult build_weak_structure_solution(const StructureContext& ctx,
                                                  const RationalCover& y,
                                                  const Rational& alpha) {
  if (!(alpha > Rational(0)))
    throw input_error("weak structure: alpha must be positive");
  validate_cover_vector(ctx, y);
  ScaledCheck sc = check_alpha_scaled(ctx, y, alpha);
  if (!sc.ok)
    throw input_error("weak structure: input is not alpha-scaled (" +
                      sc.violated + ")");

  const Instance& inst = ctx.instance;
  const int ng = ctx.num_groups();
  const size_t num_types = ctx.types.size();
  const BigInt n_copies = common_denominator(y, alpha);
  internal_check(denominator(alpha * Rational(n_copies)) == 1,
                 "weak structure: alpha*N not integral");

  BigInt m_big(0);
  std::vector<BigInt> block(num_types);
  for (size_t t = 0; t < num_types; ++t) {
    block[t] = numerator(alpha * Rational(n_copies)) * ctx.eta[t] + n_copies;
    m_big += block[t];
  }
  if (m_big > 20000)
    throw capacity_error("weak structure: " + m_big.str() +
                         " placeholder bins exceed the implementation cap");
  const size_t M = m_big.convert_to<size_t>();

  // xi assigns a type to each placeholder bin, in canonical blocks
  std::vector<size_t> xi(M);
  {
    size_t b = 0;
    for (size_t t = 0; t < num_types; ++t)
      for (BigInt i = 0; i < block[t]; ++i) xi[b++] = t;
  }

  // shifting procedure over groups 2..ng
  struct Bin {
    std::vector<ItemId> items;
    Rational weight{0};
    std::vector<int> per_group;
  };
  std::vector<Bin> bins(M);
  for (Bin& b : bins) b.per_group.assign(ng, 0);
  std::set<ItemId> failed;  // R

  for (int g = 1; g < ng; ++g) {
    size_t failed_in_group = 0;
    for (ItemId id : ctx.groups[g]) {
      Rational ny = cover_at(y, id) * Rational(n_copies);
      internal_check(denominator(ny) == 1, "weak structure: demand not integral");
      BigInt demand = numerator(ny);
      if (demand == 0) continue;
      std::vector<size_t> target;
      for (size_t b = 0; b < M && BigInt(target.size()) < demand; ++b)
        if (bins[b].per_group[g] < ctx.types[xi[b]][g - 1]) target.push_back(b);
      if (BigInt(target.size()) < demand) {
        failed.insert(id);
        ++failed_in_group;
        continue;
      }
      for (size_t b : target) {
        bins[b].items.push_back(id);
        bins[b].weight += ctx.weight.at(id);
        bins[b].per_group[g] += 1;
      }
    }
    internal_check(failed_in_group <= 2 * static_cast<size_t>(ctx.inv_delta),
                   "weak structure: |R ∩ G_j| exceeds 2/delta");
  }
  internal_check(failed.size() <= 2 * static_cast<size_t>(ctx.inv_delta) *
                                      ctx.inv_delta * ctx.inv_delta,
                 "weak structure: |R| exceeds 2/delta^3");

  for (size_t b = 0; b < M; ++b) {
    internal_check(
        static_cast<int>(bins[b].items.size()) <=
            ctx.type_cardinality(ctx.types[xi[b]]),
        "weak structure: placeholder cardinality exceeded");
    internal_check(bins[b].weight <= ctx.type_weight(ctx.types[xi[b]]),
                   "weak structure: placeholder weight exceeded");
  }

  // assign LP over (small item, placeholder bin) pairs, solved exactly
  std::vector<ItemId> small;
  for (ItemId id : ctx.support)
    if (!ctx.is_large(id) && cover_at(y, id) > Rational(0)) small.push_back(id);
  std::sort(small.begin(), small.end());
  const size_t ns = small.size();

  std::vector<std::vector<Rational>> z(ns, std::vector<Rational>(M, Rational(0)));
  if (ns > 0) {
    DenseLp<Rational> lp;
    lp.objective.assign(ns * M, Rational(1));
    for (size_t i = 0; i < ns; ++i) {
      std::vector<Rational> row(ns * M, Rational(0));
      for (size_t b = 0; b < M; ++b) row[i * M + b] = Rational(1);
      lp.add_row(std::move(row), RowSense::le,
                 cover_at(y, small[i]) * Rational(n_copies));
    }
    for (size_t b = 0; b < M; ++b) {
      std::vector<Rational> crow(ns * M, Rational(0)), wrow(ns * M, Rational(0));
      for (size_t i = 0; i < ns; ++i) {
        crow[i * M + b] = Rational(1);
        wrow[i * M + b] = ctx.weight.at(small[i]);
      }
      lp.add_row(std::move(crow), RowSense::le,
                 Rational(inst.k()) - Rational(bins[b].items.size()));
      lp.add_row(std::move(wrow), RowSense::le, Rational(1) - bins[b].weight);
    }
    for (size_t i = 0; i < ns; ++i) {
      if (cover_at(y, small[i]) * Rational(n_copies) <= Rational(1)) continue;
      for (size_t b = 0; b < M; ++b) {
        std::vector<Rational> row(ns * M, Rational(0));
        row[i * M + b] = Rational(1);
        lp.add_row(std::move(row), RowSense::le, Rational(1));
      }
    }

    VertexResult<Rational> res = solve_vertex_lp(lp);
    internal_check(res.status == LpStatus::optimal,
                   "weak structure: assign LP not optimal");
    Rational expect(0);
    for (size_t i = 0; i < ns; ++i)
      expect += cover_at(y, small[i]) * Rational(n_copies);
    internal_check(res.objective == expect,
                   "weak structure: assign LP optimum below the scaled demand");
    Rational frac_mass(0);
    for (size_t i = 0; i < ns; ++i)
      for (size_t b = 0; b < M; ++b) {
        z[i][b] = res.x[i * M + b];
        if (z[i][b] > Rational(0) && z[i][b] < Rational(1)) frac_mass += z[i][b];
      }
    internal_check(frac_mass <= Rational(2) * Rational(m_big),
                   "weak structure: fractional mass exceeds 2M");
  }

  // integral part: configurations A*_b with multiplicity 1/N each
  RationalSolution integral_part;
  RationalCover beta;
  for (size_t b = 0; b < M; ++b) {
    std::vector<ItemId> ids = bins[b].items;
    for (size_t i = 0; i < ns; ++i)
      if (z[i][b] == Rational(1)) {
        ids.push_back(small[i]);
        beta[small[i]] += Rational(1, 1) / Rational(n_copies);
      }
    internal_check(exact_config_ok(ctx, ids),
                   "weak structure: assembled placeholder is infeasible");
    if (!ids.empty())
      integral_part.add(Configuration(std::move(ids)),
                        Rational(1) / Rational(n_copies));
  }

  // leftovers: fractional small mass by first fit, first group and failed
  // large items one per bin
  RationalCover leftover;
  for (size_t i = 0; i < ns; ++i) {
    Rational q = cover_at(y, small[i]) - cover_at(beta, small[i]);
    internal_check(q >= Rational(0) && q <= Rational(1),
                   "weak structure: leftover outside [0,1]");
    if (q > Rational(0)) leftover[small[i]] = q;
  }
  RationalSolution ff = fractional_first_fit(ctx, leftover);

  std::set<ItemId> first_group_and_failed(failed.begin(), failed.end());
  first_group_and_failed.insert(ctx.groups[0].begin(), ctx.groups[0].end());
  RationalSolution singles = item_per_bin(restrict_to(y, first_group_and_failed));

  WeakStructureResult out;
  out.solution = std::move(integral_part);
  out.solution += ff;
  out.solution += singles;
  out.copies = n_copies;
  out.failed_items = failed.size();
  out.norm = out.solution.size();

  RationalCover got = out.solution.cover();
  RationalCover want = y;
  drop_zeros(want);
  internal_check(got == want, "weak structure: cover mismatch");
  return out;
}

StructureSolveResult build_structure_solution(
    const StructureContext& ctx, const std::vector<StructureVector>& vectors,
    const RationalCover& y, const Rational& alpha, const Rational& t) {
  validate_cover_vector(ctx, y);
  if (!check_structure_inequalities(ctx, vectors, y, alpha, t))
    throw input_error("structure solution: input violates the structure inequalities");

  std::set<ItemId> degenerate_items;
  for (size_t tt = 0; tt < ctx.types.size(); ++tt)
    if (ctx.degenerate[tt])
      degenerate_items.insert(ctx.classes[tt].begin(), ctx.classes[tt].end());

  std::set<ItemId> boundary_items;  // first and last subclasses
  for (size_t tt = 0; tt < ctx.types.size(); ++tt) {
    if (ctx.degenerate[tt]) continue;
    const auto& subs = ctx.subclasses[tt];
    boundary_items.insert(subs.front().begin(), subs.front().end());
    boundary_items.insert(subs.back().begin(), subs.back().end());
  }

  std::set<ItemId> unsaturated_items;
  const int q4 = ctx.inv_delta * ctx.inv_delta * ctx.inv_delta * ctx.inv_delta;
  for (const auto& g : ctx.groups)
    if (Rational(g.size()) * Rational(q4) <= Rational(ctx.ell()))
      unsaturated_items.insert(g.begin(), g.end());

  RationalCover y_degen = restrict_to(y, degenerate_items);
  RationalCover y_bound = restrict_to(y, boundary_items);
  RationalCover y_unsat = restrict_to(y, unsaturated_items);

  RationalCover y_rest = y;
  drop_zeros(y_rest);
  for (const auto& [id, yi] : y_degen) y_rest.erase(id);
  for (const auto& [id, yi] : y_bound) y_rest.erase(id);
  for (const auto& [id, yi] : y_unsat) y_rest.erase(id);

  // the paper's scale for the remainder, raised when the desk-scale caps
  // demand more
  const size_t num_types = std::max<size_t>(ctx.types.size(), 1);
  Rational q6 = Rational(ctx.inv_delta);
  q6 = q6 * q6 * q6;
  q6 = q6 * q6;  // (1/delta)^6
  Rational alpha_prime =
      alpha + Rational(2) * q6 * Rational(num_types) * t / Rational(ctx.ell());
  Rational alpha_caps(0);
  for (int g = 0; g < ctx.num_groups(); ++g) {
    if (ctx.groups[g].empty()) continue;
    Rational sum(0);
    for (ItemId id : ctx.groups[g]) sum += cover_at(y_rest, id);
    alpha_caps = std::max(alpha_caps, Rational(sum / Rational(ctx.groups[g].size())));
  }
  for (size_t tt = 0; tt < ctx.types.size(); ++tt) {
    if (ctx.classes[tt].empty()) continue;
    Rational cnt(0), wsum(0);
    for (ItemId id : ctx.classes[tt]) {
      Rational yi = cover_at(y_rest, id);
      cnt += yi;
      wsum += yi * ctx.weight.at(id);
    }
    alpha_caps = std::max(alpha_caps, Rational(cnt / Rational(ctx.classes[tt].size())));
    Rational wtot = ctx.weight_sum(ctx.classes[tt]);
    if (wtot > Rational(0)) alpha_caps = std::max(alpha_caps, Rational(wsum / wtot));
  }
  Rational alpha_used = std::max(alpha_prime, alpha_caps);
  if (alpha_used == Rational(0)) alpha_used = alpha;

  WeakStructureResult weak = build_weak_structure_solution(ctx, y_rest, alpha_used);

  StructureSolveResult out;
  out.solution = std::move(weak.solution);
  out.solution += fractional_first_fit(ctx, y_degen);
  out.solution += fractional_first_fit(ctx, y_bound);
  out.solution += item_per_bin(y_unsat);
  out.alpha_used = alpha_used;
  out.norm = out.solution.size();

  RationalCover got = out.solution.cover();
  RationalCover want = y;
  drop_zeros(want);
  internal_check(got == want, "structure solution: cover mismatch");
  return out;
}

}  // namespace cmk

namespace cmk {

namespace {

// Random feasible configuration under exact weights.
Configuration random_configuration(const StructureContext& ctx, StreamRng& rng) {
  std::vector<ItemId> all(ctx.support.begin(), ctx.support.end());
  for (size_t i = all.size(); i > 1; --i)
    std::swap(all[i - 1], all[rng.below(i)]);
  std::vector<ItemId> chosen;
  Rational w(0);
  for (ItemId id : all) {
    if (chosen.size() >= static_cast<size_t>(ctx.instance.k())) break;
    if (w + ctx.weight.at(id) > Rational(1)) continue;
    if (rng.below(3) == 0) continue;  // leave some slack in the mix
    chosen.push_back(id);
    w += ctx.weight.at(id);
  }
  return Configuration(std::move(chosen));
}

StructureContext::TypeVec type_of(const StructureContext& ctx,
                                  const Configuration& c) {
  StructureContext::TypeVec t(ctx.num_groups(), 0);
  for (int g = 0; g < ctx.num_groups(); ++g)
    for (ItemId id : ctx.groups[g])
      if (c.contains(id)) ++t[g];
  return t;
}

}  // namespace

std::vector<StructureCheck> verify_structure_properties(
    const StructureContext& ctx, uint64_t seed) {
  std::vector<StructureCheck> out;
  StreamRng rng(splitmix64(seed ^ 0x5bd1e995a197cb2dULL));
  const Instance& inst = ctx.instance;
  const int q = ctx.inv_delta;
  const int ng = ctx.num_groups();
  auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    out.push_back({name, pass, detail});
  };

  {
    bool ok = true;
    for (int g = 0; g < ng; ++g) {
      long total = 0;
      for (size_t t = 0; t < ctx.types.size(); ++t)
        total += static_cast<long>(ctx.eta[t]) * ctx.types[t][g];
      if (total != static_cast<long>(ctx.groups[g].size())) ok = false;
    }
    add("eta_to_groups", ok, "sum eta(p) p_j equals |G_j| for every group");
  }
  {
    bool ok = true;
    size_t cap = (ctx.large.size() + ng - 1) / ng;
    for (int g = 0; g + 1 < ng; ++g)
      if (ctx.groups[g].size() < ctx.groups[g + 1].size()) ok = false;
    if (!ctx.groups.empty() && ctx.groups[0].size() > std::max<size_t>(cap, 0))
      ok = false;
    add("groups_size", ok, "group sizes are nonincreasing and at most ceil(d^2 r)");
  }
  {
    double bound = std::pow(1.0 + 2.0 * q, static_cast<double>(ng));
    add("num_types", static_cast<double>(ctx.types.size()) <= bound,
        std::to_string(ctx.types.size()) + " realized types, bound " +
            std::to_string(bound));
  }
  {
    bool w_ok = true, c_ok = true, adj_ok = true, large_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
      Configuration c = random_configuration(ctx, rng);
      StructureContext::TypeVec t = type_of(ctx, c);
      Rational wl(0), ws(0);
      int nl = 0, nsmall = 0;
      for (ItemId id : c.ids()) {
        if (ctx.is_large(id)) {
          wl += ctx.weight.at(id);
          ++nl;
        } else {
          ws += ctx.weight.at(id);
          ++nsmall;
        }
      }
      if (wl < ctx.type_weight(t)) w_ok = false;
      if (ws > Rational(1) - ctx.type_weight(t)) c_ok = false;
      if (nsmall > inst.k() - ctx.type_cardinality(t)) c_ok = false;
      Rational aw = ctx.adjusted_weight_sum(c.ids());
      if (aw > Rational(2)) adj_ok = false;
      if (nl > 2 * q) large_ok = false;
    }
    add("type_weight", w_ok, "w(C ∩ L) >= w(type(C)) on random configurations");
    add("small_items", c_ok,
        "small weight and count fit the type headroom on random configurations");
    add("config_adjusted_weight", adj_ok, "adjusted weight of a configuration <= 2");
    add("large_items_in_conf", large_ok, "|C ∩ L| <= 2/delta");
  }
  {
    bool ok = true;
    for (size_t t = 0; t < ctx.types.size(); ++t) {
      Rational wk = ctx.weight_sum(ctx.classes[t]);
      Rational cap_w =
          Rational(ctx.eta[t]) * (Rational(1) - ctx.type_weight(ctx.types[t]));
      if (wk > cap_w) ok = false;
      long cap_c = static_cast<long>(ctx.eta[t]) *
                   (inst.k() - ctx.type_cardinality(ctx.types[t]));
      if (static_cast<long>(ctx.classes[t].size()) > cap_c) ok = false;
    }
    add("class_weight_and_card", ok,
        "class weight and cardinality fit eta(p) copies of the headroom");
  }
  {
    bool ok = true;
    const Rational d = ctx.delta();
    for (size_t t = 0; t < ctx.types.size(); ++t) {
      if (ctx.degenerate[t]) continue;
      Rational kw = ctx.adjusted_weight_sum(ctx.classes[t]);
      for (int j = 0; j < ng; ++j) {
        Rational hw = ctx.adjusted_weight_sum(ctx.subclasses[t][j]);
        if (hw > d * d * kw + d) ok = false;
        if (hw < d * d * kw - d) ok = false;
      }
    }
    add("adjusted_subclass_weight", ok,
        "subclass adjusted weights within d^2 w(K) ± d");
  }
  {
    std::vector<StructureVector> vectors = build_structure_vectors(ctx);
    size_t nondegen = 0;
    for (char dgen : ctx.degenerate)
      if (!dgen) ++nondegen;
    size_t bound = 2 * ctx.types.size() * ng + ng;
    add("structure_size", vectors.size() <= bound,
        std::to_string(vectors.size()) + " vectors, bound " + std::to_string(bound) +
            " (" + std::to_string(nondegen) + " non-degenerate types)");

    StructureVector ones{"all", {}};
    StructureVector wvec{"weights", {}};
    for (ItemId id : ctx.support) {
      ones.entries[id] = Rational(1);
      wvec.entries[id] = ctx.weight.at(id);
    }
    bool tol_ok = tolerance(ctx, wvec) <= Rational(1) &&
                  tolerance(ctx, ones) <= Rational(inst.k());
    add("tolerance_sanity", tol_ok,
        "tol(w) <= capacity and tol(1) <= cardinality bound");
  }
  {
    bool ok = true;
    std::string detail = "cover equality and norm bound on random rational y";
    for (int trial = 0; trial < 10 && ok; ++trial) {
      RationalCover y;
      for (ItemId id : ctx.support) {
        if (ctx.is_large(id)) continue;
        y[id] = Rational(rng.below(5), 4);  // 0 .. 1 in quarters
      }
      try {
        RationalSolution x = fractional_first_fit(ctx, y);
        RationalSolution s = item_per_bin(y);
        Rational ysum(0);
        for (auto& [id, yi] : y) ysum += yi;
        if (s.size() != ysum) ok = false;
      } catch (const internal_error& e) {
        ok = false;
        detail = e.what();
      }
    }
    add("fractional_first_fit", ok, detail);
  }
  {
    bool ok = true;
    std::string detail = "weak structure cover equality on an alpha-scaled input";
    RationalCover y;
    for (ItemId id : ctx.support) {
      uint64_t c = rng.below(3);  // 0, 1/2, or 1 of alpha
      y[id] = Rational(1, 2) * Rational(c, 2);
    }
    try {
      WeakStructureResult weak =
          build_weak_structure_solution(ctx, y, Rational(1, 2));
      Rational norm = weak.solution.size();
      double bound = 0.5 * (1.0 + 10.0 / q) * ctx.ell() +
                     std::exp(std::pow(static_cast<double>(q), 4.0));
      if (static_cast<double>(norm) > bound) ok = false;
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    add("weak_structure", ok, detail);
  }
  return out;
}

}  // namespace cmk
