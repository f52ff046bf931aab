#include "cmk/config_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "cmk/errors.hpp"
#include "cmk/knapsack.hpp"

namespace cmk {

namespace {

constexpr double kRcTol = 1e-7;       // improving-column threshold
constexpr int kExactPricingCap = 30;  // exact pricing up to this many items

void check_lp_output(const LpProblem& lp, const LpSolution& sol) {
  std::set<ItemId> allowed(lp.allowed.begin(), lp.allowed.end());
  CoverVector y = cover(sol.fractional);
  for (const auto& [id, yi] : y) {
    internal_check(allowed.count(id) > 0, "config LP: support escapes S");
    internal_check(yi <= 1.0 + 1e-9, "config LP: cover exceeds 1");
  }
  internal_check(std::abs(sol.fractional.size() - lp.ell) <= 1e-9 * (1.0 + lp.ell),
                 "config LP: size differs from ell");
  for (const auto& [c, w] : sol.fractional.weights())
    internal_check(validate_configuration(*lp.instance, c),
                   "config LP: invalid configuration in support");
}

}  // namespace

LpProblem::LpProblem(const Instance& inst, std::vector<ItemId> allowed_items,
                     double ell_in)
    : instance(&inst), allowed(std::move(allowed_items)), ell(ell_in) {
  if (!(ell > 0.0)) throw input_error("config LP: ell must be positive");
  std::sort(allowed.begin(), allowed.end());
  allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());
  for (ItemId id : allowed)
    if (!inst.contains(id))
      throw input_error("config LP: allowed item " + std::to_string(id) +
                        " not in instance");
}

LpProblem full_lp(const Instance& inst, double ell) {
  std::vector<ItemId> ids;
  ids.reserve(inst.n());
  for (const Item& it : inst.items()) ids.push_back(it.id);
  return LpProblem(inst, std::move(ids), ell);
}

namespace {

// All configurations over `ids` (must be small).
std::vector<Configuration> enumerate_configurations(const Instance& inst,
                                                    const std::vector<ItemId>& ids) {
  std::vector<Configuration> out;
  std::vector<ItemId> current;
  auto rec = [&](auto&& self, size_t idx, double weight) -> void {
    out.emplace_back(current);
    if (current.size() >= static_cast<size_t>(inst.k())) return;
    for (size_t i = idx; i < ids.size(); ++i) {
      double w = weight + inst.weight(ids[i]);
      if (w > 1.0 + kFeasibilityTol) continue;
      current.push_back(ids[i]);
      self(self, i + 1, w);
      current.pop_back();
    }
  };
  rec(rec, 0, 0.0);
  return out;
}

}  // namespace

LpSolution solve_exact_small(const LpProblem& lp) {
  if (lp.allowed.size() > 14)
    throw capacity_error("solve_exact_small: " + std::to_string(lp.allowed.size()) +
                         " items exceed the enumeration cap of 14");
  const Instance& inst = *lp.instance;
  std::vector<Configuration> configs = enumerate_configurations(inst, lp.allowed);

  const size_t n_items = lp.allowed.size();
  const size_t n_cols = configs.size();
  DenseLp<double> dense;
  dense.objective.resize(n_cols);
  std::map<ItemId, size_t> row_of;
  for (size_t r = 0; r < n_items; ++r) row_of[lp.allowed[r]] = r;

  std::vector<std::vector<double>> cols(n_cols, std::vector<double>(n_items + 1, 0.0));
  for (size_t j = 0; j < n_cols; ++j) {
    double v = 0.0;
    for (ItemId id : configs[j].ids()) {
      v += inst.value(id);
      cols[j][row_of[id]] = 1.0;
    }
    cols[j][n_items] = 1.0;  // budget row
    dense.objective[j] = v;
  }
  for (size_t r = 0; r <= n_items; ++r) {
    std::vector<double> row(n_cols);
    for (size_t j = 0; j < n_cols; ++j) row[j] = cols[j][r];
    if (r < n_items)
      dense.add_row(std::move(row), RowSense::le, 1.0);
    else
      dense.add_row(std::move(row), RowSense::eq, lp.ell);
  }

  VertexResult<double> res = solve_vertex_lp(dense);
  internal_check(res.status == LpStatus::optimal,
                 "solve_exact_small: vertex solver returned " +
                     std::string(to_string(res.status)));

  LpSolution out;
  for (size_t j = 0; j < n_cols; ++j)
    if (res.x[j] > 1e-12) out.fractional.add(configs[j], res.x[j]);
  out.objective = res.objective;
  out.dual_bound = res.objective;
  for (size_t r = 0; r < n_items; ++r) out.duals[lp.allowed[r]] = res.duals[r];
  out.budget_dual = res.duals[n_items];
  out.status = LpSolveStatus::optimal;
  check_lp_output(lp, out);
  return out;
}

LpSolution solve_column_generation(const LpProblem& lp, double eps,
                                   size_t max_columns) {
  if (!(eps > 0.0 && eps < 1.0))
    throw input_error("solve_column_generation: eps must be in (0,1)");
  const Instance& inst = *lp.instance;
  const size_t n_items = lp.allowed.size();

  // cover rows then the budget equality
  DenseLp<double> dense;
  std::vector<Configuration> pool;
  std::set<Configuration> pool_set;
  std::map<ItemId, size_t> row_of;
  for (size_t r = 0; r < n_items; ++r) row_of[lp.allowed[r]] = r;

  auto column_coeffs = [&](const Configuration& c) {
    std::vector<double> col(n_items + 1, 0.0);
    for (ItemId id : c.ids()) col[row_of[id]] = 1.0;
    col[n_items] = 1.0;
    return col;
  };
  auto column_value = [&](const Configuration& c) {
    double v = 0.0;
    for (ItemId id : c.ids()) v += inst.value(id);
    return v;
  };

  // the empty configuration alone keeps ||x|| = ell satisfiable; singleton
  // seeding helps small instances but bloats the master at scale
  pool.push_back(Configuration{});
  if (n_items <= 64)
    for (ItemId id : lp.allowed) pool.push_back(Configuration{{id}});
  for (const Configuration& c : pool) pool_set.insert(c);

  dense.objective.resize(pool.size());
  std::vector<std::vector<double>> col_data;
  for (size_t j = 0; j < pool.size(); ++j) {
    dense.objective[j] = column_value(pool[j]);
    col_data.push_back(column_coeffs(pool[j]));
  }
  for (size_t r = 0; r <= n_items; ++r) {
    std::vector<double> row(pool.size());
    for (size_t j = 0; j < pool.size(); ++j) row[j] = col_data[j][r];
    if (r < n_items)
      dense.add_row(std::move(row), RowSense::le, 1.0);
    else
      dense.add_row(std::move(row), RowSense::eq, lp.ell);
  }

  // pool index -> engine column index
  std::vector<size_t> engine_col(pool.size());
  for (size_t j = 0; j < pool.size(); ++j) engine_col[j] = j;

  SimplexEngine<double> engine(dense);
  LpStatus st = engine.solve();
  internal_check(st == LpStatus::optimal,
                 "column generation: initial master returned " +
                     std::string(to_string(st)));

  double best_bound = std::numeric_limits<double>::infinity();
  LpSolveStatus final_status = LpSolveStatus::iteration_limit;

  // Column search runs at a coarse FPTAS accuracy first; only when the
  // coarse tier converges without certifying the gap does pricing drop to
  // the eps/2 accuracy the final certificate may need.
  const double eps_fine = eps / 2.0;
  double eps_work = std::max(eps_fine, 0.05);

  while (true) {
    const double master_obj = engine.objective_value();
    const double mu = engine.dual(n_items);

    PricingProblem pricing;
    pricing.cardinality = inst.k();
    pricing.exact_cap = kExactPricingCap;
    for (size_t r = 0; r < n_items; ++r) {
      ItemId id = lp.allowed[r];
      double profit = inst.value(id) - engine.dual(r);
      if (profit > 0.0) pricing.candidates.push_back({id, inst.weight(id), profit});
    }

    double pricing_value;
    double pricing_bound;  // certified upper bound on the true max profit
    Configuration priced;
    if (static_cast<int>(pricing.candidates.size()) <= kExactPricingCap) {
      PricingResult pr = solve_exact(pricing);
      pricing_value = pr.profit;
      pricing_bound = pr.profit;
      priced = std::move(pr.configuration);
    } else {
      PricingResult pr = solve_fptas(pricing, eps_work);
      pricing_value = pr.profit;
      pricing_bound = pr.profit / (1.0 - eps_work);
      priced = std::move(pr.configuration);
    }

    // Lagrangian bound: OPT_LP <= master + ell * (max reduced cost)^+
    const double sigma_ub = std::max(0.0, pricing_bound - mu);
    best_bound = std::min(best_bound, master_obj + lp.ell * sigma_ub);

    if (master_obj >= (1.0 - eps) * best_bound) {
      final_status = LpSolveStatus::approx;
      break;
    }
    if (pricing_value - mu <= kRcTol || pool_set.count(priced)) {
      // converged at the current pricing accuracy (a re-proposed pool column
      // means the master cannot improve further at this tier either)
      if (eps_work <= eps_fine) {
        final_status =
            pricing_value - mu <= kRcTol ? LpSolveStatus::optimal : LpSolveStatus::approx;
        break;
      }
      eps_work = eps_fine;
      continue;
    }
    if (pool.size() >= max_columns) {
      final_status = LpSolveStatus::iteration_limit;
      break;
    }

    size_t idx = engine.add_column(column_coeffs(priced), column_value(priced));
    pool.push_back(priced);
    pool_set.insert(priced);
    engine_col.push_back(idx);
    st = engine.reoptimize();
    internal_check(st == LpStatus::optimal,
                   "column generation: master reoptimize returned " +
                       std::string(to_string(st)));
  }

  LpSolution out;
  for (size_t j = 0; j < pool.size(); ++j) {
    double xj = engine.column_value(engine_col[j]);
    if (xj > 1e-12) out.fractional.add(pool[j], xj);
  }
  out.objective = engine.objective_value();
  out.dual_bound = std::max(out.objective, best_bound);
  for (size_t r = 0; r < n_items; ++r) out.duals[lp.allowed[r]] = engine.dual(r);
  out.budget_dual = engine.dual(n_items);
  out.status = final_status;
  check_lp_output(lp, out);
  return out;
}

}  // namespace cmk
