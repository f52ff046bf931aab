#include "cmk/constant_bins.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cmk/errors.hpp"
#include "cmk/knapsack.hpp"
#include "cmk/simplex.hpp"

namespace cmk {

namespace {

constexpr double kLocalSearchEps = 5.0 / 28.0;  // single-bin solver accuracy
constexpr double kIntegralTol = 1e-7;

}  // namespace

Solution local_search(const Instance& inst) {
  const int m = inst.m();
  Solution sol;
  sol.bins.assign(m, Configuration{});
  std::map<ItemId, int> assigned_to;  // absent = unassigned
  double total = 0.0;
  const double theta = kLocalSearchEps / m;

  // re-solve a bin only if the unassigned pool changed since its last solve
  uint64_t pool_version = 1;
  std::vector<uint64_t> solved_version(m, 0);

  bool improved = true;
  size_t guard = 0;
  while (improved) {
    improved = false;
    internal_check(++guard < 100000, "local_search: too many passes");
    for (int b = 0; b < m; ++b) {
      if (solved_version[b] >= pool_version) continue;
      PricingProblem p;
      p.cardinality = inst.k();
      for (const Item& it : inst.items()) {
        auto at = assigned_to.find(it.id);
        if (at != assigned_to.end() && at->second != b) continue;
        if (it.value <= 0.0) continue;
        p.candidates.push_back({it.id, it.weight, it.value});
      }
      PricingResult res = solve_auto(p, kLocalSearchEps);
      solved_version[b] = pool_version;

      double old_value = inst.total_value(sol.bins[b].ids());
      double delta = res.profit - old_value;
      if (delta > theta * total) {
        for (ItemId id : sol.bins[b].ids()) assigned_to.erase(id);
        sol.bins[b] = res.configuration;
        for (ItemId id : sol.bins[b].ids()) assigned_to[id] = b;
        total += delta;
        ++pool_version;
        improved = true;
      }
    }
  }
  validate_solution(inst, sol);
  return sol;
}

ValueBandTable build_value_bands(const Instance& inst, double eps,
                                 double ls_value) {
  ValueBandTable table;
  table.eps = eps;
  table.ls_value = ls_value;
  if (!(ls_value > 0.0)) return table;  // no positive values: no valuable items

  const int m = inst.m();
  table.threshold = eps * ls_value / m;
  const double log_base = std::log(1.0 - eps);
  // bands reach down to the valuable threshold itself (ratio eps/(4m)), so
  // the interval rule places every valuable item without clamping; each band
  // then spans at most a (1-eps) value factor, which the guess analysis needs
  const int band_count = std::max(
      1, static_cast<int>(std::ceil(std::log(eps / (4.0 * m)) / log_base)));
  table.bands.assign(band_count, {});

  for (const Item& it : inst.items()) {
    if (it.value < table.threshold) continue;
    table.valuable.push_back(it.id);
    double ratio = it.value / (4.0 * ls_value);
    int r;
    if (ratio >= 1.0) {
      r = 1;  // high-ratio clamp
    } else {
      r = static_cast<int>(std::floor(std::log(ratio) / log_base)) + 1;
      // settle boundary rounding: band r covers ((1-eps)^r, (1-eps)^{r-1}]
      while (r > 1 && ratio > std::pow(1.0 - eps, r - 1)) --r;
      while (r < band_count && ratio <= std::pow(1.0 - eps, r)) ++r;
      r = std::clamp(r, 1, band_count);  // low-ratio clamp into the last band
    }
    table.bands[r - 1].push_back(it.id);
  }
  std::sort(table.valuable.begin(), table.valuable.end());
  for (auto& band : table.bands)
    std::sort(band.begin(), band.end(), [&](ItemId a, ItemId b) {
      double wa = inst.weight(a), wb = inst.weight(b);
      if (wa != wb) return wa < wb;
      return a < b;
    });
  return table;
}

std::vector<ItemId> first_items(const ValueBandTable& table, size_t r, int n) {
  if (r < 1 || r > table.bands.size())
    throw input_error("first_items: band index out of range");
  if (n <= 0) return {};
  const std::vector<ItemId>& band = table.bands[r - 1];
  size_t take = std::min<size_t>(n, band.size());
  return std::vector<ItemId>(band.begin(), band.begin() + take);
}

AssignLpResult solve_assign_lp(const Instance& inst,
                               const std::vector<ItemId>& valuable,
                               const std::vector<Configuration>& bin_sets) {
  const int m = inst.m();
  if (bin_sets.size() != static_cast<size_t>(m))
    throw input_error("assign LP: expected one valuable set per bin");
  std::set<ItemId> H(valuable.begin(), valuable.end());
  for (const Configuration& u : bin_sets)
    for (ItemId id : u.ids())
      if (!H.count(id))
        throw input_error("assign LP: bin set contains a non-valuable item");

  AssignLpResult out;
  for (const Configuration& u : bin_sets)
    if (!validate_configuration(inst, u)) return out;  // infeasible

  std::vector<ItemId> nv;
  for (const Item& it : inst.items())
    if (!H.count(it.id)) nv.push_back(it.id);
  std::sort(nv.begin(), nv.end());

  const size_t nn = nv.size();
  if (nn == 0) {
    out.feasible = true;
    return out;
  }

  DenseLp<double> lp;
  lp.objective.assign(nn * m, 0.0);
  for (size_t i = 0; i < nn; ++i)
    for (int b = 0; b < m; ++b) lp.objective[i * m + b] = inst.value(nv[i]);

  for (int b = 0; b < m; ++b) {
    std::vector<double> wrow(nn * m, 0.0), crow(nn * m, 0.0);
    for (size_t i = 0; i < nn; ++i) {
      wrow[i * m + b] = inst.weight(nv[i]);
      crow[i * m + b] = 1.0;
    }
    lp.add_row(std::move(wrow), RowSense::le,
               1.0 - inst.total_weight(bin_sets[b]));
    lp.add_row(std::move(crow), RowSense::le,
               static_cast<double>(inst.k()) -
                   static_cast<double>(bin_sets[b].size()));
  }
  for (size_t i = 0; i < nn; ++i) {
    std::vector<double> row(nn * m, 0.0);
    for (int b = 0; b < m; ++b) row[i * m + b] = 1.0;
    lp.add_row(std::move(row), RowSense::le, 1.0);
  }

  VertexResult<double> res = solve_vertex_lp(lp);
  if (res.status != LpStatus::optimal) return out;  // x=0 feasible, so never hit

  out.feasible = true;
  out.objective = res.objective;
  for (size_t i = 0; i < nn; ++i)
    for (int b = 0; b < m; ++b) {
      double x = res.x[i * m + b];
      if (x > kIntegralTol) out.entries[{nv[i], b}] = x;
      if (x > kIntegralTol && x < 1.0 - kIntegralTol) ++out.fractional_count;
    }
  internal_check(out.fractional_count <= 4 * m,
                 "assign LP: vertex has more than 4m fractional entries");
  return out;
}

namespace {

// Per-bin guess: how many items to take from each band. Patterns whose
// lightest-prefix realization is already infeasible are dropped; any other
// realization of the same counts weighs at least as much, so nothing valid
// is lost.
using BinPattern = std::vector<int>;

std::vector<BinPattern> enumerate_bin_patterns(const Instance& inst,
                                               const ValueBandTable& table,
                                               int count_cap, double budget) {
  // stage-1 budget gate on the per-band count space
  double raw = 1.0;
  for (const auto& band : table.bands) {
    raw *= static_cast<double>(std::min<size_t>(count_cap, band.size()) + 1);
    if (raw > budget)
      throw budget_error("constant_bins: per-bin pattern space " +
                             std::to_string(raw) + " exceeds budget",
                         raw);
  }

  std::vector<BinPattern> patterns;
  BinPattern counts(table.bands.size(), 0);
  auto dfs = [&](auto&& self, size_t band_idx, size_t cardinality,
                 double weight) -> void {
    if (band_idx == table.bands.size()) {
      patterns.push_back(counts);
      return;
    }
    const std::vector<ItemId>& band = table.bands[band_idx];
    size_t cap = std::min<size_t>(count_cap, band.size());
    self(self, band_idx + 1, cardinality, weight);
    double w = weight;
    for (size_t c = 1; c <= cap; ++c) {
      w += inst.weight(band[c - 1]);
      if (cardinality + c > static_cast<size_t>(inst.k())) break;
      if (w > 1.0 + kFeasibilityTol) break;
      counts[band_idx] = static_cast<int>(c);
      self(self, band_idx + 1, cardinality + c, w);
    }
    counts[band_idx] = 0;
  };
  dfs(dfs, 0, 0, 0.0);
  return patterns;
}

double multiset_count(size_t patterns, int m) {
  // C(patterns + m - 1, m) in doubles
  double out = 1.0;
  for (int i = 1; i <= m; ++i)
    out *= static_cast<double>(patterns - 1 + i) / static_cast<double>(i);
  return out;
}

}  // namespace

Solution constant_bins(const Instance& inst, const ConstantBinsParams& p) {
  if (!(p.eps_prime > 0.0 && p.eps_prime < 1.0))
    throw input_error("constant_bins: eps_prime must be in (0,1)");
  const int m = inst.m();
  const double eps = std::min(0.5, p.eps_prime / 5.0);

  Solution ls = local_search(inst);
  double ls_value = solution_value(inst, ls);

  Solution best;
  best.bins.assign(m, Configuration{});
  double best_value = 0.0;

  if (!(ls_value > 0.0)) return best;  // only zero-value items exist

  ValueBandTable table = build_value_bands(inst, eps, ls_value);
  const int count_cap = 4 * static_cast<int>(std::floor(m / eps));

  std::vector<BinPattern> patterns =
      enumerate_bin_patterns(inst, table, count_cap, p.budget);
  double guesses = multiset_count(patterns.size(), m);
  if (guesses > p.budget)
    throw budget_error("constant_bins: " + std::to_string(guesses) +
                           " guesses exceed budget " + std::to_string(p.budget),
                       guesses);

  // enumerate nondecreasing pattern-index tuples (bins are identical)
  std::vector<size_t> tuple(m, 0);

  auto try_candidate = [&](const std::vector<Configuration>& bin_sets) {
    for (const Configuration& u : bin_sets)
      if (!validate_configuration(inst, u)) return;
    AssignLpResult lp = solve_assign_lp(inst, table.valuable, bin_sets);
    if (!lp.feasible) return;
    Solution cand;
    cand.bins.reserve(m);
    for (int b = 0; b < m; ++b) {
      Configuration c = bin_sets[b];
      for (const auto& [key, x] : lp.entries)
        if (key.second == b && x >= 1.0 - kIntegralTol) c = c.with(key.first);
      if (!validate_configuration(inst, c)) return;
      cand.bins.push_back(std::move(c));
    }
    double v = solution_value(inst, cand);
    if (v > best_value) {
      best_value = v;
      best = std::move(cand);
    }
  };

  auto evaluate = [&]() {
    // prefix assembly: every bin takes the lightest items of its bands
    std::vector<Configuration> prefix_bins;
    prefix_bins.reserve(m);
    for (int b = 0; b < m; ++b) {
      const BinPattern& counts = patterns[tuple[b]];
      std::vector<ItemId> ids;
      for (size_t r = 0; r < counts.size(); ++r) {
        std::vector<ItemId> taken = first_items(table, r + 1, counts[r]);
        ids.insert(ids.end(), taken.begin(), taken.end());
      }
      prefix_bins.emplace_back(std::move(ids));
    }
    try_candidate(prefix_bins);

    if (m > 1) {
      // slice assembly: bins take disjoint consecutive runs of each band, so
      // the union keeps one item per guessed slot; slice order affects
      // per-bin feasibility, so try the tuple order and its reverse
      auto slices_in_order = [&](bool reversed) {
        std::vector<Configuration> slice_bins(m);
        std::vector<size_t> offset(table.bands.size(), 0);
        for (int i = 0; i < m; ++i) {
          int b = reversed ? m - 1 - i : i;
          const BinPattern& counts = patterns[tuple[b]];
          std::vector<ItemId> ids;
          for (size_t r = 0; r < counts.size(); ++r) {
            const std::vector<ItemId>& band = table.bands[r];
            size_t from = std::min(offset[r], band.size());
            size_t to = std::min(from + counts[r], band.size());
            ids.insert(ids.end(), band.begin() + from, band.begin() + to);
            offset[r] = to;
          }
          slice_bins[b] = Configuration(std::move(ids));
        }
        return slice_bins;
      };
      std::vector<Configuration> forward = slices_in_order(false);
      if (forward != prefix_bins) try_candidate(forward);
      std::vector<Configuration> backward = slices_in_order(true);
      if (backward != forward && backward != prefix_bins)
        try_candidate(backward);
    }
  };

  auto next_tuple = [&]() -> bool {
    int i = m - 1;
    while (i >= 0 && tuple[i] == patterns.size() - 1) --i;
    if (i < 0) return false;
    size_t v = tuple[i] + 1;
    for (int j = i; j < m; ++j) tuple[j] = v;
    return true;
  };

  evaluate();
  while (next_tuple()) evaluate();

  validate_solution(inst, best);
  return best;
}

DispatchResult dispatch(const Instance& inst, const DispatchParams& p) {
  if (!(p.eps_prime > 0.0 && p.eps_prime < 1.0))
    throw input_error("dispatch: eps_prime must be in (0,1)");
  DispatchResult out;

  bool rounding_branch;
  if (p.paper_mode) {
    // threshold exp(exp(eps^-160)) + eps^-3 overflows to +inf at any usable
    // eps, so the enumeration branch is always taken at desk scale
    double threshold = std::exp(std::exp(std::pow(p.eps_prime, -160.0))) +
                       std::pow(p.eps_prime, -3.0);
    rounding_branch = static_cast<double>(inst.m()) > threshold;
  } else {
    rounding_branch = inst.m() >= p.m_switch;
  }

  if (rounding_branch) {
    RoundingParams rp;
    rp.eps = p.eps_prime;
    rp.seed = p.seed;
    rp.mode = p.paper_mode ? RoundingMode::paper : RoundingMode::practical;
    RoundingResult rr = iterative_rounding(inst, rp);
    out.solution = std::move(rr.solution);
    out.branch = "iterative-rounding";
  } else {
    try {
      ConstantBinsParams cp;
      cp.eps_prime = p.eps_prime;
      cp.budget = p.budget;
      out.solution = constant_bins(inst, cp);
      out.branch = "constant-bins";
    } catch (const budget_error&) {
      out.solution = local_search(inst);
      out.branch = "local-search";
    }
  }
  validate_solution(inst, out.solution);
  out.value = solution_value(inst, out.solution);
  return out;
}

}  // namespace cmk
