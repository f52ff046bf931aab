#ifndef CMK_CONSTANT_BINS_HPP
#define CMK_CONSTANT_BINS_HPP

#include <map>
#include <string>
#include <vector>

#include "cmk/core.hpp"
#include "cmk/rounding.hpp"

namespace cmk {

// Bin-rewrite local search: repeatedly re-solve one bin's knapsack over the
// unassigned items, accepting rewrites that beat the relative improvement
// threshold. Empirically a 1/4-approximation.
Solution local_search(const Instance& inst);

// Geometric value classes of the valuable items.
struct ValueBandTable {
  double threshold = 0.0;            // valuable iff value >= threshold
  double ls_value = 0.0;             // reference value used for the ratios
  double eps = 0.0;
  std::vector<ItemId> valuable;      // H, ascending ids
  std::vector<std::vector<ItemId>> bands;  // bands[r-1]: nondecreasing weight
};

ValueBandTable build_value_bands(const Instance& inst, double eps,
                                 double ls_value);

// The n lightest items of band r (1-based); all of the band when n exceeds
// its size.
std::vector<ItemId> first_items(const ValueBandTable& table, size_t r, int n);

struct AssignLpResult {
  bool feasible = false;
  double objective = 0.0;
  // x values per (non-valuable item, bin), only entries > 0
  std::map<std::pair<ItemId, int>, double> entries;
  int fractional_count = 0;
};

// LP adding non-valuable items fractionally on top of fixed per-bin valuable
// sets U; solved to a vertex, which has at most 4m fractional entries.
AssignLpResult solve_assign_lp(const Instance& inst,
                               const std::vector<ItemId>& valuable,
                               const std::vector<Configuration>& bin_sets);

struct ConstantBinsParams {
  double eps_prime = 0.25;
  double budget = 1e6;  // max guess vectors enumerated
};

// Enumeration EPTAS for a bounded number of bins: guess per-bin band counts,
// fill with the lightest band members, top up with non-valuable items via the
// assign LP, keep the best feasible assembly.
Solution constant_bins(const Instance& inst, const ConstantBinsParams& p);

struct DispatchParams {
  double eps_prime = 0.25;
  bool paper_mode = false;
  int m_switch = 16;      // practical: rounding branch at m >= m_switch
  double budget = 1e6;
  uint64_t seed = 0;
};

struct DispatchResult {
  Solution solution;
  std::string branch;  // "constant-bins", "iterative-rounding", "local-search"
  double value = 0.0;
};

DispatchResult dispatch(const Instance& inst, const DispatchParams& p);

}  // namespace cmk

#endif
