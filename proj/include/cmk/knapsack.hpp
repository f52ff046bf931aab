#ifndef CMK_KNAPSACK_HPP
#define CMK_KNAPSACK_HPP

#include <vector>

#include "cmk/core.hpp"

namespace cmk {

struct PricingCandidate {
  ItemId id;
  double weight;
  double profit;
};

// Single-bin maximization: one weight constraint, one cardinality constraint,
// nonnegative profits. The pricing subproblem of column generation and the
// per-bin move of local search.
struct PricingProblem {
  std::vector<PricingCandidate> candidates;
  double capacity = 1.0;
  int cardinality = 1;
  int exact_cap = 30;  // max candidate count accepted by solve_exact
};

struct PricingResult {
  Configuration configuration;
  double profit = 0.0;
};

// Exact branch-and-bound. Throws capacity_error above exact_cap (use
// solve_fptas instead). Ties go to the lexicographically smallest id set.
PricingResult solve_exact(const PricingProblem& p);

// (1-eps)-approximation by profit-scaled dynamic programming; states are
// (item, rounded profit, count), minimizing weight.
PricingResult solve_fptas(const PricingProblem& p, double eps);

// solve_exact when the (positive-profit) candidate count fits the cap,
// otherwise solve_fptas(eps).
PricingResult solve_auto(const PricingProblem& p, double eps);

}  // namespace cmk

#endif
