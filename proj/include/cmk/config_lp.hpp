#ifndef CMK_CONFIG_LP_HPP
#define CMK_CONFIG_LP_HPP

#include <map>
#include <vector>

#include "cmk/core.hpp"
#include "cmk/simplex.hpp"

namespace cmk {

// LP(S, ell): select ell fractional configurations over the items in S,
// per-item cover at most 1, maximizing covered value. The empty
// configuration is a legal column, so the budget equality is always
// satisfiable and x_empty may exceed 1.
struct LpProblem {
  LpProblem(const Instance& inst, std::vector<ItemId> allowed_items, double ell);

  const Instance* instance;
  std::vector<ItemId> allowed;  // sorted
  double ell;
};

// All item ids of the instance are allowed.
LpProblem full_lp(const Instance& inst, double ell);

enum class LpSolveStatus { optimal, approx, infeasible, iteration_limit };

inline const char* to_string(LpSolveStatus s) {
  switch (s) {
    case LpSolveStatus::optimal: return "optimal";
    case LpSolveStatus::approx: return "approx";
    case LpSolveStatus::infeasible: return "infeasible";
    case LpSolveStatus::iteration_limit: return "iteration_limit";
  }
  return "?";
}

struct LpSolution {
  FractionalSolution fractional;
  double objective = 0.0;
  // Certified upper bound on the true LP optimum (= objective when exact).
  double dual_bound = 0.0;
  std::map<ItemId, double> duals;  // per-item cover duals
  double budget_dual = 0.0;
  LpSolveStatus status = LpSolveStatus::optimal;
};

// Enumerates every configuration over the allowed items (at most 14) and
// solves the explicit LP to optimality with the vertex solver.
LpSolution solve_exact_small(const LpProblem& lp);

// Restricted-master column generation priced by the knapsack oracle.
// Terminates when the dual bound certifies objective >= (1-eps) * optimum or
// no improving column exists. On hitting the column cap, returns the best
// solution so far with status iteration_limit.
LpSolution solve_column_generation(const LpProblem& lp, double eps,
                                   size_t max_columns = 10000);

}  // namespace cmk

#endif
