#ifndef CMK_EXACT_ORACLE_HPP
#define CMK_EXACT_ORACLE_HPP

#include "cmk/core.hpp"

namespace cmk {

struct OracleLimits {
  size_t max_items = 10;
  int max_bins = 3;
  double timeout_seconds = 60.0;
};

struct OracleResult {
  Solution solution;
  double value = 0.0;
};

// Provably optimal solution by branch and bound over item -> {bin, skip}
// assignments. Identical bins are symmetry-broken: an item may only open the
// lowest-indexed empty bin.
OracleResult solve_exact_cmk(const Instance& inst, const OracleLimits& lim = {});

}  // namespace cmk

#endif
