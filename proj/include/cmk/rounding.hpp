#ifndef CMK_ROUNDING_HPP
#define CMK_ROUNDING_HPP

#include <cstdint>
#include <vector>

#include "cmk/config_lp.hpp"
#include "cmk/core.hpp"
#include "cmk/rng.hpp"

namespace cmk {

enum class RoundingMode { paper, practical };

struct RoundingParams {
  double eps = 0.25;        // batch fraction per iteration, in (0,1]
  uint64_t seed = 0;
  double lp_eps = -1.0;     // inner LP accuracy; defaults to eps when < 0
  RoundingMode mode = RoundingMode::practical;

  // defaults to eps; the inner LP needs an accuracy strictly below 1
  double effective_lp_eps() const {
    double e = lp_eps > 0.0 ? lp_eps : eps;
    return e < 1.0 ? e : 0.5;
  }
};

struct IterationRecord {
  int j = 0;                  // iteration index, 1-based
  double m_j = 0.0;           // bins remaining at iteration start
  double lp_value = 0.0;      // inner LP objective
  int q = 0;                  // configurations sampled
  double gained_value = 0.0;  // value of items newly covered this iteration
  double ratio = 0.0;         // lp_value / (m_j / m)
  double survival_bound = 0.0;  // (1 - j eps) / (1 - (j-1) eps), clamped at 0
};

struct RoundingResult {
  Solution solution;
  std::vector<IterationRecord> trace;
  double value = 0.0;
  double lp_upper_bound = 0.0;  // dual bound of the first-iteration LP
};

// Draw a configuration C with probability x_C / ||x||.
Configuration sample_configuration(const FractionalSolution& x, StreamRng& rng);

// Iterative randomized rounding: re-solve the configuration LP on the
// remaining items each round and sample a batch of bins from it.
RoundingResult iterative_rounding(const Instance& inst, const RoundingParams& p);

// Baseline: solve the LP once and sample all m bins from it.
RoundingResult oneshot_rounding(const Instance& inst, const RoundingParams& p);

}  // namespace cmk

#endif
