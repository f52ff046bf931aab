#include "cmk/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cmk/errors.hpp"

namespace cmk {

namespace {

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-9; }

void validate_params(const Instance& inst, const RoundingParams& p) {
  if (!(p.eps > 0.0 && p.eps <= 1.0))
    throw input_error("rounding: eps must be in (0,1]");
  if (p.lp_eps > 0.0 && p.lp_eps >= 1.0)
    throw input_error("rounding: lp_eps must be in (0,1)");
  if (p.mode == RoundingMode::paper) {
    if (!(p.eps < 0.1))
      throw input_error("rounding: paper mode requires eps in (0,0.1)");
    if (!is_integer(1.0 / p.eps))
      throw input_error("rounding: paper mode requires 1/eps integral");
    if (!is_integer(1.0 / std::sqrt(p.eps)))
      throw input_error("rounding: paper mode requires 1/sqrt(eps) integral");
    if (!is_integer(p.eps * inst.m()))
      throw input_error("rounding: paper mode requires eps*m integral");
  }
}

// Batch sizes per iteration summing to m. Paper mode: 1/eps batches of
// exactly eps*m. Practical mode: floor(eps*m) per batch with the final
// batch absorbing the remainder; a zero batch size collapses to one shot.
std::vector<int> batch_schedule(const Instance& inst, const RoundingParams& p) {
  const int m = inst.m();
  if (p.mode == RoundingMode::paper) {
    int iters = static_cast<int>(std::lround(1.0 / p.eps));
    int q = static_cast<int>(std::lround(p.eps * m));
    return std::vector<int>(iters, q);
  }
  int base = static_cast<int>(std::floor(p.eps * m));
  int iters = std::max(1, static_cast<int>(std::floor(1.0 / p.eps)));
  if (base == 0) return {m};
  std::vector<int> qs(iters, base);
  qs.back() = m - base * (iters - 1);
  internal_check(qs.back() >= 0, "rounding: bad batch schedule");
  return qs;
}

RoundingResult run_rounding(const Instance& inst, const RoundingParams& p,
                            const std::vector<int>& schedule) {
  const int m = inst.m();
  CounterRng rng(p.seed);
  RoundingResult out;
  out.solution.bins.reserve(m);

  std::set<ItemId> remaining;
  for (const Item& it : inst.items()) remaining.insert(it.id);

  double remaining_bins = m;
  for (size_t j = 0; j < schedule.size(); ++j) {
    const int q = schedule[j];
    const double m_j = p.mode == RoundingMode::paper
                           ? m * (1.0 - static_cast<double>(j) * p.eps)
                           : remaining_bins;
    internal_check(m_j > 0.0, "rounding: no bins left for iteration");

    LpProblem lp(inst, std::vector<ItemId>(remaining.begin(), remaining.end()),
                 m_j);
    LpSolution sol = solve_column_generation(lp, p.effective_lp_eps());
    if (j == 0) out.lp_upper_bound = sol.dual_bound;

    double gained = 0.0;
    for (int b = 0; b < q; ++b) {
      // per-draw substream keyed by (iteration, bin)
      double u = u64_to_unit(rng.at(j + 1, b + 1));
      const double total = sol.fractional.size();
      internal_check(total > 0.0, "rounding: zero-size LP solution");
      Configuration chosen;
      double acc = 0.0;
      for (const auto& [c, w] : sol.fractional.weights()) {
        acc += w;
        chosen = c;
        if (u * total < acc) break;
      }
      out.solution.bins.push_back(chosen);
      for (ItemId id : chosen.ids())
        if (remaining.erase(id) > 0) gained += inst.value(id);
    }
    remaining_bins -= q;

    IterationRecord rec;
    rec.j = static_cast<int>(j) + 1;
    rec.m_j = m_j;
    rec.lp_value = sol.objective;
    rec.q = q;
    rec.gained_value = gained;
    rec.ratio = sol.objective / (m_j / m);
    rec.survival_bound =
        std::max(0.0, (m_j - q) / m_j);  // = (1-j eps)/(1-(j-1) eps) in paper mode
    out.trace.push_back(rec);
  }

  internal_check(out.solution.bins.size() == static_cast<size_t>(m),
                 "rounding: bin count mismatch");
  validate_solution(inst, out.solution);
  out.value = solution_value(inst, out.solution);
  return out;
}

}  // namespace

Configuration sample_configuration(const FractionalSolution& x, StreamRng& rng) {
  const double total = x.size();
  if (!(total > 0.0))
    throw input_error("sample_configuration: solution has zero size");
  double u = rng.uniform() * total;
  double acc = 0.0;
  Configuration last;
  for (const auto& [c, w] : x.weights()) {
    acc += w;
    last = c;
    if (u < acc) return c;
  }
  return last;  // u landed on the accumulated round-off tail
}

RoundingResult iterative_rounding(const Instance& inst, const RoundingParams& p) {
  validate_params(inst, p);
  return run_rounding(inst, p, batch_schedule(inst, p));
}

RoundingResult oneshot_rounding(const Instance& inst, const RoundingParams& p) {
  validate_params(inst, p);
  return run_rounding(inst, p, {inst.m()});
}

}  // namespace cmk
