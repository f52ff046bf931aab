#include "cmk/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "cmk/errors.hpp"
#include "cmk/knapsack_bnb.hpp"

namespace cmk {

namespace {

void validate_problem(const PricingProblem& p) {
  if (p.cardinality < 1)
    throw input_error("pricing: cardinality bound must be >= 1");
  if (!(p.capacity >= 0.0)) throw input_error("pricing: negative capacity");
  for (const PricingCandidate& c : p.candidates) {
    if (c.profit < 0.0) throw input_error("pricing: negative profit");
    if (c.weight < 0.0) throw input_error("pricing: negative weight");
  }
}

// Zero-profit items are never worth selecting.
std::vector<PricingCandidate> positive_candidates(const PricingProblem& p) {
  std::vector<PricingCandidate> out;
  out.reserve(p.candidates.size());
  for (const PricingCandidate& c : p.candidates)
    if (c.profit > 0.0 && c.weight <= p.capacity) out.push_back(c);
  return out;
}

}  // namespace

PricingResult solve_exact(const PricingProblem& p) {
  validate_problem(p);
  std::vector<PricingCandidate> items = positive_candidates(p);
  if (static_cast<int>(items.size()) > p.exact_cap)
    throw capacity_error(
        "solve_exact: " + std::to_string(items.size()) +
        " candidates exceed the exact-size cap of " + std::to_string(p.exact_cap) +
        "; use solve_fptas");
  std::vector<detail::BnbItem<double, double>> bnb;
  bnb.reserve(items.size());
  for (const PricingCandidate& c : items) bnb.push_back({c.id, c.weight, c.profit});
  auto [ids, profit] = detail::knapsack_bnb(std::move(bnb), p.capacity, p.cardinality);
  return {Configuration(std::move(ids)), profit};
}

PricingResult solve_fptas(const PricingProblem& p, double eps) {
  validate_problem(p);
  if (!(eps > 0.0 && eps < 1.0))
    throw input_error("solve_fptas: eps must be in (0,1)");
  std::vector<PricingCandidate> items = positive_candidates(p);
  if (items.empty()) return {Configuration(), 0.0};
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  const size_t n = items.size();
  const int k = std::min<int>(p.cardinality, static_cast<int>(n));
  double pmax = 0.0;
  for (const auto& c : items) pmax = std::max(pmax, c.profit);

  // scale by a feasible lower bound (greedy by efficiency, or the single
  // best item) and truncate the profit axis at a relaxation upper bound;
  // the usual eps*pmax/k scale makes the table k/eps times longer
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    double lhs = items[a].profit * items[b].weight;
    double rhs = items[b].profit * items[a].weight;
    if (lhs != rhs) return lhs > rhs;
    return items[a].id < items[b].id;
  });
  double greedy = 0.0, greedy_w = 0.0;
  int greedy_c = 0;
  double frac_bound = 0.0, frac_room = p.capacity;
  for (size_t i : order) {
    if (greedy_c < k && greedy_w + items[i].weight <= p.capacity) {
      greedy += items[i].profit;
      greedy_w += items[i].weight;
      ++greedy_c;
    }
    if (items[i].weight <= frac_room) {
      frac_bound += items[i].profit;
      frac_room -= items[i].weight;
    } else if (frac_room > 0.0 && items[i].weight > 0.0) {
      frac_bound += items[i].profit * (frac_room / items[i].weight);
      frac_room = 0.0;
    }
  }
  std::vector<double> profits;
  profits.reserve(n);
  for (const auto& c : items) profits.push_back(c.profit);
  std::sort(profits.begin(), profits.end(), std::greater<double>());
  double count_bound = 0.0;
  for (int i = 0; i < k; ++i) count_bound += profits[i];

  const double lower = std::max(pmax, greedy);
  const double upper = std::max(lower, std::min(frac_bound, count_bound));
  const double scale = eps * lower / k;
  const int64_t qmax = static_cast<int64_t>(std::floor(upper / scale)) + 1;

  const size_t cells = (static_cast<size_t>(k) + 1) * (static_cast<size_t>(qmax) + 1);
  const size_t words_per_item = (cells + 63) / 64;
  if (n * words_per_item > (size_t{1} << 25))
    throw capacity_error("solve_fptas: DP table too large (" +
                         std::to_string(n * cells) + " cells)");

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(cells, inf);
  auto cell = [&](int c, int64_t q) -> size_t {
    return static_cast<size_t>(c) * (qmax + 1) + static_cast<size_t>(q);
  };
  dp[cell(0, 0)] = 0.0;
  // take marks the cells each item overwrote; scanning items downward during
  // reconstruction recovers each cell's final writer.
  std::vector<uint64_t> take(n * words_per_item, 0);
  auto mark = [&](size_t i, size_t idx) {
    take[i * words_per_item + idx / 64] |= uint64_t{1} << (idx % 64);
  };
  auto marked = [&](size_t i, size_t idx) -> bool {
    return (take[i * words_per_item + idx / 64] >> (idx % 64)) & 1u;
  };

  std::vector<int64_t> qvals(n);
  for (size_t i = 0; i < n; ++i)
    qvals[i] = static_cast<int64_t>(std::floor(items[i].profit / scale));

  for (size_t i = 0; i < n; ++i) {
    const int64_t qi = qvals[i];
    if (qi == 0) continue;
    const double wi = items[i].weight;
    for (int c = k; c >= 1; --c) {
      for (int64_t q = qmax; q >= qi; --q) {
        double cand = dp[cell(c - 1, q - qi)];
        if (cand == inf) continue;
        cand += wi;
        if (cand <= p.capacity && cand < dp[cell(c, q)]) {
          dp[cell(c, q)] = cand;
          mark(i, cell(c, q));
        }
      }
    }
  }

  int best_c = 0;
  int64_t best_q = 0;
  for (int c = 0; c <= k; ++c)
    for (int64_t q = 0; q <= qmax; ++q)
      if (dp[cell(c, q)] <= p.capacity && q > best_q) {
        best_q = q;
        best_c = c;
      }

  std::vector<ItemId> chosen;
  int c = best_c;
  int64_t q = best_q;
  for (size_t ii = n; ii-- > 0 && q > 0;) {
    if (marked(ii, cell(c, q))) {
      chosen.push_back(items[ii].id);
      q -= qvals[ii];
      c -= 1;
    }
  }
  internal_check(q == 0 && c == 0, "solve_fptas: reconstruction failed");

  double profit = 0.0;
  Configuration conf{std::move(chosen)};
  for (const auto& it : items)
    if (conf.contains(it.id)) profit += it.profit;
  return {std::move(conf), profit};
}

PricingResult solve_auto(const PricingProblem& p, double eps) {
  std::vector<PricingCandidate> items = positive_candidates(p);
  if (static_cast<int>(items.size()) <= p.exact_cap) return solve_exact(p);
  return solve_fptas(p, eps);
}

}  // namespace cmk
