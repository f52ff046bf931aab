#include "cmk/exact_oracle.hpp"

#include <algorithm>
#include <chrono>

#include "cmk/errors.hpp"

namespace cmk {

namespace {

struct BnbState {
  const Instance* inst;
  std::vector<const Item*> items;  // sorted by value descending
  std::vector<double> suffix_value;
  std::vector<std::vector<size_t>> bins;
  std::vector<double> bin_weight;
  double current_value = 0.0;
  double best_value = 0.0;
  std::vector<std::vector<size_t>> best_bins;
  std::chrono::steady_clock::time_point deadline;
  size_t nodes_since_clock = 0;

  void check_time() {
    if (++nodes_since_clock < 4096) return;
    nodes_since_clock = 0;
    if (std::chrono::steady_clock::now() > deadline)
      throw timeout_error("exact oracle: time limit reached", best_value);
  }

  // Aggregate fractional relaxation over the remaining items: the tighter of
  // a weight-only and a count-only bound on what the suffix can still add.
  double suffix_bound(size_t idx) const {
    double room = 0.0;
    long slots = 0;
    for (size_t b = 0; b < bins.size(); ++b) {
      room += 1.0 - bin_weight[b];
      slots += inst->k() - static_cast<long>(bins[b].size());
    }
    double by_weight = 0.0;
    double r = room;
    // items are value-sorted, so re-rank the suffix by efficiency for the
    // weight bound and by value for the count bound
    double by_count = 0.0;
    long s = slots;
    for (size_t i = idx; i < items.size() && s > 0; ++i, --s)
      by_count += items[i]->value;
    std::vector<size_t> order;
    for (size_t i = idx; i < items.size(); ++i) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      double lhs = items[a]->value * items[b]->weight;
      double rhs = items[b]->value * items[a]->weight;
      return lhs > rhs;
    });
    for (size_t i : order) {
      const Item* it = items[i];
      if (it->weight <= r) {
        r -= it->weight;
        by_weight += it->value;
      } else {
        if (it->weight > 0.0) by_weight += it->value * (r / it->weight);
        break;
      }
    }
    return std::min(by_weight, by_count);
  }

  void dfs(size_t idx) {
    check_time();
    if (current_value > best_value) {
      best_value = current_value;
      best_bins = bins;
    }
    if (idx >= items.size()) return;
    if (current_value + suffix_bound(idx) <= best_value) return;

    const Item* it = items[idx];
    bool opened_empty = false;
    for (size_t b = 0; b < bins.size(); ++b) {
      if (bins[b].empty()) {
        if (opened_empty) break;  // identical empty bins: try only the first
        opened_empty = true;
      }
      if (bins[b].size() >= static_cast<size_t>(inst->k())) continue;
      if (bin_weight[b] + it->weight > 1.0 + kFeasibilityTol) continue;
      bins[b].push_back(idx);
      bin_weight[b] += it->weight;
      current_value += it->value;
      dfs(idx + 1);
      current_value -= it->value;
      bin_weight[b] -= it->weight;
      bins[b].pop_back();
    }
    dfs(idx + 1);  // leave the item unassigned
  }
};

}  // namespace

OracleResult solve_exact_cmk(const Instance& inst, const OracleLimits& lim) {
  if (inst.n() > lim.max_items)
    throw capacity_error("exact oracle: " + std::to_string(inst.n()) +
                         " items exceed the limit of " +
                         std::to_string(lim.max_items));
  if (inst.m() > lim.max_bins)
    throw capacity_error("exact oracle: " + std::to_string(inst.m()) +
                         " bins exceed the limit of " +
                         std::to_string(lim.max_bins));

  BnbState st;
  st.inst = &inst;
  for (const Item& it : inst.items()) st.items.push_back(&it);
  std::sort(st.items.begin(), st.items.end(), [](const Item* a, const Item* b) {
    if (a->value != b->value) return a->value > b->value;
    return a->id < b->id;
  });
  st.bins.assign(inst.m(), {});
  st.bin_weight.assign(inst.m(), 0.0);
  st.best_bins = st.bins;
  st.deadline = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(lim.timeout_seconds));
  st.dfs(0);

  OracleResult out;
  out.value = st.best_value;
  out.solution.bins.reserve(inst.m());
  for (const auto& bin : st.best_bins) {
    std::vector<ItemId> ids;
    for (size_t idx : bin) ids.push_back(st.items[idx]->id);
    out.solution.bins.emplace_back(std::move(ids));
  }
  validate_solution(inst, out.solution);
  return out;
}

}  // namespace cmk
