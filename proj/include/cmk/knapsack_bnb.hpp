#ifndef CMK_KNAPSACK_BNB_HPP
#define CMK_KNAPSACK_BNB_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include "cmk/core.hpp"

namespace cmk::detail {

template <typename W, typename P>
struct BnbItem {
  ItemId id;
  W weight;
  P profit;
};

// Exact maximization of total profit subject to total weight <= capacity and
// at most k items. Works for floating point and exact rational scalars.
// Items must carry strictly positive profit. Ties are broken toward the
// lexicographically smallest sorted id set; subtrees whose bound equals the
// incumbent are therefore never pruned.
template <typename W, typename P>
class KnapsackBnb {
 public:
  KnapsackBnb(std::vector<BnbItem<W, P>> items, W capacity, int k)
      : items_(std::move(items)), capacity_(capacity), k_(k) {
    std::sort(items_.begin(), items_.end(), [](const auto& a, const auto& b) {
      // efficiency order; weight 0 items first
      P lhs = a.profit * b.weight;
      P rhs = b.profit * a.weight;
      if (lhs != rhs) return lhs > rhs;
      return a.id < b.id;
    });
    size_t n = items_.size();
    // top-profit prefix sums per suffix, for the cardinality-only bound
    suffix_top_.resize(n + 1);
    for (size_t s = 0; s <= n; ++s) {
      std::vector<P> profits;
      profits.reserve(n - s);
      for (size_t i = s; i < n; ++i) profits.push_back(items_[i].profit);
      std::sort(profits.begin(), profits.end(), std::greater<P>());
      std::vector<P>& sums = suffix_top_[s];
      sums.resize(profits.size() + 1);
      sums[0] = P(0);
      for (size_t i = 0; i < profits.size(); ++i) sums[i + 1] = sums[i] + profits[i];
    }
  }

  std::pair<std::vector<ItemId>, P> solve() {
    best_profit_ = P(0);
    best_ids_.clear();
    current_.clear();
    dfs(0, W(0), P(0));
    std::sort(best_ids_.begin(), best_ids_.end());
    return {best_ids_, best_profit_};
  }

 private:
  P upper_bound(size_t start, W used_weight, int used_count) const {
    const size_t n = items_.size();
    int slots = k_ - used_count;
    if (slots <= 0 || start >= n) return P(0);
    // cardinality-only relaxation
    const std::vector<P>& sums = suffix_top_[start];
    size_t take = std::min<size_t>(slots, sums.size() - 1);
    P card_bound = sums[take];
    // weight-only fractional relaxation (items are in efficiency order)
    P weight_bound(0);
    W room = capacity_ - used_weight;
    for (size_t i = start; i < n; ++i) {
      if (items_[i].weight <= room) {
        room -= items_[i].weight;
        weight_bound += items_[i].profit;
      } else {
        if (room > W(0) && items_[i].weight > W(0))
          weight_bound += items_[i].profit * P(room) / P(items_[i].weight);
        break;
      }
    }
    return std::min(card_bound, weight_bound);
  }

  void consider_incumbent(P profit) {
    if (profit > best_profit_) {
      best_profit_ = profit;
      best_ids_ = current_;
      std::sort(best_ids_.begin(), best_ids_.end());
    } else if (profit == best_profit_) {
      std::vector<ItemId> sorted(current_);
      std::sort(sorted.begin(), sorted.end());
      if (best_ids_.empty() ? false : sorted < best_ids_) best_ids_ = sorted;
    }
  }

  void dfs(size_t idx, W used_weight, P profit) {
    consider_incumbent(profit);
    if (idx >= items_.size()) return;
    if (static_cast<int>(current_.size()) >= k_) return;
    // prune strictly: equal-bound subtrees may hold tie-breaking optima
    if (profit + upper_bound(idx, used_weight, static_cast<int>(current_.size())) <
        best_profit_)
      return;
    const BnbItem<W, P>& it = items_[idx];
    if (used_weight + it.weight <= capacity_) {
      current_.push_back(it.id);
      dfs(idx + 1, used_weight + it.weight, profit + it.profit);
      current_.pop_back();
    }
    dfs(idx + 1, used_weight, profit);
  }

  std::vector<BnbItem<W, P>> items_;
  W capacity_;
  int k_;
  std::vector<std::vector<P>> suffix_top_;
  P best_profit_;
  std::vector<ItemId> best_ids_;
  std::vector<ItemId> current_;
};

template <typename W, typename P>
std::pair<std::vector<ItemId>, P> knapsack_bnb(std::vector<BnbItem<W, P>> items,
                                               W capacity, int k) {
  KnapsackBnb<W, P> solver(std::move(items), capacity, k);
  return solver.solve();
}

}  // namespace cmk::detail

#endif
