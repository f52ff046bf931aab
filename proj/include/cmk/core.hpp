#ifndef CMK_CORE_HPP
#define CMK_CORE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "cmk/errors.hpp"

namespace cmk {

using ItemId = int64_t;

// Absolute slack allowed on bin weight sums in floating-point mode.
constexpr double kFeasibilityTol = 1e-9;

struct Item {
  ItemId id = 0;
  double weight = 0.0;  // in [0,1]
  double value = 0.0;   // >= 0
};

// A single-bin-feasible item subset, canonicalized as a sorted id list so
// that equal configurations compare equal and merge as map keys.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<ItemId> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  const std::vector<ItemId>& ids() const { return ids_; }
  size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  bool contains(ItemId id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
  }

  Configuration with(ItemId id) const {
    std::vector<ItemId> out(ids_);
    auto pos = std::lower_bound(out.begin(), out.end(), id);
    if (pos == out.end() || *pos != id) out.insert(pos, id);
    return Configuration(std::move(out));
  }

  auto operator<=>(const Configuration&) const = default;

 private:
  std::vector<ItemId> ids_;
};

// Items plus bin count m and per-bin cardinality bound k. Immutable.
class Instance {
 public:
  Instance() = default;
  Instance(std::vector<Item> items, int m, int k);

  const std::vector<Item>& items() const { return items_; }
  int m() const { return m_; }
  int k() const { return k_; }
  size_t n() const { return items_.size(); }

  bool contains(ItemId id) const { return index_.count(id) > 0; }
  const Item& item(ItemId id) const;
  double weight(ItemId id) const { return item(id).weight; }
  double value(ItemId id) const { return item(id).value; }

  double total_weight(const Configuration& c) const;
  double total_value(const std::vector<ItemId>& ids) const;

 private:
  std::vector<Item> items_;
  std::unordered_map<ItemId, size_t> index_;
  int m_ = 1;
  int k_ = 1;
};

// Exactly m bins; bins may intersect, value counts each item once.
struct Solution {
  std::vector<Configuration> bins;

  std::vector<ItemId> covered_items() const;
};

using CoverVector = std::map<ItemId, double>;

// Sparse nonnegative weighting over configurations.
class FractionalSolution {
 public:
  void add(const Configuration& c, double weight);
  const std::map<Configuration, double>& weights() const { return weights_; }
  bool empty() const { return weights_.empty(); }

  // ||x|| = sum of weights.
  double size() const;
  double value(const Instance& inst) const;

  FractionalSolution& operator+=(const FractionalSolution& other);

 private:
  std::map<Configuration, double> weights_;
};

bool validate_configuration(const Instance& inst, const Configuration& c);

CoverVector cover(const FractionalSolution& x);

double cover_value(const Instance& inst, const CoverVector& y);

double solution_value(const Instance& inst, const Solution& s);

// Throws internal_error naming the first violated bin when infeasible.
void validate_solution(const Instance& inst, const Solution& s);

// Encode a disjoint integral solution as a 0/1 fractional solution
// (nonempty bins only).
FractionalSolution encode_solution(const Instance& inst, const Solution& s);

}  // namespace cmk

#endif
