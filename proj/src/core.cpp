#include "cmk/core.hpp"

#include <cmath>
#include <set>

namespace cmk {

Instance::Instance(std::vector<Item> items, int m, int k)
    : items_(std::move(items)), m_(m), k_(k) {
  if (m_ < 1) throw input_error("instance: m must be >= 1");
  if (k_ < 1) throw input_error("instance: k must be >= 1");
  for (size_t i = 0; i < items_.size(); ++i) {
    const Item& it = items_[i];
    if (!(it.weight >= 0.0 && it.weight <= 1.0))
      throw input_error("instance: item " + std::to_string(it.id) +
                        " weight outside [0,1]");
    if (!(it.value >= 0.0))
      throw input_error("instance: item " + std::to_string(it.id) +
                        " has negative value");
    if (!index_.emplace(it.id, i).second)
      throw input_error("instance: duplicate item id " + std::to_string(it.id));
  }
}

const Item& Instance::item(ItemId id) const {
  auto it = index_.find(id);
  if (it == index_.end())
    throw input_error("unknown item id " + std::to_string(id));
  return items_[it->second];
}

double Instance::total_weight(const Configuration& c) const {
  double w = 0.0;
  for (ItemId id : c.ids()) w += weight(id);
  return w;
}

double Instance::total_value(const std::vector<ItemId>& ids) const {
  double v = 0.0;
  for (ItemId id : ids) v += value(id);
  return v;
}

std::vector<ItemId> Solution::covered_items() const {
  std::set<ItemId> seen;
  for (const Configuration& c : bins) seen.insert(c.ids().begin(), c.ids().end());
  return std::vector<ItemId>(seen.begin(), seen.end());
}

void FractionalSolution::add(const Configuration& c, double weight) {
  if (weight < 0.0)
    throw input_error("fractional solution: negative configuration weight");
  if (weight == 0.0) return;
  weights_[c] += weight;
}

double FractionalSolution::size() const {
  double s = 0.0;
  for (const auto& [c, w] : weights_) s += w;
  return s;
}

double FractionalSolution::value(const Instance& inst) const {
  return cover_value(inst, cover(*this));
}

FractionalSolution& FractionalSolution::operator+=(const FractionalSolution& other) {
  for (const auto& [c, w] : other.weights_) add(c, w);
  return *this;
}

bool validate_configuration(const Instance& inst, const Configuration& c) {
  double w = 0.0;
  for (ItemId id : c.ids()) w += inst.weight(id);  // throws on unknown id
  if (c.size() > static_cast<size_t>(inst.k())) return false;
  return w <= 1.0 + kFeasibilityTol;
}

CoverVector cover(const FractionalSolution& x) {
  CoverVector y;
  for (const auto& [c, w] : x.weights())
    for (ItemId id : c.ids()) y[id] += w;
  return y;
}

double cover_value(const Instance& inst, const CoverVector& y) {
  double v = 0.0;
  for (const auto& [id, yi] : y) v += yi * inst.value(id);
  return v;
}

double solution_value(const Instance& inst, const Solution& s) {
  for (const Configuration& c : s.bins)
    if (!validate_configuration(inst, c))
      throw input_error("solution_value: bin is not a valid configuration");
  return inst.total_value(s.covered_items());
}

void validate_solution(const Instance& inst, const Solution& s) {
  internal_check(s.bins.size() == static_cast<size_t>(inst.m()),
                 "solution has " + std::to_string(s.bins.size()) +
                     " bins, expected " + std::to_string(inst.m()));
  for (size_t b = 0; b < s.bins.size(); ++b)
    internal_check(validate_configuration(inst, s.bins[b]),
                   "bin " + std::to_string(b) + " violates weight or cardinality");
}

FractionalSolution encode_solution(const Instance& inst, const Solution& s) {
  validate_solution(inst, s);
  FractionalSolution x;
  for (const Configuration& c : s.bins)
    if (!c.empty()) x.add(c, 1.0);
  return x;
}

}  // namespace cmk
