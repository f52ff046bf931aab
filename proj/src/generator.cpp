#include "cmk/generator.hpp"

#include "cmk/errors.hpp"
#include "cmk/rng.hpp"

namespace cmk {

Family family_from_string(const std::string& name) {
  if (name == "uniform") return Family::uniform;
  if (name == "correlated") return Family::correlated;
  if (name == "cardinality-tight") return Family::cardinality_tight;
  throw input_error("unknown generator family: " + name);
}

const char* to_string(Family f) {
  switch (f) {
    case Family::uniform: return "uniform";
    case Family::correlated: return "correlated";
    case Family::cardinality_tight: return "cardinality-tight";
  }
  return "?";
}

PackedInstance generate_packed(int inv_delta, int ell, uint64_t seed) {
  if (inv_delta < 2 || ell < 1)
    throw input_error("generate_packed: need 1/delta >= 2 and ell >= 1");
  StreamRng rng(splitmix64(seed ^ 0x9021ac5d3f8e11feULL));
  const int q = inv_delta;
  const int k = 2 * q + 1;  // adjusted weight 1/k < delta, so small items exist
  const int64_t grid = 8LL * q * q;

  std::vector<Item> items;
  std::vector<Configuration> packing;
  ItemId next_id = 0;
  for (int b = 0; b < ell; ++b) {
    std::vector<ItemId> bin;
    int64_t used = 0;  // weight in grid units; capacity is `grid`
    int n_large = 1 + static_cast<int>(rng.below(2));
    for (int i = 0; i < n_large; ++i) {
      // large: weight >= delta - 1/k, on the grid
      int64_t lo = (grid + q - 1) / q;  // ceil(delta * grid)
      int64_t w = lo + static_cast<int64_t>(rng.below(3)) * q;
      if (used + w > grid || static_cast<int>(bin.size()) >= k) break;
      items.push_back({next_id, static_cast<double>(w) / grid, rng.uniform()});
      bin.push_back(next_id++);
      used += w;
    }
    int n_small = 1 + static_cast<int>(rng.below(4));
    for (int i = 0; i < n_small; ++i) {
      // small: adjusted weight < delta, i.e. w < delta - 1/k
      int64_t hi = grid / q - grid / k;  // grid * (delta - 1/k)
      if (hi <= 1) break;
      int64_t w = 1 + static_cast<int64_t>(rng.below(hi - 1));
      if (used + w > grid || static_cast<int>(bin.size()) >= k) break;
      items.push_back({next_id, static_cast<double>(w) / grid, rng.uniform()});
      bin.push_back(next_id++);
      used += w;
    }
    packing.emplace_back(std::move(bin));
  }
  return {Instance(std::move(items), std::max(ell, 1), k), std::move(packing)};
}

Instance generate(const GeneratorSpec& spec) {
  if (spec.n < 0 || spec.m < 1 || spec.k < 1)
    throw input_error("generator: n must be >= 0 and m, k >= 1");
  StreamRng rng(splitmix64(spec.seed ^ 0xcafef00dd15ea5e5ULL));
  std::vector<Item> items;
  items.reserve(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    Item it;
    it.id = i;
    switch (spec.family) {
      case Family::uniform:
        // a weight floor keeps instances from degenerating into all-fit
        it.weight = rng.uniform(0.05, 1.0);
        it.value = rng.uniform();
        break;
      case Family::correlated:
        it.weight = rng.uniform(0.05, 1.0);
        it.value = it.weight + rng.uniform(0.0, 0.1);
        break;
      case Family::cardinality_tight:
        // every k-subset fits by weight, so the cardinality bound binds
        it.weight = rng.uniform() / (2.0 * spec.k);
        it.value = rng.uniform();
        break;
    }
    items.push_back(it);
  }
  return Instance(std::move(items), spec.m, spec.k);
}

}  // namespace cmk
