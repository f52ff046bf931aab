#ifndef CMK_STRUCTURE_HPP
#define CMK_STRUCTURE_HPP

#include <boost/multiprecision/gmp.hpp>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cmk/core.hpp"

namespace cmk {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// Closest rational with denominator at most max_den (continued fractions).
Rational rationalize(double x, int64_t max_den = 1000000);

using RationalCover = std::map<ItemId, Rational>;

// Exact-arithmetic fractional solution.
class RationalSolution {
 public:
  void add(const Configuration& c, const Rational& weight);
  const std::map<Configuration, Rational>& weights() const { return weights_; }

  Rational size() const;
  RationalCover cover() const;

  RationalSolution& operator+=(const RationalSolution& other);

 private:
  std::map<Configuration, Rational> weights_;
};

// Everything derived from a disjoint packing of S into ell configurations:
// exact weights, the large/small split, linear grouping, the realized type
// table with class and subclass partitions of the small items.
struct StructureContext {
  Instance instance;  // owned copy; contexts outlive their inputs
  int inv_delta = 2;  // delta = 1 / inv_delta
  std::vector<Configuration> packing;

  std::set<ItemId> support;               // S
  std::map<ItemId, Rational> weight;      // exact weights, whole instance
  std::vector<ItemId> large;              // L: adjusted weight >= delta,
                                          // sorted by nonincreasing adjusted
                                          // weight, ties by id
  std::vector<std::vector<ItemId>> groups;       // num_groups() slices of L
  std::vector<Rational> rounded_weight;          // min weight per group

  using TypeVec = std::vector<int>;
  std::vector<TypeVec> types;                    // realized, lexicographic
  std::vector<int> eta;                          // packing bins per type
  std::vector<std::vector<ItemId>> classes;      // small items per type,
                                                 // sorted by nonincreasing
                                                 // weight, ties by id
  std::vector<char> degenerate;
  // subclasses[t][j]: j-th subclass of class t (empty for degenerate types)
  std::vector<std::vector<std::vector<ItemId>>> subclasses;

  Rational delta() const { return Rational(1, inv_delta); }
  int num_groups() const { return inv_delta * inv_delta; }
  int ell() const { return static_cast<int>(packing.size()); }

  Rational adjusted_weight(ItemId id) const;
  Rational adjusted_weight_sum(const std::vector<ItemId>& ids) const;
  Rational weight_sum(const std::vector<ItemId>& ids) const;
  Rational type_weight(const TypeVec& t) const;
  int type_cardinality(const TypeVec& t) const;
  bool is_large(ItemId id) const;
};

// Builds the full context. The packing must consist of disjoint valid
// configurations; weights are made exact on entry and the packing must stay
// feasible under the exact weights.
StructureContext build_context(const Instance& inst,
                               const std::vector<Configuration>& packing,
                               int inv_delta);

struct StructureVector {
  std::string name;
  RationalCover entries;  // nonnegative, supported in S
};

// Exact max mass a single configuration can collect from u.
Rational tolerance(const StructureContext& ctx, const StructureVector& u);

// Subclass indicator and weight-capped vectors for non-degenerate types plus
// one indicator per linear group.
std::vector<StructureVector> build_structure_vectors(const StructureContext& ctx);

// True iff u.y <= alpha * u.1_S + t * tol(u) for every vector.
bool check_structure_inequalities(const StructureContext& ctx,
                                  const std::vector<StructureVector>& vectors,
                                  const RationalCover& y, const Rational& alpha,
                                  const Rational& t);

// Exact-cover constructions.
RationalSolution item_per_bin(const RationalCover& y);

// N-copy first fit over small items: cover equals y exactly and
// ||x|| <= 2 * sum y_i * adjusted_weight(i) + 1.
RationalSolution fractional_first_fit(const StructureContext& ctx,
                                      const RationalCover& y);

struct WeakStructureResult {
  RationalSolution solution;
  Rational norm;         // ||x||
  BigInt copies;         // the common denominator N
  size_t failed_items;   // |R| from the shifting procedure
};

// The shifting procedure, the partition-matroid assign LP solved exactly to
// a basic optimum, and the first-fit / singleton cleanups. Requires y to be
// alpha-scaled; the violated cap is named otherwise.
WeakStructureResult build_weak_structure_solution(const StructureContext& ctx,
                                                  const RationalCover& y,
                                                  const Rational& alpha);

struct StructureSolveResult {
  RationalSolution solution;
  Rational norm;
  Rational alpha_used;  // scaling factor passed to the weak construction
};

// Full pipeline: degenerate classes and boundary subclasses via first fit,
// unsaturated groups via singletons, the remainder through the weak
// construction at the smallest scale the caps admit.
StructureSolveResult build_structure_solution(
    const StructureContext& ctx, const std::vector<StructureVector>& vectors,
    const RationalCover& y, const Rational& alpha, const Rational& t);

struct StructureCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Property checks over one context: grouping and type-table identities,
// subclass weight bands, tolerance sanity, and the exact-cover constructions
// on randomized inputs. Deterministic in the seed.
std::vector<StructureCheck> verify_structure_properties(
    const StructureContext& ctx, uint64_t seed);

}  // namespace cmk

#endif
