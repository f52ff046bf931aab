#ifndef CMK_GENERATOR_HPP
#define CMK_GENERATOR_HPP

#include <cstdint>
#include <string>

#include "cmk/core.hpp"

namespace cmk {

enum class Family { uniform, correlated, cardinality_tight };

Family family_from_string(const std::string& name);
const char* to_string(Family f);

struct GeneratorSpec {
  Family family = Family::uniform;
  int n = 10;
  int m = 2;
  int k = 2;
  uint64_t seed = 0;
};

// Deterministic in the seed, byte-for-byte.
Instance generate(const GeneratorSpec& spec);

struct PackedInstance {
  Instance instance;
  std::vector<Configuration> packing;  // disjoint bins covering all items
};

// Instance built around a known disjoint packing, with weights on a
// small-denominator rational grid so exact arithmetic recovers them.
// inv_delta fixes the large/small threshold the packing is built against.
PackedInstance generate_packed(int inv_delta, int ell, uint64_t seed);

}  // namespace cmk

#endif
