#ifndef CMK_BENCH_HPP
#define CMK_BENCH_HPP

#include <json.hpp>
#include <string>
#include <vector>

#include "cmk/core.hpp"
#include "cmk/generator.hpp"
#include "cmk/rounding.hpp"

namespace cmk {

using Json = nlohmann::json;

// Instance JSON: {"m": int, "k": int, "items": [{"id","w","v"}]}
Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j);

Json solution_to_json(const Solution& s);
Solution solution_from_json(const Json& j);

Json trace_to_json(const std::vector<IterationRecord>& trace);

// FNV-1a over the canonical instance serialization.
std::string instance_digest(const Instance& inst);

struct AlgoParams {
  std::string algo = "iterative";  // iterative | oneshot | local-search |
                                   // constant-bins | exact | dispatch
  double eps = 0.25;
  uint64_t seed = 0;
  bool paper_mode = false;
  double lp_eps = -1.0;
  double budget = 1e6;
  int m_switch = 16;
};

struct RunReport {
  std::string digest;
  std::string algorithm;
  AlgoParams params;
  double value = 0.0;
  double lp_upper_bound = 0.0;
  double ratio = 0.0;
  double wall_time_ms = 0.0;
  std::vector<IterationRecord> trace;
  Solution solution;
  std::string branch;  // dispatch only
};

// Execute the named algorithm, validate the output, and normalize its value
// by the configuration-LP upper bound. Pass a cached bound to skip the LP.
RunReport run_algorithm(const Instance& inst, const AlgoParams& params,
                        double cached_lp_bound = -1.0);

double lp_upper_bound(const Instance& inst, double eps = 0.01);

Json report_to_json(const RunReport& report);

struct BenchSuite {
  std::vector<GeneratorSpec> instances;
  std::vector<AlgoParams> algorithms;
  std::vector<uint64_t> seeds;
};

BenchSuite suite_from_json(const Json& j);

struct BenchRow {
  std::string digest;
  std::string algorithm;
  uint64_t seed = 0;
  double value = 0.0;
  double lp_upper_bound = 0.0;
  double ratio = 0.0;
  double wall_time_ms = 0.0;
  std::string error;  // empty on success
};

struct BenchAggregate {
  std::string algorithm;
  size_t runs = 0;
  double mean_ratio = 0.0;
  double stddev_ratio = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<BenchAggregate> aggregates;
};

// Cross product of instances x algorithms x seeds; per-cell failures are
// recorded and the suite continues. Aggregates are computed from a canonical
// ordering, so run order never changes them.
BenchResult bench(const BenchSuite& suite);

Json bench_to_json(const BenchResult& result);
std::string bench_to_csv(const BenchResult& result);

}  // namespace cmk

#endif
