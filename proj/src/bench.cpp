#include "cmk/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "cmk/config_lp.hpp"
#include "cmk/constant_bins.hpp"
#include "cmk/errors.hpp"
#include "cmk/exact_oracle.hpp"

namespace cmk {

Json instance_to_json(const Instance& inst) {
  Json items = Json::array();
  for (const Item& it : inst.items())
    items.push_back({{"id", it.id}, {"w", it.weight}, {"v", it.value}});
  return Json{{"m", inst.m()}, {"k", inst.k()}, {"items", items}};
}

Instance instance_from_json(const Json& j) {
  try {
    std::vector<Item> items;
    for (const Json& e : j.at("items"))
      items.push_back(
          {e.at("id").get<ItemId>(), e.at("w").get<double>(), e.at("v").get<double>()});
    return Instance(std::move(items), j.at("m").get<int>(), j.at("k").get<int>());
  } catch (const Json::exception& e) {
    throw input_error(std::string("malformed instance JSON: ") + e.what());
  }
}

Json solution_to_json(const Solution& s) {
  Json bins = Json::array();
  for (const Configuration& c : s.bins) bins.push_back(c.ids());
  return Json{{"bins", bins}};
}

Solution solution_from_json(const Json& j) {
  try {
    Solution s;
    for (const Json& bin : j.at("bins"))
      s.bins.emplace_back(bin.get<std::vector<ItemId>>());
    return s;
  } catch (const Json::exception& e) {
    throw input_error(std::string("malformed solution JSON: ") + e.what());
  }
}

Json trace_to_json(const std::vector<IterationRecord>& trace) {
  Json out = Json::array();
  for (const IterationRecord& r : trace)
    out.push_back({{"j", r.j},
                   {"m_j", r.m_j},
                   {"lp_value", r.lp_value},
                   {"q", r.q},
                   {"gained_value", r.gained_value},
                   {"ratio", r.ratio},
                   {"survival_bound", r.survival_bound}});
  return out;
}

std::string instance_digest(const Instance& inst) {
  std::string bytes = instance_to_json(inst).dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double lp_upper_bound(const Instance& inst, double eps) {
  if (inst.n() == 0) return 0.0;
  LpSolution sol = solve_column_generation(full_lp(inst, inst.m()), eps);
  return sol.dual_bound;
}

RunReport run_algorithm(const Instance& inst, const AlgoParams& params,
                        double cached_lp_bound) {
  RunReport rep;
  rep.digest = instance_digest(inst);
  rep.algorithm = params.algo;
  rep.params = params;

  auto t0 = std::chrono::steady_clock::now();
  if (params.algo == "iterative" || params.algo == "oneshot") {
    RoundingParams rp;
    rp.eps = params.eps;
    rp.seed = params.seed;
    rp.lp_eps = params.lp_eps;
    rp.mode = params.paper_mode ? RoundingMode::paper : RoundingMode::practical;
    RoundingResult rr = params.algo == "iterative" ? iterative_rounding(inst, rp)
                                                   : oneshot_rounding(inst, rp);
    rep.solution = std::move(rr.solution);
    rep.trace = std::move(rr.trace);
  } else if (params.algo == "local-search") {
    rep.solution = local_search(inst);
  } else if (params.algo == "constant-bins") {
    ConstantBinsParams cp;
    cp.eps_prime = params.eps;
    cp.budget = params.budget;
    rep.solution = constant_bins(inst, cp);
  } else if (params.algo == "exact") {
    OracleResult res = solve_exact_cmk(inst);
    rep.solution = std::move(res.solution);
  } else if (params.algo == "dispatch") {
    DispatchParams dp;
    dp.eps_prime = params.eps;
    dp.paper_mode = params.paper_mode;
    dp.m_switch = params.m_switch;
    dp.budget = params.budget;
    dp.seed = params.seed;
    DispatchResult res = dispatch(inst, dp);
    rep.solution = std::move(res.solution);
    rep.branch = res.branch;
  } else {
    throw input_error("unknown algorithm: " + params.algo);
  }
  auto t1 = std::chrono::steady_clock::now();
  rep.wall_time_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();

  // a returned infeasible solution is a bug, not an input problem
  validate_solution(inst, rep.solution);
  rep.value = solution_value(inst, rep.solution);
  rep.lp_upper_bound =
      cached_lp_bound >= 0.0 ? cached_lp_bound : lp_upper_bound(inst);
  rep.ratio = rep.lp_upper_bound > 0.0 ? rep.value / rep.lp_upper_bound : 0.0;
  internal_check(rep.ratio <= 1.0 + 1e-6,
                 "run report: value exceeds the LP upper bound");
  return rep;
}

Json report_to_json(const RunReport& report) {
  Json j{{"instance_digest", report.digest},
         {"algorithm", report.algorithm},
         {"params",
          {{"eps", report.params.eps},
           {"seed", report.params.seed},
           {"mode", report.params.paper_mode ? "paper" : "practical"},
           {"budget", report.params.budget}}},
         {"value", report.value},
         {"lp_upper_bound", report.lp_upper_bound},
         {"ratio", report.ratio},
         {"wall_time_ms", report.wall_time_ms},
         {"solution", solution_to_json(report.solution)}};
  if (!report.trace.empty()) j["trace"] = trace_to_json(report.trace);
  if (!report.branch.empty()) j["branch"] = report.branch;
  return j;
}

BenchSuite suite_from_json(const Json& j) {
  try {
    BenchSuite suite;
    for (const Json& e : j.at("instances")) {
      GeneratorSpec spec;
      spec.family = family_from_string(e.at("family").get<std::string>());
      spec.n = e.at("n").get<int>();
      spec.m = e.at("m").get<int>();
      spec.k = e.at("k").get<int>();
      spec.seed = e.value("seed", 0ULL);
      suite.instances.push_back(spec);
    }
    for (const Json& e : j.at("algorithms")) {
      AlgoParams p;
      p.algo = e.at("algo").get<std::string>();
      p.eps = e.value("eps", 0.25);
      p.paper_mode = e.value("mode", std::string("practical")) == "paper";
      p.lp_eps = e.value("lp_eps", -1.0);
      p.budget = e.value("budget", 1e6);
      p.m_switch = e.value("m_switch", 16);
      suite.algorithms.push_back(p);
    }
    suite.seeds = j.at("seeds").get<std::vector<uint64_t>>();
    return suite;
  } catch (const Json::exception& e) {
    throw input_error(std::string("malformed suite JSON: ") + e.what());
  }
}

BenchResult bench(const BenchSuite& suite) {
  BenchResult result;
  std::map<std::string, double> bound_cache;

  for (const GeneratorSpec& spec : suite.instances) {
    Instance inst = generate(spec);
    std::string digest = instance_digest(inst);
    auto cached = bound_cache.find(digest);
    double bound;
    if (cached != bound_cache.end()) {
      bound = cached->second;
    } else {
      bound = lp_upper_bound(inst);
      bound_cache[digest] = bound;
    }
    for (const AlgoParams& algo : suite.algorithms) {
      for (uint64_t seed : suite.seeds) {
        BenchRow row;
        row.digest = digest;
        row.algorithm = algo.algo;
        row.seed = seed;
        try {
          AlgoParams p = algo;
          p.seed = seed;
          RunReport rep = run_algorithm(inst, p, bound);
          row.value = rep.value;
          row.lp_upper_bound = rep.lp_upper_bound;
          row.ratio = rep.ratio;
          row.wall_time_ms = rep.wall_time_ms;
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        result.rows.push_back(std::move(row));
      }
    }
  }

  // canonical order, so aggregation ignores run order
  std::vector<const BenchRow*> sorted;
  for (const BenchRow& r : result.rows) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const BenchRow* a, const BenchRow* b) {
    return std::tie(a->algorithm, a->digest, a->seed) <
           std::tie(b->algorithm, b->digest, b->seed);
  });
  std::map<std::string, std::vector<double>> ratios;
  for (const BenchRow* r : sorted)
    if (r->error.empty()) ratios[r->algorithm].push_back(r->ratio);
  for (const auto& [algo, rs] : ratios) {
    BenchAggregate agg;
    agg.algorithm = algo;
    agg.runs = rs.size();
    double sum = 0.0;
    for (double x : rs) sum += x;
    agg.mean_ratio = rs.empty() ? 0.0 : sum / rs.size();
    double var = 0.0;
    for (double x : rs) var += (x - agg.mean_ratio) * (x - agg.mean_ratio);
    agg.stddev_ratio = rs.size() > 1 ? std::sqrt(var / (rs.size() - 1)) : 0.0;
    result.aggregates.push_back(agg);
  }
  return result;
}

Json bench_to_json(const BenchResult& result) {
  Json rows = Json::array();
  for (const BenchRow& r : result.rows) {
    Json row{{"instance_digest", r.digest}, {"algorithm", r.algorithm},
             {"seed", r.seed},              {"value", r.value},
             {"lp_upper_bound", r.lp_upper_bound}, {"ratio", r.ratio},
             {"wall_time_ms", r.wall_time_ms}};
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(row);
  }
  Json aggs = Json::array();
  for (const BenchAggregate& a : result.aggregates)
    aggs.push_back({{"algorithm", a.algorithm},
                    {"runs", a.runs},
                    {"mean_ratio", a.mean_ratio},
                    {"stddev_ratio", a.stddev_ratio}});
  return Json{{"rows", rows}, {"aggregates", aggs}};
}

std::string bench_to_csv(const BenchResult& result) {
  std::ostringstream out;
  out << "instance_digest,algorithm,seed,value,lp_upper_bound,ratio,wall_time_ms,error\n";
  for (const BenchRow& r : result.rows)
    out << r.digest << ',' << r.algorithm << ',' << r.seed << ',' << r.value
        << ',' << r.lp_upper_bound << ',' << r.ratio << ',' << r.wall_time_ms
        << ',' << r.error << '\n';
  return out.str();
}

}  // namespace cmk
