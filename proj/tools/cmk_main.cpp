#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cmk/bench.hpp"
#include "cmk/config_lp.hpp"
#include "cmk/errors.hpp"
#include "cmk/generator.hpp"
#include "cmk/structure.hpp"

namespace {

using cmk::Json;

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cmk::input_error("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw cmk::input_error("cannot parse " + path + ": " + e.what());
  }
  return j;
}

void write_output(const Json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw cmk::input_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cmk: solvers and benchmarks for uniform cardinality-constrained "
               "multiple knapsack"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance");
  std::string gen_family = "uniform";
  cmk::GeneratorSpec spec;
  std::string gen_out = "-";
  gen->add_option("--family", gen_family, "uniform | correlated | cardinality-tight");
  gen->add_option("--n", spec.n, "item count");
  gen->add_option("--m", spec.m, "bin count");
  gen->add_option("--k", spec.k, "cardinality bound");
  gen->add_option("--seed", spec.seed, "rng seed");
  gen->add_option("-o,--output", gen_out, "output path (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "run an algorithm on an instance");
  cmk::AlgoParams params;
  std::string solve_in, solve_out = "-", solve_mode = "practical";
  solve->add_option("--algo", params.algo,
                    "iterative | oneshot | constant-bins | local-search | exact | dispatch");
  solve->add_option("--epsilon", params.eps, "error parameter");
  solve->add_option("--seed", params.seed, "rng seed");
  solve->add_option("--mode", solve_mode, "paper | practical");
  solve->add_option("--budget", params.budget, "guess enumeration budget");
  solve->add_option("--m-switch", params.m_switch, "practical dispatch threshold");
  solve->add_option("--lp-eps", params.lp_eps, "inner LP accuracy override");
  solve->add_option("-i,--input", solve_in, "instance JSON")->required();
  solve->add_option("-o,--output", solve_out, "report path (default stdout)");

  // lp
  auto* lp = app.add_subcommand("lp", "solve the configuration LP");
  double lp_eps = 0.05;
  std::string lp_in;
  lp->add_option("--epsilon", lp_eps, "column generation accuracy");
  lp->add_option("-i,--input", lp_in, "instance JSON")->required();

  // structure verify
  auto* structure = app.add_subcommand("structure", "linear-structure tools");
  auto* verify = structure->add_subcommand("verify", "run the property suite");
  double delta = 0.5;
  uint64_t structure_seed = 1;
  int structure_ell = 3;
  verify->add_option("--delta", delta, "1/delta must be an integer >= 2");
  verify->add_option("--seed", structure_seed, "rng seed");
  verify->add_option("--ell", structure_ell, "packing size");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "run a benchmark suite");
  std::string suite_path, bench_out = "bench_out";
  bench_cmd->add_option("--suite", suite_path, "suite JSON")->required();
  bench_cmd->add_option("-o,--output", bench_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      spec.family = cmk::family_from_string(gen_family);
      write_output(cmk::instance_to_json(cmk::generate(spec)), gen_out);
    } else if (*solve) {
      if (solve_mode != "paper" && solve_mode != "practical")
        throw cmk::input_error("mode must be paper or practical");
      params.paper_mode = solve_mode == "paper";
      cmk::Instance inst = cmk::instance_from_json(read_json_file(solve_in));
      cmk::RunReport rep = cmk::run_algorithm(inst, params);
      write_output(cmk::report_to_json(rep), solve_out);
    } else if (*lp) {
      cmk::Instance inst = cmk::instance_from_json(read_json_file(lp_in));
      cmk::LpSolution sol =
          cmk::solve_column_generation(cmk::full_lp(inst, inst.m()), lp_eps);
      Json cover_json = Json::object();
      for (const auto& [id, yi] : cmk::cover(sol.fractional))
        cover_json[std::to_string(id)] = yi;
      write_output(Json{{"objective", sol.objective},
                        {"dual_bound", sol.dual_bound},
                        {"status", cmk::to_string(sol.status)},
                        {"cover", cover_json}},
                   "-");
    } else if (*verify) {
      double inv = 1.0 / delta;
      if (std::abs(inv - std::round(inv)) > 1e-9 || inv < 2)
        throw cmk::input_error("1/delta must be an integer >= 2");
      cmk::PackedInstance fixture = cmk::generate_packed(
          static_cast<int>(std::round(inv)), structure_ell, structure_seed);
      cmk::StructureContext ctx = cmk::build_context(
          fixture.instance, fixture.packing, static_cast<int>(std::round(inv)));
      Json checks = Json::array();
      bool all = true;
      for (const cmk::StructureCheck& c :
           cmk::verify_structure_properties(ctx, structure_seed)) {
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        all = all && c.pass;
      }
      write_output(Json{{"delta", delta},
                        {"ell", structure_ell},
                        {"seed", structure_seed},
                        {"types", ctx.types.size()},
                        {"large_items", ctx.large.size()},
                        {"checks", checks},
                        {"all_pass", all}},
                   "-");
      if (!all) return 1;
    } else if (*bench_cmd) {
      cmk::BenchSuite suite = cmk::suite_from_json(read_json_file(suite_path));
      cmk::BenchResult result = cmk::bench(suite);
      std::filesystem::create_directories(bench_out);
      write_output(cmk::bench_to_json(result), bench_out + "/bench.json");
      std::ofstream csv(bench_out + "/bench.csv");
      csv << cmk::bench_to_csv(result);
      std::cout << "wrote " << bench_out << "/bench.json and bench.csv\n";
    }
  } catch (const cmk::budget_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << Json{{"error", "budget"},
                      {"message", e.what()},
                      {"estimated_count", e.estimated_count}}
                     .dump(2)
              << "\n";
    return 3;
  } catch (const cmk::capacity_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const cmk::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
