#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sapg/checks.hpp"
#include "sapg/config.hpp"
#include "sapg/experiment.hpp"
#include "sapg/trace_io.hpp"
#include "sapg/truss.hpp"

namespace {

// Exit codes: 0 success, 1 solver/check failure, 2 config or usage error,
// 3 numerical breakdown (partial outputs are still written).
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;
constexpr int kBreakdown = 3;

struct CommonOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<int> iters;
  std::optional<int> stride;
  std::optional<std::uint64_t> seed;
  bool svg = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_svg) {
  cmd->add_option("--config", opts.config_path, "experiment config file (INI)")
      ->required();
  cmd->add_option("--out", opts.out_dir, "output directory (overrides [run] out)");
  cmd->add_option("--iters", opts.iters, "iteration budget (overrides [run] iters)");
  cmd->add_option("--stride", opts.stride, "trace stride (overrides [run] stride)");
  cmd->add_option("--seed", opts.seed, "seed for randomized checks (overrides [run] seed)");
  if (with_svg) {
    cmd->add_flag("--svg", opts.svg, "also write a log-log convergence chart");
  }
}

sapg::ExperimentConfig load_with_overrides(const CommonOptions& opts) {
  sapg::ExperimentConfig cfg = sapg::load_experiment_config(opts.config_path);
  if (opts.out_dir) {
    cfg.run.out_dir = *opts.out_dir;
  }
  if (opts.iters) {
    cfg.run.iters = *opts.iters;
  }
  if (opts.stride) {
    cfg.run.stride = *opts.stride;
  }
  if (opts.seed) {
    cfg.run.seed = *opts.seed;
  }
  if (opts.svg) {
    cfg.run.svg = true;
  }
  return cfg;
}

int cmd_solve(const CommonOptions& opts, const std::string& algo_name) {
  const auto t0 = std::chrono::steady_clock::now();
  const sapg::ExperimentConfig cfg = load_with_overrides(opts);
  const sapg::Algorithm algo = sapg::algorithm_from_string(algo_name);
  const sapg::RobustComplianceProblem problem = sapg::build_instance(cfg.instance);

  // A pinned reference value enables gap reporting and (for S-APG)
  // Lyapunov annotation without a surrogate run.
  std::optional<sapg::ReferenceResult> reference;
  if (cfg.run.reference_f) {
    reference = sapg::compute_reference(cfg, problem);
  }
  const sapg::AlgoRun result = sapg::run_single(
      cfg, problem, algo, reference ? &*reference : nullptr);

  std::filesystem::create_directories(cfg.run.out_dir);
  const std::string path = cfg.run.out_dir + "/trace_" + sapg::to_string(algo) + ".csv";
  sapg::write_trace_csv(path, result.trace);

  for (const std::string& w : result.trace.warnings) {
    std::cout << "warning: " << w << "\n";
  }
  std::cout << "algorithm: " << sapg::to_string(algo) << "\n"
            << "instance: " << problem.bar_count() << " bars, "
            << problem.structure.free_dof_count << " free dofs, "
            << problem.scenario_count() << " load scenarios\n"
            << "iterations: " << (result.trace.rows.empty()
                                      ? 0
                                      : result.trace.rows.back().k)
            << "\n"
            << "final f: "
            << sapg::format_double(
                   result.trace.rows.empty() ? 0.0 : result.trace.rows.back().f_x)
            << "\n"
            << "trace: " << path << "\n";
  if (reference) {
    std::cout << "final relative gap: " << sapg::format_double(result.final_gap)
              << " (reference " << reference->source << ")\n";
  }
  std::cout << "wall time: "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                   .count()
            << " s\n";
  if (result.trace.breakdown) {
    std::cout << "breakdown: " << result.trace.breakdown_message << "\n";
    return kBreakdown;
  }
  return kOk;
}

int cmd_compare(const CommonOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const sapg::ExperimentConfig cfg = load_with_overrides(opts);
  for (const char* section : {"sapg", "spg", "subgrad"}) {
    if (!cfg.has_section(section)) {
      std::cerr << "error: compare needs a [" << section << "] section in "
                << opts.config_path << "\n";
      return kUsage;
    }
  }
  const sapg::RobustComplianceProblem problem = sapg::build_instance(cfg.instance);
  const sapg::CompareResult result = sapg::run_compare(cfg, problem);
  sapg::write_compare_outputs(cfg.run.out_dir, result, cfg.run.svg);

  std::cout << sapg::summarize(result) << "outputs: " << cfg.run.out_dir << "\n"
            << "wall time: "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                   .count()
            << " s\n";
  for (const sapg::AlgoRun& r : result.runs) {
    if (r.trace.breakdown) {
      return kBreakdown;
    }
  }
  return kOk;
}

int cmd_check(const CommonOptions& opts, const std::string& suite) {
  const sapg::ExperimentConfig cfg = load_with_overrides(opts);
  const sapg::RobustComplianceProblem problem = sapg::build_instance(cfg.instance);

  std::vector<std::string> suites;
  if (suite == "all") {
    suites = sapg::known_suites();
  } else {
    suites = {suite};
  }

  std::cout << "check suites: seed " << cfg.run.seed << "\n";
  bool all_pass = true;
  for (const std::string& name : suites) {
    const sapg::CheckReport report =
        sapg::run_suite(name, problem, cfg.run.seed);  // throws on unknown suite
    for (const sapg::CheckItem& item : report.items) {
      std::cout << (item.pass ? "[PASS] " : "[FAIL] ") << report.suite << "."
                << item.name << " (" << item.detail << ")\n";
      all_pass = all_pass && item.pass;
    }
  }
  return all_pass ? kOk : kFailure;
}

int cmd_describe(const CommonOptions& opts) {
  const sapg::ExperimentConfig cfg = load_with_overrides(opts);
  const sapg::GroundStructure gs = sapg::build_grid_ground_structure(
      cfg.instance.cols, cfg.instance.rows, cfg.instance.spacing,
      cfg.instance.connectivity, cfg.instance.support, cfg.instance.young_modulus);

  const std::size_t loaded =
      cfg.instance.loaded_nodes.empty() ? 1 : cfg.instance.loaded_nodes.size();
  const double floor_volume = cfg.instance.x_min * gs.bar_lengths.sum();
  const bool fits = floor_volume <= cfg.instance.volume_budget;

  std::cout << "grid: " << cfg.instance.cols << " x " << cfg.instance.rows
            << " nodes, spacing " << sapg::format_double(cfg.instance.spacing)
            << ", connectivity level " << cfg.instance.connectivity << "\n"
            << "nodes: " << gs.node_count() << "\n"
            << "bars (m): " << gs.bar_count() << "\n"
            << "fixed dofs: " << gs.fixed_dofs.size() << "\n"
            << "free dofs (d): " << gs.free_dof_count << "\n"
            << "load scenarios (n): " << 2 * loaded << "\n"
            << "total bar length: " << sapg::format_double(gs.bar_lengths.sum()) << "\n"
            << "volume budget: " << sapg::format_double(cfg.instance.volume_budget)
            << "\n"
            << "x_min: " << sapg::format_double(cfg.instance.x_min) << "\n"
            << "x_min floor volume: " << sapg::format_double(floor_volume)
            << (fits ? " (fits within the budget)" : " (EXCEEDS the budget)") << "\n";
  if (fits) {
    const sapg::RobustComplianceProblem problem = sapg::build_instance(cfg.instance);
    std::cout << "uniform design objective: "
              << sapg::format_double(
                     problem.objective->eval_nonsmooth(problem.uniform_design()))
              << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feasible smoothing accelerated projected gradient solver for "
               "robust truss compliance"};
  app.require_subcommand(1);

  CommonOptions solve_opts, compare_opts, check_opts, describe_opts;
  std::string algo_name = "sapg";
  std::string suite = "all";

  CLI::App* solve = app.add_subcommand("solve", "run one algorithm, write its trace");
  add_common(solve, solve_opts, false);
  solve->add_option("--algo", algo_name, "sapg | spg | subgrad");

  CLI::App* compare =
      app.add_subcommand("compare", "run all three algorithms and the gap report");
  add_common(compare, compare_opts, true);

  CLI::App* check = app.add_subcommand("check", "run oracle/property suites");
  add_common(check, check_opts, false);
  check->add_option("--suite", suite, "grad | project | smoothing | lyapunov | all");

  CLI::App* describe = app.add_subcommand("describe", "print instance facts");
  add_common(describe, describe_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (solve->parsed()) {
      return cmd_solve(solve_opts, algo_name);
    }
    if (compare->parsed()) {
      return cmd_compare(compare_opts);
    }
    if (check->parsed()) {
      return cmd_check(check_opts, suite);
    }
    if (describe->parsed()) {
      return cmd_describe(describe_opts);
    }
  } catch (const sapg::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kUsage;
  } catch (const sapg::InvalidArgument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const sapg::NumericalBreakdown& err) {
    std::cerr << "numerical breakdown: " << err.what() << "\n";
    return kBreakdown;
  } catch (const sapg::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
