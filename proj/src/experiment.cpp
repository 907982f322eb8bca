#include "sapg/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sapg {

namespace {

// Tracks the smallest nonsmooth objective value over a trace.
void fold_best(const IterateTrace& trace, double& f_star, Eigen::VectorXd& x_star) {
  if (trace.best_x.size() > 0 && trace.best_f < f_star) {
    f_star = trace.best_f;
    x_star = trace.best_x;
  }
}

}  // namespace

ReferenceResult compute_reference(const ExperimentConfig& config,
                                  const RobustComplianceProblem& problem) {
  ReferenceResult ref;
  if (config.run.reference_f) {
    ref.f_star = *config.run.reference_f;
    ref.x_star = problem.uniform_design();
    ref.source = "config";
    ref.gap_estimate = 0.0;
    return ref;
  }

  const Eigen::VectorXd x0 = problem.uniform_design();

  SolverConfig long_cfg = config.solver(Algorithm::Sapg);
  long_cfg.max_iters = std::max(1, config.run.reference_factor) * config.run.iters;
  long_cfg.trace_every = std::max(1, long_cfg.max_iters / 4000);
  long_cfg.record_wall_time = false;
  const IterateTrace long_trace = run(long_cfg, *problem.objective, *problem.feasible, x0);
  if (long_trace.breakdown) {
    throw NumericalBreakdown("surrogate reference run broke down: " +
                             long_trace.breakdown_message);
  }

  double f_star = long_trace.best_f;
  Eigen::VectorXd x_star = long_trace.best_x;
  const double f_before_polish = f_star;

  if (config.run.polish_iters > 0) {
    SolverConfig polish_cfg = long_cfg;
    polish_cfg.max_iters = config.run.polish_iters;
    polish_cfg.trace_every = std::max(1, polish_cfg.max_iters / 1000);
    polish_cfg.fixed_mu = config.run.polish_mu;
    const IterateTrace polish =
        run(polish_cfg, *problem.objective, *problem.feasible, x_star);
    if (!polish.breakdown) {
      fold_best(polish, f_star, x_star);
    }
  }

  ref.f_star = f_star;
  ref.x_star = std::move(x_star);
  ref.source = "surrogate";
  ref.iterations = long_cfg.max_iters + config.run.polish_iters;
  const double beta = problem.objective->constants().beta;
  ref.gap_estimate = std::max({f_before_polish - f_star, beta * config.run.polish_mu,
                               1e-12 * std::abs(f_star)});
  return ref;
}

const AlgoRun& CompareResult::by(Algorithm algo) const {
  for (const AlgoRun& r : runs) {
    if (r.algo == algo) {
      return r;
    }
  }
  throw InvalidArgument("CompareResult: no run for algorithm " + to_string(algo));
}

std::optional<double> loglog_slope(const GapSeries& series, int k_lo, int k_hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < series.ks.size(); ++i) {
    const int k = series.ks[i];
    const double gap = series.gaps[i];
    if (k < std::max(k_lo, 1) || k > k_hi || !(gap > 0.0) || !std::isfinite(gap)) {
      continue;
    }
    const double x = std::log10(static_cast<double>(k));
    const double y = std::log10(gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double det = n * sxx - sx * sx;
  if (n < 2 || std::abs(det) < 1e-30) {
    return std::nullopt;
  }
  return (n * sxy - sx * sy) / det;
}

AlgoRun run_single(const ExperimentConfig& config, const RobustComplianceProblem& problem,
                   Algorithm algo, const ReferenceResult* reference) {
  AlgoRun out;
  out.algo = algo;
  out.config = config.solver(algo);
  const bool lyapunov =
      config.run.lyapunov && algo == Algorithm::Sapg && reference != nullptr;
  out.config.retain_states = lyapunov;

  const Eigen::VectorXd x0 = problem.uniform_design();
  out.trace = run(out.config, *problem.objective, *problem.feasible, x0);

  if (reference) {
    const GapSeries gaps =
        relative_gap_series(to_string(algo), out.trace, reference->f_star);
    if (!gaps.gaps.empty()) {
      out.final_gap = gaps.gaps.back();
    }
  }
  if (lyapunov && !out.trace.states.empty()) {
    const LyapunovDiagnostics diag =
        lyapunov_series(out.trace, *problem.objective, out.config, reference->x_star,
                        10.0 * reference->gap_estimate);
    annotate_trace(out.trace, diag, out.config, problem.objective->constants(),
                   (out.trace.x0 - reference->x_star).norm());
    out.trace.states.clear();  // states only needed for the diagnostics
  }
  return out;
}

CompareResult run_compare(const ExperimentConfig& config,
                          const RobustComplianceProblem& problem) {
  CompareResult result;
  result.reference = compute_reference(config, problem);
  result.slope_k_lo = std::min(100, std::max(2, config.run.iters / 4));
  result.slope_k_hi = config.run.iters;

  const Eigen::VectorXd x0 = problem.uniform_design();
  const Algorithm order[3] = {Algorithm::Sapg, Algorithm::Spg, Algorithm::Subgrad};
  for (int i = 0; i < 3; ++i) {
    AlgoRun& r = result.runs[i];
    r.algo = order[i];
    r.config = config.solver(order[i]);
    r.config.retain_states = config.run.lyapunov && order[i] == Algorithm::Sapg;
    r.trace = run(r.config, *problem.objective, *problem.feasible, x0);
  }

  // The gap reference is a true lower envelope of every evaluated value:
  // the surrogate (or pinned) f* folded with the best value any run saw.
  for (const AlgoRun& r : result.runs) {
    if (r.trace.best_x.size() > 0 && r.trace.best_f < result.reference.f_star) {
      result.reference.f_star = r.trace.best_f;
      result.reference.x_star = r.trace.best_x;
      result.reference.source += "+best-of-runs";
    }
  }

  for (AlgoRun& r : result.runs) {
    const GapSeries gaps =
        relative_gap_series(to_string(r.algo), r.trace, result.reference.f_star);
    if (!gaps.gaps.empty()) {
      r.final_gap = gaps.gaps.back();
    }
    r.slope = loglog_slope(gaps, result.slope_k_lo, result.slope_k_hi);
    if (r.config.retain_states && !r.trace.states.empty()) {
      const LyapunovDiagnostics diag =
          lyapunov_series(r.trace, *problem.objective, r.config,
                          result.reference.x_star, 10.0 * result.reference.gap_estimate);
      annotate_trace(r.trace, diag, r.config, problem.objective->constants(),
                     (r.trace.x0 - result.reference.x_star).norm());
      r.trace.states.clear();
    }
  }
  return result;
}

void write_compare_outputs(const std::string& dir, const CompareResult& result,
                           bool svg) {
  std::filesystem::create_directories(dir);
  std::vector<GapSeries> gaps;
  for (const AlgoRun& r : result.runs) {
    write_trace_csv(dir + "/trace_" + to_string(r.algo) + ".csv", r.trace);
    gaps.push_back(relative_gap_series(to_string(r.algo), r.trace,
                                       result.reference.f_star));
  }
  write_gap_csv(dir + "/gaps.csv", gaps);
  if (svg) {
    write_gap_svg(dir + "/convergence.svg", gaps);
  }
  std::ofstream summary(dir + "/summary.txt", std::ios::binary);
  if (!summary) {
    throw Error("cannot open '" + dir + "/summary.txt' for writing");
  }
  summary << summarize(result);
}

std::string summarize(const CompareResult& result) {
  std::ostringstream out;
  out << "reference f* = " << format_double(result.reference.f_star) << " ("
      << result.reference.source;
  if (result.reference.source.rfind("surrogate", 0) == 0) {
    out << ", " << result.reference.iterations << " iterations, gap estimate "
        << format_double(result.reference.gap_estimate);
  }
  out << ")\n";
  out << "slope fit window: k in [" << result.slope_k_lo << ", " << result.slope_k_hi
      << "]\n";
  for (const AlgoRun& r : result.runs) {
    out << to_string(r.algo) << ": final f = "
        << format_double(r.trace.rows.empty() ? 0.0 : r.trace.rows.back().f_x)
        << ", final relative gap = " << format_double(r.final_gap) << ", slope = "
        << (r.slope ? format_double(*r.slope) : std::string("n/a"));
    if (r.trace.breakdown) {
      out << ", BREAKDOWN: " << r.trace.breakdown_message;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace sapg
