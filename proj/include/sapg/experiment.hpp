#pragma once

#include <array>
#include <optional>
#include <string>

#include "sapg/config.hpp"
#include "sapg/solvers.hpp"
#include "sapg/trace_io.hpp"
#include "sapg/truss.hpp"

namespace sapg {

/// Reference objective value the gap curves are measured against.
struct ReferenceResult {
  double f_star = 0.0;
  Eigen::VectorXd x_star;
  std::string source;        // "config" or "surrogate"
  double gap_estimate = 0.0; // heuristic accuracy of the surrogate value
  int iterations = 0;        // surrogate budget actually spent
};

/// High-accuracy surrogate optimum: a long S-APG run (reference_factor times
/// the benchmark budget) followed by a fixed-mu polish from its best design;
/// f_star is the smallest nonsmooth value seen anywhere. The gap estimate
/// combines the polish improvement with the smoothing bias beta * polish_mu.
ReferenceResult compute_reference(const ExperimentConfig& config,
                                  const RobustComplianceProblem& problem);

struct AlgoRun {
  Algorithm algo = Algorithm::Sapg;
  SolverConfig config;
  IterateTrace trace;
  double final_gap = 0.0;       // relative gap of the last recorded row
  std::optional<double> slope;  // log-log least-squares slope of the gap curve
};

struct CompareResult {
  std::array<AlgoRun, 3> runs;  // sapg, spg, subgrad
  ReferenceResult reference;
  int slope_k_lo = 0;
  int slope_k_hi = 0;

  const AlgoRun& by(Algorithm algo) const;
};

/// Least-squares slope of log10(gap) against log10(k) over k in
/// [k_lo, k_hi]; empty when fewer than two usable points exist.
std::optional<double> loglog_slope(const GapSeries& series, int k_lo, int k_hi);

/// Runs one algorithm from the uniform design. Lyapunov annotation happens
/// only for S-APG and only when a reference design is supplied.
AlgoRun run_single(const ExperimentConfig& config, const RobustComplianceProblem& problem,
                   Algorithm algo, const ReferenceResult* reference);

/// Runs all three algorithms against a shared reference (computed here when
/// the config does not pin one).
CompareResult run_compare(const ExperimentConfig& config,
                          const RobustComplianceProblem& problem);

/// Writes trace_<algo>.csv per run, gaps.csv, summary.txt and optionally
/// convergence.svg into the directory (created if needed). Contents are
/// deterministic unless wall-clock timing was requested.
void write_compare_outputs(const std::string& dir, const CompareResult& result,
                           bool svg);

/// Human-readable run summary (no wall-clock times).
std::string summarize(const CompareResult& result);

}  // namespace sapg
