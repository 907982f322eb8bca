#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "sapg/errors.hpp"
#include "sapg/feasible_set.hpp"
#include "sapg/smoothing.hpp"

namespace sapg {

enum class Algorithm { Sapg, Spg, Subgrad };

std::string to_string(Algorithm algo);
Algorithm algorithm_from_string(const std::string& name);

/// Parameters shared by the three methods. The smoothing schedules are
///   S-APG: mu_k = mu0 / (k + 1),
///   S-PG:  mu_k = mu0 * (k + 1)^spg_mu_exponent,
/// both with step coefficient L_k = Lprime + L / mu_k (just Lprime when
/// L = 0); the subgradient method uses steps c / sqrt(max(k, 1)).
/// `fixed_mu` pins the smoothing parameter instead of the schedule.
struct SolverConfig {
  Algorithm algorithm = Algorithm::Sapg;
  double mu0 = 1.0;
  double L = 1.0e5;
  double Lprime = 0.0;
  int max_iters = 4000;
  int trace_every = 1;
  double spg_mu_exponent = -0.5;
  double subgrad_step_c = 1.0e-6;
  std::optional<double> fixed_mu;
  bool retain_states = false;
  bool record_wall_time = false;

  void validate() const;
  double mu_at(int k) const;
  double step_coefficient(double mu) const;
};

/// Full solver state after k iterations. `a` is the S-APG momentum value
/// a_k (zero at k = 0 and for the other methods); `mu` and `step_L` are the
/// schedule values mu_k and L_k belonging to this index.
struct SolverState {
  int k = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd z;
  double a = 0.0;
  double mu = 0.0;
  double step_L = 0.0;
};

/// One trace row per recorded iteration. Residuals are the worst signed
/// constraint violations over the iterate family (x, y, z); step_norm is
/// ||z_k - z_{k-1}||. The three optionals are filled by Lyapunov
/// diagnostics when requested.
struct TraceRow {
  int k = 0;
  double f_x = 0.0;
  double f_mu_x = 0.0;
  double mu_k = 0.0;
  double L_k = 0.0;
  double a_k = 0.0;
  double feas_residual_box = 0.0;
  double feas_residual_budget = 0.0;
  double step_norm = 0.0;
  double time_s = 0.0;
  std::optional<double> e_k;
  std::optional<double> etilde_k;
  std::optional<double> bound_rhs;
};

struct IterateTrace {
  std::vector<TraceRow> rows;
  std::vector<SolverState> states;  // only with retain_states
  Eigen::VectorXd x0;
  Eigen::VectorXd best_x;
  double best_f = 0.0;
  bool breakdown = false;
  std::string breakdown_message;
  std::vector<std::string> warnings;
};

/// One S-APG iteration: updates the momentum a, extrapolates y between x
/// and z, takes a projected gradient step in z at smoothing level mu_k, and
/// averages x. Every iterate stays feasible.
SolverState sapg_step(const SolverState& state, const SmoothedObjective& objective,
                      const FeasibleSet& set, const SolverConfig& config);

/// One projected-gradient iteration on f_{mu_k} (y and z track x).
SolverState spg_step(const SolverState& state, const SmoothedObjective& objective,
                     const FeasibleSet& set, const SolverConfig& config);

/// One projected subgradient iteration on the nonsmooth objective.
SolverState subgrad_step(const SolverState& state, const SmoothedObjective& objective,
                         const FeasibleSet& set, const SolverConfig& config);

/// Runs the configured method from x0 (projected onto the set first when it
/// is infeasible, with a warning). A non-finite iterate stops the run early
/// and marks the trace as a breakdown instead of throwing.
IterateTrace run(const SolverConfig& config, const SmoothedObjective& objective,
                 const FeasibleSet& set, const Eigen::VectorXd& x0);

/// Lyapunov estimate sequence behind the S-APG convergence argument:
///   E_k = (a_k^2 / L_k) (f_{mu_k}(x_k) - f_{mu_k}(ref) + beta mu_k)
///         + 0.5 ||z_k - ref||^2,
/// which satisfies E_{k+1} <= E_k + beta a_{k+1} mu_k / L_k for any fixed
/// feasible reference point. The tilde variant uses the nonsmooth objective
/// and subtracts the accumulated slack terms up front.
struct LyapunovPoint {
  int k = 0;
  double e = 0.0;
  double etilde = 0.0;
  double allowed_increment = 0.0;  // beta a_{k+1} mu_k / L_k
  bool e_violation = false;        // E_{k+1} > E_k + increment + tol
  bool etilde_violation = false;   // Etilde_{k+1} > Etilde_k + tol
};

struct LyapunovDiagnostics {
  std::vector<LyapunovPoint> points;
  int e_violations = 0;
  int etilde_violations = 0;
  double max_e_violation = 0.0;
  double max_etilde_violation = 0.0;
  double tolerance = 0.0;
};

/// Evaluates both Lyapunov sequences along a retained-state trace against a
/// fixed feasible reference point. The violation tolerance is
/// 1e-8 * max(1, E_0) plus `extra_slack` (use the surrogate optimality gap
/// when the reference is only approximately optimal).
LyapunovDiagnostics lyapunov_series(const IterateTrace& trace,
                                    const SmoothedObjective& objective,
                                    const SolverConfig& config,
                                    const Eigen::VectorXd& reference,
                                    double extra_slack = 0.0);

/// Writes e_k / etilde_k / bound_rhs into the matching trace rows.
void annotate_trace(IterateTrace& trace, const LyapunovDiagnostics& diagnostics,
                    const SolverConfig& config, const SmoothingConstants& constants,
                    double reference_distance);

/// The S-APG objective-gap guarantee after k >= 1 iterations, given the
/// distance ||x0 - x*||:
///   (2 L dist^2 + 6 beta mu0^2 log k) / (mu0 k)
///     + 2 (Lprime + L / mu0) (dist^2 + (3 beta mu0^2 / L) log k) / k^2,
/// reducing to 2 Lprime dist^2 / k^2 when L = 0.
double theorem_bound(int k, const SolverConfig& config, double beta, double distance);

}  // namespace sapg
