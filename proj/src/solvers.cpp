#include "sapg/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace sapg {

std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::Sapg:
      return "sapg";
    case Algorithm::Spg:
      return "spg";
    case Algorithm::Subgrad:
      return "subgrad";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "sapg") {
    return Algorithm::Sapg;
  }
  if (name == "spg") {
    return Algorithm::Spg;
  }
  if (name == "subgrad") {
    return Algorithm::Subgrad;
  }
  throw InvalidArgument("unknown algorithm '" + name + "' (expected sapg, spg or subgrad)");
}

void SolverConfig::validate() const {
  if (!(mu0 > 0.0)) {
    throw InvalidArgument("solver config: mu0 must be positive, got " + std::to_string(mu0));
  }
  if (!(L >= 0.0) || !(Lprime >= 0.0)) {
    throw InvalidArgument("solver config: L and Lprime must be >= 0");
  }
  if (L == 0.0 && Lprime == 0.0) {
    throw InvalidArgument("solver config: L and Lprime cannot both be zero");
  }
  if (max_iters < 0) {
    throw InvalidArgument("solver config: max_iters must be >= 0");
  }
  if (trace_every < 1) {
    throw InvalidArgument("solver config: trace_every must be >= 1");
  }
  if (!(subgrad_step_c > 0.0)) {
    throw InvalidArgument("solver config: subgrad_step_c must be positive");
  }
  if (fixed_mu && !(*fixed_mu > 0.0)) {
    throw InvalidArgument("solver config: fixed_mu must be positive");
  }
}

double SolverConfig::mu_at(int k) const {
  if (fixed_mu) {
    return *fixed_mu;
  }
  if (algorithm == Algorithm::Spg) {
    return mu0 * std::pow(static_cast<double>(k + 1), spg_mu_exponent);
  }
  return mu0 / static_cast<double>(k + 1);
}

double SolverConfig::step_coefficient(double mu) const {
  return L == 0.0 ? Lprime : Lprime + L / mu;
}

namespace {

SolverState advance_schedule(SolverState next, const SolverConfig& config) {
  next.mu = config.mu_at(next.k);
  next.step_L = config.step_coefficient(next.mu);
  return next;
}

}  // namespace

SolverState sapg_step(const SolverState& state, const SmoothedObjective& objective,
                      const FeasibleSet& set, const SolverConfig& config) {
  const double mu = state.mu;
  const double lk = state.step_L;
  const double a_next = 0.5 * (1.0 + std::sqrt(4.0 * state.a * state.a + 1.0));
  const double inv = 1.0 / a_next;

  SolverState next;
  next.k = state.k + 1;
  next.a = a_next;
  next.y = (1.0 - inv) * state.x + inv * state.z;
  const Eigen::VectorXd g = objective.grad_smoothed(next.y, mu);
  next.z = set.project(state.z - (a_next / lk) * g);
  next.x = (1.0 - inv) * state.x + inv * next.z;
  return advance_schedule(std::move(next), config);
}

SolverState spg_step(const SolverState& state, const SmoothedObjective& objective,
                     const FeasibleSet& set, const SolverConfig& config) {
  SolverState next;
  next.k = state.k + 1;
  const Eigen::VectorXd g = objective.grad_smoothed(state.x, state.mu);
  next.x = set.project(state.x - g / state.step_L);
  next.y = next.x;
  next.z = next.x;
  return advance_schedule(std::move(next), config);
}

SolverState subgrad_step(const SolverState& state, const SmoothedObjective& objective,
                         const FeasibleSet& set, const SolverConfig& config) {
  SolverState next;
  next.k = state.k + 1;
  const double alpha =
      config.subgrad_step_c / std::sqrt(static_cast<double>(std::max(state.k, 1)));
  const Eigen::VectorXd g = objective.subgradient(state.x);
  next.x = set.project(state.x - alpha * g);
  next.y = next.x;
  next.z = next.x;
  return advance_schedule(std::move(next), config);
}

namespace {

TraceRow make_row(const SolverState& state, const SolverState* prev,
                  const SmoothedObjective& objective, const FeasibleSet& set,
                  double elapsed) {
  TraceRow row;
  row.k = state.k;
  const auto f_at = objective.smoothed_evaluator(state.x);
  row.f_x = f_at(0.0);
  row.f_mu_x = f_at(state.mu);
  row.mu_k = state.mu;
  row.L_k = state.step_L;
  row.a_k = state.a;
  const Residuals rx = set.residuals(state.x);
  const Residuals ry = set.residuals(state.y);
  const Residuals rz = set.residuals(state.z);
  row.feas_residual_box = std::max({rx.box, ry.box, rz.box});
  row.feas_residual_budget = std::max({rx.budget, ry.budget, rz.budget});
  row.step_norm = prev ? (state.z - prev->z).norm() : 0.0;
  row.time_s = elapsed;
  return row;
}

bool finite_state(const SolverState& state) {
  return state.x.allFinite() && state.y.allFinite() && state.z.allFinite() &&
         std::isfinite(state.a);
}

}  // namespace

IterateTrace run(const SolverConfig& config, const SmoothedObjective& objective,
                 const FeasibleSet& set, const Eigen::VectorXd& x0) {
  config.validate();
  if (x0.size() != objective.dimension() || x0.size() != set.dimension()) {
    throw DimensionMismatch("run: x0 has size " + std::to_string(x0.size()) +
                            ", objective expects " + std::to_string(objective.dimension()) +
                            " and set expects " + std::to_string(set.dimension()));
  }

  IterateTrace trace;
  Eigen::VectorXd start = x0;
  if (!set.contains(start, 1e-10)) {
    start = set.project(start);
    trace.warnings.push_back("x0 was infeasible and has been projected onto the set");
  }
  trace.x0 = start;

  SolverState state;
  state.k = 0;
  state.x = start;
  state.y = start;
  state.z = start;
  state.a = 0.0;
  state.mu = config.mu_at(0);
  state.step_L = config.step_coefficient(state.mu);

  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&t0, &config]() {
    if (!config.record_wall_time) {
      return 0.0;
    }
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  trace.best_f = std::numeric_limits<double>::infinity();
  const auto record = [&](const SolverState& s, const SolverState* prev) {
    trace.rows.push_back(make_row(s, prev, objective, set, elapsed()));
    if (trace.rows.back().f_x < trace.best_f) {
      trace.best_f = trace.rows.back().f_x;
      trace.best_x = s.x;
    }
  };

  if (config.retain_states) {
    trace.states.reserve(config.max_iters + 1);
    trace.states.push_back(state);
  }
  record(state, nullptr);

  for (int k = 0; k < config.max_iters; ++k) {
    SolverState next;
    try {
      switch (config.algorithm) {
        case Algorithm::Sapg:
          next = sapg_step(state, objective, set, config);
          break;
        case Algorithm::Spg:
          next = spg_step(state, objective, set, config);
          break;
        case Algorithm::Subgrad:
          next = subgrad_step(state, objective, set, config);
          break;
      }
      if (!finite_state(next)) {
        throw NumericalBreakdown("non-finite iterate at iteration " + std::to_string(k + 1));
      }
    } catch (const Error& err) {
      trace.breakdown = true;
      trace.breakdown_message =
          "iteration " + std::to_string(k + 1) + ": " + err.what();
      break;
    }

    if (config.retain_states) {
      trace.states.push_back(next);
    }
    if (next.k % config.trace_every == 0 || next.k == config.max_iters) {
      record(next, &state);
    }
    state = std::move(next);
  }
  return trace;
}

LyapunovDiagnostics lyapunov_series(const IterateTrace& trace,
                                    const SmoothedObjective& objective,
                                    const SolverConfig& /*config*/,
                                    const Eigen::VectorXd& reference,
                                    double extra_slack) {
  if (trace.states.empty()) {
    throw MissingStates("lyapunov_series: run was made without retain_states");
  }
  const double beta = objective.constants().beta;
  const auto f_ref = objective.smoothed_evaluator(reference);
  const double f_ref_nonsmooth = f_ref(0.0);

  LyapunovDiagnostics diag;
  diag.points.resize(trace.states.size());

  double slack_sum = 0.0;  // sum_{l=1}^{k} beta a_{l+1} mu_l / L_l
  for (std::size_t i = 0; i < trace.states.size(); ++i) {
    const SolverState& s = trace.states[i];
    const auto f_x = objective.smoothed_evaluator(s.x);
    const double dist2 = 0.5 * (s.z - reference).squaredNorm();
    const double scale = s.a * s.a / s.step_L;

    LyapunovPoint& pt = diag.points[i];
    pt.k = s.k;
    pt.e = scale * (f_x(s.mu) - f_ref(s.mu) + beta * s.mu) + dist2;
    // a_{k+1} for the increment bound allowed after this state; the same
    // term beta a_{l+1} mu_l / L_l with l = k is the one the tilde sum
    // accumulates for k >= 1.
    const double a_next = 0.5 * (1.0 + std::sqrt(4.0 * s.a * s.a + 1.0));
    pt.allowed_increment = beta * a_next * s.mu / s.step_L;
    if (i >= 1) {
      slack_sum += pt.allowed_increment;
    }
    pt.etilde = scale * (f_x(0.0) - f_ref_nonsmooth + beta * s.mu) + dist2 - slack_sum;
  }

  diag.tolerance = 1e-8 * std::max(1.0, std::abs(diag.points.front().e)) + extra_slack;
  for (std::size_t i = 1; i < diag.points.size(); ++i) {
    const LyapunovPoint& prev = diag.points[i - 1];
    LyapunovPoint& pt = diag.points[i];
    const double e_excess = pt.e - (prev.e + prev.allowed_increment);
    if (e_excess > diag.tolerance) {
      pt.e_violation = true;
      ++diag.e_violations;
      diag.max_e_violation = std::max(diag.max_e_violation, e_excess);
    }
    const double et_excess = pt.etilde - prev.etilde;
    if (et_excess > diag.tolerance) {
      pt.etilde_violation = true;
      ++diag.etilde_violations;
      diag.max_etilde_violation = std::max(diag.max_etilde_violation, et_excess);
    }
  }
  return diag;
}

void annotate_trace(IterateTrace& trace, const LyapunovDiagnostics& diagnostics,
                    const SolverConfig& config, const SmoothingConstants& constants,
                    double reference_distance) {
  std::size_t pos = 0;
  for (TraceRow& row : trace.rows) {
    while (pos < diagnostics.points.size() && diagnostics.points[pos].k < row.k) {
      ++pos;
    }
    if (pos < diagnostics.points.size() && diagnostics.points[pos].k == row.k) {
      row.e_k = diagnostics.points[pos].e;
      row.etilde_k = diagnostics.points[pos].etilde;
    }
    if (row.k >= 1) {
      row.bound_rhs = theorem_bound(row.k, config, constants.beta, reference_distance);
    }
  }
}

double theorem_bound(int k, const SolverConfig& config, double beta, double distance) {
  if (k < 1) {
    throw InvalidArgument("theorem_bound: defined for k >= 1, got " + std::to_string(k));
  }
  const double d2 = distance * distance;
  const double kk = static_cast<double>(k);
  if (config.L == 0.0) {
    return 2.0 * config.Lprime * d2 / (kk * kk);
  }
  const double logk = std::log(kk);
  const double mu0 = config.mu0;
  const double first = (2.0 * config.L * d2 + 6.0 * beta * mu0 * mu0 * logk) / (mu0 * kk);
  const double second = 2.0 * (config.Lprime + config.L / mu0) *
                        (d2 + 3.0 * beta * mu0 * mu0 * logk / config.L) / (kk * kk);
  return first + second;
}

}  // namespace sapg
