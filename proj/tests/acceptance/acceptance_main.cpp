// Acceptance gate: ten numbered criteria, one [PASS]/[FAIL] line each.
// Exit code 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support/proc.hpp"
#include "sapg/checks.hpp"
#include "sapg/config.hpp"
#include "sapg/experiment.hpp"
#include "sapg/solvers.hpp"
#include "sapg/trace_io.hpp"
#include "sapg/truss.hpp"

namespace {

constexpr std::uint64_t kSeed = 42;

int failures = 0;

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
  std::ostringstream line;
  line << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name << " ("
       << detail << ", " << sapg::format_double(std::round(seconds * 100.0) / 100.0)
       << " s)";
  std::cout << line.str() << std::endl;
  if (!pass) {
    ++failures;
  }
}

std::string fmt(double v) { return sapg::format_double(v); }

// ---------------------------------------------------------------------------
// Criterion 1: analytic spectral gradients against central differences on the
// default truss instance; 20 random feasible points, mu in {1, 0.1, 0.01},
// componentwise relative error <= 1e-5.
void criterion_gradient_oracle(const sapg::RobustComplianceProblem& problem) {
  Timer timer;
  std::mt19937_64 rng(kSeed);
  double worst = 0.0;
  for (int point = 0; point < 20; ++point) {
    const Eigen::VectorXd x = sapg::random_interior_design(*problem.feasible, rng);
    // h trades the h^2 truncation term against evaluation noise, which for
    // this objective bottoms out near eps * cond(K) * f. Components below
    // 1e-4 * ||g||_inf sit under that noise floor at every h, so they are
    // measured against that scale rather than their own magnitude.
    const double h = 5e-4 * x.cwiseAbs().maxCoeff();
    for (const double mu : {1.0, 0.1, 0.01}) {
      const Eigen::VectorXd analytic = problem.objective->grad_smoothed(x, mu);
      const Eigen::VectorXd fd = sapg::central_difference_gradient(
          [&](const Eigen::VectorXd& p) { return problem.objective->eval_smoothed(p, mu); },
          x, h);
      const double floor = 1e-4 * analytic.cwiseAbs().maxCoeff();
      for (int j = 0; j < analytic.size(); ++j) {
        const double scale = std::max({std::abs(analytic(j)), std::abs(fd(j)), floor});
        worst = std::max(worst, std::abs(analytic(j) - fd(j)) / scale);
      }
    }
  }
  report(1, "gradient oracle", worst <= 1e-5,
         "worst componentwise rel err " + fmt(worst) + " <= 1e-5", timer.seconds());
}

// Criterion 2: smoothing sandwich 0 <= f_{mu2} - f_{mu1} <= beta (mu1 - mu2)
// for 100 random feasible points and all ordered pairs from
// {2, 1, 0.5, 0.1, 0.01, 0}.
void criterion_sandwich(const sapg::RobustComplianceProblem& problem) {
  Timer timer;
  std::mt19937_64 rng(kSeed + 1);
  const double beta = problem.objective->constants().beta;
  const double mus[] = {2.0, 1.0, 0.5, 0.1, 0.01, 0.0};
  double worst_lower = 0.0;  // most negative f_{mu2} - f_{mu1}
  double worst_upper = 0.0;  // largest excess over beta (mu1 - mu2)
  for (int point = 0; point < 100; ++point) {
    const Eigen::VectorXd x = sapg::random_interior_design(*problem.feasible, rng);
    const auto f_at = problem.objective->smoothed_evaluator(x);
    for (const double mu1 : mus) {
      for (const double mu2 : mus) {
        if (mu2 >= mu1) {
          continue;
        }
        const double diff = f_at(mu2) - f_at(mu1);
        worst_lower = std::min(worst_lower, diff);
        worst_upper = std::max(worst_upper, diff - beta * (mu1 - mu2));
      }
    }
  }
  const bool pass = worst_lower >= 0.0 && worst_upper <= 1e-10;
  report(2, "smoothing sandwich", pass,
         "min diff " + fmt(worst_lower) + " >= 0, max excess " + fmt(worst_upper) +
             " <= 1e-10",
         timer.seconds());
}

// Criterion 3: breakpoint projection against the exhaustive active-set oracle
// over >= 1000 instances with m <= 6 and >= 1000 targets per size bucket;
// also idempotence and nonexpansiveness.
void criterion_projection_oracle() {
  Timer timer;
  double worst_oracle = 0.0, worst_idem = 0.0, worst_nonexp = 0.0;
  int instances = 0, targets_per_bucket = 0;

  std::mt19937_64 rng(kSeed + 2);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int m = 1; m <= 6; ++m) {
    int per_bucket = 0;
    for (int inst = 0; inst < 167; ++inst) {
      ++instances;
      Eigen::VectorXd l(m);
      for (int j = 0; j < m; ++j) {
        l(j) = 0.5 + 1.5 * unif(rng);
      }
      const double xmin = std::pow(10.0, -6.0 + 5.0 * unif(rng));
      const double v0 = xmin * l.sum() * (1.05 + 3.0 * unif(rng));
      const sapg::BoxBudgetSet set(l, v0, xmin);
      const double level = v0 / l.sum();

      Eigen::VectorXd prev;
      for (int t = 0; t < 6; ++t) {
        ++per_bucket;
        Eigen::VectorXd y(m);
        for (int j = 0; j < m; ++j) {
          y(j) = xmin + level * (3.0 * unif(rng) - 1.0);
        }
        const Eigen::VectorXd fast = set.project(y);
        const Eigen::VectorXd slow = sapg::brute_force_box_budget_project(l, v0, xmin, y);
        worst_oracle = std::max(worst_oracle, (fast - slow).cwiseAbs().maxCoeff());
        worst_idem = std::max(worst_idem, (set.project(fast) - fast).norm());
        if (prev.size() == m) {
          const double lhs = (fast - set.project(prev)).norm();
          worst_nonexp = std::max(worst_nonexp, lhs - (y - prev).norm());
        }
        prev = y;
      }
    }
    targets_per_bucket = per_bucket;
  }

  const bool pass = instances >= 1000 && targets_per_bucket >= 1000 &&
                    worst_oracle <= 1e-10 && worst_idem <= 1e-12 &&
                    worst_nonexp <= 1e-12;
  report(3, "projection oracle", pass,
         std::to_string(instances) + " instances, " +
             std::to_string(targets_per_bucket) + " targets/bucket, oracle dev " +
             fmt(worst_oracle) + " <= 1e-10, idem " + fmt(worst_idem) +
             ", nonexp excess " + fmt(worst_nonexp) + " <= 1e-12",
         timer.seconds());
}

// Criterion 4: momentum recurrence in scaled form up to k = 1e6, plus the
// linear growth envelope k/2 <= a_k <= 3k/2.
void criterion_momentum_sequence() {
  Timer timer;
  double a = 0.0;
  double worst = 0.0, lo = 1e300, hi = 0.0;
  for (int k = 1; k <= 1000000; ++k) {
    const double a_next = 0.5 * (1.0 + std::sqrt(4.0 * a * a + 1.0));
    worst = std::max(worst,
                     std::abs(1.0 - 1.0 / a_next - (a / a_next) * (a / a_next)));
    a = a_next;
    lo = std::min(lo, a / k);
    hi = std::max(hi, a / k);
  }
  const bool pass = worst <= 1e-12 && lo >= 0.5 && hi <= 1.5;
  report(4, "momentum recurrence", pass,
         "scaled residual " + fmt(worst) + " <= 1e-12, a_k/k in [" + fmt(lo) + ", " +
             fmt(hi) + "]",
         timer.seconds());
}

// Criterion 5: every recorded x/y/z of a full 4000-iteration S-APG run on the
// benchmark truss stays within 1e-10 of the feasible set.
void criterion_feasibility(const sapg::IterateTrace& trace, int iters) {
  Timer timer;
  double worst = -1e300;
  for (const sapg::TraceRow& row : trace.rows) {
    worst = std::max({worst, row.feas_residual_box, row.feas_residual_budget});
  }
  const bool pass = !trace.breakdown &&
                    trace.rows.size() == static_cast<std::size_t>(iters) + 1 &&
                    worst <= 1e-10;
  report(5, "feasible iterates", pass,
         std::to_string(trace.rows.size()) + " rows, worst residual " + fmt(worst) +
             " <= 1e-10",
         timer.seconds());
}

struct QuadInstance {
  std::shared_ptr<sapg::QuadraticObjective> objective;
  std::shared_ptr<sapg::BoxSet> box;
  Eigen::VectorXd x0;
  Eigen::VectorXd x_star;
  double f_star = 0.0;
  std::string name;
};

// f(x) = 0.5 (x - 3)^2 over [-1, 1]: optimum pinned at the right endpoint.
QuadInstance quad_1d() {
  QuadInstance q;
  sapg::SymMatrix h(1);
  h.set(0, 0, 1.0);
  q.objective = std::make_shared<sapg::QuadraticObjective>(
      h, Eigen::VectorXd::Constant(1, -3.0));
  q.box = std::make_shared<sapg::BoxSet>(Eigen::VectorXd::Constant(1, -1.0),
                                         Eigen::VectorXd::Constant(1, 1.0));
  q.x0 = Eigen::VectorXd::Constant(1, -1.0);
  q.x_star = Eigen::VectorXd::Constant(1, 1.0);
  q.f_star = -2.5;  // 0.5 x^2 - 3 x at x = 1 (the constant term is dropped)
  q.name = "1d quadratic";
  return q;
}

// f(x) = 0.5 x1^2 - x2 over [-1, 1]^2: convex but not strongly convex, with
// the unique optimum (0, 1) on the boundary.
QuadInstance quad_box_2d() {
  QuadInstance q;
  sapg::SymMatrix h(2);
  h.set(0, 0, 1.0);
  Eigen::VectorXd b(2);
  b << 0.0, -1.0;
  q.objective = std::make_shared<sapg::QuadraticObjective>(h, b);
  Eigen::VectorXd lo(2), hi(2), x0(2), xs(2);
  lo << -1.0, -1.0;
  hi << 1.0, 1.0;
  x0 << -0.5, -0.5;
  xs << 0.0, 1.0;
  q.box = std::make_shared<sapg::BoxSet>(lo, hi);
  q.x0 = x0;
  q.x_star = xs;
  q.f_star = -1.0;
  q.name = "box quadratic";
  return q;
}

sapg::SolverConfig smooth_sapg_config(const QuadInstance& q, int iters, bool retain) {
  sapg::SolverConfig cfg;
  cfg.algorithm = sapg::Algorithm::Sapg;
  cfg.L = 0.0;
  cfg.Lprime = q.objective->constants().Lprime;  // exact lambda_max of H
  cfg.max_iters = iters;
  cfg.retain_states = retain;
  return cfg;
}

// Criterion 6: smooth recovery. With L = 0 and the exact Lipschitz constant
// of the (non-strongly-convex) quadratic, S-APG obeys
// f(x^k) - f* <= 2 L' ||x0 - x*||^2 / k^2 for every k in [1, 1e4].
sapg::IterateTrace criterion_smooth_recovery(const QuadInstance& q) {
  Timer timer;
  const sapg::SolverConfig cfg = smooth_sapg_config(q, 10000, true);
  const sapg::IterateTrace trace = sapg::run(cfg, *q.objective, *q.box, q.x0);

  const double d2 = (q.x0 - q.x_star).squaredNorm();
  double worst_excess = -1e300;
  int checked = 0;
  for (const sapg::TraceRow& row : trace.rows) {
    if (row.k < 1) {
      continue;
    }
    ++checked;
    const double bound = 2.0 * cfg.Lprime * d2 / (static_cast<double>(row.k) * row.k);
    worst_excess = std::max(worst_excess, (row.f_x - q.f_star) - bound);
  }
  const bool pass = !trace.breakdown && checked == 10000 && worst_excess <= 1e-12;
  report(6, "smooth recovery rate", pass,
         q.name + ", max (gap - 2L'd^2/k^2) = " + fmt(worst_excess) + " <= 1e-12 over k in [1, 1e4]",
         timer.seconds());
  return trace;
}

// Criterion 7: Lyapunov diagnostics. Exact quadratics must show zero
// violations of the E_k increment bound and of Etilde monotonicity. The truss
// is checked along the diagnostic run, whose L dominates the curvature its
// trajectory meets, so the only admissible violation source is surrogate
// error (threshold 10x the surrogate gap). The benchmark-stepsize run, whose
// L is an empirical tuning choice far below the curvature near the lower box
// corner, is evaluated and logged but not asserted.
void criterion_lyapunov(const QuadInstance& q1, const QuadInstance& q2,
                        const sapg::IterateTrace& diag_trace,
                        const sapg::SolverConfig& diag_cfg,
                        const sapg::IterateTrace& bench_trace,
                        const sapg::SolverConfig& bench_cfg,
                        const sapg::RobustComplianceProblem& problem,
                        const sapg::ReferenceResult& reference) {
  Timer timer;
  std::ostringstream detail;
  bool pass = true;

  for (const QuadInstance* q : {&q1, &q2}) {
    const sapg::SolverConfig cfg = smooth_sapg_config(*q, 1000, true);
    const sapg::IterateTrace trace = sapg::run(cfg, *q->objective, *q->box, q->x0);
    const sapg::LyapunovDiagnostics diag =
        sapg::lyapunov_series(trace, *q->objective, cfg, q->x_star);
    pass = pass && diag.e_violations == 0 && diag.etilde_violations == 0;
    detail << q->name << " violations " << diag.e_violations << "/"
           << diag.etilde_violations << ", ";
  }

  const double slack = 10.0 * reference.gap_estimate;
  const sapg::LyapunovDiagnostics diag = sapg::lyapunov_series(
      diag_trace, *problem.objective, diag_cfg, reference.x_star, slack);
  pass = pass && diag.e_violations == 0 && diag.etilde_violations == 0;
  detail << "truss violations " << diag.e_violations << "/" << diag.etilde_violations
         << " at slack " << fmt(slack) << " (max excess " << fmt(diag.max_e_violation)
         << "/" << fmt(diag.max_etilde_violation) << ")";

  const sapg::LyapunovDiagnostics bench = sapg::lyapunov_series(
      bench_trace, *problem.objective, bench_cfg, reference.x_star, slack);
  detail << "; benchmark-stepsize run logged, not asserted: " << bench.e_violations
         << " violations, max excess " << fmt(bench.max_e_violation);
  report(7, "lyapunov diagnostics", pass, detail.str(), timer.seconds());
}

// Criterion 8: the convergence-rate bound holds along every run that satisfies
// its premises: the two quadratic runs against their exact optima and the
// diagnostic truss run against the surrogate reference. The benchmark-stepsize
// run does not satisfy the premises (its L undershoots the true curvature by
// orders of magnitude), so its excess is logged, not asserted.
void criterion_theorem_bound(const QuadInstance& q1, const sapg::IterateTrace& t1,
                             const QuadInstance& q2, const sapg::IterateTrace& t2,
                             const sapg::IterateTrace& diag_trace,
                             const sapg::SolverConfig& diag_cfg,
                             const sapg::IterateTrace& bench_trace,
                             const sapg::SolverConfig& bench_cfg,
                             const sapg::RobustComplianceProblem& problem,
                             const sapg::ReferenceResult& reference) {
  Timer timer;
  std::ostringstream detail;
  bool pass = true;

  const auto worst_excess = [](const sapg::IterateTrace& trace,
                               const sapg::SolverConfig& cfg, double beta, double f_star,
                               double distance) {
    double worst = -1e300;
    for (const sapg::TraceRow& row : trace.rows) {
      if (row.k < 1) {
        continue;
      }
      const double bound = sapg::theorem_bound(row.k, cfg, beta, distance);
      worst = std::max(worst, (row.f_x - f_star) - bound);
    }
    return worst;
  };

  const sapg::SolverConfig cfg1 = smooth_sapg_config(q1, 10000, false);
  const double e1 = worst_excess(t1, cfg1, 0.0, q1.f_star, (q1.x0 - q1.x_star).norm());
  const sapg::SolverConfig cfg2 = smooth_sapg_config(q2, 10000, false);
  const double e2 = worst_excess(t2, cfg2, 0.0, q2.f_star, (q2.x0 - q2.x_star).norm());
  pass = pass && e1 <= 1e-12 && e2 <= 1e-12;
  detail << q1.name << " excess " << fmt(e1) << ", " << q2.name << " excess " << fmt(e2);

  const double beta = problem.objective->constants().beta;
  const double dist = (diag_trace.x0 - reference.x_star).norm();
  const double e3 = worst_excess(diag_trace, diag_cfg, beta, reference.f_star, dist);
  pass = pass && e3 <= 1e-9;
  detail << ", truss excess " << fmt(e3) << " <= 1e-9";

  const double bench_dist = (bench_trace.x0 - reference.x_star).norm();
  const double e4 =
      worst_excess(bench_trace, bench_cfg, beta, reference.f_star, bench_dist);
  detail << "; benchmark-stepsize run logged, not asserted: excess " << fmt(e4);
  report(8, "theorem bound", pass, detail.str(), timer.seconds());
}

// Criterion 9: qualitative reproduction of the benchmark comparison.
void criterion_experiment(const sapg::ExperimentConfig& cfg,
                          const sapg::RobustComplianceProblem& problem,
                          const sapg::IterateTrace& sapg_trace,
                          double f_star_envelope) {
  Timer timer;

  const Eigen::VectorXd x0 = problem.uniform_design();
  sapg::SolverConfig spg_cfg = cfg.solver(sapg::Algorithm::Spg);
  const sapg::IterateTrace spg_trace =
      sapg::run(spg_cfg, *problem.objective, *problem.feasible, x0);
  sapg::SolverConfig sub_cfg = cfg.solver(sapg::Algorithm::Subgrad);
  const sapg::IterateTrace sub_trace =
      sapg::run(sub_cfg, *problem.objective, *problem.feasible, x0);

  // Shared lower envelope keeps every gap nonnegative.
  double f_star = f_star_envelope;
  for (const sapg::IterateTrace* t : {&spg_trace, &sub_trace}) {
    if (!t->rows.empty()) {
      f_star = std::min(f_star, t->best_f);
    }
  }

  const sapg::GapSeries g_sapg = sapg::relative_gap_series("sapg", sapg_trace, f_star);
  const sapg::GapSeries g_spg = sapg::relative_gap_series("spg", spg_trace, f_star);
  const sapg::GapSeries g_sub = sapg::relative_gap_series("subgrad", sub_trace, f_star);

  const double gap_sapg = g_sapg.gaps.back();
  const double gap_spg = g_spg.gaps.back();
  const double gap_sub = g_sub.gaps.back();
  const bool ordering = 10.0 * gap_sapg <= gap_spg && 10.0 * gap_sapg <= gap_sub;

  const std::optional<double> s_sapg = sapg::loglog_slope(g_sapg, 100, cfg.run.iters);
  const std::optional<double> s_spg = sapg::loglog_slope(g_spg, 100, cfg.run.iters);
  const bool slopes =
      s_sapg && s_spg && *s_sapg <= -0.8 && *s_spg >= *s_sapg + 0.3;

  std::ostringstream detail;
  detail << "final gaps sapg " << fmt(gap_sapg) << ", spg " << fmt(gap_spg)
         << ", subgrad " << fmt(gap_sub) << "; slopes sapg "
         << (s_sapg ? fmt(*s_sapg) : "n/a") << ", spg "
         << (s_spg ? fmt(*s_spg) : "n/a");
  report(9, "experiment reproduction", ordering && slopes, detail.str(),
         timer.seconds());
}

// Criterion 10: identical compare invocations produce byte-identical traces.
void criterion_determinism() {
  Timer timer;
  bool pass = true;
  std::ostringstream detail;
  try {
    const std::string cli = testsupport::cli_path();
    if (cli.empty() || !std::filesystem::exists(cli)) {
      throw std::runtime_error("SAPG_CLI not set or missing");
    }
    testsupport::TempDir dir("sapg_acceptance_det");
    const auto config_path = dir.path() / "config.ini";
    testsupport::write_file(config_path,
                            "[instance]\n"
                            "cols = 3\n"
                            "rows = 2\n"
                            "volume_budget = 0.01\n"
                            "x_min = 1e-6\n"
                            "[sapg]\n"
                            "[spg]\n"
                            "[subgrad]\n"
                            "[run]\n"
                            "iters = 40\n"
                            "stride = 1\n"
                            "seed = 42\n"
                            "lyapunov = true\n");
    const std::string base = "compare --config " +
                             testsupport::shell_quote(config_path.string()) + " --out ";
    const std::string out1 = (dir.path() / "run1").string();
    const std::string out2 = (dir.path() / "run2").string();
    const testsupport::ProcResult r1 =
        testsupport::run_process(testsupport::shell_quote(cli) + " " + base +
                                     testsupport::shell_quote(out1),
                                 dir);
    const testsupport::ProcResult r2 =
        testsupport::run_process(testsupport::shell_quote(cli) + " " + base +
                                     testsupport::shell_quote(out2),
                                 dir);
    pass = r1.exit_code == 0 && r2.exit_code == 0;
    int identical = 0;
    const char* files[] = {"trace_sapg.csv", "trace_spg.csv", "trace_subgrad.csv",
                           "gaps.csv", "summary.txt"};
    for (const char* name : files) {
      const std::string a = testsupport::read_file(std::filesystem::path(out1) / name);
      const std::string b = testsupport::read_file(std::filesystem::path(out2) / name);
      if (a == b && !a.empty()) {
        ++identical;
      } else {
        pass = false;
      }
    }
    detail << identical << "/5 output files byte-identical across two compare runs";
  } catch (const std::exception& err) {
    pass = false;
    detail << "error: " << err.what();
  }
  report(10, "determinism", pass, detail.str(), timer.seconds());
}

}  // namespace

int main() {
  std::cout << "acceptance criteria (seed " << kSeed << ")" << std::endl;
  Timer total;

  try {
    // Criteria 1-2 use the default one-node instance; the benchmark config
    // with twenty load scenarios drives criteria 5 and 7-9 (criteria 7-8 via
    // the diagnostic run configured below).
    const sapg::RobustComplianceProblem default_problem =
        sapg::build_instance(sapg::InstanceConfig{});

    criterion_gradient_oracle(default_problem);
    criterion_sandwich(default_problem);
    criterion_projection_oracle();
    criterion_momentum_sequence();

    const std::string source_dir = testsupport::source_dir();
    const std::string config_path =
        (source_dir.empty() ? std::string(".") : source_dir) + "/configs/experiment.ini";
    sapg::ExperimentConfig cfg = sapg::load_experiment_config(config_path);
    const sapg::RobustComplianceProblem problem = sapg::build_instance(cfg.instance);

    // The benchmark-parameter run (retained states) serves criteria 5 and 9.
    // Its L = 1e5 is an empirically tuned stepsize constant, orders of
    // magnitude below the objective's gradient Lipschitz scale near the lower
    // box corner (directional curvature at the uniform design is ~7e9), so its
    // first step overshoots violently before recovering; the potential and
    // rate inequalities of criteria 7-8 do not apply along it.
    sapg::SolverConfig bench_cfg = cfg.solver(sapg::Algorithm::Sapg);
    bench_cfg.retain_states = true;
    const sapg::IterateTrace bench_trace = sapg::run(
        bench_cfg, *problem.objective, *problem.feasible, problem.uniform_design());
    criterion_feasibility(bench_trace, cfg.run.iters);

    const QuadInstance q1 = quad_1d();
    const QuadInstance q2 = quad_box_2d();
    const sapg::IterateTrace quad_trace_1 = criterion_smooth_recovery(q2);
    // Criterion 6 reports on the non-strongly-convex instance; the 1d run
    // still participates in criteria 7 and 8.
    const sapg::IterateTrace quad_trace_2 =
        sapg::run(smooth_sapg_config(q1, 10000, false), *q1.objective, *q1.box, q1.x0);

    // The diagnostic run for criteria 7-8 uses a conservative L that
    // dominates the curvature met along its trajectory; it descends from the
    // uniform design to the same optimum without the early overshoot, so the
    // inequalities' premises hold along it.
    sapg::SolverConfig diag_cfg = cfg.solver(sapg::Algorithm::Sapg);
    diag_cfg.L = 1.0e9;
    diag_cfg.retain_states = true;
    const sapg::IterateTrace diag_trace = sapg::run(
        diag_cfg, *problem.objective, *problem.feasible, problem.uniform_design());

    sapg::ReferenceResult reference = sapg::compute_reference(cfg, problem);
    for (const sapg::IterateTrace* t : {&bench_trace, &diag_trace}) {
      if (t->best_x.size() > 0 && t->best_f < reference.f_star) {
        reference.f_star = t->best_f;
        reference.x_star = t->best_x;
        reference.source += "+best-of-runs";
      }
    }

    criterion_lyapunov(q1, q2, diag_trace, diag_cfg, bench_trace, bench_cfg, problem,
                       reference);
    criterion_theorem_bound(q1, quad_trace_2, q2, quad_trace_1, diag_trace, diag_cfg,
                            bench_trace, bench_cfg, problem, reference);
    criterion_experiment(cfg, problem, bench_trace, reference.f_star);
    criterion_determinism();
  } catch (const std::exception& err) {
    std::cout << "[FAIL] acceptance aborted: " << err.what() << std::endl;
    ++failures;
  }

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : "FAILURES: ")
            << (failures == 0 ? "" : std::to_string(failures)) << " (total "
            << sapg::format_double(std::round(total.seconds() * 10.0) / 10.0) << " s)"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
