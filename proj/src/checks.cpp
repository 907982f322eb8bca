#include "sapg/checks.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <sstream>

#include "sapg/solvers.hpp"

namespace sapg {

namespace {

double unit(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

int scaled_count(int full, double scale, int floor_count) {
  return std::max(floor_count, static_cast<int>(std::lround(full * scale)));
}

CheckItem make_item(const std::string& name, bool pass, double worst,
                    const std::string& detail) {
  return CheckItem{name, pass, worst, detail};
}

std::string with_worst(const std::string& label, double worst) {
  std::ostringstream out;
  out << label << " " << worst;
  return out.str();
}

}  // namespace

bool CheckReport::passed() const {
  return std::all_of(items.begin(), items.end(),
                     [](const CheckItem& item) { return item.pass; });
}

Eigen::VectorXd brute_force_box_budget_project(const Eigen::VectorXd& lengths, double v0,
                                               double xmin, const Eigen::VectorXd& y) {
  const int m = static_cast<int>(lengths.size());
  if (m > 20) {
    throw InvalidArgument("brute_force_box_budget_project: 2^m enumeration is only "
                          "meant for small m, got " + std::to_string(m));
  }
  const double feas_tol = 1e-9;
  double best_dist = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best = Eigen::VectorXd::Constant(m, xmin);

  const auto consider = [&](const Eigen::VectorXd& x) {
    if ((x.array() < xmin - feas_tol).any()) {
      return;
    }
    if (lengths.dot(x) > v0 + feas_tol * std::max(1.0, v0)) {
      return;
    }
    const double dist = (x - y).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = x;
    }
  };

  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    // Bits set in mask: bars pinned to the lower bound.
    Eigen::VectorXd x(m);
    double free_ly = 0.0, free_ll = 0.0, bound_l = 0.0;
    for (int j = 0; j < m; ++j) {
      if (mask & (1u << j)) {
        x(j) = xmin;
        bound_l += lengths(j);
      } else {
        x(j) = y(j);
        free_ly += lengths(j) * y(j);
        free_ll += lengths(j) * lengths(j);
      }
    }
    consider(x);  // budget slack

    if (free_ll > 0.0) {
      // Budget tight on the free bars.
      const double theta = (free_ly + xmin * bound_l - v0) / free_ll;
      Eigen::VectorXd xt = x;
      for (int j = 0; j < m; ++j) {
        if (!(mask & (1u << j))) {
          xt(j) = y(j) - theta * lengths(j);
        }
      }
      consider(xt);
    }
  }
  return best;
}

Eigen::VectorXd central_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
    double h) {
  if (!(h > 0.0)) {
    throw InvalidArgument("central_difference_gradient: h must be positive");
  }
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd p = x;
  for (int j = 0; j < x.size(); ++j) {
    p(j) = x(j) + h;
    const double up = f(p);
    p(j) = x(j) - h;
    const double down = f(p);
    p(j) = x(j);
    g(j) = (up - down) / (2.0 * h);
  }
  return g;
}

Eigen::VectorXd random_interior_design(const BoxBudgetSet& set, std::mt19937_64& rng,
                                       double lo_frac, double hi_frac) {
  const double level = set.volume_budget() / set.lengths().sum();
  Eigen::VectorXd y(set.dimension());
  for (int j = 0; j < set.dimension(); ++j) {
    y(j) = level * (lo_frac + (hi_frac - lo_frac) * unit(rng));
  }
  return set.project(y);
}

CheckReport check_gradients(const RobustComplianceProblem& problem, std::uint64_t seed,
                            double scale) {
  CheckReport report;
  report.suite = "grad";
  std::mt19937_64 rng(seed);

  const SmoothedObjective& obj = *problem.objective;
  const int points = scaled_count(20, scale, 2);
  const double mus[] = {1.0, 0.1, 0.01};

  // h balances the h^2 truncation term against evaluation noise, which for
  // this objective floors at roughly eps * cond(K) * f; components smaller
  // than 1e-4 * ||g||_inf are below what central differences can resolve at
  // any h, so they are held to that scale instead of their own.
  double worst_rel = 0.0;
  for (int p = 0; p < points; ++p) {
    const Eigen::VectorXd x = random_interior_design(*problem.feasible, rng);
    const double h = 5e-4 * x.cwiseAbs().maxCoeff();
    for (double mu : mus) {
      const Eigen::VectorXd g = obj.grad_smoothed(x, mu);
      const Eigen::VectorXd fd = central_difference_gradient(
          [&obj, mu](const Eigen::VectorXd& v) { return obj.eval_smoothed(v, mu); }, x, h);
      const double floor = 1e-4 * g.cwiseAbs().maxCoeff();
      for (int j = 0; j < g.size(); ++j) {
        const double denom = std::max({std::abs(g(j)), std::abs(fd(j)), floor});
        worst_rel = std::max(worst_rel, std::abs(g(j) - fd(j)) / denom);
      }
    }
  }
  report.items.push_back(make_item(
      "spectral_grad_matches_fd", worst_rel <= 1e-5, worst_rel,
      with_worst("max componentwise relative error (floor 1e-4*||g||_inf)", worst_rel)));

  // Where lambda_1 is simple, the subgradient is the gradient limit mu -> 0.
  double worst_sub = 0.0;
  int tested = 0;
  for (int p = 0; p < std::max(2, points / 2); ++p) {
    const Eigen::VectorXd x = random_interior_design(*problem.feasible, rng);
    const Eigen::VectorXd lambda = sym_eig(problem.matrix_map->eval(x)).eigenvalues;
    if (lambda.size() >= 2 &&
        lambda(0) - lambda(1) < 1e-3 * std::max(1.0, std::abs(lambda(0)))) {
      continue;  // near-degenerate leading eigenvalue, gradient limit unstable
    }
    const double mu = 1e-9 * std::max(1.0, std::abs(lambda(0)));
    const Eigen::VectorXd g = obj.grad_smoothed(x, mu);
    const Eigen::VectorXd sub = obj.subgradient(x);
    const double denom = std::max(1e-12, g.cwiseAbs().maxCoeff());
    worst_sub = std::max(worst_sub, (g - sub).cwiseAbs().maxCoeff() / denom);
    ++tested;
  }
  report.items.push_back(make_item(
      "subgradient_is_small_mu_limit", tested == 0 || worst_sub <= 1e-8, worst_sub,
      with_worst("max relative deviation at simple lambda_1, points tested: " +
                     std::to_string(tested) + ",",
                 worst_sub)));
  return report;
}

CheckReport check_smoothing(const RobustComplianceProblem& problem, std::uint64_t seed,
                            double scale) {
  CheckReport report;
  report.suite = "smoothing";
  std::mt19937_64 rng(seed);

  const SmoothedObjective& obj = *problem.objective;
  const double beta = obj.constants().beta;
  const double mus[] = {2.0, 1.0, 0.5, 0.1, 0.01, 0.0};
  const int points = scaled_count(100, scale, 2);

  double worst_lower = 0.0;  // positive = violation of 0 <= f_mu2 - f_mu1
  double worst_upper = 0.0;  // positive = violation of the beta (mu1 - mu2) cap
  for (int p = 0; p < points; ++p) {
    const Eigen::VectorXd x = random_interior_design(*problem.feasible, rng, 0.1, 1.0);
    const auto f_at = obj.smoothed_evaluator(x);
    for (std::size_t i = 0; i < std::size(mus); ++i) {
      for (std::size_t j = i + 1; j < std::size(mus); ++j) {
        const double mu1 = mus[i], mu2 = mus[j];  // mu1 > mu2
        const double diff = f_at(mu2) - f_at(mu1);
        worst_lower = std::max(worst_lower, -diff);
        worst_upper = std::max(worst_upper, diff - (beta * (mu1 - mu2) + 1e-10));
      }
    }
  }
  report.items.push_back(make_item("sandwich_lower", worst_lower <= 0.0, worst_lower,
                                   with_worst("max of f_mu1 - f_mu2 over mu1 > mu2:",
                                              worst_lower)));
  report.items.push_back(make_item(
      "sandwich_upper", worst_upper <= 0.0, worst_upper,
      with_worst("max excess over (log n)(mu1 - mu2) + 1e-10:", worst_upper)));

  // The spectral smoothing of A(x) = diag(x) is the finite-max smoothing.
  const int n_diag = 5;
  auto diag_map = std::make_shared<const DiagonalMatrixMap>(n_diag);
  const SpectralLseObjective spectral(diag_map, 1.0, 0.0);
  const FiniteMaxObjective finite(n_diag);
  double worst_diag = 0.0;
  for (int p = 0; p < scaled_count(50, scale, 2); ++p) {
    Eigen::VectorXd v(n_diag);
    for (int i = 0; i < n_diag; ++i) {
      v(i) = 4.0 * unit(rng) - 2.0;
    }
    for (double mu : {1.0, 0.3, 0.01, 0.0}) {
      worst_diag = std::max(worst_diag,
                            std::abs(spectral.eval_smoothed(v, mu) -
                                     finite.eval_smoothed(v, mu)));
      if (mu > 0.0) {
        worst_diag = std::max(worst_diag, (spectral.grad_smoothed(v, mu) -
                                           finite.grad_smoothed(v, mu))
                                              .cwiseAbs()
                                              .maxCoeff());
      }
    }
  }
  report.items.push_back(make_item("diagonal_map_equivalence", worst_diag <= 1e-12,
                                   worst_diag,
                                   with_worst("max |spectral - finite max|:", worst_diag)));

  // Convexity of f_mu (midpoint form) and softmax as its finite-difference
  // gradient, on the finite-max objective where both are cheap.
  double worst_convex = 0.0;
  double worst_softmax = 0.0;
  for (int p = 0; p < scaled_count(50, scale, 2); ++p) {
    Eigen::VectorXd v1(n_diag), v2(n_diag);
    for (int i = 0; i < n_diag; ++i) {
      v1(i) = 4.0 * unit(rng) - 2.0;
      v2(i) = 4.0 * unit(rng) - 2.0;
    }
    for (double mu : {1.0, 0.1}) {
      const double mid = finite.eval_smoothed(0.5 * (v1 + v2), mu);
      worst_convex = std::max(worst_convex,
                              mid - 0.5 * (finite.eval_smoothed(v1, mu) +
                                           finite.eval_smoothed(v2, mu)) -
                                  1e-12);
      const Eigen::VectorXd fd = central_difference_gradient(
          [&finite, mu](const Eigen::VectorXd& v) { return finite.eval_smoothed(v, mu); },
          v1, 1e-6);
      worst_softmax = std::max(
          worst_softmax, (softmax_weights(v1, mu) - fd).cwiseAbs().maxCoeff());
    }
  }
  report.items.push_back(make_item("midpoint_convexity", worst_convex <= 0.0, worst_convex,
                                   with_worst("max midpoint excess:", worst_convex)));
  report.items.push_back(make_item("softmax_is_lse_gradient", worst_softmax <= 1e-6,
                                   worst_softmax,
                                   with_worst("max |softmax - fd|:", worst_softmax)));

  // Gradient Lipschitz bound (Lprime + L / mu) with the exact constants of
  // the finite-max family (L = 1, Lprime = 0).
  double worst_ratio = 0.0;
  for (int p = 0; p < scaled_count(50, scale, 2); ++p) {
    Eigen::VectorXd v1(n_diag), v2(n_diag);
    for (int i = 0; i < n_diag; ++i) {
      v1(i) = 4.0 * unit(rng) - 2.0;
      v2(i) = v1(i) + 0.5 * (unit(rng) - 0.5);
    }
    for (double mu : {1.0, 0.1, 0.01}) {
      const double num =
          (finite.grad_smoothed(v1, mu) - finite.grad_smoothed(v2, mu)).norm();
      worst_ratio = std::max(worst_ratio, num * mu / (v1 - v2).norm());
    }
  }
  report.items.push_back(make_item(
      "finite_max_grad_lipschitz", worst_ratio <= 1.0 + 1e-9, worst_ratio,
      with_worst("max mu * ||grad diff|| / ||x diff|| (bound 1):", worst_ratio)));
  return report;
}

CheckReport check_projection(std::uint64_t seed, double scale) {
  CheckReport report;
  report.suite = "project";
  std::mt19937_64 rng(seed);

  const int instances_per_bucket = scaled_count(167, scale, 2);
  const int ys_per_instance = 6;

  double worst_oracle = 0.0;
  double worst_idem = 0.0;
  double worst_nonexp = 0.0;
  double worst_theta = 0.0;
  double worst_obtuse = 0.0;
  long total = 0;

  for (int m = 1; m <= 6; ++m) {
    for (int inst = 0; inst < instances_per_bucket; ++inst) {
      Eigen::VectorXd l(m);
      for (int j = 0; j < m; ++j) {
        l(j) = 0.5 + 1.5 * unit(rng);
      }
      const double xmin = std::pow(10.0, -6.0 + 5.0 * unit(rng));  // 1e-6 .. 1e-1
      const double v0 = xmin * l.sum() * (1.05 + 3.0 * unit(rng));
      const BoxBudgetSet set(l, v0, xmin);
      const double level = v0 / l.sum();

      Eigen::VectorXd prev_y, prev_p;
      for (int t = 0; t < ys_per_instance; ++t) {
        Eigen::VectorXd y(m);
        for (int j = 0; j < m; ++j) {
          y(j) = xmin + level * (3.0 * unit(rng) - 1.0);
        }
        ++total;

        const BudgetProjection bp = set.project_with_multiplier(y);
        const Eigen::VectorXd oracle = brute_force_box_budget_project(l, v0, xmin, y);
        worst_oracle = std::max(worst_oracle, (bp.x - oracle).cwiseAbs().maxCoeff());

        worst_idem =
            std::max(worst_idem, (set.project(bp.x) - bp.x).cwiseAbs().maxCoeff());

        if (bp.theta > 0.0) {
          worst_theta =
              std::max(worst_theta, std::abs(l.dot(bp.x) - v0) / std::max(1.0, v0));
        } else if (set.residuals(y.cwiseMax(xmin)).budget > 0.0) {
          worst_theta = std::max(worst_theta, 1.0);  // theta should have been > 0
        }

        const Eigen::VectorXd w = random_interior_design(set, rng, 0.0, 1.0);
        worst_obtuse = std::max(worst_obtuse, (y - bp.x).dot(w - bp.x));

        if (t > 0) {
          worst_nonexp = std::max(worst_nonexp,
                                  (bp.x - prev_p).norm() - (y - prev_y).norm());
        }
        prev_y = y;
        prev_p = bp.x;
      }
    }
  }

  std::ostringstream counts;
  counts << total << " projections over buckets m=1..6";
  report.items.push_back(make_item("matches_active_set_oracle", worst_oracle <= 1e-10,
                                   worst_oracle,
                                   with_worst(counts.str() + "; max |diff|:",
                                              worst_oracle)));
  report.items.push_back(make_item("idempotent", worst_idem <= 1e-12, worst_idem,
                                   with_worst("max |P(P(y)) - P(y)|:", worst_idem)));
  report.items.push_back(make_item("nonexpansive", worst_nonexp <= 1e-12, worst_nonexp,
                                   with_worst("max ||Py1-Py2|| - ||y1-y2||:",
                                              worst_nonexp)));
  report.items.push_back(make_item(
      "kkt_multiplier", worst_theta <= 1e-10, worst_theta,
      with_worst("max relative budget residual when theta > 0:", worst_theta)));
  report.items.push_back(make_item(
      "obtuse_angle", worst_obtuse <= 1e-10, worst_obtuse,
      with_worst("max <y - Py, w - Py> over feasible w:", worst_obtuse)));
  return report;
}

CheckReport check_sequences() {
  CheckReport report;
  report.suite = "sequences";

  double a = 0.0;
  double worst_residual = 0.0;
  double worst_bounds = 0.0;  // positive = a_k outside [k/2, 3k/2]
  for (int k = 0; k < 1000000; ++k) {
    const double a_next = 0.5 * (1.0 + std::sqrt(4.0 * a * a + 1.0));
    // Residual of a_{k+1}^2 - a_{k+1} = a_k^2, scaled by a_{k+1}^2 so the
    // k ~ 1e6 tail is not pure cancellation noise.
    const double r = std::abs(1.0 - 1.0 / a_next - (a / a_next) * (a / a_next));
    worst_residual = std::max(worst_residual, r);
    a = a_next;
    const double kk = static_cast<double>(k + 1);
    worst_bounds = std::max({worst_bounds, 0.5 * kk - a, a - 1.5 * kk});
  }
  report.items.push_back(make_item("a_recurrence_residual", worst_residual <= 1e-12,
                                   worst_residual,
                                   with_worst("max scaled residual to k=1e6:",
                                              worst_residual)));
  report.items.push_back(make_item(
      "a_growth_bounds", worst_bounds <= 0.0, worst_bounds,
      with_worst("max excursion outside [k/2, 3k/2]:", worst_bounds)));
  return report;
}

namespace {

struct QuadInstance {
  std::shared_ptr<QuadraticObjective> objective;
  std::shared_ptr<BoxSet> set;
  Eigen::VectorXd x_star;
  Eigen::VectorXd x0;
};

QuadInstance quad_1d() {
  QuadInstance q;
  SymMatrix h(1);
  h.set(0, 0, 1.0);
  Eigen::VectorXd b(1);
  b << -3.0;
  q.objective = std::make_shared<QuadraticObjective>(h, b);
  Eigen::VectorXd lo(1), hi(1);
  lo << -1.0;
  hi << 1.0;
  q.set = std::make_shared<BoxSet>(lo, hi);
  q.x_star = hi;  // unconstrained minimum at 3, clipped to the box
  q.x0 = lo;
  return q;
}

QuadInstance quad_box_2d() {
  QuadInstance q;
  SymMatrix h(2);
  h.set(0, 0, 1.0);
  Eigen::VectorXd b(2);
  b << 0.0, -1.0;
  q.objective = std::make_shared<QuadraticObjective>(h, b);
  Eigen::VectorXd lo(2), hi(2);
  lo << -1.0, -1.0;
  hi << 1.0, 1.0;
  q.set = std::make_shared<BoxSet>(lo, hi);
  q.x_star.resize(2);
  q.x_star << 0.0, 1.0;  // minimizes 0.5 x1^2 - x2 over the box
  q.x0.resize(2);
  q.x0 << -0.5, -0.5;
  return q;
}

SolverConfig smooth_sapg_config(const QuadInstance& q, int iters) {
  SolverConfig cfg;
  cfg.algorithm = Algorithm::Sapg;
  cfg.L = 0.0;
  cfg.Lprime = q.objective->constants().Lprime;  // exact lambda_max(H)
  cfg.mu0 = 1.0;
  cfg.max_iters = iters;
  cfg.trace_every = 1;
  cfg.retain_states = true;
  return cfg;
}

}  // namespace

CheckReport check_lyapunov(double scale) {
  CheckReport report;
  report.suite = "lyapunov";

  {
    const CheckReport sequences = check_sequences();
    report.items.insert(report.items.end(), sequences.items.begin(),
                        sequences.items.end());
  }

  {
    const QuadInstance q = quad_1d();
    const SolverConfig cfg = smooth_sapg_config(q, scaled_count(1000, scale, 50));
    const IterateTrace trace = run(cfg, *q.objective, *q.set, q.x0);
    const LyapunovDiagnostics diag =
        lyapunov_series(trace, *q.objective, cfg, q.x_star);
    const double worst = std::max(diag.max_e_violation, diag.max_etilde_violation);
    report.items.push_back(make_item(
        "quad_1d_zero_violations",
        diag.e_violations == 0 && diag.etilde_violations == 0, worst,
        with_worst("violations: " + std::to_string(diag.e_violations) + " E, " +
                       std::to_string(diag.etilde_violations) + " Etilde; max excess",
                   worst)));
  }

  {
    const QuadInstance q = quad_box_2d();
    const SolverConfig cfg = smooth_sapg_config(q, scaled_count(1000, scale, 50));
    const IterateTrace trace = run(cfg, *q.objective, *q.set, q.x0);
    const LyapunovDiagnostics diag =
        lyapunov_series(trace, *q.objective, cfg, q.x_star);
    const double worst = std::max(diag.max_e_violation, diag.max_etilde_violation);
    report.items.push_back(make_item(
        "quad_box_zero_violations",
        diag.e_violations == 0 && diag.etilde_violations == 0, worst,
        with_worst("violations: " + std::to_string(diag.e_violations) + " E, " +
                       std::to_string(diag.etilde_violations) + " Etilde; max excess",
                   worst)));
  }

  {
    // Smooth recovery: with L = 0, beta = 0 the rate bound collapses to
    // 2 Lprime ||x0 - x*||^2 / k^2 and must hold at every k.
    const QuadInstance q = quad_box_2d();
    SolverConfig cfg = smooth_sapg_config(q, scaled_count(10000, scale, 100));
    cfg.retain_states = false;
    const IterateTrace trace = run(cfg, *q.objective, *q.set, q.x0);
    const double f_star = q.objective->eval_nonsmooth(q.x_star);
    const double d2 = (trace.x0 - q.x_star).squaredNorm();
    double worst = -std::numeric_limits<double>::infinity();
    for (const TraceRow& row : trace.rows) {
      if (row.k < 1) {
        continue;
      }
      const double bound = 2.0 * cfg.Lprime * d2 / (static_cast<double>(row.k) *
                                                    static_cast<double>(row.k));
      worst = std::max(worst, (row.f_x - f_star) - bound);
    }
    report.items.push_back(make_item(
        "smooth_recovery_bound", worst <= 0.0, worst,
        with_worst("max gap excess over 2 L' d^2 / k^2:", worst)));
  }

  {
    // The x update is the stated convex combination of x and z.
    const QuadInstance q = quad_box_2d();
    const SolverConfig cfg = smooth_sapg_config(q, 200);
    const IterateTrace trace = run(cfg, *q.objective, *q.set, q.x0);
    double worst = 0.0;
    for (std::size_t i = 1; i < trace.states.size(); ++i) {
      const SolverState& prev = trace.states[i - 1];
      const SolverState& cur = trace.states[i];
      const double inv = 1.0 / cur.a;
      worst = std::max(worst, (cur.x - ((1.0 - inv) * prev.x + inv * cur.z))
                                  .cwiseAbs()
                                  .maxCoeff());
      worst = std::max(worst, (cur.y - ((1.0 - inv) * prev.x + inv * prev.z))
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    report.items.push_back(make_item("convex_combination_identity", worst <= 1e-14,
                                     worst,
                                     with_worst("max identity residual:", worst)));
  }
  return report;
}

std::vector<std::string> known_suites() {
  return {"grad", "project", "smoothing", "lyapunov"};
}

CheckReport run_suite(const std::string& name, const RobustComplianceProblem& problem,
                      std::uint64_t seed, double scale) {
  if (name == "grad") {
    return check_gradients(problem, seed, scale);
  }
  if (name == "smoothing") {
    return check_smoothing(problem, seed, scale);
  }
  if (name == "project") {
    return check_projection(seed, scale);
  }
  if (name == "lyapunov") {
    return check_lyapunov(scale);
  }
  throw InvalidArgument("unknown check suite '" + name +
                        "' (known: grad, project, smoothing, lyapunov, all)");
}

}  // namespace sapg
