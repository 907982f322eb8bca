#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sapg/feasible_set.hpp"
#include "sapg/truss.hpp"

namespace sapg {

struct CheckItem {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // worst observed error / margin, suite-specific
  std::string detail;
};

struct CheckReport {
  std::string suite;
  std::vector<CheckItem> items;

  bool passed() const;
};

/// Projection onto { x : l^T x <= v0, x >= xmin } by exhaustive active-set
/// enumeration (every bound pattern, budget tight or slack); exponential in
/// the dimension, so only usable for small m. The independent oracle the
/// breakpoint projection is tested against.
Eigen::VectorXd brute_force_box_budget_project(const Eigen::VectorXd& lengths, double v0,
                                               double xmin, const Eigen::VectorXd& y);

/// Componentwise central finite differences with step h.
Eigen::VectorXd central_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
    double h);

/// Random strictly interior design of a box-budget set: areas drawn from
/// [lo_frac, hi_frac] times the uniform-budget level, then projected.
Eigen::VectorXd random_interior_design(const BoxBudgetSet& set, std::mt19937_64& rng,
                                       double lo_frac = 0.3, double hi_frac = 1.0);

/// Oracle and property suites. `scale` in (0, 1] shrinks the sample counts
/// proportionally so the same code drives quick unit runs and the full
/// acceptance counts (scale = 1).
CheckReport check_gradients(const RobustComplianceProblem& problem, std::uint64_t seed,
                            double scale = 1.0);
CheckReport check_smoothing(const RobustComplianceProblem& problem, std::uint64_t seed,
                            double scale = 1.0);
CheckReport check_projection(std::uint64_t seed, double scale = 1.0);
CheckReport check_sequences();
CheckReport check_lyapunov(double scale = 1.0);

std::vector<std::string> known_suites();

/// Dispatch by suite name ("grad", "project", "smoothing", "lyapunov");
/// throws InvalidArgument for unknown names.
CheckReport run_suite(const std::string& name, const RobustComplianceProblem& problem,
                      std::uint64_t seed, double scale = 1.0);

}  // namespace sapg
