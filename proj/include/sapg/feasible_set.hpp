#pragma once

#include <Eigen/Dense>

#include "sapg/errors.hpp"

namespace sapg {

/// Signed constraint residuals; a value <= 0 means the constraint holds.
struct Residuals {
  double box = 0.0;
  double budget = 0.0;
};

/// Closed convex feasible set with a Euclidean projection.
class FeasibleSet {
 public:
  virtual ~FeasibleSet() = default;

  virtual int dimension() const = 0;
  virtual Eigen::VectorXd project(const Eigen::VectorXd& y) const = 0;
  virtual Residuals residuals(const Eigen::VectorXd& x) const = 0;

  /// True iff both residuals are <= tol.
  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;
};

/// Projection result together with the budget-constraint multiplier theta.
struct BudgetProjection {
  Eigen::VectorXd x;
  double theta = 0.0;
};

/// The set { x : l^T x <= V0, x_j >= x_min } of designs within a volume
/// budget and above a uniform lower area bound. Projection runs in
/// O(m log m) by sorting the breakpoints of the piecewise-linear function
/// r(theta) = l^T x(theta) - V0 with x_j(theta) = max(x_min, y_j - theta l_j)
/// and scanning segments with running sums until r crosses zero.
class BoxBudgetSet final : public FeasibleSet {
 public:
  BoxBudgetSet(Eigen::VectorXd lengths, double volume_budget, double lower_bound);

  int dimension() const override { return static_cast<int>(lengths_.size()); }
  Eigen::VectorXd project(const Eigen::VectorXd& y) const override;
  Residuals residuals(const Eigen::VectorXd& x) const override;

  /// Projection exposing the multiplier: x_j = max(x_min, y_j - theta l_j)
  /// with theta = 0 when the budget is slack at the clipped point.
  BudgetProjection project_with_multiplier(const Eigen::VectorXd& y) const;

  const Eigen::VectorXd& lengths() const { return lengths_; }
  double volume_budget() const { return volume_budget_; }
  double lower_bound() const { return lower_bound_; }

 private:
  Eigen::VectorXd lengths_;
  double volume_budget_;
  double lower_bound_;
};

/// Axis-aligned box with optionally infinite bounds; projection is a clamp.
class BoxSet final : public FeasibleSet {
 public:
  BoxSet(Eigen::VectorXd lower, Eigen::VectorXd upper);

  int dimension() const override { return static_cast<int>(lower_.size()); }
  Eigen::VectorXd project(const Eigen::VectorXd& y) const override;
  Residuals residuals(const Eigen::VectorXd& x) const override;

  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

}  // namespace sapg
