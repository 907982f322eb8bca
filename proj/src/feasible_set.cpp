#include "sapg/feasible_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace sapg {

namespace {

void require_dim(const Eigen::VectorXd& v, int dim, const char* who) {
  if (v.size() != dim) {
    throw DimensionMismatch(std::string(who) + ": got vector of size " +
                            std::to_string(v.size()) + ", expected " + std::to_string(dim));
  }
}

}  // namespace

bool FeasibleSet::contains(const Eigen::VectorXd& x, double tol) const {
  const Residuals r = residuals(x);
  return r.box <= tol && r.budget <= tol;
}

BoxBudgetSet::BoxBudgetSet(Eigen::VectorXd lengths, double volume_budget, double lower_bound)
    : lengths_(std::move(lengths)), volume_budget_(volume_budget), lower_bound_(lower_bound) {
  if (lengths_.size() == 0) {
    throw EmptyInput("BoxBudgetSet: no lengths");
  }
  if ((lengths_.array() <= 0.0).any()) {
    throw InvalidArgument("BoxBudgetSet: lengths must be positive");
  }
  if (!(volume_budget_ > 0.0)) {
    throw InvalidArgument("BoxBudgetSet: volume budget must be positive, got " +
                          std::to_string(volume_budget_));
  }
  if (!(lower_bound_ > 0.0)) {
    throw InvalidArgument("BoxBudgetSet: lower bound must be positive, got " +
                          std::to_string(lower_bound_));
  }
  if (lower_bound_ * lengths_.sum() > volume_budget_) {
    throw EmptySet("BoxBudgetSet: lower bound consumes " +
                   std::to_string(lower_bound_ * lengths_.sum()) +
                   " of volume budget " + std::to_string(volume_budget_) +
                   "; the set is empty");
  }
}

Eigen::VectorXd BoxBudgetSet::project(const Eigen::VectorXd& y) const {
  return project_with_multiplier(y).x;
}

BudgetProjection BoxBudgetSet::project_with_multiplier(const Eigen::VectorXd& y) const {
  require_dim(y, dimension(), "BoxBudgetSet::project");
  const int m = dimension();
  const Eigen::VectorXd& l = lengths_;

  BudgetProjection out;
  out.x = y.cwiseMax(lower_bound_);
  out.theta = 0.0;
  if (l.dot(out.x) <= volume_budget_) {
    return out;
  }

  // Budget is tight. Bars with y_j <= x_min sit at the bound for every
  // theta >= 0; the rest leave the interior at theta_j = (y_j - x_min) / l_j.
  std::vector<int> order;
  order.reserve(m);
  for (int j = 0; j < m; ++j) {
    if (y(j) > lower_bound_) {
      order.push_back(j);
    }
  }
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return (y(i) - lower_bound_) / l(i) < (y(j) - lower_bound_) / l(j);
  });

  double s_ly = 0.0;    // sum of l_j y_j over interior bars
  double s_ll = 0.0;    // sum of l_j^2 over interior bars
  double s_bound = lower_bound_ * l.sum();  // starts as if every bar were bound
  for (int j : order) {
    s_ly += l(j) * y(j);
    s_ll += l(j) * l(j);
    s_bound -= lower_bound_ * l(j);
  }

  // Scan segments in increasing theta, deactivating one bar per breakpoint,
  // until the segment's linear root lies before the next breakpoint. Ties
  // between equal breakpoints just produce empty segments.
  std::size_t pos = 0;
  double theta = 0.0;
  while (true) {
    if (s_ll <= 0.0) {
      // Every bar at the bound; feasibility of the set puts the root here.
      theta = pos == 0 ? 0.0 : (y(order[pos - 1]) - lower_bound_) / l(order[pos - 1]);
      break;
    }
    theta = (s_ly + s_bound - volume_budget_) / s_ll;
    const double seg_hi = pos < order.size()
                              ? (y(order[pos]) - lower_bound_) / l(order[pos])
                              : std::numeric_limits<double>::infinity();
    if (theta <= seg_hi) {
      break;
    }
    const int j = order[pos];
    s_ly -= l(j) * y(j);
    s_ll -= l(j) * l(j);
    s_bound += lower_bound_ * l(j);
    ++pos;
  }

  // Recompute the accepted segment's sums in one clean pass to shed the
  // cancellation accumulated while scanning.
  if (pos < order.size()) {
    double ly = 0.0, ll = 0.0, bound = lower_bound_ * l.sum();
    for (std::size_t t = pos; t < order.size(); ++t) {
      const int j = order[t];
      ly += l(j) * y(j);
      ll += l(j) * l(j);
      bound -= lower_bound_ * l(j);
    }
    if (ll > 0.0) {
      theta = (ly + bound - volume_budget_) / ll;
    }
  }
  theta = std::max(theta, 0.0);

  out.theta = theta;
  out.x = (y.array() - theta * l.array()).max(lower_bound_);

  // The subtraction y - theta l rounds at eps * |y|, so for very large y the
  // computed point can overshoot the budget by far more than eps * |x|.
  // Newton steps on r(theta) = l^T x(theta) - V0, applied to the computed x
  // directly, restore feasibility at the scale of x itself.
  for (int pass = 0; pass < 4; ++pass) {
    const double surplus = l.dot(out.x) - volume_budget_;
    if (surplus <= 0.0) {
      break;
    }
    double ll = 0.0;
    for (int j = 0; j < m; ++j) {
      if (out.x(j) > lower_bound_) {
        ll += l(j) * l(j);
      }
    }
    if (ll <= 0.0) {
      break;
    }
    const double dtheta = surplus / ll;
    out.theta += dtheta;
    for (int j = 0; j < m; ++j) {
      if (out.x(j) > lower_bound_) {
        out.x(j) = std::max(lower_bound_, out.x(j) - dtheta * l(j));
      }
    }
  }
  return out;
}

Residuals BoxBudgetSet::residuals(const Eigen::VectorXd& x) const {
  require_dim(x, dimension(), "BoxBudgetSet::residuals");
  Residuals r;
  r.box = (lower_bound_ - x.array()).maxCoeff();
  r.budget = lengths_.dot(x) - volume_budget_;
  return r;
}

BoxSet::BoxSet(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() == 0) {
    throw EmptyInput("BoxSet: no bounds");
  }
  if (lower_.size() != upper_.size()) {
    throw DimensionMismatch("BoxSet: lower has size " + std::to_string(lower_.size()) +
                            ", upper has size " + std::to_string(upper_.size()));
  }
  if ((lower_.array() > upper_.array()).any()) {
    throw EmptySet("BoxSet: some lower bound exceeds its upper bound");
  }
}

Eigen::VectorXd BoxSet::project(const Eigen::VectorXd& y) const {
  require_dim(y, dimension(), "BoxSet::project");
  return y.cwiseMax(lower_).cwiseMin(upper_);
}

Residuals BoxSet::residuals(const Eigen::VectorXd& x) const {
  require_dim(x, dimension(), "BoxSet::residuals");
  Residuals r;
  r.box = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < dimension(); ++j) {
    if (std::isfinite(lower_(j))) {
      r.box = std::max(r.box, lower_(j) - x(j));
    }
    if (std::isfinite(upper_(j))) {
      r.box = std::max(r.box, x(j) - upper_(j));
    }
  }
  if (!std::isfinite(r.box) && r.box < 0.0) {
    r.box = 0.0;  // fully unbounded box
  }
  r.budget = 0.0;
  return r;
}

}  // namespace sapg
