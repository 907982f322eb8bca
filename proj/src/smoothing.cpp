#include "sapg/smoothing.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace sapg {

namespace {

void require_dim(const Eigen::VectorXd& x, int dim, const char* who) {
  if (x.size() != dim) {
    throw DimensionMismatch(std::string(who) + ": got vector of size " +
                            std::to_string(x.size()) + ", expected " + std::to_string(dim));
  }
}

void require_mu_nonneg(double mu, const char* who) {
  if (!(mu >= 0.0)) {
    throw InvalidArgument(std::string(who) + ": mu must be >= 0, got " + std::to_string(mu));
  }
}

}  // namespace

DiagonalMatrixMap::DiagonalMatrixMap(int n) : n_(n) {
  if (n < 1) {
    throw InvalidArgument("DiagonalMatrixMap: order must be >= 1, got " + std::to_string(n));
  }
}

MatrixMap::Evaluation DiagonalMatrixMap::evaluate(const Eigen::VectorXd& x) const {
  require_dim(x, n_, "DiagonalMatrixMap::evaluate");
  MatrixMap::Evaluation ev{SymMatrix(n_), nullptr, nullptr};
  for (int i = 0; i < n_; ++i) {
    ev.a.set(i, i, x(i));
  }
  const int n = n_;
  // dA/dx_j = e_j e_j^T, so u^T (dA/dx_j) u = u_j^2.
  ev.quadratic_forms = [n](const Eigen::MatrixXd& basis) {
    if (basis.rows() != n) {
      throw DimensionMismatch("DiagonalMatrixMap: basis rows " +
                              std::to_string(basis.rows()) + " vs order " + std::to_string(n));
    }
    return Eigen::MatrixXd(basis.transpose().array().square());
  };
  ev.derivative = [n](int j) {
    if (j < 0 || j >= n) {
      throw IndexOutOfRange("DiagonalMatrixMap: derivative index " + std::to_string(j));
    }
    SymMatrix d(n);
    d.set(j, j, 1.0);
    return d;
  };
  return ev;
}

std::function<double(double)> SmoothedObjective::smoothed_evaluator(
    const Eigen::VectorXd& x) const {
  return [this, x](double mu) {
    return mu == 0.0 ? eval_nonsmooth(x) : eval_smoothed(x, mu);
  };
}

SpectralLseObjective::SpectralLseObjective(std::shared_ptr<const MatrixMap> map,
                                           double l_estimate, double lprime_estimate)
    : map_(std::move(map)) {
  if (!map_) {
    throw InvalidArgument("SpectralLseObjective: null matrix map");
  }
  if (!(l_estimate >= 0.0) || !(lprime_estimate >= 0.0)) {
    throw InvalidArgument("SpectralLseObjective: Lipschitz estimates must be >= 0");
  }
  constants_.L = l_estimate;
  constants_.Lprime = lprime_estimate;
  constants_.beta = std::log(static_cast<double>(map_->order()));
}

double SpectralLseObjective::eval_smoothed(const Eigen::VectorXd& x, double mu) const {
  require_mu_nonneg(mu, "SpectralLseObjective::eval_smoothed");
  if (mu == 0.0) {
    return eval_nonsmooth(x);
  }
  return spectral_f_mu(map_->eval(x), mu);
}

Eigen::VectorXd SpectralLseObjective::grad_smoothed(const Eigen::VectorXd& x, double mu) const {
  return spectral_grad_f_mu(*map_, x, mu);
}

double SpectralLseObjective::eval_nonsmooth(const Eigen::VectorXd& x) const {
  return sym_eig(map_->eval(x)).eigenvalues(0);
}

Eigen::VectorXd SpectralLseObjective::subgradient(const Eigen::VectorXd& x) const {
  return subgradient_max_eig(*map_, x);
}

std::function<double(double)> SpectralLseObjective::smoothed_evaluator(
    const Eigen::VectorXd& x) const {
  Eigen::VectorXd lambda = sym_eig(map_->eval(x)).eigenvalues;
  return [lambda = std::move(lambda)](double mu) {
    require_mu_nonneg(mu, "SpectralLseObjective::smoothed_evaluator");
    return mu == 0.0 ? lambda(0) : finite_max_lse(lambda, mu);
  };
}

FiniteMaxObjective::FiniteMaxObjective(int dim) : dim_(dim) {
  if (dim < 1) {
    throw InvalidArgument("FiniteMaxObjective: dimension must be >= 1, got " +
                          std::to_string(dim));
  }
}

double FiniteMaxObjective::eval_smoothed(const Eigen::VectorXd& x, double mu) const {
  require_dim(x, dim_, "FiniteMaxObjective::eval_smoothed");
  require_mu_nonneg(mu, "FiniteMaxObjective::eval_smoothed");
  return mu == 0.0 ? x.maxCoeff() : finite_max_lse(x, mu);
}

Eigen::VectorXd FiniteMaxObjective::grad_smoothed(const Eigen::VectorXd& x, double mu) const {
  require_dim(x, dim_, "FiniteMaxObjective::grad_smoothed");
  return softmax_weights(x, mu);
}

double FiniteMaxObjective::eval_nonsmooth(const Eigen::VectorXd& x) const {
  require_dim(x, dim_, "FiniteMaxObjective::eval_nonsmooth");
  return x.maxCoeff();
}

Eigen::VectorXd FiniteMaxObjective::subgradient(const Eigen::VectorXd& x) const {
  require_dim(x, dim_, "FiniteMaxObjective::subgradient");
  int arg = 0;
  x.maxCoeff(&arg);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
  g(arg) = 1.0;
  return g;
}

SmoothingConstants FiniteMaxObjective::constants() const {
  SmoothingConstants c;
  c.L = 1.0;
  c.Lprime = 0.0;
  c.beta = std::log(static_cast<double>(dim_));
  return c;
}

QuadraticObjective::QuadraticObjective(SymMatrix hessian, Eigen::VectorXd linear)
    : hessian_(std::move(hessian)), linear_(std::move(linear)) {
  if (hessian_.order() != linear_.size()) {
    throw DimensionMismatch("QuadraticObjective: hessian order " +
                            std::to_string(hessian_.order()) + " vs linear size " +
                            std::to_string(linear_.size()));
  }
  const EigenDecomposition eig = sym_eig(hessian_);
  lambda_max_ = eig.eigenvalues(0);
  const double lambda_min = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (lambda_min < -1e-12 * std::max(1.0, lambda_max_)) {
    throw InvalidArgument("QuadraticObjective: hessian must be positive semidefinite");
  }
}

double QuadraticObjective::eval_smoothed(const Eigen::VectorXd& x, double mu) const {
  require_mu_nonneg(mu, "QuadraticObjective::eval_smoothed");
  return eval_nonsmooth(x);
}

Eigen::VectorXd QuadraticObjective::grad_smoothed(const Eigen::VectorXd& x, double) const {
  return subgradient(x);
}

double QuadraticObjective::eval_nonsmooth(const Eigen::VectorXd& x) const {
  require_dim(x, dimension(), "QuadraticObjective::eval_nonsmooth");
  return 0.5 * x.dot(hessian_.mat() * x) + linear_.dot(x);
}

Eigen::VectorXd QuadraticObjective::subgradient(const Eigen::VectorXd& x) const {
  require_dim(x, dimension(), "QuadraticObjective::subgradient");
  return hessian_.mat() * x + linear_;
}

SmoothingConstants QuadraticObjective::constants() const {
  SmoothingConstants c;
  c.L = 0.0;
  c.Lprime = lambda_max_;
  c.beta = 0.0;
  return c;
}

double finite_max_lse(const Eigen::VectorXd& values, double mu) {
  return log_sum_exp(values, mu) - mu * std::log(static_cast<double>(values.size()));
}

double spectral_f_mu(const SymMatrix& a, double mu) {
  require_mu_nonneg(mu, "spectral_f_mu");
  const Eigen::VectorXd lambda = sym_eig(a).eigenvalues;
  return mu == 0.0 ? lambda(0) : finite_max_lse(lambda, mu);
}

Eigen::VectorXd spectral_grad_f_mu(const MatrixMap& map, const Eigen::VectorXd& x, double mu) {
  if (!(mu > 0.0)) {
    throw InvalidArgument("spectral_grad_f_mu: mu must be positive, got " +
                          std::to_string(mu));
  }
  const MatrixMap::Evaluation ev = map.evaluate(x);
  const EigenDecomposition eig = sym_eig(ev.a);
  const Eigen::VectorXd w = softmax_weights(eig.eigenvalues, mu);
  const Eigen::MatrixXd d = ev.quadratic_forms(eig.eigenvectors);
  return d.transpose() * w;
}

Eigen::VectorXd subgradient_max_eig(const MatrixMap& map, const Eigen::VectorXd& x) {
  const MatrixMap::Evaluation ev = map.evaluate(x);
  const EigenDecomposition eig = sym_eig(ev.a);
  const Eigen::MatrixXd d = ev.quadratic_forms(eig.eigenvectors.col(0));
  return d.transpose();
}

}  // namespace sapg
