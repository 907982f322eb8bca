#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>

#include "sapg/errors.hpp"
#include "sapg/linalg.hpp"

namespace sapg {

/// Constants of a smoothing family f_mu:
///   ||grad f_mu(x) - grad f_mu(y)|| <= (Lprime + L / mu) ||x - y||,
///   f(x) <= f_mu(x) + beta * mu.
/// For already-smooth objectives L = beta = 0 and f_mu = f.
struct SmoothingConstants {
  double L = 0.0;
  double Lprime = 0.0;
  double beta = 0.0;
};

/// Differentiable symmetric-matrix-valued map A(x), together with the
/// quadratic forms of its partial derivatives that gradient formulas need.
class MatrixMap {
 public:
  /// Everything derived from A at one point. The closures share whatever
  /// factorization work `evaluate` already did.
  struct Evaluation {
    SymMatrix a;
    /// D(i, j) = u_i^T (dA/dx_j) u_i for the columns u_i of `basis`.
    std::function<Eigen::MatrixXd(const Eigen::MatrixXd& basis)> quadratic_forms;
    /// Dense dA/dx_j, mostly for oracle checks.
    std::function<SymMatrix(int j)> derivative;
  };

  virtual ~MatrixMap() = default;
  virtual int order() const = 0;      // size of A(x)
  virtual int dimension() const = 0;  // size of x
  virtual Evaluation evaluate(const Eigen::VectorXd& x) const = 0;

  SymMatrix eval(const Eigen::VectorXd& x) const { return evaluate(x).a; }
};

/// A(x) = diag(x); the simplest map, used to cross-check the spectral
/// smoothing against the finite-max one.
class DiagonalMatrixMap final : public MatrixMap {
 public:
  explicit DiagonalMatrixMap(int n);
  int order() const override { return n_; }
  int dimension() const override { return n_; }
  Evaluation evaluate(const Eigen::VectorXd& x) const override;

 private:
  int n_;
};

/// Objective with a family of smooth approximations f_mu indexed by mu > 0,
/// where f_0 means the underlying nonsmooth objective itself.
class SmoothedObjective {
 public:
  virtual ~SmoothedObjective() = default;

  virtual int dimension() const = 0;
  virtual double eval_smoothed(const Eigen::VectorXd& x, double mu) const = 0;
  virtual Eigen::VectorXd grad_smoothed(const Eigen::VectorXd& x, double mu) const = 0;
  virtual double eval_nonsmooth(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd subgradient(const Eigen::VectorXd& x) const = 0;
  virtual SmoothingConstants constants() const = 0;

  /// Closure evaluating mu -> f_mu(x) at fixed x, reusing the per-point
  /// heavy work (for the spectral objective, one eigendecomposition serves
  /// every mu). The closure must not outlive the objective.
  virtual std::function<double(double)> smoothed_evaluator(const Eigen::VectorXd& x) const;
};

/// Smoothed maximum eigenvalue f_mu(x) = mu log sum_i exp(lambda_i(A(x))/mu)
/// - mu log n, the softmax smoothing of f(x) = lambda_max(A(x)). Satisfies
/// f(x) <= f_mu(x) + mu log n with beta = log n exactly; the Lipschitz
/// coefficients L and Lprime are caller-supplied estimates.
class SpectralLseObjective final : public SmoothedObjective {
 public:
  SpectralLseObjective(std::shared_ptr<const MatrixMap> map, double l_estimate,
                       double lprime_estimate);

  int dimension() const override { return map_->dimension(); }
  double eval_smoothed(const Eigen::VectorXd& x, double mu) const override;
  Eigen::VectorXd grad_smoothed(const Eigen::VectorXd& x, double mu) const override;
  double eval_nonsmooth(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd subgradient(const Eigen::VectorXd& x) const override;
  SmoothingConstants constants() const override { return constants_; }
  std::function<double(double)> smoothed_evaluator(const Eigen::VectorXd& x) const override;

  const MatrixMap& map() const { return *map_; }

 private:
  std::shared_ptr<const MatrixMap> map_;
  SmoothingConstants constants_;
};

/// Smoothed finite maximum f(x) = max_i x_i via the same shifted
/// log-sum-exp; coincides with the spectral objective on diagonal maps.
class FiniteMaxObjective final : public SmoothedObjective {
 public:
  explicit FiniteMaxObjective(int dim);

  int dimension() const override { return dim_; }
  double eval_smoothed(const Eigen::VectorXd& x, double mu) const override;
  Eigen::VectorXd grad_smoothed(const Eigen::VectorXd& x, double mu) const override;
  double eval_nonsmooth(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd subgradient(const Eigen::VectorXd& x) const override;
  SmoothingConstants constants() const override;

 private:
  int dim_;
};

/// Smooth convex quadratic f(x) = 0.5 x^T H x + b^T x with H positive
/// semidefinite. Its own smoothing family is trivial: f_mu = f, beta = 0,
/// L = 0 and Lprime = lambda_max(H).
class QuadraticObjective final : public SmoothedObjective {
 public:
  QuadraticObjective(SymMatrix hessian, Eigen::VectorXd linear);

  int dimension() const override { return static_cast<int>(linear_.size()); }
  double eval_smoothed(const Eigen::VectorXd& x, double mu) const override;
  Eigen::VectorXd grad_smoothed(const Eigen::VectorXd& x, double mu) const override;
  double eval_nonsmooth(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd subgradient(const Eigen::VectorXd& x) const override;
  SmoothingConstants constants() const override;

  const SymMatrix& hessian() const { return hessian_; }
  const Eigen::VectorXd& linear() const { return linear_; }

 private:
  SymMatrix hessian_;
  Eigen::VectorXd linear_;
  double lambda_max_;
};

/// f_mu for the finite maximum: log_sum_exp(values, mu) - mu log n.
double finite_max_lse(const Eigen::VectorXd& values, double mu);

/// f_mu(x) = mu log sum_i exp(lambda_i(a) / mu) - mu log n for a symmetric a.
double spectral_f_mu(const SymMatrix& a, double mu);

/// Gradient of the spectral smoothing at x:
/// grad_j = sum_i w_i u_i^T (dA/dx_j) u_i with softmax weights w of the
/// eigenvalues at temperature mu.
Eigen::VectorXd spectral_grad_f_mu(const MatrixMap& map, const Eigen::VectorXd& x, double mu);

/// A subgradient of x -> lambda_max(A(x)): the quadratic forms of a leading
/// eigenvector (the unique gradient wherever lambda_1 is simple).
Eigen::VectorXd subgradient_max_eig(const MatrixMap& map, const Eigen::VectorXd& x);

}  // namespace sapg
