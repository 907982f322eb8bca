#pragma once

#include <Eigen/Dense>

#include "sapg/errors.hpp"

namespace sapg {

/// Dense symmetric matrix. Storage is a full Eigen matrix kept exactly
/// symmetric by construction, so downstream code never has to worry about
/// which triangle is authoritative.
class SymMatrix {
 public:
  /// Zero matrix of the given order (order >= 1).
  explicit SymMatrix(int order);

  /// Builds from a square matrix, symmetrizing as (a + a^T) / 2.
  static SymMatrix from_full(const Eigen::MatrixXd& a);

  int order() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const;

  /// Mirrored write: sets both (i, j) and (j, i).
  void set(int i, int j, double value);

  /// Rank-one update m += scale * v v^T.
  void add_outer(double scale, const Eigen::VectorXd& v);

  const Eigen::MatrixXd& mat() const { return m_; }
  double frobenius_norm() const { return m_.norm(); }

 private:
  Eigen::MatrixXd m_;
};

/// Eigenvalues sorted descending; eigenvectors are the matching columns,
/// orthonormal, with a deterministic sign convention.
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

/// Lower-triangular Cholesky factor L with K = L L^T.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(Eigen::MatrixXd lower);
  int order() const { return static_cast<int>(lower_.rows()); }
  const Eigen::MatrixXd& lower() const { return lower_; }

 private:
  Eigen::MatrixXd lower_;
};

/// Dense Cholesky factorization. Throws NotPositiveDefinite when a pivot
/// falls below 1e-14 times the largest diagonal entry of the input.
CholeskyFactor cholesky(const SymMatrix& k);

/// Solves K X = B via forward/back substitution with a Cholesky factor of K.
Eigen::MatrixXd chol_solve(const CholeskyFactor& factor, const Eigen::MatrixXd& b);
Eigen::VectorXd chol_solve(const CholeskyFactor& factor, const Eigen::VectorXd& b);

/// Full symmetric eigendecomposition by cyclic Jacobi rotations.
/// Converges when the off-diagonal Frobenius norm reaches the rounding
/// floor (20 eps * ||A||_F, or a sweep stops making progress); throws
/// NoConvergence after 100 sweeps. Eigenvalues are
/// returned in descending order (ties broken by ascending original index)
/// and each eigenvector is normalized so its largest-magnitude entry is
/// positive.
EigenDecomposition sym_eig(const SymMatrix& a);

/// Smoothed maximum mu * log(sum_i exp(v_i / mu)), evaluated with the usual
/// max-subtraction shift so large entries cannot overflow. Requires mu > 0
/// and a nonempty input.
double log_sum_exp(const Eigen::VectorXd& values, double mu);

/// Softmax weights w_i proportional to exp(v_i / mu); the gradient of
/// log_sum_exp with respect to v. Same shift and preconditions.
Eigen::VectorXd softmax_weights(const Eigen::VectorXd& values, double mu);

}  // namespace sapg
