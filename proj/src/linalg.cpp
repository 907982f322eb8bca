#include "sapg/linalg.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace sapg {

namespace {

void require_square(const Eigen::MatrixXd& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch(std::string(who) + ": matrix is " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

void require_index(int i, int n, const char* who) {
  if (i < 0 || i >= n) {
    throw IndexOutOfRange(std::string(who) + ": index " + std::to_string(i) +
                          " outside [0, " + std::to_string(n) + ")");
  }
}

}  // namespace

SymMatrix::SymMatrix(int order) {
  if (order < 1) {
    throw InvalidArgument("SymMatrix: order must be >= 1, got " + std::to_string(order));
  }
  m_ = Eigen::MatrixXd::Zero(order, order);
}

SymMatrix SymMatrix::from_full(const Eigen::MatrixXd& a) {
  require_square(a, "SymMatrix::from_full");
  SymMatrix s(static_cast<int>(a.rows()));
  s.m_ = 0.5 * (a + a.transpose());
  return s;
}

double SymMatrix::operator()(int i, int j) const {
  require_index(i, order(), "SymMatrix");
  require_index(j, order(), "SymMatrix");
  return m_(i, j);
}

void SymMatrix::set(int i, int j, double value) {
  require_index(i, order(), "SymMatrix::set");
  require_index(j, order(), "SymMatrix::set");
  m_(i, j) = value;
  m_(j, i) = value;
}

void SymMatrix::add_outer(double scale, const Eigen::VectorXd& v) {
  if (v.size() != order()) {
    throw DimensionMismatch("SymMatrix::add_outer: vector size " +
                            std::to_string(v.size()) + " vs order " + std::to_string(order()));
  }
  m_.noalias() += scale * v * v.transpose();
}

CholeskyFactor::CholeskyFactor(Eigen::MatrixXd lower) : lower_(std::move(lower)) {
  require_square(lower_, "CholeskyFactor");
}

CholeskyFactor cholesky(const SymMatrix& k) {
  const int n = k.order();
  const Eigen::MatrixXd& a = k.mat();
  const double tol = 1e-14 * a.diagonal().maxCoeff();

  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > tol)) {
      throw NotPositiveDefinite("cholesky: pivot " + std::to_string(d) +
                                " at index " + std::to_string(j) +
                                " below tolerance " + std::to_string(tol));
    }
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
  }
  return CholeskyFactor(std::move(l));
}

Eigen::MatrixXd chol_solve(const CholeskyFactor& factor, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd& l = factor.lower();
  if (b.rows() != factor.order()) {
    throw DimensionMismatch("chol_solve: rhs has " + std::to_string(b.rows()) +
                            " rows, factor order is " + std::to_string(factor.order()));
  }
  Eigen::MatrixXd y = l.triangularView<Eigen::Lower>().solve(b);
  return l.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::VectorXd chol_solve(const CholeskyFactor& factor, const Eigen::VectorXd& b) {
  Eigen::MatrixXd x = chol_solve(factor, Eigen::MatrixXd(b));
  return Eigen::VectorXd(x.col(0));
}

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      s += 2.0 * a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

// One Jacobi rotation zeroing b(p, q), accumulated into v.
void jacobi_rotate(Eigen::MatrixXd& b, Eigen::MatrixXd& v, int p, int q) {
  const double apq = b(p, q);
  if (apq == 0.0) {
    return;
  }
  const double theta = (b(q, q) - b(p, p)) / (2.0 * apq);
  double t;
  if (theta >= 0.0) {
    t = 1.0 / (theta + std::sqrt(theta * theta + 1.0));
  } else {
    t = -1.0 / (-theta + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const int n = static_cast<int>(b.rows());
  const double app = b(p, p);
  const double aqq = b(q, q);
  for (int k = 0; k < n; ++k) {
    if (k == p || k == q) {
      continue;
    }
    const double bkp = b(k, p);
    const double bkq = b(k, q);
    b(k, p) = c * bkp - s * bkq;
    b(p, k) = b(k, p);
    b(k, q) = s * bkp + c * bkq;
    b(q, k) = b(k, q);
  }
  b(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
  b(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
  b(p, q) = 0.0;
  b(q, p) = 0.0;

  for (int k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

EigenDecomposition sym_eig(const SymMatrix& a) {
  const int n = a.order();
  constexpr int kMaxSweeps = 100;

  Eigen::MatrixXd b = a.mat();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  // Drive the off-diagonal mass to the rounding floor; eigenvalue accuracy
  // at this threshold is what keeps finite-difference checks of downstream
  // objectives out of the noise.
  const double threshold =
      20.0 * std::numeric_limits<double>::epsilon() * a.frobenius_norm();

  double off = off_diagonal_norm(b);
  bool converged = off <= threshold;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        jacobi_rotate(b, v, p, q);
      }
    }
    const double next_off = off_diagonal_norm(b);
    // A sweep that no longer shrinks the norm means the floor is reached.
    converged = next_off <= threshold || next_off >= off;
    off = next_off;
  }
  if (!converged) {
    throw NoConvergence("sym_eig: no convergence in " + std::to_string(kMaxSweeps) +
                        " Jacobi sweeps (order " + std::to_string(n) + ")");
  }

  // Descending eigenvalue order; stable sort keeps ties in ascending
  // original-index order.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&b](int i, int j) { return b(i, i) > b(j, j); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int c = 0; c < n; ++c) {
    out.eigenvalues(c) = b(idx[c], idx[c]);
    out.eigenvectors.col(c) = v.col(idx[c]);
    int imax = 0;
    out.eigenvectors.col(c).cwiseAbs().maxCoeff(&imax);
    if (out.eigenvectors(imax, c) < 0.0) {
      out.eigenvectors.col(c) = -out.eigenvectors.col(c);
    }
  }
  return out;
}

namespace {

double check_lse_args(const Eigen::VectorXd& values, double mu, const char* who) {
  if (values.size() == 0) {
    throw EmptyInput(std::string(who) + ": empty input");
  }
  if (!(mu > 0.0)) {
    throw InvalidArgument(std::string(who) + ": mu must be positive, got " +
                          std::to_string(mu));
  }
  return values.maxCoeff();
}

}  // namespace

double log_sum_exp(const Eigen::VectorXd& values, double mu) {
  const double shift = check_lse_args(values, mu, "log_sum_exp");
  const double sum = ((values.array() - shift) / mu).exp().sum();
  return shift + mu * std::log(sum);
}

Eigen::VectorXd softmax_weights(const Eigen::VectorXd& values, double mu) {
  const double shift = check_lse_args(values, mu, "softmax_weights");
  Eigen::ArrayXd w = ((values.array() - shift) / mu).exp();
  return w / w.sum();
}

}  // namespace sapg
