#include "qipm/matrix.hpp"

#include <array>
#include <cmath>

namespace qipm {

SymMatrix::SymMatrix(Matrix entries) : mat_(std::move(entries)) {
  if (mat_.rows() < 1 || mat_.rows() != mat_.cols())
    throw DimensionMismatch("symmetric matrix must be square with dim >= 1");
  if ((mat_.array() != mat_.transpose().array()).any())
    throw InvalidInput("matrix entries are not exactly symmetric");
}

SymMatrix SymMatrix::Symmetrized(const Matrix& raw) {
  if (raw.rows() != raw.cols())
    throw DimensionMismatch("cannot symmetrize a non-square matrix");
  return SymMatrix(Matrix(0.5 * (raw + raw.transpose())));
}

SymMatrix SymMatrix::Identity(int n) {
  return SymMatrix(Matrix(Matrix::Identity(n, n)));
}

SymMatrix SymMatrix::Zero(int n) { return SymMatrix(Matrix(Matrix::Zero(n, n))); }

SymMatrix SymMatrix::Diagonal(const Vector& diag) {
  return SymMatrix(Matrix(diag.asDiagonal()));
}

SymMatrix SymMatrix::plus(const SymMatrix& other) const {
  if (dim() != other.dim()) throw DimensionMismatch("dimension mismatch in add");
  return SymMatrix(Matrix(mat_ + other.mat_));
}

SymMatrix SymMatrix::minus(const SymMatrix& other) const {
  if (dim() != other.dim()) throw DimensionMismatch("dimension mismatch in sub");
  return SymMatrix(Matrix(mat_ - other.mat_));
}

std::span<const double> default_p_grid() {
  static const std::array<double, 11> grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                              0.6, 0.7, 0.8, 0.9, 1.0};
  return grid;
}

Spectrum spectrum(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat());
  if (es.info() != Eigen::Success)
    throw SingularMatrix("eigendecomposition failed to converge");
  return Spectrum{es.eigenvalues(), es.eigenvectors()};
}

namespace {

Vector eigenvalues_only(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw SingularMatrix("eigendecomposition failed to converge");
  return es.eigenvalues();
}

}  // namespace

double max_row_power_sum(const Matrix& a, double p) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double v = std::abs(a(i, j));
      if (v > 0.0) s += std::pow(v, p);
    }
    best = std::max(best, s);
  }
  return best;
}

double frobenius_norm(const SymMatrix& a) { return a.mat().norm(); }

double spectral_norm(const SymMatrix& a) {
  const Vector w = eigenvalues_only(a);
  return std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
}

double min_eigenvalue(const SymMatrix& a) { return eigenvalues_only(a)(0); }

double max_eigenvalue(const SymMatrix& a) {
  const Vector w = eigenvalues_only(a);
  return w(w.size() - 1);
}

bool is_positive_definite(const SymMatrix& a) {
  const Vector w = eigenvalues_only(a);
  const double top = std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
  return w(0) > kSingularTol * std::max(1.0, top);
}

double condition_number(const SymMatrix& a) {
  const Vector w = eigenvalues_only(a);
  const double smax = w.cwiseAbs().maxCoeff();
  const double smin = w.cwiseAbs().minCoeff();
  if (smin <= kSingularTol * smax)
    throw SingularMatrix("condition number of a numerically singular matrix");
  return smax / smin;
}

double mu_factor_general(const Matrix& a, std::span<const double> p_grid) {
  if (p_grid.empty()) throw InvalidInput("mu factor needs a nonempty p grid");
  double best = a.norm();
  const Matrix at = a.transpose();
  for (double p : p_grid) {
    const double s1 = max_row_power_sum(a, 2.0 * p);
    const double s2 = max_row_power_sum(at, 1.0 - 2.0 * p);
    const double cand = std::sqrt(s1 * s2);
    if (std::isfinite(cand)) best = std::min(best, cand);
  }
  return best;
}

double mu_factor(const SymMatrix& a, std::span<const double> p_grid) {
  return mu_factor_general(a.mat(), p_grid);
}

double log_barrier(const SymMatrix& x) {
  const Vector w = eigenvalues_only(x);
  const double top = std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
  if (!(w(0) > kSingularTol * std::max(1.0, top)))
    throw NotPositiveDefinite("log barrier needs a positive definite argument");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) sum += std::log(w(i));
  return -sum;
}

double trace_product(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("trace product dimension mismatch");
  return (a.mat() * b.mat()).trace();
}

SymMatrix sqrt_pd(const SymMatrix& a) {
  const Spectrum sp = spectrum(a);
  const double top = std::max(std::abs(sp.eigenvalues(0)),
                              std::abs(sp.eigenvalues(sp.eigenvalues.size() - 1)));
  if (!(sp.eigenvalues(0) > kSingularTol * std::max(1.0, top)))
    throw NotPositiveDefinite("matrix square root needs a PD argument");
  const Vector r = sp.eigenvalues.cwiseSqrt();
  return SymMatrix::Symmetrized(sp.eigenvectors * r.asDiagonal() *
                                sp.eigenvectors.transpose());
}

SymMatrix inverse_sym(const SymMatrix& a) {
  const int n = a.dim();
  Eigen::PartialPivLU<Matrix> lu(a.mat());
  Matrix x = lu.inverse();
  // One refinement pass tightens ‖AX − I‖ toward machine precision.
  x += x * (Matrix::Identity(n, n) - a.mat() * x);
  const double resid = (a.mat() * x - Matrix::Identity(n, n)).norm();
  if (!std::isfinite(resid) || resid > 1e-8 * n)
    throw SingularMatrix("matrix inverse residual too large");
  return SymMatrix::Symmetrized(x);
}

double central_path_distance(const SymMatrix& s, const SymMatrix& y, double nu) {
  if (s.dim() != y.dim())
    throw DimensionMismatch("central path distance dimension mismatch");
  if (!(nu > 0.0)) throw InvalidInput("central path parameter must be positive");
  if (!is_positive_definite(s) || !is_positive_definite(y))
    throw NotPositiveDefinite("central path distance needs PD iterates");
  const Matrix rt = sqrt_pd(s).mat();
  const Matrix inner = Matrix::Identity(s.dim(), s.dim()) -
                       (1.0 / nu) * (rt * y.mat() * rt);
  return inner.norm();
}

}  // namespace qipm
