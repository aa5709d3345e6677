#pragma once

#include <Eigen/Dense>
#include <span>

#include "qipm/errors.hpp"

namespace qipm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense real symmetric matrix. The constructor insists on exact (bitwise)
// symmetry so asymmetry bugs surface at the boundary where a matrix is built,
// not deep inside the solver; use Symmetrized() for numerically computed input.
class SymMatrix {
 public:
  SymMatrix() : mat_(Matrix::Zero(1, 1)) {}
  explicit SymMatrix(Matrix entries);

  static SymMatrix Symmetrized(const Matrix& raw);
  static SymMatrix Identity(int n);
  static SymMatrix Zero(int n);
  static SymMatrix Diagonal(const Vector& diag);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& mat() const { return mat_; }
  double operator()(int i, int j) const { return mat_(i, j); }

  SymMatrix scaled(double a) const { return SymMatrix(Matrix(a * mat_)); }
  SymMatrix plus(const SymMatrix& other) const;
  SymMatrix minus(const SymMatrix& other) const;

 private:
  Matrix mat_;
};

struct Spectrum {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal columns, A = V diag(w) Vᵀ
};

// Relative floor under which a singular value / eigenvalue counts as zero.
inline constexpr double kSingularTol = 1e-12;

std::span<const double> default_p_grid();  // {0.0, 0.1, ..., 1.0}

Spectrum spectrum(const SymMatrix& a);
double frobenius_norm(const SymMatrix& a);
double spectral_norm(const SymMatrix& a);
double min_eigenvalue(const SymMatrix& a);
double max_eigenvalue(const SymMatrix& a);
bool is_positive_definite(const SymMatrix& a);

// Ratio of extreme singular values; SingularMatrix when the smallest is below
// kSingularTol times the largest.
double condition_number(const SymMatrix& a);

// s_p(A) = max_i Σ_j |A_ij|^p taken over nonzero entries (0^p := 0).
double max_row_power_sum(const Matrix& a, double p);

// Sparsity-weighted norm bound min(‖A‖_F, min_p √(s_{2p}(A)·s_{1−2p}(Aᵀ))).
double mu_factor(const SymMatrix& a,
                 std::span<const double> p_grid = default_p_grid());
double mu_factor_general(const Matrix& a,
                         std::span<const double> p_grid = default_p_grid());

double log_barrier(const SymMatrix& x);  // −log det X, X ≻ 0

// ‖I − ν⁻¹ S^{1/2} Y S^{1/2}‖_F, the scaled distance of (S, Y) from the point
// of the central path with parameter ν. Both arguments must be PD, ν > 0.
double central_path_distance(const SymMatrix& s, const SymMatrix& y, double nu);

double trace_product(const SymMatrix& a, const SymMatrix& b);

SymMatrix sqrt_pd(const SymMatrix& a);
// LU inverse with one iterative-refinement pass; result exactly symmetric.
SymMatrix inverse_sym(const SymMatrix& a);

}  // namespace qipm
