#include "qipm/lifted.hpp"

#include <cmath>

namespace qipm {

namespace {

void check_dense_cap(int n) {
  if (n > kDenseLiftCap)
    throw InvalidInput("dense lifted assembly is limited to dim <= 32");
}

}  // namespace

Vector vec_rm(const Matrix& w) {
  const auto n = w.rows();
  Vector v(n * w.cols());
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j) v(idx++) = w(i, j);
  return v;
}

Matrix unvec_rm(const Vector& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n)
    throw DimensionMismatch("vector length is not n^2");
  Matrix w(n, n);
  Eigen::Index idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = v(idx++);
  return w;
}

Matrix apply_tilde(const SymMatrix& z, const Matrix& w) {
  if (w.rows() != z.dim() || w.cols() != z.dim())
    throw DimensionMismatch("lifted action dimension mismatch");
  return w * z.mat().transpose();
}

Matrix apply_hat(const SymMatrix& z, const Matrix& w) {
  if (w.rows() != z.dim() || w.cols() != z.dim())
    throw DimensionMismatch("lifted action dimension mismatch");
  return z.mat() * w.transpose();
}

Matrix assemble_tilde(const SymMatrix& z) {
  const int n = z.dim();
  check_dense_cap(n);
  Matrix t = Matrix::Zero(static_cast<Eigen::Index>(n) * n,
                          static_cast<Eigen::Index>(n) * n);
  for (int i = 0; i < n; ++i) t.block(i * n, i * n, n, n) = z.mat();
  return t;
}

Matrix assemble_hat(const SymMatrix& z) {
  const int n = z.dim();
  check_dense_cap(n);
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(n) * n,
                          static_cast<Eigen::Index>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) h(i * n + j, j * n + l) = z(i, l);
  return h;
}

Matrix transpose_permutation(int n) {
  check_dense_cap(n);
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(n) * n,
                          static_cast<Eigen::Index>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i * n + j, j * n + i) = 1.0;
  return p;
}

Matrix constraint_operator(const SdpInstance& inst) {
  Matrix a(inst.m, static_cast<Eigen::Index>(inst.n) * inst.n);
  for (int k = 0; k < inst.m; ++k)
    a.row(k) = vec_rm(inst.constraint_mats[k].mat()).transpose();
  return a;
}

Matrix newton_matrix(const SdpInstance& inst, const IterateState& state) {
  const int n = inst.n;
  const int m = inst.m;
  check_dense_cap(n);
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  Matrix mat = Matrix::Zero(nn + m, nn + m);
  for (int k = 0; k < m; ++k)
    mat.col(k).head(nn) =
        vec_rm(inst.constraint_mats[k].mat() * state.Y.mat());
  mat.block(0, m, nn, nn) = assemble_hat(state.S);
  mat.block(nn, m, m, nn) = constraint_operator(inst);
  return mat;
}

Vector newton_rhs(const IterateState& state, double nu_target) {
  const int n = state.S.dim();
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  Vector r = Vector::Zero(nn + state.x.size());
  const Matrix resid = nu_target * Matrix::Identity(n, n) -
                       state.S.mat() * state.Y.mat();
  r.head(nn) = vec_rm(resid);
  return r;
}

Matrix newton_factor_m1(const IterateState& state, int m) {
  const int n = state.Y.dim();
  check_dense_cap(n);
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  Matrix m1 = Matrix::Zero(nn + m, nn + m);
  m1.topLeftCorner(nn, nn) = assemble_tilde(state.Y);
  m1.bottomRightCorner(m, m) = Matrix::Identity(m, m);
  return m1;
}

Matrix newton_factor_m2(const SdpInstance& inst, const IterateState& state) {
  const int n = inst.n;
  const int m = inst.m;
  check_dense_cap(n);
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  Matrix m2 = Matrix::Zero(nn + m, nn + m);
  for (int k = 0; k < m; ++k)
    m2.col(k).head(nn) = vec_rm(inst.constraint_mats[k].mat());
  // tilde(Y⁻¹)·hat(S) has entry ((i,j),(k,l)) = Y⁻¹_jk · S_il.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          m2(i * n + j, m + k * n + l) = state.Y_inv(j, k) * state.S(i, l);
  m2.block(nn, m, m, nn) = constraint_operator(inst);
  return m2;
}

Matrix newton_factor_m3(const SdpInstance& inst) {
  const int n = inst.n;
  const int m = inst.m;
  check_dense_cap(n);
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  Matrix m3 = Matrix::Zero(2 * nn, nn + m);
  for (int k = 0; k < m; ++k)
    m3.col(k).head(nn) = vec_rm(inst.constraint_mats[k].mat());
  m3.bottomRightCorner(nn, nn) = Matrix::Identity(nn, nn);
  return m3;
}

Vector m3_expand(const Vector& dx, const SymMatrix& dy,
                 const SdpInstance& inst) {
  if (dx.size() != inst.m || dy.dim() != inst.n)
    throw DimensionMismatch("expansion dimension mismatch");
  Matrix ds = Matrix::Zero(inst.n, inst.n);
  for (int k = 0; k < inst.m; ++k)
    ds += dx(k) * inst.constraint_mats[k].mat();
  Vector out(2 * static_cast<Eigen::Index>(inst.n) * inst.n);
  out << vec_rm(ds), vec_rm(dy.mat());
  return out;
}

NewtonFactors factorize(const SdpInstance& inst, const IterateState& state) {
  if (!is_positive_definite(state.Y))
    throw NotPositiveDefinite("factorization needs Y positive definite");
  NewtonFactors f;
  f.m1 = newton_factor_m1(state, inst.m);
  f.m2 = newton_factor_m2(inst, state);
  f.m3 = newton_factor_m3(inst);
  f.constraint_rows = constraint_operator(inst);
  f.mu1 = mu_m1(state.Y);
  f.mu2 = mu_m2(inst, state.S, state.Y_inv);
  f.mu3 = mu_m3(inst);
  return f;
}

double mu_m1(const SymMatrix& y) {
  const int n = y.dim();
  // Every row of tilde(Y) is a row of Y padded with zeros, so only the
  // Frobenius candidate feels the lift.
  double best = std::sqrt(static_cast<double>(n)) * y.mat().norm();
  for (double p : default_p_grid()) {
    const double s1 = max_row_power_sum(y.mat(), 2.0 * p);
    const double s2 = max_row_power_sum(y.mat(), 1.0 - 2.0 * p);
    const double cand = std::sqrt(s1 * s2);
    if (std::isfinite(cand)) best = std::min(best, cand);
  }
  return best;
}

double mu_m2(const SdpInstance& inst, const SymMatrix& s,
             const SymMatrix& y_inv) {
  double a2 = 0.0;
  for (const auto& a : inst.constraint_mats) a2 += a.mat().squaredNorm();
  // ‖tilde(Y⁻¹)·hat(S)‖_F factorizes: Σ (Y⁻¹_jk)²(S_il)² = ‖Y⁻¹‖²_F ‖S‖²_F.
  return std::sqrt(2.0 * a2 + y_inv.mat().squaredNorm() * s.mat().squaredNorm());
}

double mu_m3(const SdpInstance& inst) {
  const int n = inst.n;
  const int m = inst.m;
  double a2 = 0.0;
  for (const auto& a : inst.constraint_mats) a2 += a.mat().squaredNorm();
  double best = std::sqrt(a2 + static_cast<double>(n) * n);
  for (double p : default_p_grid()) {
    // Rows of [[Aᵀ,0],[0,I]] read across the constraints at one fixed entry;
    // columns read one whole constraint matrix.
    double row_best = 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < m; ++k) {
          const double v = std::abs(inst.constraint_mats[k](i, j));
          if (v > 0.0) s += std::pow(v, 2.0 * p);
        }
        row_best = std::max(row_best, s);
      }
    double col_best = 1.0;
    for (int k = 0; k < m; ++k)
      col_best = std::max(
          col_best,
          max_row_power_sum(vec_rm(inst.constraint_mats[k].mat()).transpose(),
                            1.0 - 2.0 * p));
    const double cand = std::sqrt(row_best * col_best);
    if (std::isfinite(cand)) best = std::min(best, cand);
  }
  return best;
}

double mu_m1_lp(const Vector& y) { return mu_factor(SymMatrix::Diagonal(y)); }

double mu_m2_lp(const LpInstance& inst, const Vector& s, const Vector& y) {
  double acc = 0.0;
  for (const auto& a : inst.constraint_vecs) acc += a.squaredNorm();
  return std::sqrt(2.0 * acc + (s.array() / y.array()).square().sum());
}

double mu_m3_lp(const LpInstance& inst) {
  const int n = inst.n;
  const int m = inst.m;
  Matrix m3 = Matrix::Zero(2 * n, m + n);
  m3.topLeftCorner(n, m) = inst.a_cols();
  m3.bottomRightCorner(n, n) = Matrix::Identity(n, n);
  return mu_factor_general(m3);
}

}  // namespace qipm
