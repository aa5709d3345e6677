#include "qipm/newton.hpp"

#include <cmath>

namespace qipm {

namespace {

void check_invertible(const Matrix& m, const char* what) {
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > kSingularTol * sv(0)))
    throw SingularNewtonMatrix(std::string(what) +
                               " is numerically singular");
}

double positive_sv_ratio(const Matrix& w) {
  Eigen::BDCSVD<Matrix> svd(w);
  const auto& sv = svd.singularValues();
  const double top = sv(0);
  if (!(top > 0.0))
    throw SingularNewtonMatrix("conditioning target has no positive singular values");
  double smin = top;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kSingularTol * top) smin = sv(i);  // values sorted descending
  return top / smin;
}

double kappa_from(const Matrix& m, const Matrix& m3) {
  Eigen::PartialPivLU<Matrix> lu(m.transpose());
  const Matrix w_t = lu.solve(Matrix(m3.transpose()));  // W·M = M3
  return positive_sv_ratio(w_t.transpose());
}

NewtonSolution unpack(const SdpInstance& inst, const IterateState& state,
                      double nu_target, const Vector& z) {
  const int n = inst.n;
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  NewtonSolution sol;
  sol.dx = z.head(inst.m);
  const Matrix raw = unvec_rm(z.tail(nn), n);
  const double raw_norm = raw.norm();
  sol.dY_asymmetry = (raw - raw.transpose()).norm() / std::max(1.0, raw_norm);
  sol.dY = SymMatrix::Symmetrized(raw);

  Matrix ds = Matrix::Zero(n, n);
  for (int k = 0; k < inst.m; ++k)
    ds += sol.dx(k) * inst.constraint_mats[k].mat();
  sol.dS = SymMatrix(ds);

  const Matrix resid = sol.dS.mat() * state.Y.mat() +
                       state.S.mat() * sol.dY.mat() -
                       (nu_target * Matrix::Identity(n, n) -
                        state.S.mat() * state.Y.mat());
  sol.residual = resid.norm();
  sol.norm_dSdY = std::sqrt(sol.dS.mat().squaredNorm() +
                            sol.dY.mat().squaredNorm());
  return sol;
}

}  // namespace

NewtonSolution solve_exact(const SdpInstance& inst, const IterateState& state,
                           double nu_target) {
  const int n = inst.n;
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  const Matrix m = newton_matrix(inst, state);
  check_invertible(m, "Newton system matrix");

  // blkdiag(tilde(Y), I)⁻¹ acts as R ↦ R·Y⁻¹ on the lifted block.
  const Matrix r_mat = nu_target * Matrix::Identity(n, n) -
                       state.S.mat() * state.Y.mat();
  Vector w = Vector::Zero(nn + inst.m);
  w.head(nn) = vec_rm(r_mat * state.Y_inv.mat());

  const Matrix m2 = newton_factor_m2(inst, state);
  Eigen::PartialPivLU<Matrix> lu(m2);
  Vector z = lu.solve(w);
  z += lu.solve(Vector(w - m2 * z));

  NewtonSolution sol = unpack(inst, state, nu_target, z);
  sol.kappa_pipeline = kappa_from(m, newton_factor_m3(inst));
  return sol;
}

NewtonSolution solve_dense(const SdpInstance& inst, const IterateState& state,
                           double nu_target) {
  const Matrix m = newton_matrix(inst, state);
  check_invertible(m, "Newton system matrix");
  const Vector r = newton_rhs(state, nu_target);
  Eigen::PartialPivLU<Matrix> lu(m);
  Vector z = lu.solve(r);
  z += lu.solve(Vector(r - m * z));
  NewtonSolution sol = unpack(inst, state, nu_target, z);
  sol.kappa_pipeline = kappa_from(m, newton_factor_m3(inst));
  return sol;
}

LpNewtonSolution solve_lp(const LpInstance& inst, const LpIterate& state,
                          double nu_target) {
  const int n = inst.n;
  const int m = inst.m;
  if ((state.s.array() <= 0.0).any() || (state.y.array() <= 0.0).any())
    throw NotPositiveDefinite("LP step needs entrywise positive s and y");

  const Matrix a_cols = inst.a_cols();

  Matrix sys = Matrix::Zero(n + m, m + n);
  sys.topLeftCorner(n, m) = state.y.asDiagonal() * a_cols;
  sys.topRightCorner(n, n) = Matrix(state.s.asDiagonal());
  sys.bottomRightCorner(m, n) = a_cols.transpose();
  check_invertible(sys, "LP Newton system matrix");

  const Vector r1 = Vector::Constant(n, nu_target) -
                    state.s.cwiseProduct(state.y);

  // Factored solve: peel off blkdiag(diag(y), I), then LU the second factor.
  Matrix m2 = Matrix::Zero(n + m, m + n);
  m2.topLeftCorner(n, m) = a_cols;
  m2.topRightCorner(n, n) = Matrix(state.s.cwiseQuotient(state.y).asDiagonal());
  m2.bottomRightCorner(m, n) = a_cols.transpose();
  Vector w = Vector::Zero(n + m);
  w.head(n) = r1.cwiseQuotient(state.y);

  Eigen::PartialPivLU<Matrix> lu(m2);
  Vector z = lu.solve(w);
  z += lu.solve(Vector(w - m2 * z));

  LpNewtonSolution sol;
  sol.dx = z.head(m);
  sol.dy = z.tail(n);
  sol.ds = a_cols * sol.dx;
  const Vector row1 = sol.ds.cwiseProduct(state.y) +
                      state.s.cwiseProduct(sol.dy) - r1;
  const Vector row2 = a_cols.transpose() * sol.dy;
  sol.residual = std::sqrt(row1.squaredNorm() + row2.squaredNorm());
  sol.norm_dsdy = std::sqrt(sol.ds.squaredNorm() + sol.dy.squaredNorm());

  Matrix m3 = Matrix::Zero(2 * n, m + n);
  m3.topLeftCorner(n, m) = a_cols;
  m3.bottomRightCorner(n, n) = Matrix::Identity(n, n);
  sol.kappa_pipeline = kappa_from(sys, m3);
  return sol;
}

double kappa_pipeline(const SdpInstance& inst, const IterateState& state) {
  const Matrix m = newton_matrix(inst, state);
  check_invertible(m, "Newton system matrix");
  return kappa_from(m, newton_factor_m3(inst));
}

double kappa_pipeline_lp(const LpInstance& inst, const LpIterate& state) {
  const int n = inst.n;
  const int m = inst.m;
  const Matrix a_cols = inst.a_cols();
  Matrix sys = Matrix::Zero(n + m, m + n);
  sys.topLeftCorner(n, m) = state.y.asDiagonal() * a_cols;
  sys.topRightCorner(n, n) = Matrix(state.s.asDiagonal());
  sys.bottomRightCorner(m, n) = a_cols.transpose();
  check_invertible(sys, "LP Newton system matrix");
  Matrix m3 = Matrix::Zero(2 * n, m + n);
  m3.topLeftCorner(n, m) = a_cols;
  m3.bottomRightCorner(n, n) = Matrix::Identity(n, n);
  return kappa_from(sys, m3);
}

}  // namespace qipm
