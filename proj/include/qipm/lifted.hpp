#pragma once

#include "qipm/instance.hpp"

namespace qipm {

// Largest dimension for which the n²-row lifted matrices are assembled
// densely; beyond it only the implicit actions and closed-form factors apply.
inline constexpr int kDenseLiftCap = 32;

// Row-major vectorization: entry (i, j) lands at position n·i + j.
Vector vec_rm(const Matrix& w);
Matrix unvec_rm(const Vector& v, int n);

// Implicit actions of the two lifts in matrix form, O(n³):
//   tilde(Z)·vec(W) = vec(W Zᵀ)   (left factor pattern I ⊗ Z)
//   hat(Z)·vec(W)   = vec(Z Wᵀ)   (tilde with its row blocks transposed)
Matrix apply_tilde(const SymMatrix& z, const Matrix& w);
Matrix apply_hat(const SymMatrix& z, const Matrix& w);

// Dense n²×n² lifts; throw InvalidInput above kDenseLiftCap.
Matrix assemble_tilde(const SymMatrix& z);
Matrix assemble_hat(const SymMatrix& z);
// Permutation with P·vec(W) = vec(Wᵀ); hat(Z) = P·tilde(Z).
Matrix transpose_permutation(int n);

// m×n² matrix whose k-th row is vec(A^(k))ᵀ.
Matrix constraint_operator(const SdpInstance& inst);

// Dense Newton system for the unknown (dx ∘ vec(dY)) ∈ R^{m+n²}:
//   [ tilde(Y)·Aᵀ   hat(S) ] (dx    )   ( vec(ν′I − SY) )
//   [      0          A    ] (vec dY) = (       0       )
// whose unique solution has dY symmetric and dS = Σ dx_k A^(k).
Matrix newton_matrix(const SdpInstance& inst, const IterateState& state);
Vector newton_rhs(const IterateState& state, double nu_target);

// Factorization M = M1 · M2 and the expansion M3 : (dx ∘ dY) → (dS ∘ dY):
//   M1 = blkdiag(tilde(Y), I_m)
//   M2 = [[Aᵀ, tilde(Y⁻¹)·hat(S)], [0, A]]
//   M3 = [[Aᵀ, 0], [0, I_{n²}]]
Matrix newton_factor_m1(const IterateState& state, int m);
Matrix newton_factor_m2(const SdpInstance& inst, const IterateState& state);
Matrix newton_factor_m3(const SdpInstance& inst);

// (vec(Σ_k dx_k A^(k)) ∘ vec(dY)), the image of M3.
Vector m3_expand(const Vector& dx, const SymMatrix& dy,
                 const SdpInstance& inst);

struct NewtonFactors {
  Matrix m1;
  Matrix m2;
  Matrix m3;
  Matrix constraint_rows;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
};
NewtonFactors factorize(const SdpInstance& inst, const IterateState& state);

// Closed-form sparsity-weighted norm bounds used by the cost ledger, computed
// from n-dimensional data without assembling anything n²-sized. μ(M1) is
// defined through the nontrivial block as μ(tilde(Y)); μ(M2) uses the
// Frobenius candidate only.
double mu_m1(const SymMatrix& y);
double mu_m2(const SdpInstance& inst, const SymMatrix& s,
             const SymMatrix& y_inv);
double mu_m3(const SdpInstance& inst);

// Vector-problem analogues: M1's nontrivial block is diag(y), M2 keeps the
// Frobenius candidate, M3 = [[A, 0], [0, I_n]] is assembled densely.
double mu_m1_lp(const Vector& y);
double mu_m2_lp(const LpInstance& inst, const Vector& s, const Vector& y);
double mu_m3_lp(const LpInstance& inst);

}  // namespace qipm
