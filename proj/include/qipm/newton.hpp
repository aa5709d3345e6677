#pragma once

#include "qipm/lifted.hpp"

namespace qipm {

// Exact solution of the search-direction system
//   dS·Y + S·dY = ν′I − SY,   dS = Σ_k dx_k A^(k),   Tr(A^(k) dY) = 0,
// which is unique whenever the assembled system matrix is invertible. The
// recovered dY block is symmetric up to roundoff; the deviation of the raw
// solve is reported, not silently corrected away.
struct NewtonSolution {
  Vector dx;
  SymMatrix dS;
  SymMatrix dY;
  double residual = 0.0;        // ‖dS·Y + S·dY − (ν′I − SY)‖_F
  double dY_asymmetry = 0.0;    // ‖raw − rawᵀ‖_F / max(1, ‖raw‖_F)
  double kappa_pipeline = 1.0;  // κ(M3·M⁻¹), positive singular values only
  double norm_dSdY = 0.0;       // ‖dS ⊕ dY‖_F
};

// Factored path: apply blkdiag(tilde(Y), I)⁻¹ implicitly, then LU on M2.
NewtonSolution solve_exact(const SdpInstance& inst, const IterateState& state,
                           double nu_target);
// Reference path: one dense LU on the assembled system matrix.
NewtonSolution solve_dense(const SdpInstance& inst, const IterateState& state,
                           double nu_target);

struct LpNewtonSolution {
  Vector dx;
  Vector ds;
  Vector dy;
  double residual = 0.0;
  double kappa_pipeline = 1.0;
  double norm_dsdy = 0.0;  // ‖ds ⊕ dy‖₂
};

// Diagonal specialization: ds ⊙ y + s ⊙ dy = ν′1 − s ⊙ y with ds in the
// span of the constraint vectors and dy orthogonal to them.
LpNewtonSolution solve_lp(const LpInstance& inst, const LpIterate& state,
                          double nu_target);

// Ratio of extreme positive singular values of M3·M⁻¹ (singular values below
// kSingularTol·σ_max count as the structural zeros of the rectangular M3).
double kappa_pipeline(const SdpInstance& inst, const IterateState& state);
double kappa_pipeline_lp(const LpInstance& inst, const LpIterate& state);

}  // namespace qipm
