#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "qipm/matrix.hpp"

namespace qipm {

// Primal-dual SDP pair in subspace form. The primal variable is
// S = Σ_k x_k A^(k) − B ⪰ 0, the dual variable Y ⪰ 0 satisfies
// Tr(A^(k) Y) = c_k, and the costs are tied to the dual anchor C through
// c_k = Tr(C A^(k)), so the anchor is itself a dual-feasible point.
struct SdpInstance {
  int n = 1;
  int m = 1;
  std::vector<SymMatrix> constraint_mats;  // A^(1..m), linearly independent
  SymMatrix rhs_mat;                       // B
  SymMatrix dual_anchor;                   // C
  Vector cost_vec;                         // c_k = Tr(C A^(k))
  std::optional<Vector> seed_primal_x;     // S0 = Σ x0_k A^(k) − B
  std::optional<SymMatrix> seed_dual_y;

  void validate() const;  // throws InvalidInput / DimensionMismatch
  Matrix gram() const;    // m×m, G_kl = Tr(A^(k) A^(l))
};

// LP specialization: s = Σ_k x_k a_k − b > 0 entrywise, y > 0 with
// ⟨a_k, y⟩ = c_k.
struct LpInstance {
  int n = 1;
  int m = 1;
  std::vector<Vector> constraint_vecs;  // a_1..a_m in R^n
  Vector rhs_vec;                       // b
  Vector cost_vec;                      // c
  Vector dual_anchor;                   // ⟨a_k, anchor⟩ = c_k
  std::optional<Vector> seed_primal_x;
  std::optional<Vector> seed_primal_s;
  std::optional<Vector> seed_dual_y;

  void validate() const;
  Matrix gram() const;
  Matrix a_cols() const;  // n×m matrix with the a_k as columns
};

// One interior-point iterate. ν is always the stored Tr(SY)/n; Y_inv is a
// cached inverse refreshed after every Y update. drift_primal accumulates
// Σ(dS − d̄S) = B′ − B and drift_dual accumulates Σ(d̄Y − dY) = C′ − C: the
// perturbed data for which the noisy iterates are exactly feasible.
struct IterateState {
  SymMatrix S;
  SymMatrix Y;
  Vector x;
  double nu = 0.0;
  SymMatrix Y_inv;
  SymMatrix drift_primal;
  SymMatrix drift_dual;

  static IterateState make(SymMatrix s, SymMatrix y, Vector coords);
  void refresh_inverse();
  double trace_sy() const { return trace_product(S, Y); }
};

struct LpIterate {
  Vector s;
  Vector y;
  Vector x;
  double nu = 0.0;
  Vector drift_primal;
  Vector drift_dual;

  static LpIterate make(Vector s, Vector y, Vector coords);
};

double duality_gap(const IterateState& state);  // Tr(SY)
// |Tr(SY) − (Tr(CS) + Tr(BC) − Tr(BY))|; zero for exactly feasible pairs.
double gap_identity_residual(const IterateState& state, const SdpInstance& inst);
double dual_residual(const IterateState& state, const SdpInstance& inst);
// min_z ‖S + B − Σ_k z_k A^(k)‖_F via least squares on the vectorized span.
double primal_residual(const IterateState& state, const SdpInstance& inst);

double duality_gap(const LpIterate& state);  // ⟨s, y⟩
double dual_residual(const LpIterate& state, const LpInstance& inst);
double primal_residual(const LpIterate& state, const LpInstance& inst);

// Self-anchored random instance with an exactly on-path seed pair and scaling
// ‖A^(k)‖₂ = 1, ‖B‖₂ ≤ 1. Deterministic per seed.
SdpInstance generate_random_sdp(int n, int m, std::uint64_t seed);
LpInstance generate_random_lp(int n, int m, std::uint64_t seed);

struct WeightedEdge {
  int u = 0;  // 1-based vertex ids
  int v = 0;
  double w = 1.0;
};

// Cut relaxation: B is a quarter of the weighted graph Laplacian, the m = n
// constraints pin diag(Y) = 1, and the dual optimum equals the relaxation
// value. Provides a strictly feasible primal seed only; the solver builds the
// dual side through its inflation phase.
SdpInstance generate_maxcut_sdp(const std::vector<WeightedEdge>& edges,
                                int n_vertices = 0);

// Diagonal embedding of an LP into the SDP form (shared cost vector, seeds
// embedded as diagonal matrices).
SdpInstance lp_embed(const LpInstance& lp);

// Line-oriented instance files (format documented in the README):
//   SDP n m            LP n m
//   A k i j v          a k i v
//   B i j v            b i v
//   C i j v            c k v
//   SEEDX k v          SEEDX k v
//   SEEDY i j v        SEEDY i v
// Matrix entries are upper-triangle (i <= j), 1-based, duplicates rejected.
using AnyInstance = std::variant<SdpInstance, LpInstance>;
AnyInstance read_instance(std::istream& in);
AnyInstance read_instance_file(const std::string& path);
void write_instance(std::ostream& out, const SdpInstance& inst);
void write_instance(std::ostream& out, const LpInstance& inst);
void write_instance_file(const std::string& path, const AnyInstance& inst);

std::vector<WeightedEdge> read_edge_list(std::istream& in, int* n_out);

}  // namespace qipm
