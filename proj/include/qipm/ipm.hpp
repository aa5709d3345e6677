#pragma once

#include <iosfwd>
#include <vector>

#include "qipm/qsim.hpp"

namespace qipm {

enum class Mode { exact, quantum_sim };

// Scaling of the per-step error budget: γ=1 yields a final data perturbation
// relative to ‖B⊕C‖_F, γ=√T an absolute one.
enum class GammaRegime { relative, absolute };

enum class Termination { converged, max_iters };

struct RunConfig {
  Mode mode = Mode::exact;
  double eps = 1e-6;   // target duality gap Tr(SY)
  double xi = 0.01;    // per-step Frobenius solve-error budget
  double eta = 0.1;    // path-distance bound
  double chi = 0.1;    // ν shrink: ν′ = (1 − χ/√n)ν
  GammaRegime gamma = GammaRegime::relative;
  int max_iters = 2000;
  NoiseConfig noise;   // quantum_sim knobs; rng_seed doubles as the run seed
  bool audit = true;   // throw AuditFailure on a violated per-step clause
  bool delta_from_noisy_norm = false;  // size δ from a noisy ‖step‖ estimate
  bool nominal_nu_update = false;      // keep ν at the nominal ν′ after a step
  bool compute_ledger = true;          // per-iteration μ/κ diagnostics

  void validate() const;  // 0 < χ ≤ η ≤ 0.1; ξ ≤ 0.01 when auditing; ε > 0
};

// Everything measured during one iteration: the entry state, the exact step,
// noise bookkeeping, the exit state, and the audit outcomes. Vector problems
// reuse the matrix names (λ_min means min s_i, ‖Y⊕Y⁻¹‖₂ means max(y_max,
// 1/y_min), and so on).
struct IterationRecord {
  int iter = 0;
  double nu = 0.0;            // entry ν
  double trace_sy = 0.0;      // entry Tr(SY)
  double dist = 0.0;          // entry d(S, Y, ν)
  double lambda_min_s = 0.0;
  double lambda_min_y = 0.0;
  double norm_step = 0.0;     // ‖dS ⊕ dY‖_F of the exact step
  double ysum_norm = 0.0;     // ‖Y ⊕ Y⁻¹‖₂
  double kappa_ysum = 0.0;    // κ(Y ⊕ Y⁻¹)
  double kappa_y = 0.0;       // κ(Y) = λ_max/λ_min
  double mu1 = 0.0;           // block-encoding factors of the step's factors
  double mu2 = 0.0;
  double mu3 = 0.0;
  double kappa_pipeline = 0.0;  // κ(M3·M⁻¹)
  double delta_used = 0.0;      // tomography precision (0 in exact mode)
  long long shots = 0;          // per-phase shot target after capping
  bool shots_capped = false;
  double step_error_primal = 0.0;  // ‖d̄S − dS‖_F
  double step_error_dual = 0.0;    // ‖d̄Y − dY‖_F
  double step_bound_primal = 0.0;  // ξ/(γ‖Y‖₂)
  double step_bound_dual = 0.0;    // ξ/(γ‖Y⁻¹‖₂)
  double alpha_observed = 0.0;     // √n·(1 − Tr(S̄Ȳ)/Tr(SY))
  double alpha_budget = 0.0;       // noise allowance widening the α window
  double nu_exit = 0.0;
  double dist_exit = 0.0;       // d(S̄, Ȳ, ν̄)
  double primal_resid = 0.0;    // exit-state residuals against the input data
  double dual_resid = 0.0;
  bool audit_step = true;       // per-step errors within their ξ/γ bounds
  bool audit_pd = true;         // S̄, Ȳ ≻ 0
  bool audit_dist = true;       // d(S̄, Ȳ, ν̄) ≤ η
  bool audit_alpha = true;      // α_observed within [0.001, 0.1] ± allowance
};

// Simulated-quantum cost accounting: one row per iteration,
// (μ1+μ2+μ3)·κ(M3M⁻¹)·κ(Y⊕Y⁻¹)², an aggregate with the dimensional
// multiplier, and the per-row step-size inequality
// ‖dS⊕dY‖_F·‖Y⊕Y⁻¹‖₂ ≤ κ(Y⊕Y⁻¹)/4 checked where it applies (rows from
// exact solves whose entry ν is at most 1.3; the bound's derivation lives in
// the near-path ν ≈ 1 regime and fails for inflated ν).
struct CostLedger {
  std::vector<double> rows;
  double multiplier = 0.0;  // n²/ξ² (matrix case) or n/ξ² (vector case)
  double aggregate = 0.0;   // multiplier · Σ rows
  std::vector<double> eq_lhs;
  std::vector<double> eq_rhs;
  std::vector<int> eq_applicable;
  bool eq_all_ok = true;
};

CostLedger cost_ledger(const std::vector<IterationRecord>& trace, int n,
                       double xi, bool vector_case);

struct StepResult {
  IterateState state;
  IterationRecord record;
  Matrix diff_primal;  // dS − d̄S, the per-step primal data perturbation
  Matrix diff_dual;    // d̄Y − dY
};

struct LpStepResult {
  LpIterate state;
  IterationRecord record;
  Vector diff_primal;  // ds − d̄s
  Vector diff_dual;    // d̄y − dy
};

// One path-following step at target ν′ = (1 − χ/√n)ν. Preconditions
// d(S,Y,ν) ≤ η and S,Y ≻ 0 are enforced. The returned state carries the
// accumulated drift; x always advances by the exact dx.
StepResult step(const SdpInstance& inst, const IterateState& state,
                const RunConfig& cfg, double gamma_value = 1.0,
                int iter_index = 0);
LpStepResult step_lp(const LpInstance& inst, const LpIterate& state,
                     const RunConfig& cfg, double gamma_value = 1.0,
                     int iter_index = 0);

struct RunResult {
  IterateState final_state;
  std::vector<IterationRecord> trace;
  CostLedger ledger;
  Termination termination = Termination::converged;
  int iterations = 0;
  int planned_iterations = 0;  // ⌈10√n·ln(Tr(S₀Y₀)/ε)⌉ capped at max_iters
  double gamma_value = 1.0;
  double bc_norm = 0.0;      // ‖B ⊕ C‖_F of the input data
  double drift_norm = 0.0;   // ‖(B′−B) ⊕ (C′−C)‖_F at exit
  double drift_bound = 0.0;  // ξ (absolute regime) or ξ‖B⊕C‖_F (relative)
  bool drift_ok = true;
  int audit_warnings = 0;    // soft-mode audit clause failures
  std::vector<Matrix> step_diffs_primal;  // per-step dS − d̄S
  std::vector<Matrix> step_diffs_dual;    // per-step d̄Y − dY
};

struct LpRunResult {
  LpIterate final_state;
  std::vector<IterationRecord> trace;
  CostLedger ledger;
  Termination termination = Termination::converged;
  int iterations = 0;
  int planned_iterations = 0;
  double gamma_value = 1.0;
  double bc_norm = 0.0;
  double drift_norm = 0.0;
  double drift_bound = 0.0;
  bool drift_ok = true;
  int audit_warnings = 0;
  std::vector<Vector> step_diffs_primal;
  std::vector<Vector> step_diffs_dual;
};

// Seeded instances are verified (positive definiteness, then d(S,Y,ν) ≤ η);
// with only primal coordinates the strictly feasible T = Σx_kA^(k) − B is
// inflated along its self-anchored path (dual anchor T⁻¹, ν growing by
// 1 + χ/√n per step) until the re-anchored candidate Y₀ = C + (Y − T⁻¹)
// is positive definite and within η/2 of the path, re-centering at fixed ν
// when plain inflation stalls short of that.
IterateState find_initial_point(const SdpInstance& inst, const RunConfig& cfg);
LpIterate find_initial_point_lp(const LpInstance& inst, const RunConfig& cfg);

RunResult run(const SdpInstance& inst, const RunConfig& cfg);
LpRunResult run_lp(const LpInstance& inst, const RunConfig& cfg);

// Vector-problem path distance ‖1 − (s ∘ y)/ν‖₂, the diagonal specialization
// of d(S, Y, ν).
double lp_path_distance(const Vector& s, const Vector& y, double nu);

// Exact-mode utility: follow the path from the state's ν to nu_target in
// 1 ± χ/√n increments, then keep taking fixed-ν centering steps until
// d(S,Y,nu_target) ≤ dist_tol. Throws PathDistanceViolation if the distance
// stalls above the tolerance or max_steps runs out.
IterateState drive_to_nu(const SdpInstance& inst, IterateState state,
                         double nu_target, double dist_tol = 1e-8,
                         double eta = 0.1, double chi = 0.1,
                         int max_steps = 4000);

// Column orders documented in the README; %.17g throughout, booleans as 0/1.
void write_trace_csv(std::ostream& out,
                     const std::vector<IterationRecord>& trace);
void write_ledger_csv(std::ostream& out, const CostLedger& ledger);

}  // namespace qipm
