#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qipm/newton.hpp"

namespace qipm {

// Knobs of the simulated measurement pipeline. delta is the precision the
// shot counts are sized for (N = shot_constant·d·ln d / δ² per phase).
struct NoiseConfig {
  double delta = 0.1;
  double shot_constant = 36.0;
  double sign_threshold = 0.4;   // accept sign +1 when n(0,i) > 0.4·p̂_i·N
  double norm_rel_err = 0.0;     // uniform relative error of norm estimates
  std::uint64_t rng_seed = 0;
  bool strict = false;           // throw instead of flagging a failed bound
  bool fast_gaussian = false;    // model-level Gaussian shortcut, no sampling
  long long shot_cap = 100'000'000;

  void validate() const;  // delta ∈ (0,1), threshold ∈ (0,0.5), constant ≥ 1
};

struct TomographyReport {
  Vector estimate;            // unit vector, σ_i·√(p̂_i)
  long long shots_amplitude = 0;
  long long shots_sign = 0;
  Vector p_hat;               // empirical amplitude-squared frequencies
  std::vector<int> signs;     // ±1 per coordinate
  double delta = 0.0;           // precision the shots were sized for
  double achieved_error = 0.0;  // ‖estimate − truth‖₂
  bool success = false;         // achieved_error ≤ √7·δ
  bool capped = false;          // shot budget hit shot_cap
  bool model_level = false;     // produced by the Gaussian shortcut
};

// Two-phase measurement simulation: amplitudes from a multinomial over x_i²,
// then signs from the interference distribution (x_i ± √p̂_i)²/4 over 2d
// outcomes conditioned on phase one's empirical p̂. Input must be a unit
// vector of dimension ≥ 2.
TomographyReport tomography_estimate(const Vector& x_true,
                                     const NoiseConfig& cfg);

// Planned shot count per phase before capping.
long long tomography_shot_target(int dim, const NoiseConfig& cfg);

// true_norm·(1 + u), u uniform on [−norm_rel_err, +norm_rel_err].
double noisy_norm_estimate(double true_norm, const NoiseConfig& cfg);

// Normalized concatenation of a and b rebuilt from (1 ± norm_err)-perturbed
// norm estimates; always within 2·norm_err of the exact normalized a ∘ b.
Vector concat_state(const Vector& a, const Vector& b, double norm_err,
                    std::uint64_t seed);

// One simulated quantum Newton step: exact solve, tomography on the
// normalized (dS ∘ dY) at precision delta/2, norm estimate at relative error
// ≤ delta/2, so the reconstruction obeys ‖noisy − exact‖ ≤ 2·delta·‖exact‖.
struct NoisyNewtonStep {
  NewtonSolution exact;
  SymMatrix dS_noisy;
  SymMatrix dY_noisy;
  TomographyReport tomo;
  double norm_estimate = 0.0;
  double step_error = 0.0;  // ‖(d̄S ∘ d̄Y) − (dS ∘ dY)‖₂ before symmetrizing
  bool bound_ok = true;     // step_error ≤ 2·delta·‖dS ∘ dY‖
};

NoisyNewtonStep noisy_newton_step(const SdpInstance& inst,
                                  const IterateState& state, double nu_target,
                                  const NoiseConfig& cfg);

// Same pipeline applied to a precomputed exact solution, so a caller can size
// delta from properties of the step before any sampling happens.
NoisyNewtonStep add_step_noise(NewtonSolution exact, const NoiseConfig& cfg);

// The vector variant measures the raw solution (dx ∘ dy) of dimension m+n;
// d̄s = A·d̄x is recomputed classically, so its error picks up a ‖A‖₂ factor
// that callers fold into delta. step_error is taken on (dx ∘ dy).
struct NoisyLpStep {
  LpNewtonSolution exact;
  Vector dx_noisy;
  Vector ds_noisy;   // A·dx_noisy
  Vector dy_noisy;
  TomographyReport tomo;
  double norm_estimate = 0.0;
  double step_error = 0.0;
  bool bound_ok = true;
};

NoisyLpStep noisy_newton_step_lp(const LpInstance& inst, const LpIterate& state,
                                 double nu_target, const NoiseConfig& cfg);

NoisyLpStep add_step_noise_lp(LpNewtonSolution exact, const Matrix& a_cols,
                              const NoiseConfig& cfg);

// CSV rows "d,N,delta,achieved_error,success" under a header line.
void write_tomography_csv(std::ostream& out,
                          const std::vector<TomographyReport>& reports);

}  // namespace qipm
