#include "qipm/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <utility>

#include "qipm/lifted.hpp"
#include "qipm/rng.hpp"

namespace qipm {

void RunConfig::validate() const {
  if (!(eps > 0.0)) throw InvalidInput("target gap must be positive");
  if (!(xi > 0.0)) throw InvalidInput("solve-error budget xi must be positive");
  if (!(chi > 0.0) || chi > eta || eta > 0.1)
    throw InvalidInput("need 0 < chi <= eta <= 0.1");
  if (max_iters < 1) throw InvalidInput("max_iters must be at least 1");
  if (audit && xi > 0.01 + 1e-15)
    throw InvalidInput("audited runs require xi <= 0.01");
  if (mode == Mode::quantum_sim) noise.validate();
}

double lp_path_distance(const Vector& s, const Vector& y, double nu) {
  if (s.size() != y.size())
    throw DimensionMismatch("path distance needs s and y of equal length");
  if (!(nu > 0.0)) throw InvalidInput("path distance needs nu > 0");
  return (1.0 - (s.array() * y.array()) / nu).matrix().norm();
}

namespace {

constexpr double kDistSlack = 1e-9;  // roundoff slack on d <= eta checks
constexpr double kAlphaLow = 0.001;  // certified per-step contraction window
constexpr double kAlphaHigh = 0.1;
constexpr double kEqNuMax = 1.3;  // entry-nu range of the step-size inequality

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Extremes of Y ⊕ Y⁻¹ from the extreme eigenvalues of Y ≻ 0.
struct ConeStats {
  double ysum_norm;
  double kappa_ysum;
  double kappa_y;
};

ConeStats cone_stats(double lmin, double lmax) {
  const double top = std::max(lmax, 1.0 / lmin);
  const double bot = std::min(lmin, 1.0 / lmax);
  return {top, top / bot, lmax / lmin};
}

[[noreturn]] void fail_clause(const char* clause, int iter,
                              const std::string& detail) {
  throw AuditFailure(clause, "iteration " + std::to_string(iter) + ": " + detail);
}

}  // namespace

StepResult step(const SdpInstance& inst, const IterateState& state,
                const RunConfig& cfg, double gamma_value, int iter_index) {
  cfg.validate();
  if (!(gamma_value >= 1.0)) throw InvalidInput("gamma must be at least 1");
  const double rn = std::sqrt(static_cast<double>(inst.n));

  IterationRecord rec;
  rec.iter = iter_index;
  rec.nu = state.nu;
  rec.trace_sy = state.trace_sy();
  rec.dist = central_path_distance(state.S, state.Y, state.nu);
  if (!(rec.dist <= cfg.eta + kDistSlack))
    throw PathDistanceViolation("step entered with distance " + fmt(rec.dist) +
                                " > eta = " + fmt(cfg.eta));
  rec.lambda_min_s = min_eigenvalue(state.S);
  const Spectrum ysp = spectrum(state.Y);
  rec.lambda_min_y = ysp.eigenvalues(0);
  const double y_lmax = ysp.eigenvalues(ysp.eigenvalues.size() - 1);
  if (!(rec.lambda_min_s > 0.0 && rec.lambda_min_y > 0.0))
    throw NotPositiveDefinite("step entered outside the positive cone");
  const ConeStats cs = cone_stats(rec.lambda_min_y, y_lmax);
  rec.ysum_norm = cs.ysum_norm;
  rec.kappa_ysum = cs.kappa_ysum;
  rec.kappa_y = cs.kappa_y;

  const double nu_next = (1.0 - cfg.chi / rn) * state.nu;
  NewtonSolution sol = solve_exact(inst, state, nu_next);
  rec.norm_step = sol.norm_dSdY;
  rec.kappa_pipeline = sol.kappa_pipeline;
  if (cfg.compute_ledger) {
    rec.mu1 = mu_m1(state.Y);
    rec.mu2 = mu_m2(inst, state.S, state.Y_inv);
    rec.mu3 = mu_m3(inst);
  }
  rec.step_bound_primal = cfg.xi / (gamma_value * y_lmax);
  rec.step_bound_dual = cfg.xi * rec.lambda_min_y / gamma_value;

  SymMatrix ds_applied = sol.dS;
  SymMatrix dy_applied = sol.dY;
  if (cfg.mode == Mode::quantum_sim && rec.norm_step > 0.0) {
    double norm_for_delta = rec.norm_step;
    if (cfg.delta_from_noisy_norm && cfg.noise.norm_rel_err > 0.0) {
      NoiseConfig pre = cfg.noise;
      pre.rng_seed = substream_seed(cfg.noise.rng_seed, "predelta",
                                    static_cast<std::uint64_t>(iter_index));
      norm_for_delta = noisy_norm_estimate(rec.norm_step, pre);
    }
    NoiseConfig nc = cfg.noise;
    nc.rng_seed = substream_seed(cfg.noise.rng_seed, "tomo",
                                 static_cast<std::uint64_t>(iter_index));
    nc.delta = std::min(
        cfg.xi / (2.0 * gamma_value * norm_for_delta * cs.ysum_norm), 0.9);
    NoisyNewtonStep noisy = add_step_noise(sol, nc);
    rec.delta_used = nc.delta;
    rec.shots = noisy.tomo.shots_amplitude;
    rec.shots_capped = noisy.tomo.capped;
    ds_applied = std::move(noisy.dS_noisy);
    dy_applied = std::move(noisy.dY_noisy);
  }
  rec.step_error_primal = (ds_applied.mat() - sol.dS.mat()).norm();
  rec.step_error_dual = (dy_applied.mat() - sol.dY.mat()).norm();
  rec.audit_step = rec.step_error_primal <= rec.step_bound_primal &&
                   rec.step_error_dual <= rec.step_bound_dual;
  if (cfg.audit && !rec.audit_step)
    fail_clause("step-error", iter_index,
                "step error (" + fmt(rec.step_error_primal) + ", " +
                    fmt(rec.step_error_dual) + ") exceeds its budget (" +
                    fmt(rec.step_bound_primal) + ", " +
                    fmt(rec.step_bound_dual) + ")");

  const SymMatrix s_next = state.S.plus(ds_applied);
  const SymMatrix y_next = state.Y.plus(dy_applied);
  rec.audit_pd = is_positive_definite(s_next) && is_positive_definite(y_next);
  if (!rec.audit_pd) {
    if (cfg.audit)
      fail_clause("positive-definite", iter_index,
                  "updated pair left the positive cone");
    throw NotPositiveDefinite("updated pair left the positive cone");
  }

  StepResult out;
  out.diff_primal = sol.dS.mat() - ds_applied.mat();
  out.diff_dual = dy_applied.mat() - sol.dY.mat();
  out.state = IterateState::make(s_next, y_next, Vector(state.x + sol.dx));
  if (cfg.nominal_nu_update) out.state.nu = nu_next;
  out.state.drift_primal =
      SymMatrix::Symmetrized(state.drift_primal.mat() + out.diff_primal);
  out.state.drift_dual =
      SymMatrix::Symmetrized(state.drift_dual.mat() + out.diff_dual);

  rec.nu_exit = out.state.nu;
  rec.dist_exit = central_path_distance(out.state.S, out.state.Y, out.state.nu);
  rec.audit_dist = rec.dist_exit <= cfg.eta + kDistSlack;

  const double tr_next = out.state.trace_sy();
  rec.alpha_observed = rn * (1.0 - tr_next / rec.trace_sy);
  if (cfg.mode == Mode::quantum_sim) {
    rec.alpha_budget = rn *
                       (rec.step_bound_primal * frobenius_norm(out.state.Y) +
                        rec.step_bound_dual * frobenius_norm(out.state.S) +
                        rec.step_bound_primal * rec.step_bound_dual) /
                       rec.trace_sy;
  }
  const double allow = std::max(1e-6, rec.alpha_budget);
  rec.audit_alpha = rec.alpha_observed >= kAlphaLow - allow &&
                    rec.alpha_observed <= kAlphaHigh + allow;

  rec.primal_resid = primal_residual(out.state, inst);
  rec.dual_resid = dual_residual(out.state, inst);

  if (cfg.audit) {
    if (!rec.audit_dist)
      fail_clause("path-distance", iter_index,
                  "exit distance " + fmt(rec.dist_exit) + " > eta = " +
                      fmt(cfg.eta));
    if (!rec.audit_alpha)
      fail_clause("alpha-range", iter_index,
                  "alpha = " + fmt(rec.alpha_observed) + " outside [" +
                      fmt(kAlphaLow - allow) + ", " + fmt(kAlphaHigh + allow) +
                      "]");
  }
  out.record = rec;
  return out;
}

LpStepResult step_lp(const LpInstance& inst, const LpIterate& state,
                     const RunConfig& cfg, double gamma_value, int iter_index) {
  cfg.validate();
  if (!(gamma_value >= 1.0)) throw InvalidInput("gamma must be at least 1");
  const double rn = std::sqrt(static_cast<double>(inst.n));

  IterationRecord rec;
  rec.iter = iter_index;
  rec.nu = state.nu;
  rec.trace_sy = state.s.dot(state.y);
  rec.dist = lp_path_distance(state.s, state.y, state.nu);
  if (!(rec.dist <= cfg.eta + kDistSlack))
    throw PathDistanceViolation("step entered with distance " + fmt(rec.dist) +
                                " > eta = " + fmt(cfg.eta));
  rec.lambda_min_s = state.s.minCoeff();
  rec.lambda_min_y = state.y.minCoeff();
  if (!(rec.lambda_min_s > 0.0 && rec.lambda_min_y > 0.0))
    throw NotPositiveDefinite("step entered outside the positive orthant");
  const double y_max = state.y.maxCoeff();
  const ConeStats cs = cone_stats(rec.lambda_min_y, y_max);
  rec.ysum_norm = cs.ysum_norm;
  rec.kappa_ysum = cs.kappa_ysum;
  rec.kappa_y = cs.kappa_y;

  const double nu_next = (1.0 - cfg.chi / rn) * state.nu;
  LpNewtonSolution sol = solve_lp(inst, state, nu_next);
  rec.norm_step = sol.norm_dsdy;
  rec.kappa_pipeline = sol.kappa_pipeline;
  if (cfg.compute_ledger) {
    rec.mu1 = mu_m1_lp(state.y);
    rec.mu2 = mu_m2_lp(inst, state.s, state.y);
    rec.mu3 = mu_m3_lp(inst);
  }
  rec.step_bound_primal = cfg.xi / (gamma_value * y_max);
  rec.step_bound_dual = cfg.xi * rec.lambda_min_y / gamma_value;

  Vector ds_applied = sol.ds;
  Vector dy_applied = sol.dy;
  const double raw_norm =
      std::sqrt(sol.dx.squaredNorm() + sol.dy.squaredNorm());
  if (cfg.mode == Mode::quantum_sim && raw_norm > 0.0) {
    const Matrix a = inst.a_cols();
    // The measured vector is (dx ∘ dy); the recomputed ds = A·dx picks up an
    // extra ‖A‖₂, so the precision is sized for that amplification too.
    const double a_gain = std::max(
        1.0, std::sqrt(std::max(
                 0.0, max_eigenvalue(SymMatrix::Symmetrized(a.transpose() * a)))));
    double norm_for_delta = raw_norm;
    if (cfg.delta_from_noisy_norm && cfg.noise.norm_rel_err > 0.0) {
      NoiseConfig pre = cfg.noise;
      pre.rng_seed = substream_seed(cfg.noise.rng_seed, "predelta",
                                    static_cast<std::uint64_t>(iter_index));
      norm_for_delta = noisy_norm_estimate(raw_norm, pre);
    }
    NoiseConfig nc = cfg.noise;
    nc.rng_seed = substream_seed(cfg.noise.rng_seed, "tomo",
                                 static_cast<std::uint64_t>(iter_index));
    nc.delta = std::min(cfg.xi / (2.0 * gamma_value * a_gain * norm_for_delta *
                                  cs.ysum_norm),
                        0.9);
    NoisyLpStep noisy = add_step_noise_lp(sol, a, nc);
    rec.delta_used = nc.delta;
    rec.shots = noisy.tomo.shots_amplitude;
    rec.shots_capped = noisy.tomo.capped;
    ds_applied = std::move(noisy.ds_noisy);
    dy_applied = std::move(noisy.dy_noisy);
  }
  rec.step_error_primal = (ds_applied - sol.ds).norm();
  rec.step_error_dual = (dy_applied - sol.dy).norm();
  rec.audit_step = rec.step_error_primal <= rec.step_bound_primal &&
                   rec.step_error_dual <= rec.step_bound_dual;
  if (cfg.audit && !rec.audit_step)
    fail_clause("step-error", iter_index,
                "step error (" + fmt(rec.step_error_primal) + ", " +
                    fmt(rec.step_error_dual) + ") exceeds its budget (" +
                    fmt(rec.step_bound_primal) + ", " +
                    fmt(rec.step_bound_dual) + ")");

  Vector s_next = state.s + ds_applied;
  Vector y_next = state.y + dy_applied;
  rec.audit_pd = s_next.minCoeff() > 0.0 && y_next.minCoeff() > 0.0;
  if (!rec.audit_pd) {
    if (cfg.audit)
      fail_clause("positive-definite", iter_index,
                  "updated pair left the positive orthant");
    throw NotPositiveDefinite("updated pair left the positive orthant");
  }

  LpStepResult out;
  out.diff_primal = sol.ds - ds_applied;
  out.diff_dual = dy_applied - sol.dy;
  out.state = LpIterate::make(std::move(s_next), std::move(y_next),
                              Vector(state.x + sol.dx));
  if (cfg.nominal_nu_update) out.state.nu = nu_next;
  out.state.drift_primal = state.drift_primal + out.diff_primal;
  out.state.drift_dual = state.drift_dual + out.diff_dual;

  rec.nu_exit = out.state.nu;
  rec.dist_exit = lp_path_distance(out.state.s, out.state.y, out.state.nu);
  rec.audit_dist = rec.dist_exit <= cfg.eta + kDistSlack;

  const double tr_next = out.state.s.dot(out.state.y);
  rec.alpha_observed = rn * (1.0 - tr_next / rec.trace_sy);
  if (cfg.mode == Mode::quantum_sim) {
    rec.alpha_budget = rn *
                       (rec.step_bound_primal * out.state.y.norm() +
                        rec.step_bound_dual * out.state.s.norm() +
                        rec.step_bound_primal * rec.step_bound_dual) /
                       rec.trace_sy;
  }
  const double allow = std::max(1e-6, rec.alpha_budget);
  rec.audit_alpha = rec.alpha_observed >= kAlphaLow - allow &&
                    rec.alpha_observed <= kAlphaHigh + allow;

  rec.primal_resid = primal_residual(out.state, inst);
  rec.dual_resid = dual_residual(out.state, inst);

  if (cfg.audit) {
    if (!rec.audit_dist)
      fail_clause("path-distance", iter_index,
                  "exit distance " + fmt(rec.dist_exit) + " > eta = " +
                      fmt(cfg.eta));
    if (!rec.audit_alpha)
      fail_clause("alpha-range", iter_index,
                  "alpha = " + fmt(rec.alpha_observed) + " outside [" +
                      fmt(kAlphaLow - allow) + ", " + fmt(kAlphaHigh + allow) +
                      "]");
  }
  out.record = rec;
  return out;
}

IterateState drive_to_nu(const SdpInstance& inst, IterateState state,
                         double nu_target, double dist_tol, double eta,
                         double chi, int max_steps) {
  if (!(nu_target > 0.0)) throw InvalidInput("target nu must be positive");
  if (!(dist_tol > 0.0)) throw InvalidInput("distance tolerance must be positive");
  if (!(chi > 0.0 && eta > 0.0)) throw InvalidInput("need chi > 0 and eta > 0");
  const double rn = std::sqrt(static_cast<double>(inst.n));
  int steps = 0;

  // Damped exact step at the given target; beta shrinks only as far as needed
  // to stay in the cone (full steps near the path, halved when centering from
  // far out overshoots).
  const auto take = [&](double target) {
    const NewtonSolution sol = solve_exact(inst, state, target);
    double beta = 1.0;
    while (true) {
      const SymMatrix s2 = state.S.plus(sol.dS.scaled(beta));
      const SymMatrix y2 = state.Y.plus(sol.dY.scaled(beta));
      if (is_positive_definite(s2) && is_positive_definite(y2)) {
        state = IterateState::make(s2, y2, Vector(state.x + beta * sol.dx));
        break;
      }
      beta *= 0.5;
      if (beta < 1.0 / 64.0)
        throw PathDistanceViolation(
            "centering step left the cone at every damping level");
    }
    ++steps;
  };

  while (std::abs(state.nu - nu_target) > 1e-12 * nu_target) {
    if (steps >= max_steps)
      throw PathDistanceViolation("nu drive ran out of steps");
    const double d = central_path_distance(state.S, state.Y, state.nu);
    if (!(d <= eta + kDistSlack))
      throw PathDistanceViolation("nu drive left the path corridor: d = " +
                                  fmt(d));
    const double next =
        state.nu < nu_target
            ? std::min(nu_target, state.nu * (1.0 + chi / rn))
            : std::max(nu_target, state.nu * (1.0 - chi / rn));
    take(next);
  }

  double d = central_path_distance(state.S, state.Y, nu_target);
  int stalls = 0;
  while (d > dist_tol) {
    if (steps >= max_steps)
      throw PathDistanceViolation("centering ran out of steps");
    take(nu_target);
    const double d2 = central_path_distance(state.S, state.Y, nu_target);
    if (d2 > 0.9 * d && d2 > dist_tol) {
      if (++stalls >= 4)
        throw PathDistanceViolation("centering stalled at distance " + fmt(d2));
    } else {
      stalls = 0;
    }
    d = d2;
  }
  return state;
}

namespace {

// Vector-problem analogue of drive_to_nu, used only by the initial-point
// search.
LpIterate drive_to_nu_lp(const LpInstance& inst, LpIterate state,
                         double nu_target, double dist_tol, double eta,
                         double chi, int max_steps) {
  const double rn = std::sqrt(static_cast<double>(inst.n));
  int steps = 0;

  const auto take = [&](double target) {
    const LpNewtonSolution sol = solve_lp(inst, state, target);
    double beta = 1.0;
    while (true) {
      const Vector s2 = state.s + beta * sol.ds;
      const Vector y2 = state.y + beta * sol.dy;
      if (s2.minCoeff() > 0.0 && y2.minCoeff() > 0.0) {
        state = LpIterate::make(s2, y2, Vector(state.x + beta * sol.dx));
        break;
      }
      beta *= 0.5;
      if (beta < 1.0 / 64.0)
        throw PathDistanceViolation(
            "centering step left the orthant at every damping level");
    }
    ++steps;
  };

  while (std::abs(state.nu - nu_target) > 1e-12 * nu_target) {
    if (steps >= max_steps)
      throw PathDistanceViolation("nu drive ran out of steps");
    const double d = lp_path_distance(state.s, state.y, state.nu);
    if (!(d <= eta + kDistSlack))
      throw PathDistanceViolation("nu drive left the path corridor: d = " +
                                  fmt(d));
    const double next =
        state.nu < nu_target
            ? std::min(nu_target, state.nu * (1.0 + chi / rn))
            : std::max(nu_target, state.nu * (1.0 - chi / rn));
    take(next);
  }

  double d = lp_path_distance(state.s, state.y, nu_target);
  int stalls = 0;
  while (d > dist_tol) {
    if (steps >= max_steps)
      throw PathDistanceViolation("centering ran out of steps");
    take(nu_target);
    const double d2 = lp_path_distance(state.s, state.y, nu_target);
    if (d2 > 0.9 * d && d2 > dist_tol) {
      if (++stalls >= 4)
        throw PathDistanceViolation("centering stalled at distance " + fmt(d2));
    } else {
      stalls = 0;
    }
    d = d2;
  }
  return state;
}

}  // namespace

IterateState find_initial_point(const SdpInstance& inst, const RunConfig& cfg) {
  cfg.validate();
  inst.validate();
  const int n = inst.n;

  if (inst.seed_primal_x && inst.seed_dual_y) {
    Matrix s0 = -inst.rhs_mat.mat();
    for (int k = 0; k < inst.m; ++k)
      s0 += (*inst.seed_primal_x)(k)*inst.constraint_mats[k].mat();
    const SymMatrix S0 = SymMatrix::Symmetrized(s0);
    if (!is_positive_definite(S0) || !is_positive_definite(*inst.seed_dual_y))
      throw NoFeasibleSeed("seed pair is not positive definite");
    IterateState st =
        IterateState::make(S0, *inst.seed_dual_y, *inst.seed_primal_x);
    const double d = central_path_distance(st.S, st.Y, st.nu);
    if (!(d <= cfg.eta + kDistSlack))
      throw PathDistanceViolation("seed pair sits off the path: d = " + fmt(d));
    return st;
  }
  if (!inst.seed_primal_x)
    throw NoFeasibleSeed("instance carries no seed to start from");

  // Inflation: T = Σx_k A^(k) − B with anchor T⁻¹ is exactly on the path of
  // the anchored problem at ν = 1. Grow ν until the re-anchored candidate
  // Y₀ = C + (Y − T⁻¹) is PD and near the path, re-centering at fixed ν when
  // the candidate distance stalls short of direct acceptance.
  Matrix t0 = -inst.rhs_mat.mat();
  for (int k = 0; k < inst.m; ++k)
    t0 += (*inst.seed_primal_x)(k)*inst.constraint_mats[k].mat();
  const SymMatrix T = SymMatrix::Symmetrized(t0);
  if (!is_positive_definite(T))
    throw NoFeasibleSeed("primal seed coordinates are not strictly feasible");
  const SymMatrix c_aux = inverse_sym(T);
  IterateState aux = IterateState::make(T, c_aux, *inst.seed_primal_x);

  const int cap = static_cast<int>(std::ceil(
                      10.0 * std::sqrt(static_cast<double>(n)) *
                      std::log(static_cast<double>(std::max(n, 2))))) +
                  20;
  double prev_d = std::numeric_limits<double>::infinity();
  int stable = 0;
  for (int t = 0;; ++t) {
    const Matrix y0m =
        inst.dual_anchor.mat() + aux.Y.mat() - c_aux.mat();
    const SymMatrix y0 = SymMatrix::Symmetrized(y0m);
    double cand_d = std::numeric_limits<double>::infinity();
    if (is_positive_definite(y0)) {
      IterateState cand = IterateState::make(aux.S, y0, aux.x);
      cand_d = central_path_distance(cand.S, cand.Y, cand.nu);
      if (cand_d <= 0.5 * cfg.eta + 1e-12) return cand;
      stable = std::abs(cand_d - prev_d) <= 1e-3 ? stable + 1 : 0;
      if (stable >= 2 || t == cap) {
        try {
          const double nu_cand = cand.nu;
          return drive_to_nu(inst, std::move(cand), nu_cand, 0.5 * cfg.eta,
                             cfg.eta, cfg.chi, 120);
        } catch (const Error&) {
          stable = 0;  // not centerable yet; keep inflating
        }
      }
    } else {
      stable = 0;
    }
    prev_d = cand_d;
    if (t >= cap)
      throw PathDistanceViolation(
          "inflation failed to reach the path within its step budget");
    const double d_aux = central_path_distance(aux.S, aux.Y, aux.nu);
    if (!(d_aux <= cfg.eta + kDistSlack))
      throw PathDistanceViolation("inflation drifted off the path: d = " +
                                  fmt(d_aux));
    const NewtonSolution sol =
        solve_exact(inst, aux, (1.0 + cfg.chi / std::sqrt(n)) * aux.nu);
    aux = IterateState::make(aux.S.plus(sol.dS), aux.Y.plus(sol.dY),
                             Vector(aux.x + sol.dx));
  }
}

LpIterate find_initial_point_lp(const LpInstance& inst, const RunConfig& cfg) {
  cfg.validate();
  inst.validate();
  const int n = inst.n;
  const Matrix a = inst.a_cols();

  const bool have_primal = inst.seed_primal_s || inst.seed_primal_x;
  if (have_primal && inst.seed_dual_y) {
    const Vector s0 = inst.seed_primal_s
                          ? *inst.seed_primal_s
                          : Vector(a * *inst.seed_primal_x - inst.rhs_vec);
    const Vector x0 = inst.seed_primal_x
                          ? *inst.seed_primal_x
                          : Vector(a.colPivHouseholderQr().solve(
                                Vector(s0 + inst.rhs_vec)));
    if (s0.minCoeff() <= 0.0 || inst.seed_dual_y->minCoeff() <= 0.0)
      throw NoFeasibleSeed("seed pair is not strictly positive");
    LpIterate st = LpIterate::make(s0, *inst.seed_dual_y, x0);
    const double d = lp_path_distance(st.s, st.y, st.nu);
    if (!(d <= cfg.eta + kDistSlack))
      throw PathDistanceViolation("seed pair sits off the path: d = " + fmt(d));
    return st;
  }
  if (!inst.seed_primal_x)
    throw NoFeasibleSeed("instance carries no seed to start from");

  const Vector x0 = *inst.seed_primal_x;
  const Vector t0 = a * x0 - inst.rhs_vec;
  if (t0.minCoeff() <= 0.0)
    throw NoFeasibleSeed("primal seed coordinates are not strictly feasible");
  const Vector c_aux = t0.cwiseInverse();
  LpIterate aux = LpIterate::make(t0, c_aux, x0);

  const int cap = static_cast<int>(std::ceil(
                      10.0 * std::sqrt(static_cast<double>(n)) *
                      std::log(static_cast<double>(std::max(n, 2))))) +
                  20;
  double prev_d = std::numeric_limits<double>::infinity();
  int stable = 0;
  for (int t = 0;; ++t) {
    const Vector y0 = inst.dual_anchor + aux.y - c_aux;
    double cand_d = std::numeric_limits<double>::infinity();
    if (y0.minCoeff() > 0.0) {
      LpIterate cand = LpIterate::make(aux.s, y0, aux.x);
      cand_d = lp_path_distance(cand.s, cand.y, cand.nu);
      if (cand_d <= 0.5 * cfg.eta + 1e-12) return cand;
      stable = std::abs(cand_d - prev_d) <= 1e-3 ? stable + 1 : 0;
      if (stable >= 2 || t == cap) {
        try {
          const double nu_cand = cand.nu;
          return drive_to_nu_lp(inst, std::move(cand), nu_cand, 0.5 * cfg.eta,
                                cfg.eta, cfg.chi, 120);
        } catch (const Error&) {
          stable = 0;
        }
      }
    } else {
      stable = 0;
    }
    prev_d = cand_d;
    if (t >= cap)
      throw PathDistanceViolation(
          "inflation failed to reach the path within its step budget");
    const double d_aux = lp_path_distance(aux.s, aux.y, aux.nu);
    if (!(d_aux <= cfg.eta + kDistSlack))
      throw PathDistanceViolation("inflation drifted off the path: d = " +
                                  fmt(d_aux));
    const LpNewtonSolution sol =
        solve_lp(inst, aux, (1.0 + cfg.chi / std::sqrt(n)) * aux.nu);
    aux = LpIterate::make(Vector(aux.s + sol.ds), Vector(aux.y + sol.dy),
                          Vector(aux.x + sol.dx));
  }
}

RunResult run(const SdpInstance& inst, const RunConfig& cfg) {
  cfg.validate();
  inst.validate();
  IterateState state = find_initial_point(inst, cfg);

  RunResult out;
  out.bc_norm = std::sqrt(inst.rhs_mat.mat().squaredNorm() +
                          inst.dual_anchor.mat().squaredNorm());
  const double tr0 = state.trace_sy();
  if (tr0 > cfg.eps) {
    const double planned =
        std::ceil(10.0 * std::sqrt(static_cast<double>(inst.n)) *
                  std::log(tr0 / cfg.eps));
    out.planned_iterations =
        static_cast<int>(std::min<double>(planned, cfg.max_iters));
  }
  out.gamma_value =
      cfg.gamma == GammaRegime::absolute
          ? std::sqrt(static_cast<double>(std::max(1, out.planned_iterations)))
          : 1.0;
  out.drift_bound =
      cfg.gamma == GammaRegime::absolute ? cfg.xi : cfg.xi * out.bc_norm;

  out.termination = Termination::max_iters;
  while (true) {
    if (state.trace_sy() <= cfg.eps) {
      out.termination = Termination::converged;
      break;
    }
    if (out.iterations >= cfg.max_iters) break;
    StepResult sr = step(inst, state, cfg, out.gamma_value, out.iterations);
    out.audit_warnings += static_cast<int>(!sr.record.audit_step) +
                          static_cast<int>(!sr.record.audit_dist) +
                          static_cast<int>(!sr.record.audit_alpha);
    out.trace.push_back(sr.record);
    out.step_diffs_primal.push_back(std::move(sr.diff_primal));
    out.step_diffs_dual.push_back(std::move(sr.diff_dual));
    state = std::move(sr.state);
    ++out.iterations;
  }
  out.drift_norm = std::sqrt(state.drift_primal.mat().squaredNorm() +
                             state.drift_dual.mat().squaredNorm());
  out.drift_ok = out.drift_norm <= out.drift_bound + 1e-12;
  if (cfg.compute_ledger && !out.trace.empty())
    out.ledger = cost_ledger(out.trace, inst.n, cfg.xi, false);
  out.final_state = std::move(state);
  return out;
}

LpRunResult run_lp(const LpInstance& inst, const RunConfig& cfg) {
  cfg.validate();
  inst.validate();
  LpIterate state = find_initial_point_lp(inst, cfg);

  LpRunResult out;
  out.bc_norm = std::sqrt(inst.rhs_vec.squaredNorm() +
                          inst.dual_anchor.squaredNorm());
  const double tr0 = state.s.dot(state.y);
  if (tr0 > cfg.eps) {
    const double planned =
        std::ceil(10.0 * std::sqrt(static_cast<double>(inst.n)) *
                  std::log(tr0 / cfg.eps));
    out.planned_iterations =
        static_cast<int>(std::min<double>(planned, cfg.max_iters));
  }
  out.gamma_value =
      cfg.gamma == GammaRegime::absolute
          ? std::sqrt(static_cast<double>(std::max(1, out.planned_iterations)))
          : 1.0;
  out.drift_bound =
      cfg.gamma == GammaRegime::absolute ? cfg.xi : cfg.xi * out.bc_norm;

  out.termination = Termination::max_iters;
  while (true) {
    if (state.s.dot(state.y) <= cfg.eps) {
      out.termination = Termination::converged;
      break;
    }
    if (out.iterations >= cfg.max_iters) break;
    LpStepResult sr = step_lp(inst, state, cfg, out.gamma_value, out.iterations);
    out.audit_warnings += static_cast<int>(!sr.record.audit_step) +
                          static_cast<int>(!sr.record.audit_dist) +
                          static_cast<int>(!sr.record.audit_alpha);
    out.trace.push_back(sr.record);
    out.step_diffs_primal.push_back(std::move(sr.diff_primal));
    out.step_diffs_dual.push_back(std::move(sr.diff_dual));
    state = std::move(sr.state);
    ++out.iterations;
  }
  out.drift_norm = std::sqrt(state.drift_primal.squaredNorm() +
                             state.drift_dual.squaredNorm());
  out.drift_ok = out.drift_norm <= out.drift_bound + 1e-12;
  if (cfg.compute_ledger && !out.trace.empty())
    out.ledger = cost_ledger(out.trace, inst.n, cfg.xi, true);
  out.final_state = std::move(state);
  return out;
}

CostLedger cost_ledger(const std::vector<IterationRecord>& trace, int n,
                       double xi, bool vector_case) {
  if (trace.empty()) throw InvalidInput("cost ledger needs a nonempty trace");
  if (n < 1) throw InvalidInput("cost ledger needs n >= 1");
  if (!(xi > 0.0)) throw InvalidInput("cost ledger needs xi > 0");

  CostLedger led;
  led.multiplier =
      (vector_case ? static_cast<double>(n)
                   : static_cast<double>(n) * static_cast<double>(n)) /
      (xi * xi);
  double sum = 0.0;
  for (const auto& r : trace) {
    const double row = (r.mu1 + r.mu2 + r.mu3) * r.kappa_pipeline *
                       r.kappa_ysum * r.kappa_ysum;
    led.rows.push_back(row);
    sum += row;
    led.eq_lhs.push_back(r.norm_step * r.ysum_norm);
    led.eq_rhs.push_back(r.kappa_ysum / 4.0);
    const bool applicable = r.delta_used == 0.0 && r.nu <= kEqNuMax;
    led.eq_applicable.push_back(applicable ? 1 : 0);
    if (applicable && !(led.eq_lhs.back() <= led.eq_rhs.back()))
      led.eq_all_ok = false;
  }
  led.aggregate = led.multiplier * sum;
  return led;
}

namespace {

void csv_num(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

void write_trace_csv(std::ostream& out,
                     const std::vector<IterationRecord>& trace) {
  out << "iter,nu,trace_sy,dist,lambda_min_s,lambda_min_y,norm_step,"
         "ysum_norm,kappa_ysum,kappa_y,mu1,mu2,mu3,kappa_pipeline,delta_used,"
         "shots,shots_capped,step_error_primal,step_error_dual,"
         "step_bound_primal,step_bound_dual,alpha_observed,alpha_budget,"
         "nu_exit,dist_exit,primal_resid,dual_resid,"
         "audit_step,audit_pd,audit_dist,audit_alpha\n";
  for (const auto& r : trace) {
    out << r.iter;
    for (const double v :
         {r.nu, r.trace_sy, r.dist, r.lambda_min_s, r.lambda_min_y,
          r.norm_step, r.ysum_norm, r.kappa_ysum, r.kappa_y, r.mu1, r.mu2,
          r.mu3, r.kappa_pipeline, r.delta_used}) {
      out << ',';
      csv_num(out, v);
    }
    out << ',' << r.shots << ',' << static_cast<int>(r.shots_capped);
    for (const double v : {r.step_error_primal, r.step_error_dual,
                           r.step_bound_primal, r.step_bound_dual,
                           r.alpha_observed, r.alpha_budget, r.nu_exit,
                           r.dist_exit, r.primal_resid, r.dual_resid}) {
      out << ',';
      csv_num(out, v);
    }
    out << ',' << static_cast<int>(r.audit_step) << ','
        << static_cast<int>(r.audit_pd) << ',' << static_cast<int>(r.audit_dist)
        << ',' << static_cast<int>(r.audit_alpha) << '\n';
  }
}

void write_ledger_csv(std::ostream& out, const CostLedger& ledger) {
  out << "iter,row,eq_lhs,eq_rhs,eq_applicable,eq_ok\n";
  for (std::size_t i = 0; i < ledger.rows.size(); ++i) {
    const bool ok =
        !ledger.eq_applicable[i] || ledger.eq_lhs[i] <= ledger.eq_rhs[i];
    out << i << ',';
    csv_num(out, ledger.rows[i]);
    out << ',';
    csv_num(out, ledger.eq_lhs[i]);
    out << ',';
    csv_num(out, ledger.eq_rhs[i]);
    out << ',' << ledger.eq_applicable[i] << ',' << static_cast<int>(ok)
        << '\n';
  }
}

}  // namespace qipm
