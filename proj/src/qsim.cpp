#include "qipm/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "qipm/rng.hpp"

namespace qipm {

void NoiseConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0))
    throw InvalidInput("tomography precision must lie in (0, 1)");
  if (!(sign_threshold > 0.0 && sign_threshold < 0.5))
    throw InvalidInput("sign threshold must lie in (0, 0.5)");
  if (!(shot_constant >= 1.0))
    throw InvalidInput("shot constant must be at least 1");
  if (!(norm_rel_err >= 0.0 && norm_rel_err < 1.0))
    throw InvalidInput("norm error must lie in [0, 1)");
  if (shot_cap < 1) throw InvalidInput("shot cap must be positive");
}

long long tomography_shot_target(int dim, const NoiseConfig& cfg) {
  const double raw =
      std::ceil(cfg.shot_constant * dim * std::log(dim) / (cfg.delta * cfg.delta));
  if (raw >= 9e18) return 9'000'000'000'000'000'000LL;
  return static_cast<long long>(raw);
}

namespace {

// Multinomial with d cells drawn as a chain of d conditional binomials, so the
// work is O(d) rather than O(N) shots.
std::vector<long long> multinomial(long long n, const Vector& probs,
                                   Engine& eng) {
  const auto d = probs.size();
  std::vector<long long> counts(d, 0);
  long long remaining = n;
  double rest = probs.sum();
  for (Eigen::Index i = 0; i + 1 < d && remaining > 0; ++i) {
    if (rest <= 0.0) break;
    const double p = std::clamp(probs(i) / rest, 0.0, 1.0);
    std::binomial_distribution<long long> bin(remaining, p);
    counts[i] = bin(eng);
    remaining -= counts[i];
    rest -= probs(i);
  }
  if (d > 0) counts[d - 1] += remaining;
  return counts;
}

TomographyReport gaussian_shortcut(const Vector& x_true, const NoiseConfig& cfg,
                                   long long shots, bool capped) {
  const auto d = x_true.size();
  Engine eng = make_engine(cfg.rng_seed, "fast");
  std::normal_distribution<double> gauss(0.0, 1.0);
  // Matches the leading-order error of the real sampler: per-coordinate
  // deviation std δ/(12·√(d·ln d)), total ≈ δ/(12·√ln d).
  const double scale =
      cfg.delta / (12.0 * std::sqrt(static_cast<double>(d) * std::log(d)));
  Vector noisy(d);
  for (Eigen::Index i = 0; i < d; ++i) noisy(i) = x_true(i) + scale * gauss(eng);
  noisy.normalize();

  TomographyReport rep;
  rep.estimate = noisy;
  rep.shots_amplitude = shots;
  rep.shots_sign = shots;
  rep.p_hat = noisy.cwiseAbs2();
  rep.signs.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) rep.signs[i] = noisy(i) >= 0.0 ? 1 : -1;
  rep.delta = cfg.delta;
  rep.achieved_error = (noisy - x_true).norm();
  rep.success = rep.achieved_error <= std::sqrt(7.0) * cfg.delta;
  rep.capped = capped;
  rep.model_level = true;
  return rep;
}

}  // namespace

TomographyReport tomography_estimate(const Vector& x_true,
                                     const NoiseConfig& cfg) {
  cfg.validate();
  const auto d = x_true.size();
  if (d < 2) throw InvalidInput("tomography needs dimension at least 2");
  if (std::abs(x_true.norm() - 1.0) > 1e-10)
    throw InvalidInput("tomography input must be a unit vector");

  const long long target = tomography_shot_target(static_cast<int>(d), cfg);
  const bool capped = target > cfg.shot_cap;
  const long long shots = capped ? cfg.shot_cap : target;

  if (cfg.fast_gaussian) return gaussian_shortcut(x_true, cfg, shots, capped);

  TomographyReport rep;
  rep.shots_amplitude = shots;
  rep.shots_sign = shots;
  rep.delta = cfg.delta;
  rep.capped = capped;

  Engine amp_eng = make_engine(cfg.rng_seed, "amp");
  const std::vector<long long> counts =
      multinomial(shots, x_true.cwiseAbs2(), amp_eng);
  rep.p_hat = Vector(d);
  for (Eigen::Index i = 0; i < d; ++i)
    rep.p_hat(i) = static_cast<double>(counts[i]) / static_cast<double>(shots);

  // Interference phase: outcome (0,i) with probability (x_i + √p̂_i)²/4,
  // outcome (1,i) with (x_i − √p̂_i)²/4, conditioned on the stored p̂.
  const Vector root_p = rep.p_hat.cwiseSqrt();
  Vector mix(2 * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double plus = x_true(i) + root_p(i);
    const double minus = x_true(i) - root_p(i);
    mix(i) = 0.25 * plus * plus;
    mix(d + i) = 0.25 * minus * minus;
  }
  mix /= mix.sum();
  Engine sign_eng = make_engine(cfg.rng_seed, "sign");
  const std::vector<long long> sign_counts = multinomial(shots, mix, sign_eng);

  rep.signs.resize(d);
  rep.estimate = Vector(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double zero_count = static_cast<double>(sign_counts[i]);
    rep.signs[i] =
        zero_count > cfg.sign_threshold * rep.p_hat(i) * shots ? 1 : -1;
    rep.estimate(i) = rep.signs[i] * root_p(i);
  }

  rep.achieved_error = (rep.estimate - x_true).norm();
  rep.success = rep.achieved_error <= std::sqrt(7.0) * cfg.delta;
  return rep;
}

double noisy_norm_estimate(double true_norm, const NoiseConfig& cfg) {
  cfg.validate();
  if (!(true_norm > 0.0)) throw InvalidInput("norm estimate needs a positive norm");
  if (cfg.norm_rel_err == 0.0) return true_norm;
  Engine eng = make_engine(cfg.rng_seed, "norm");
  std::uniform_real_distribution<double> u(-cfg.norm_rel_err, cfg.norm_rel_err);
  return true_norm * (1.0 + u(eng));
}

Vector concat_state(const Vector& a, const Vector& b, double norm_err,
                    std::uint64_t seed) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0)
    throw ZeroVector("concatenation needs two nonzero vectors");
  if (!(norm_err >= 0.0 && norm_err < 1.0))
    throw InvalidInput("norm error must lie in [0, 1)");
  Engine ea = make_engine(seed, "cat-a");
  Engine eb = make_engine(seed, "cat-b");
  std::uniform_real_distribution<double> u(-norm_err, norm_err);
  Vector z(a.size() + b.size());
  z.head(a.size()) = (1.0 + u(ea)) * a;
  z.tail(b.size()) = (1.0 + u(eb)) * b;
  z.normalize();
  return z;
}

namespace {

struct VectorNoise {
  Vector noisy;       // reconstruction of the full-length vector
  TomographyReport tomo;
  double norm_estimate = 0.0;
  double step_error = 0.0;
  bool bound_ok = true;
};

// Tomography at δ/2 plus a norm estimate at relative error ≤ δ/2 keeps the
// reconstruction within 2δ of truth: √7·(δ/2)·(1 + δ/2) + δ/2 < 2δ.
VectorNoise reconstruct(const Vector& v, const NoiseConfig& cfg) {
  const double vn = v.norm();
  VectorNoise out;
  NoiseConfig tomo_cfg = cfg;
  tomo_cfg.delta = 0.5 * cfg.delta;
  NoiseConfig norm_cfg = cfg;
  norm_cfg.norm_rel_err = std::min(cfg.norm_rel_err, 0.5 * cfg.delta);

  out.tomo = tomography_estimate(v / vn, tomo_cfg);
  out.norm_estimate = noisy_norm_estimate(vn, norm_cfg);
  out.noisy = out.norm_estimate * out.tomo.estimate;
  out.step_error = (out.noisy - v).norm();
  out.bound_ok = out.step_error <= 2.0 * cfg.delta * vn;
  if (!out.bound_ok && cfg.strict)
    throw TomographyFailure("noisy step exceeded its reconstruction bound");
  return out;
}

}  // namespace

NoisyNewtonStep add_step_noise(NewtonSolution exact, const NoiseConfig& cfg) {
  cfg.validate();
  NoisyNewtonStep out;
  out.exact = std::move(exact);
  const int n = out.exact.dS.dim();
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;

  if (out.exact.norm_dSdY == 0.0) {
    out.dS_noisy = out.exact.dS;
    out.dY_noisy = out.exact.dY;
    out.norm_estimate = 0.0;
    return out;
  }

  Vector v(2 * nn);
  v << vec_rm(out.exact.dS.mat()), vec_rm(out.exact.dY.mat());
  VectorNoise rec = reconstruct(v, cfg);

  out.dS_noisy = SymMatrix::Symmetrized(unvec_rm(rec.noisy.head(nn), n));
  out.dY_noisy = SymMatrix::Symmetrized(unvec_rm(rec.noisy.tail(nn), n));
  out.tomo = std::move(rec.tomo);
  out.norm_estimate = rec.norm_estimate;
  out.step_error = rec.step_error;
  out.bound_ok = rec.bound_ok;
  return out;
}

NoisyNewtonStep noisy_newton_step(const SdpInstance& inst,
                                  const IterateState& state, double nu_target,
                                  const NoiseConfig& cfg) {
  return add_step_noise(solve_exact(inst, state, nu_target), cfg);
}

NoisyLpStep add_step_noise_lp(LpNewtonSolution exact, const Matrix& a_cols,
                              const NoiseConfig& cfg) {
  cfg.validate();
  NoisyLpStep out;
  out.exact = std::move(exact);
  const auto m = out.exact.dx.size();
  const auto n = out.exact.dy.size();

  Vector v(m + n);
  v << out.exact.dx, out.exact.dy;
  if (v.norm() == 0.0) {
    out.dx_noisy = out.exact.dx;
    out.ds_noisy = out.exact.ds;
    out.dy_noisy = out.exact.dy;
    out.norm_estimate = 0.0;
    return out;
  }
  VectorNoise rec = reconstruct(v, cfg);

  out.dx_noisy = rec.noisy.head(m);
  out.dy_noisy = rec.noisy.tail(n);
  out.ds_noisy = a_cols * out.dx_noisy;
  out.tomo = std::move(rec.tomo);
  out.norm_estimate = rec.norm_estimate;
  out.step_error = rec.step_error;
  out.bound_ok = rec.bound_ok;
  return out;
}

NoisyLpStep noisy_newton_step_lp(const LpInstance& inst, const LpIterate& state,
                                 double nu_target, const NoiseConfig& cfg) {
  return add_step_noise_lp(solve_lp(inst, state, nu_target), inst.a_cols(), cfg);
}

void write_tomography_csv(std::ostream& out,
                          const std::vector<TomographyReport>& reports) {
  out << "d,N,delta,achieved_error,success\n";
  char buf[64];
  for (const auto& r : reports) {
    out << r.estimate.size() << ',' << r.shots_amplitude << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.delta);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.achieved_error);
    out << buf << ',' << (r.success ? 1 : 0) << '\n';
  }
}

}  // namespace qipm
