#include <cmath>
#include <sstream>

#include "doctest.h"
#include "qipm/errors.hpp"
#include "qipm/ipm.hpp"

using namespace qipm;

namespace {

RunConfig exact_config() {
  RunConfig cfg;
  cfg.mode = Mode::exact;
  cfg.eps = 1e-6;
  return cfg;
}

RunConfig quantum_config(std::uint64_t seed) {
  RunConfig cfg;
  cfg.mode = Mode::quantum_sim;
  cfg.eps = 1e-3;
  cfg.xi = 0.01;
  cfg.noise.rng_seed = seed;
  cfg.noise.fast_gaussian = true;  // keep unit tests quick
  return cfg;
}

}  // namespace

TEST_CASE("run configuration is validated") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.eps = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = RunConfig{};
  cfg.xi = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = RunConfig{};
  cfg.chi = 0.2;  // above the ceiling and above eta
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = RunConfig{};
  cfg.eta = 0.15;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = RunConfig{};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  // The audit needs the noise magnitude the analysis assumes.
  cfg = RunConfig{};
  cfg.xi = 0.05;
  cfg.audit = true;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg.audit = false;
  CHECK_NOTHROW(cfg.validate());
  // Quantum mode validates its noise block too.
  cfg = RunConfig{};
  cfg.mode = Mode::quantum_sim;
  cfg.noise.delta = 2.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

TEST_CASE("vector path distance specializes the matrix one") {
  Vector s(2), y(2);
  s << 2.0, 1.0;
  y << 1.0, 1.0;
  CHECK(lp_path_distance(s, y, 1.0) == doctest::Approx(1.0));
  CHECK(lp_path_distance(s, y, 1.0) ==
        doctest::Approx(central_path_distance(SymMatrix::Diagonal(s),
                                              SymMatrix::Diagonal(y), 1.0)));
}

TEST_CASE("initial point from a two-sided seed is on the path") {
  SdpInstance inst = generate_random_sdp(6, 5, 17);
  RunConfig cfg = exact_config();
  IterateState st = find_initial_point(inst, cfg);
  CHECK(is_positive_definite(st.S));
  CHECK(is_positive_definite(st.Y));
  CHECK(central_path_distance(st.S, st.Y, st.nu) <= cfg.eta + 1e-9);
  CHECK(primal_residual(st, inst) <= 1e-8 * (1.0 + st.nu));
  CHECK(dual_residual(st, inst) <= 1e-8 * (1.0 + st.nu));
}

TEST_CASE("initial point from a primal-only seed") {
  SdpInstance inst =
      generate_maxcut_sdp({{1, 2, 1.0}, {2, 3, 1.0}, {1, 3, 1.0}});
  RunConfig cfg = exact_config();
  IterateState st = find_initial_point(inst, cfg);
  CHECK(is_positive_definite(st.S));
  CHECK(is_positive_definite(st.Y));
  CHECK(central_path_distance(st.S, st.Y, st.nu) <= cfg.eta + 1e-9);
  CHECK(primal_residual(st, inst) <= 1e-7 * (1.0 + st.nu));
  CHECK(dual_residual(st, inst) <= 1e-7 * (1.0 + st.nu));
}

TEST_CASE("missing seeds are rejected") {
  SdpInstance inst = generate_random_sdp(4, 3, 19);
  inst.seed_primal_x.reset();
  inst.seed_dual_y.reset();
  CHECK_THROWS_AS(find_initial_point(inst, exact_config()), NoFeasibleSeed);
}

TEST_CASE("exact runs contract the gap at the advertised rate") {
  SdpInstance inst = generate_random_sdp(6, 4, 23);
  RunConfig cfg = exact_config();
  RunResult res = run(inst, cfg);
  REQUIRE(res.termination == Termination::converged);
  CHECK(duality_gap(res.final_state) <= cfg.eps);
  CHECK(res.iterations <= res.planned_iterations);
  CHECK(res.gamma_value == 1.0);
  CHECK(res.drift_norm == 0.0);
  CHECK(res.drift_ok);
  CHECK(res.audit_warnings == 0);

  const double rate = 1.0 - cfg.chi / std::sqrt(6.0);
  REQUIRE(!res.trace.empty());
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    const auto& r = res.trace[i];
    // Exact arithmetic: the target is met exactly and the observed step
    // equals the programmed one.
    CHECK(r.nu_exit == doctest::Approx(rate * r.nu).epsilon(1e-12));
    CHECK(r.trace_sy / (6.0 * r.nu) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.alpha_observed == doctest::Approx(cfg.chi).epsilon(1e-6));
    CHECK(r.delta_used == 0.0);
    CHECK(r.shots == 0);
    CHECK(r.dist <= cfg.eta + 1e-9);
    CHECK(r.dist_exit <= cfg.eta + 1e-9);
    CHECK(r.audit_step == 1);
    CHECK(r.audit_pd == 1);
    CHECK(r.audit_dist == 1);
    CHECK(r.audit_alpha == 1);
  }
}

TEST_CASE("iteration cap is reported") {
  SdpInstance inst = generate_random_sdp(6, 4, 29);
  RunConfig cfg = exact_config();
  cfg.max_iters = 3;
  RunResult res = run(inst, cfg);
  CHECK(res.termination == Termination::max_iters);
  CHECK(res.iterations == 3);
  CHECK(duality_gap(res.final_state) > cfg.eps);
}

TEST_CASE("noisy runs stay audited and track their drift") {
  SdpInstance inst = generate_random_sdp(8, 6, 31);
  RunConfig cfg = quantum_config(41);
  RunResult res = run(inst, cfg);
  REQUIRE(res.termination == Termination::converged);
  CHECK(duality_gap(res.final_state) <= cfg.eps);
  CHECK(res.audit_warnings == 0);
  CHECK(res.drift_ok);
  CHECK(res.drift_norm <= res.drift_bound + 1e-12);
  CHECK(res.drift_bound == doctest::Approx(cfg.xi * res.bc_norm));

  REQUIRE(!res.trace.empty());
  bool any_noise = false;
  for (const auto& r : res.trace) {
    if (r.delta_used > 0.0) any_noise = true;
    if (r.delta_used > 0.0) CHECK(r.delta_used <= 0.9);
    const double allow = std::max(1e-6, r.alpha_budget);
    CHECK(r.alpha_observed >= 0.001 - allow);
    CHECK(r.alpha_observed <= 0.1 + allow);
  }
  CHECK(any_noise);

  // The recorded per-step differences reproduce the drift norm.
  REQUIRE(res.step_diffs_primal.size() == res.trace.size());
  Matrix acc_p = Matrix::Zero(inst.n, inst.n);
  Matrix acc_d = Matrix::Zero(inst.n, inst.n);
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    acc_p += res.step_diffs_primal[i];
    acc_d += res.step_diffs_dual[i];
  }
  const double recomputed =
      std::sqrt(acc_p.squaredNorm() + acc_d.squaredNorm());
  CHECK(recomputed == doctest::Approx(res.drift_norm).epsilon(1e-10));
}

TEST_CASE("nominal targets keep the textbook schedule") {
  SdpInstance inst = generate_random_sdp(6, 4, 37);
  RunConfig cfg = quantum_config(43);
  cfg.nominal_nu_update = true;
  RunResult res = run(inst, cfg);
  REQUIRE(res.termination == Termination::converged);
  const double rate = 1.0 - cfg.chi / std::sqrt(6.0);
  for (std::size_t i = 0; i + 1 < res.trace.size(); ++i)
    CHECK(res.trace[i + 1].nu ==
          doctest::Approx(rate * res.trace[i].nu).epsilon(1e-12));
}

TEST_CASE("absolute noise regime rescales gamma and the drift budget") {
  SdpInstance inst = generate_random_sdp(6, 4, 47);
  RunConfig cfg = quantum_config(47);
  cfg.gamma = GammaRegime::absolute;
  RunResult res = run(inst, cfg);
  CHECK(res.gamma_value ==
        doctest::Approx(std::sqrt(double(std::max(1, res.planned_iterations)))));
  CHECK(res.drift_bound == doctest::Approx(cfg.xi));
  CHECK(res.drift_ok);
}

TEST_CASE("audit failures name their clause") {
  SdpInstance inst = generate_random_sdp(6, 4, 53);
  RunConfig cfg = quantum_config(59);
  cfg.noise.fast_gaussian = false;
  cfg.noise.shot_cap = 50;  // starved budget cannot honor the error bound
  bool threw = false;
  try {
    run(inst, cfg);
  } catch (const AuditFailure& e) {
    threw = true;
    CHECK(!e.clause.empty());
    CHECK(std::string(e.what()).find("iteration") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("ledger rows recompute from the trace") {
  SdpInstance inst = generate_random_sdp(5, 3, 61);
  RunConfig cfg = exact_config();
  RunResult res = run(inst, cfg);
  const CostLedger& led = res.ledger;
  REQUIRE(led.rows.size() == res.trace.size());
  CHECK(led.multiplier == doctest::Approx(25.0 / (cfg.xi * cfg.xi)));
  double sum = 0.0;
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    const auto& r = res.trace[i];
    const double row = (r.mu1 + r.mu2 + r.mu3) * r.kappa_pipeline *
                       r.kappa_ysum * r.kappa_ysum;
    CHECK(led.rows[i] == doctest::Approx(row).epsilon(1e-12));
    sum += row;
    CHECK(led.eq_lhs[i] == doctest::Approx(r.norm_step * r.ysum_norm));
    CHECK(led.eq_rhs[i] == doctest::Approx(r.kappa_ysum / 4.0));
  }
  CHECK(led.aggregate == doctest::Approx(led.multiplier * sum));

  cfg.compute_ledger = false;
  RunResult bare = run(inst, cfg);
  CHECK(bare.ledger.rows.empty());
}

TEST_CASE("vector runs mirror their diagonal embedding") {
  LpInstance lp = generate_random_lp(8, 4, 67);
  RunConfig cfg = exact_config();
  LpRunResult vec_res = run_lp(lp, cfg);
  RunResult emb_res = run(lp_embed(lp), cfg);
  REQUIRE(vec_res.termination == Termination::converged);
  REQUIRE(emb_res.termination == Termination::converged);
  REQUIRE(vec_res.trace.size() == emb_res.trace.size());
  for (std::size_t i = 0; i < vec_res.trace.size(); ++i)
    CHECK(vec_res.trace[i].nu ==
          doctest::Approx(emb_res.trace[i].nu).epsilon(1e-6));
  CHECK(duality_gap(vec_res.final_state) <= cfg.eps);
}

TEST_CASE("noisy vector run converges") {
  LpInstance lp = generate_random_lp(10, 4, 71);
  RunConfig cfg = quantum_config(73);
  LpRunResult res = run_lp(lp, cfg);
  REQUIRE(res.termination == Termination::converged);
  CHECK(duality_gap(res.final_state) <= cfg.eps);
  CHECK(res.drift_ok);
  bool any_noise = false;
  for (const auto& r : res.trace) any_noise |= r.delta_used > 0.0;
  CHECK(any_noise);
}

TEST_CASE("driving to a fixed target recenters the product") {
  SdpInstance inst = generate_random_sdp(4, 3, 79);
  RunConfig cfg = exact_config();
  IterateState st = find_initial_point(inst, cfg);
  const double target = 0.37 * st.nu;
  IterateState out = drive_to_nu(inst, std::move(st), target, 1e-8);
  CHECK(out.nu == doctest::Approx(target).epsilon(1e-9));
  Matrix prod = out.S.mat() * out.Y.mat();
  const double dev =
      (prod - target * Matrix::Identity(4, 4)).norm();
  CHECK(dev <= 1e-4 * target * 4.0);
  // Feasibility is preserved by the centering moves.
  CHECK(primal_residual(out, inst) <= 1e-7 * (1.0 + target));
  CHECK(dual_residual(out, inst) <= 1e-7 * (1.0 + target));
}

TEST_CASE("trace and ledger serialize deterministically") {
  SdpInstance inst = generate_random_sdp(5, 3, 83);
  RunConfig cfg = quantum_config(89);
  RunResult a = run(inst, cfg);
  RunResult b = run(inst, cfg);
  std::ostringstream ta, tb, la, lb;
  write_trace_csv(ta, a.trace);
  write_trace_csv(tb, b.trace);
  CHECK(ta.str() == tb.str());
  write_ledger_csv(la, a.ledger);
  write_ledger_csv(lb, b.ledger);
  CHECK(la.str() == lb.str());
  CHECK(ta.str().rfind("iter,nu,trace_sy,dist,", 0) == 0);
  CHECK(la.str().rfind("iter,row,eq_lhs,eq_rhs,eq_applicable,eq_ok", 0) == 0);
}
