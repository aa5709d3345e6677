// Command-line front end: instance generation, solving in both modes,
// tomography benchmarking, and a randomized identity battery. Exit codes are
// a stable contract: 0 success, 1 unexpected runtime failure, 2 invalid
// input, 3 iteration cap reached, 4 audit failure, 5 verify failure.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qipm/ipm.hpp"
#include "qipm/lifted.hpp"
#include "qipm/rng.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitMaxIters = 3;
constexpr int kExitAudit = 4;
constexpr int kExitVerify = 5;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int classify(const qipm::Error& e) {
  if (dynamic_cast<const qipm::AuditFailure*>(&e)) return kExitAudit;
  if (dynamic_cast<const qipm::InvalidInput*>(&e) ||
      dynamic_cast<const qipm::DimensionMismatch*>(&e) ||
      dynamic_cast<const qipm::ParseError*>(&e) ||
      dynamic_cast<const qipm::NoFeasibleSeed*>(&e) ||
      dynamic_cast<const qipm::EmptyGraph*>(&e) ||
      dynamic_cast<const qipm::ZeroVector*>(&e))
    return kExitInvalid;
  return kExitRuntime;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOpts {
  bool sdp = false;
  bool lp = false;
  bool maxcut = false;
  int n = 8;
  int m = 8;
  std::uint64_t seed = 1;
  std::string graph;
  std::string out = "instance.txt";
};

int cmd_generate(const GenerateOpts& o) {
  qipm::AnyInstance inst;
  if (o.maxcut) {
    std::ifstream in(o.graph);
    if (!in) {
      std::cerr << "cannot open graph file: " << o.graph << "\n";
      return kExitInvalid;
    }
    int nv = 0;
    const std::vector<qipm::WeightedEdge> edges = qipm::read_edge_list(in, &nv);
    inst = qipm::generate_maxcut_sdp(edges, nv);
  } else if (o.lp) {
    inst = qipm::generate_random_lp(o.n, o.m, o.seed);
  } else {
    inst = qipm::generate_random_sdp(o.n, o.m, o.seed);
  }
  std::visit([](const auto& i) { i.validate(); }, inst);
  qipm::write_instance_file(o.out, inst);
  std::visit(
      [&](const auto& i) {
        const bool is_lp =
            std::is_same_v<std::decay_t<decltype(i)>, qipm::LpInstance>;
        std::cout << (is_lp ? "lp" : "sdp") << " instance: n=" << i.n
                  << " m=" << i.m << ", primal seed "
                  << (i.seed_primal_x ? "yes" : "no") << ", dual seed "
                  << (i.seed_dual_y ? "yes" : "no") << ", checks ok, written to "
                  << o.out << "\n";
      },
      inst);
  return 0;
}

// ---------------------------------------------------------------------------
// solve / solve-lp

struct SolveOpts {
  std::string instance;
  std::string mode = "exact";
  double eps = 1e-6;
  double xi = 0.01;
  double eta = 0.1;
  double chi = 0.1;
  std::string gamma = "rel";
  std::uint64_t seed = 0;
  bool audit = true;
  int max_iters = 2000;
  std::string out = ".";
  double norm_rel_err = 0.0;
  bool fast_gaussian = false;
  bool strict_tomo = false;
  bool delta_from_noisy_norm = false;
  bool nominal_nu = false;
  bool no_ledger = false;
  long long shot_cap = 100'000'000;
};

qipm::RunConfig to_config(const SolveOpts& o) {
  qipm::RunConfig cfg;
  cfg.mode = o.mode == "qsim" ? qipm::Mode::quantum_sim : qipm::Mode::exact;
  cfg.eps = o.eps;
  cfg.xi = o.xi;
  cfg.eta = o.eta;
  cfg.chi = o.chi;
  cfg.gamma = o.gamma == "abs" ? qipm::GammaRegime::absolute
                               : qipm::GammaRegime::relative;
  cfg.max_iters = o.max_iters;
  cfg.audit = o.audit;
  cfg.delta_from_noisy_norm = o.delta_from_noisy_norm;
  cfg.nominal_nu_update = o.nominal_nu;
  cfg.compute_ledger = !o.no_ledger;
  cfg.noise.rng_seed = o.seed;
  cfg.noise.norm_rel_err = o.norm_rel_err;
  cfg.noise.fast_gaussian = o.fast_gaussian;
  cfg.noise.strict = o.strict_tomo;
  cfg.noise.shot_cap = o.shot_cap;
  cfg.validate();
  return cfg;
}

void echo_config(ordered_json& summary, const SolveOpts& o) {
  summary["config"] = {
      {"mode", o.mode},         {"eps", o.eps},
      {"xi", o.xi},             {"eta", o.eta},
      {"chi", o.chi},           {"gamma", o.gamma},
      {"seed", o.seed},         {"audit", o.audit},
      {"max_iters", o.max_iters}};
  if (o.mode == "qsim")
    summary["noise"] = {{"norm_rel_err", o.norm_rel_err},
                        {"fast_gaussian", o.fast_gaussian},
                        {"strict", o.strict_tomo},
                        {"delta_from_noisy_norm", o.delta_from_noisy_norm},
                        {"shot_cap", o.shot_cap}};
}

template <class Res>
int finish_solve(const Res& res, const qipm::RunConfig& cfg,
                 ordered_json& summary, const std::string& outdir,
                 double final_gap, double final_nu, double final_dist,
                 double primal_obj, double dual_obj, double primal_resid,
                 double dual_resid) {
  {
    std::ofstream tf(outdir + "/trace.csv");
    qipm::write_trace_csv(tf, res.trace);
  }
  if (cfg.compute_ledger && !res.trace.empty()) {
    std::ofstream lf(outdir + "/ledger.csv");
    qipm::write_ledger_csv(lf, res.ledger);
  }
  const bool converged = res.termination == qipm::Termination::converged;
  summary["termination"] = converged ? "converged" : "max_iters";
  summary["iterations"] = res.iterations;
  summary["planned_iterations"] = res.planned_iterations;
  summary["gamma_value"] = res.gamma_value;
  summary["final_gap"] = final_gap;
  summary["final_nu"] = final_nu;
  summary["final_dist"] = final_dist;
  summary["primal_objective"] = primal_obj;
  summary["dual_objective"] = dual_obj;
  summary["primal_resid"] = primal_resid;
  summary["dual_resid"] = dual_resid;
  summary["drift"] = {{"norm", res.drift_norm},
                      {"bound", res.drift_bound},
                      {"ok", res.drift_ok},
                      {"bc_norm", res.bc_norm}};
  summary["audit_warnings"] = res.audit_warnings;
  if (cfg.compute_ledger && !res.trace.empty())
    summary["ledger"] = {{"multiplier", res.ledger.multiplier},
                         {"aggregate", res.ledger.aggregate},
                         {"rows", res.ledger.rows.size()},
                         {"eq_all_ok", res.ledger.eq_all_ok}};
  {
    std::ofstream sf(outdir + "/summary.json");
    sf << summary.dump(2) << "\n";
  }
  std::cout << (converged ? "converged" : "iteration cap reached") << " after "
            << res.iterations << " iterations, gap " << fmt17(final_gap)
            << ", artifacts in " << outdir << "\n";
  return converged ? 0 : kExitMaxIters;
}

int cmd_solve(const SolveOpts& o, bool want_lp) {
  const qipm::RunConfig cfg = to_config(o);
  const qipm::AnyInstance any = qipm::read_instance_file(o.instance);
  std::filesystem::create_directories(o.out);

  ordered_json summary;
  summary["command"] = want_lp ? "solve-lp" : "solve";
  summary["instance"] = o.instance;
  echo_config(summary, o);

  try {
    if (want_lp) {
      if (!std::holds_alternative<qipm::LpInstance>(any)) {
        std::cerr << "solve-lp needs an lp instance file\n";
        return kExitInvalid;
      }
      const auto& inst = std::get<qipm::LpInstance>(any);
      summary["n"] = inst.n;
      summary["m"] = inst.m;
      const qipm::LpRunResult res = qipm::run_lp(inst, cfg);
      const auto& st = res.final_state;
      return finish_solve(res, cfg, summary, o.out, st.s.dot(st.y), st.nu,
                          qipm::lp_path_distance(st.s, st.y, st.nu),
                          inst.cost_vec.dot(st.x), inst.rhs_vec.dot(st.y),
                          qipm::primal_residual(st, inst),
                          qipm::dual_residual(st, inst));
    }
    if (!std::holds_alternative<qipm::SdpInstance>(any)) {
      std::cerr << "solve needs an sdp instance file (use solve-lp)\n";
      return kExitInvalid;
    }
    const auto& inst = std::get<qipm::SdpInstance>(any);
    summary["n"] = inst.n;
    summary["m"] = inst.m;
    const qipm::RunResult res = qipm::run(inst, cfg);
    const auto& st = res.final_state;
    return finish_solve(res, cfg, summary, o.out, st.trace_sy(), st.nu,
                        qipm::central_path_distance(st.S, st.Y, st.nu),
                        inst.cost_vec.dot(st.x),
                        qipm::trace_product(inst.rhs_mat, st.Y),
                        qipm::primal_residual(st, inst),
                        qipm::dual_residual(st, inst));
  } catch (const qipm::AuditFailure& e) {
    summary["termination"] = "audit_failure";
    summary["audit_clause"] = e.clause;
    summary["error"] = e.what();
    std::ofstream sf(o.out + "/summary.json");
    sf << summary.dump(2) << "\n";
    std::cerr << "audit failure (" << e.clause << "): " << e.what() << "\n";
    return kExitAudit;
  }
}

// ---------------------------------------------------------------------------
// tomo-bench

struct BenchOpts {
  std::vector<int> dims = {4, 16, 64, 256};
  std::vector<double> deltas = {0.1, 0.2};
  int trials = 500;
  std::uint64_t seed = 1;
  std::string out = ".";
  bool fast = false;
};

int cmd_tomo_bench(const BenchOpts& o) {
  for (const double dl : o.deltas)
    if (!(dl > 0.0 && dl < 1.0)) {
      std::cerr << "delta must lie in (0, 1)\n";
      return kExitInvalid;
    }
  for (const int d : o.dims)
    if (d < 2) {
      std::cerr << "dim must be at least 2\n";
      return kExitInvalid;
    }
  if (o.trials < 1) {
    std::cerr << "trials must be positive\n";
    return kExitInvalid;
  }
  std::filesystem::create_directories(o.out);
  std::ofstream rf(o.out + "/report.csv");
  rf << "dim,delta,trials,successes,success_rate,success_bound,"
        "median_error,p95_error,max_error,mean_shots,capped\n";

  for (const int d : o.dims) {
    for (const double dl : o.deltas) {
      const std::uint64_t cell = qipm::substream_seed(
          o.seed, "bench",
          static_cast<std::uint64_t>(d) * 1000003u +
              static_cast<std::uint64_t>(std::llround(dl * 1e6)));
      int successes = 0;
      long long capped = 0;
      double shot_sum = 0.0;
      std::vector<double> errs(static_cast<std::size_t>(o.trials));
      for (int t = 0; t < o.trials; ++t) {
        qipm::Engine eng = qipm::make_engine(cell, "vec", t);
        std::normal_distribution<double> gauss(0.0, 1.0);
        qipm::Vector x(d);
        for (int i = 0; i < d; ++i) x(i) = gauss(eng);
        if (x.norm() < 1e-12) x(0) = 1.0;
        x.normalize();
        qipm::NoiseConfig nc;
        nc.delta = dl;
        nc.fast_gaussian = o.fast;
        nc.rng_seed = qipm::substream_seed(cell, "trial", t);
        const qipm::TomographyReport rep = qipm::tomography_estimate(x, nc);
        successes += rep.success ? 1 : 0;
        capped += rep.capped ? 1 : 0;
        shot_sum += static_cast<double>(rep.shots_amplitude);
        errs[static_cast<std::size_t>(t)] = rep.achieved_error;
      }
      std::sort(errs.begin(), errs.end());
      const double med = errs[errs.size() / 2];
      const double p95 =
          errs[static_cast<std::size_t>(0.95 * (o.trials - 1))];
      const double bound = 1.0 - std::pow(static_cast<double>(d), -0.83);
      const double rate = static_cast<double>(successes) / o.trials;
      rf << d << ',' << fmt17(dl) << ',' << o.trials << ',' << successes << ','
         << fmt17(rate) << ',' << fmt17(bound) << ',' << fmt17(med) << ','
         << fmt17(p95) << ',' << fmt17(errs.back()) << ','
         << fmt17(shot_sum / o.trials) << ',' << capped << '\n';
      std::cout << "d=" << d << " delta=" << dl << ": " << successes << "/"
                << o.trials << " within sqrt(7)*delta (rate " << rate
                << ", bound " << bound << ")\n";
    }
  }
  std::cout << "report written to " << o.out << "/report.csv\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
  std::uint64_t seed = 1;
  int cases = 25;
  bool negative_control = false;
};

qipm::SymMatrix random_pd(int n, qipm::Engine& eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  qipm::Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = gauss(eng);
  return qipm::SymMatrix::Symmetrized(a * a.transpose() +
                                      0.1 * qipm::Matrix::Identity(n, n));
}

qipm::Matrix random_mat(int n, qipm::Engine& eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  qipm::Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = gauss(eng);
  return a;
}

double general_spectral_norm(const qipm::Matrix& a) {
  return std::sqrt(std::max(
      0.0, qipm::max_eigenvalue(qipm::SymMatrix::Symmetrized(
               a.transpose() * a))));
}

int cmd_verify(const VerifyOpts& o) {
  const std::vector<int> dims = {2, 3, 5, 8};
  int failed_identities = 0;
  const auto report = [&](const char* name, int pass, int total) {
    const bool ok = pass == total;
    std::cout << (ok ? "  ok  " : "FAIL  ") << name << " (" << pass << "/"
              << total << ")\n";
    if (!ok) ++failed_identities;
  };

  // Sub-multiplicativity of the Frobenius norm against the spectral norm.
  {
    int pass = 0, total = 0;
    for (const int n : dims)
      for (int c = 0; c < o.cases; ++c) {
        qipm::Engine eng = qipm::make_engine(o.seed, "fro", total);
        const qipm::Matrix a = random_mat(n, eng);
        const qipm::Matrix b = random_mat(n, eng);
        const double ab = (a * b).norm();
        const bool ok =
            ab <= general_spectral_norm(a) * b.norm() + 1e-9 &&
            ab <= a.norm() * general_spectral_norm(b) + 1e-9;
        pass += ok ? 1 : 0;
        ++total;
      }
    report("frobenius-products", pass, total);
  }

  // 0 ≤ Tr(PQ) ≤ ‖P‖₂·Tr(Q) for positive definite P, Q.
  {
    int pass = 0, total = 0;
    for (const int n : dims)
      for (int c = 0; c < o.cases; ++c) {
        qipm::Engine eng = qipm::make_engine(o.seed, "psd", total);
        const qipm::SymMatrix p = random_pd(n, eng);
        const qipm::SymMatrix q = random_pd(n, eng);
        const double tr = qipm::trace_product(p, q);
        const bool ok = tr >= -1e-12 &&
                        tr <= qipm::spectral_norm(p) *
                                  q.mat().trace() * (1.0 + 1e-12) + 1e-12;
        pass += ok ? 1 : 0;
        ++total;
      }
    report("psd-trace-bounds", pass, total);
  }

  // d(S, Y, ν) is symmetric in its two matrix arguments.
  {
    int pass = 0, total = 0;
    for (const int n : dims)
      for (int c = 0; c < o.cases; ++c) {
        qipm::Engine eng = qipm::make_engine(o.seed, "sym", total);
        const qipm::SymMatrix s = random_pd(n, eng);
        const qipm::SymMatrix y = random_pd(n, eng);
        const double nu = qipm::trace_product(s, y) / n;
        const double d1 = qipm::central_path_distance(s, y, nu);
        const double d2 = qipm::central_path_distance(y, s, nu);
        pass += std::abs(d1 - d2) <= 1e-10 * (1.0 + d1) ? 1 : 0;
        ++total;
      }
    report("path-distance-symmetry", pass, total);
  }

  // ν(n − √n·d) ≤ Tr(SY) ≤ ν(n + √n·d) for every ν > 0.
  {
    int pass = 0, total = 0;
    for (const int n : dims)
      for (int c = 0; c < o.cases; ++c) {
        qipm::Engine eng = qipm::make_engine(o.seed, "gap", total);
        const qipm::SymMatrix s = random_pd(n, eng);
        const qipm::SymMatrix y = random_pd(n, eng);
        std::uniform_real_distribution<double> uni(0.5, 2.0);
        const double nu = uni(eng) * qipm::trace_product(s, y) / n;
        const double d = qipm::central_path_distance(s, y, nu);
        const double tr = qipm::trace_product(s, y);
        const double rn = std::sqrt(static_cast<double>(n));
        const bool ok = tr >= nu * (n - rn * d) - 1e-9 &&
                        tr <= nu * (n + rn * d) + 1e-9;
        pass += ok ? 1 : 0;
        ++total;
      }
    report("gap-distance-sandwich", pass, total);
  }

  // The Newton step vanishes exactly on the central path.
  {
    int pass = 0, total = 0;
    for (const int n : dims)
      for (int c = 0; c < o.cases && c < 8; ++c) {
        const qipm::SdpInstance inst = qipm::generate_random_sdp(
            n, n, qipm::substream_seed(o.seed, "zero", total));
        qipm::Engine eng = qipm::make_engine(o.seed, "zero-y", total);
        const qipm::SymMatrix y = random_pd(n, eng);
        std::uniform_real_distribution<double> uni(0.5, 2.0);
        const double nu = uni(eng);
        const qipm::SymMatrix s = qipm::inverse_sym(y).scaled(nu);
        const qipm::IterateState st =
            qipm::IterateState::make(s, y, qipm::Vector::Zero(inst.m));
        const qipm::NewtonSolution sol = qipm::solve_exact(inst, st, st.nu);
        pass += sol.norm_dSdY <= 1e-8 * (1.0 + nu) ? 1 : 0;
        ++total;
      }
    report("newton-zero-at-center", pass, total);
  }

  // Lifted algebra: the implicit actions match the dense lifts, and the hat
  // lift is the row-transposing permutation of the tilde lift.
  {
    int pass = 0, total = 0;
    for (const int n : {2, 3, 5})
      for (int c = 0; c < o.cases; ++c) {
        qipm::Engine eng = qipm::make_engine(o.seed, "lift", total);
        const qipm::SymMatrix z =
            qipm::SymMatrix::Symmetrized(random_mat(n, eng));
        const qipm::Matrix w = random_mat(n, eng);
        const qipm::Matrix tl = qipm::assemble_tilde(z);
        const qipm::Matrix ht = qipm::assemble_hat(z);
        const qipm::Matrix p = qipm::transpose_permutation(n);
        const double scale = 1.0 + tl.norm() + w.norm();
        const bool ok =
            (tl * qipm::vec_rm(w) - qipm::vec_rm(qipm::apply_tilde(z, w)))
                    .norm() <= 1e-10 * scale &&
            (ht * qipm::vec_rm(w) - qipm::vec_rm(qipm::apply_hat(z, w)))
                    .norm() <= 1e-10 * scale &&
            (ht - p * tl).norm() <= 1e-10 * scale;
        pass += ok ? 1 : 0;
        ++total;
      }
    report("lifted-algebra", pass, total);
  }

  // Newton matrix factorization M = M1·M2 on random positive pairs.
  {
    int pass = 0, total = 0;
    for (const int n : dims)
      for (int c = 0; c < 8; ++c) {
        const qipm::SdpInstance inst = qipm::generate_random_sdp(
            n, std::min(n, 3), qipm::substream_seed(o.seed, "fac", total));
        qipm::Engine eng = qipm::make_engine(o.seed, "fac-sy", total);
        const qipm::SymMatrix s = random_pd(n, eng);
        const qipm::SymMatrix y = random_pd(n, eng);
        const qipm::IterateState st =
            qipm::IterateState::make(s, y, qipm::Vector::Zero(inst.m));
        const qipm::Matrix m = qipm::newton_matrix(inst, st);
        qipm::Matrix m1 = qipm::newton_factor_m1(st, inst.m);
        qipm::Matrix m2 = qipm::newton_factor_m2(inst, st);
        if (o.negative_control) m2(0, 0) += 1e-3 * (1.0 + m2.norm());
        pass += (m1 * m2 - m).norm() <= 1e-10 * m.norm() ? 1 : 0;
        ++total;
      }
    report("newton-factorization", pass, total);
  }

  // The factored solver agrees with the dense one.
  {
    int pass = 0, total = 0;
    for (const int n : dims)
      for (int c = 0; c < 6; ++c) {
        const qipm::SdpInstance inst = qipm::generate_random_sdp(
            n, n, qipm::substream_seed(o.seed, "uni", total));
        qipm::Matrix s0 = -inst.rhs_mat.mat();
        for (int k = 0; k < inst.m; ++k)
          s0 += (*inst.seed_primal_x)(k)*inst.constraint_mats[k].mat();
        const qipm::IterateState st = qipm::IterateState::make(
            qipm::SymMatrix::Symmetrized(s0), *inst.seed_dual_y,
            *inst.seed_primal_x);
        const double nu_next = (1.0 - 0.1 / std::sqrt(n)) * st.nu;
        const qipm::NewtonSolution a = qipm::solve_exact(inst, st, nu_next);
        const qipm::NewtonSolution b = qipm::solve_dense(inst, st, nu_next);
        const double scale = 1.0 + a.norm_dSdY + a.dx.norm();
        const bool ok = (a.dx - b.dx).norm() <= 1e-8 * scale &&
                        (a.dS.mat() - b.dS.mat()).norm() <= 1e-8 * scale &&
                        (a.dY.mat() - b.dY.mat()).norm() <= 1e-8 * scale;
        pass += ok ? 1 : 0;
        ++total;
      }
    report("newton-uniqueness", pass, total);
  }

  // The two halves of the step are trace-orthogonal, so the updated gap is
  // exactly ν′·n.
  {
    int pass = 0, total = 0;
    for (const int n : dims)
      for (int c = 0; c < 6; ++c) {
        const qipm::SdpInstance inst = qipm::generate_random_sdp(
            n, n, qipm::substream_seed(o.seed, "orth", total));
        const qipm::RunConfig cfg;
        const qipm::IterateState st = qipm::find_initial_point(inst, cfg);
        const double nu_next = (1.0 - 0.1 / std::sqrt(n)) * st.nu;
        const qipm::NewtonSolution sol = qipm::solve_exact(inst, st, nu_next);
        const double cross = qipm::trace_product(sol.dS, sol.dY);
        const double tr_next = qipm::trace_product(st.S.plus(sol.dS),
                                                   st.Y.plus(sol.dY));
        const double scale =
            1.0 + sol.dS.mat().norm() * sol.dY.mat().norm();
        const bool ok = std::abs(cross) <= 1e-10 * scale &&
                        std::abs(tr_next - nu_next * n) <=
                            1e-9 * (1.0 + nu_next * n);
        pass += ok ? 1 : 0;
        ++total;
      }
    report("step-orthogonality", pass, total);
  }

  if (failed_identities > 0) {
    std::cout << failed_identities << " identity group(s) failed\n";
    return kExitVerify;
  }
  std::cout << "all identity groups passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interior-point SDP/LP solver with a simulated quantum "
               "linear-system pipeline"};
  app.require_subcommand(1);

  GenerateOpts gopts;
  CLI::App* gen = app.add_subcommand("generate", "write a random instance file");
  gen->add_flag("--sdp", gopts.sdp, "random self-anchored SDP");
  gen->add_flag("--lp", gopts.lp, "random LP");
  gen->add_flag("--maxcut", gopts.maxcut, "cut relaxation from an edge list");
  gen->add_option("-n", gopts.n, "ambient dimension");
  gen->add_option("-m", gopts.m, "number of constraints");
  gen->add_option("--seed", gopts.seed, "generator seed");
  gen->add_option("--graph", gopts.graph, "edge list file (maxcut)");
  gen->add_option("-o,--out", gopts.out, "output instance file");
  gen->callback([&] {
    if (gopts.sdp + gopts.lp + gopts.maxcut != 1)
      throw CLI::ValidationError(
          "generate", "choose exactly one of --sdp, --lp, --maxcut");
    if (gopts.maxcut && gopts.graph.empty())
      throw CLI::ValidationError("generate", "--maxcut needs --graph");
    if (!gopts.maxcut && !gopts.graph.empty())
      throw CLI::ValidationError("generate", "--graph only applies to --maxcut");
    if (gopts.maxcut &&
        (gen->count("-n") || gen->count("-m") || gen->count("--seed")))
      throw CLI::ValidationError(
          "generate", "-n/-m/--seed do not apply to --maxcut");
  });

  const auto add_solve_flags = [](CLI::App* cmd, SolveOpts& o) {
    cmd->add_option("instance", o.instance, "instance file")->required();
    cmd->add_option("--mode", o.mode, "solver mode")
        ->check(CLI::IsMember({"exact", "qsim"}))
        ->envname("QIPM_MODE");
    cmd->add_option("--eps", o.eps, "target duality gap")->envname("QIPM_EPS");
    cmd->add_option("--xi", o.xi, "per-step solve-error budget")
        ->envname("QIPM_XI");
    cmd->add_option("--eta", o.eta, "path-distance bound")->envname("QIPM_ETA");
    cmd->add_option("--chi", o.chi, "per-step nu shrink factor")
        ->envname("QIPM_CHI");
    cmd->add_option("--gamma", o.gamma, "error-budget scaling regime")
        ->check(CLI::IsMember({"rel", "abs"}))
        ->envname("QIPM_GAMMA");
    cmd->add_option("--seed", o.seed, "run seed")->envname("QIPM_SEED");
    cmd->add_flag("--audit,!--no-audit", o.audit,
                  "throw on violated per-step clauses")
        ->envname("QIPM_AUDIT");
    cmd->add_option("--max-iters", o.max_iters, "iteration cap")
        ->envname("QIPM_MAX_ITERS");
    cmd->add_option("--out", o.out, "artifact directory")->envname("QIPM_OUT");
    cmd->add_option("--norm-rel-err", o.norm_rel_err,
                    "relative error of simulated norm estimates");
    cmd->add_flag("--fast-gaussian", o.fast_gaussian,
                  "model-level noise without shot sampling");
    cmd->add_flag("--strict-tomo", o.strict_tomo,
                  "throw when a tomography bound fails");
    cmd->add_flag("--delta-from-noisy-norm", o.delta_from_noisy_norm,
                  "size delta from a noisy step-norm estimate");
    cmd->add_flag("--nominal-nu", o.nominal_nu,
                  "advance nu by the nominal factor instead of Tr(SY)/n");
    cmd->add_flag("--no-ledger", o.no_ledger, "skip per-iteration diagnostics");
    cmd->add_option("--shot-cap", o.shot_cap, "per-phase shot budget cap");
  };

  SolveOpts sopts;
  CLI::App* solve =
      app.add_subcommand("solve", "run the path-following solver on an SDP");
  add_solve_flags(solve, sopts);

  SolveOpts lopts;
  CLI::App* solve_lp =
      app.add_subcommand("solve-lp", "run the vector-form solver on an LP");
  add_solve_flags(solve_lp, lopts);

  BenchOpts bopts;
  CLI::App* bench = app.add_subcommand(
      "tomo-bench", "tomography success-rate sweep over (dim, delta)");
  bench->add_option("--dims", bopts.dims, "state dimensions");
  bench->add_option("--deltas", bopts.deltas, "precision grid");
  bench->add_option("--trials", bopts.trials, "trials per cell");
  bench->add_option("--seed", bopts.seed, "sweep seed")->envname("QIPM_SEED");
  bench->add_option("--out", bopts.out, "artifact directory")
      ->envname("QIPM_OUT");
  bench->add_flag("--fast", bopts.fast, "model-level noise");

  VerifyOpts vopts;
  CLI::App* verify = app.add_subcommand(
      "verify", "randomized identity battery over the solver algebra");
  verify->add_option("--seed", vopts.seed, "battery seed")
      ->envname("QIPM_SEED");
  verify->add_option("--cases", vopts.cases, "cases per identity and dim");
  verify
      ->add_flag("--negative-control", vopts.negative_control,
                 "inject a deliberate defect (test hook)")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (gen->parsed()) return cmd_generate(gopts);
    if (solve->parsed()) return cmd_solve(sopts, false);
    if (solve_lp->parsed()) return cmd_solve(lopts, true);
    if (bench->parsed()) return cmd_tomo_bench(bopts);
    if (verify->parsed()) return cmd_verify(vopts);
  } catch (const qipm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
