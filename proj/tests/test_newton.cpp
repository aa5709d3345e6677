#include <cmath>
#include <random>

#include "doctest.h"
#include "qipm/errors.hpp"
#include "qipm/newton.hpp"
#include "qipm/rng.hpp"

using namespace qipm;

namespace {

// Feasible iterate from the instance seeds (exactly on the primal affine
// slice and the dual subspace).
IterateState seeded_state(const SdpInstance& inst) {
  Matrix s0 = -inst.rhs_mat.mat();
  for (int k = 0; k < inst.m; ++k)
    s0 += (*inst.seed_primal_x)[k] * inst.constraint_mats[k].mat();
  return IterateState::make(SymMatrix::Symmetrized(s0), *inst.seed_dual_y,
                            *inst.seed_primal_x);
}

LpIterate seeded_state_lp(const LpInstance& lp) {
  Vector s0 = -lp.rhs_vec;
  for (int k = 0; k < lp.m; ++k)
    s0 += (*lp.seed_primal_x)[k] * lp.constraint_vecs[k];
  return LpIterate::make(s0, *lp.seed_dual_y, *lp.seed_primal_x);
}

// Identity-scaled single-constraint instance whose pipeline conditioning has
// a closed form.
SdpInstance identity_instance(int n) {
  SdpInstance inst;
  inst.n = n;
  inst.m = 1;
  const double root = std::sqrt(static_cast<double>(n));
  inst.constraint_mats.push_back(SymMatrix::Identity(n).scaled(1.0 / root));
  inst.rhs_mat = SymMatrix::Zero(n);
  inst.dual_anchor = SymMatrix::Identity(n);
  inst.cost_vec = Vector::Constant(1, root);
  inst.seed_primal_x = Vector::Constant(1, root);
  inst.seed_dual_y = SymMatrix::Identity(n);
  inst.validate();
  return inst;
}

}  // namespace

TEST_CASE("scalar problem has a hand-checkable step") {
  // One variable, one constraint: s = 2, y = 1, target 1. The direction must
  // keep y fixed (its only feasible move is zero) and take s down by one.
  SdpInstance inst;
  inst.n = 1;
  inst.m = 1;
  inst.constraint_mats.push_back(SymMatrix::Identity(1));
  inst.rhs_mat = SymMatrix::Zero(1);
  inst.dual_anchor = SymMatrix::Identity(1);
  inst.cost_vec = Vector::Ones(1);
  inst.validate();

  IterateState st = IterateState::make(
      SymMatrix::Diagonal(Vector::Constant(1, 2.0)), SymMatrix::Identity(1),
      Vector::Constant(1, 2.0));
  NewtonSolution sol = solve_exact(inst, st, 1.0);
  CHECK(sol.dx[0] == doctest::Approx(-1.0));
  CHECK(sol.dS(0, 0) == doctest::Approx(-1.0));
  CHECK(sol.dY(0, 0) == doctest::Approx(0.0));
  CHECK(sol.residual <= 1e-12);
}

TEST_CASE("step vanishes exactly on the path") {
  SdpInstance inst = generate_random_sdp(5, 4, 3);
  IterateState st = seeded_state(inst);
  // Re-target the current product: S Y = nu I would give a zero direction,
  // and the seeded pair is built on the path.
  NewtonSolution sol = solve_exact(inst, st, st.nu);
  CHECK(sol.norm_dSdY <= 1e-8 * (1.0 + st.nu));
}

TEST_CASE("assembled system equals its factorization") {
  for (auto [n, m] : {std::pair{3, 2}, {4, 4}, {5, 8}}) {
    SdpInstance inst = generate_random_sdp(n, m, 100 + n);
    IterateState st = seeded_state(inst);
    Matrix big = newton_matrix(inst, st);
    Matrix m1 = newton_factor_m1(st, inst.m);
    Matrix m2 = newton_factor_m2(inst, st);
    CHECK((m1 * m2 - big).norm() <= 1e-10 * big.norm());

    NewtonFactors f = factorize(inst, st);
    CHECK((f.m1 - m1).norm() == 0.0);
    CHECK((f.m2 - m2).norm() == 0.0);
    CHECK(f.mu1 == doctest::Approx(mu_m1(st.Y)));
    CHECK(f.mu2 == doctest::Approx(mu_m2(inst, st.S, st.Y_inv)));
    CHECK(f.mu3 == doctest::Approx(mu_m3(inst)));
  }
}

TEST_CASE("right-hand side stacks the product residual over zeros") {
  SdpInstance inst = generate_random_sdp(3, 2, 11);
  IterateState st = seeded_state(inst);
  const double target = 0.9 * st.nu;
  Vector r = newton_rhs(st, target);
  REQUIRE(r.size() == 9 + 2);
  Matrix expect = target * Matrix::Identity(3, 3) - st.S.mat() * st.Y.mat();
  CHECK((r.head(9) - vec_rm(expect)).norm() <= 1e-13);
  CHECK(r.tail(2).norm() == 0.0);
}

TEST_CASE("factored and dense solves agree") {
  Engine eng = make_engine(23, "solve");
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 12; ++t) {
    const int n = 3 + t % 3;
    const int m = 1 + t % std::min(4, n);
    SdpInstance inst = generate_random_sdp(n, m, 500 + t);
    IterateState st = seeded_state(inst);
    // Wander off the path along feasible directions to exercise generic
    // iterates: primal moves in span(A), dual stays dual-feasible by scaling.
    Vector dxp(m);
    for (int k = 0; k < m; ++k) dxp[k] = 0.05 * gauss(eng);
    Matrix s1 = st.S.mat();
    for (int k = 0; k < m; ++k) s1 += dxp[k] * inst.constraint_mats[k].mat();
    if (!is_positive_definite(SymMatrix::Symmetrized(s1))) continue;
    st = IterateState::make(SymMatrix::Symmetrized(s1), st.Y, st.x + dxp);

    const double target = (1.0 - 0.1 / std::sqrt(double(n))) * st.nu;
    NewtonSolution fast = solve_exact(inst, st, target);
    NewtonSolution dense = solve_dense(inst, st, target);
    const double scale =
        1.0 + fast.dx.norm() + fast.dS.mat().norm() + fast.dY.mat().norm();
    CHECK((fast.dx - dense.dx).norm() <= 1e-8 * scale);
    CHECK((fast.dS.mat() - dense.dS.mat()).norm() <= 1e-8 * scale);
    CHECK((fast.dY.mat() - dense.dY.mat()).norm() <= 1e-8 * scale);

    // Defining relations of the direction.
    Matrix lhs = fast.dS.mat() * st.Y.mat() + st.S.mat() * fast.dY.mat();
    Matrix rhs = target * Matrix::Identity(n, n) - st.S.mat() * st.Y.mat();
    CHECK((lhs - rhs).norm() <= 1e-8 * (1.0 + rhs.norm()));
    Matrix span = Matrix::Zero(n, n);
    for (int k = 0; k < m; ++k) span += fast.dx[k] * inst.constraint_mats[k].mat();
    CHECK((span - fast.dS.mat()).norm() <= 1e-9 * scale);
    for (int k = 0; k < m; ++k)
      CHECK(std::abs(trace_product(inst.constraint_mats[k], fast.dY)) <=
            1e-8 * scale);
    CHECK(fast.dY_asymmetry <= 1e-8);

    // The two subspaces are trace-orthogonal.
    CHECK(std::abs(trace_product(fast.dS, fast.dY)) <= 1e-8 * scale * scale);
  }
}

TEST_CASE("pipeline conditioning at the identity is the golden ratio squared") {
  const double phi2 = (3.0 + std::sqrt(5.0)) / 2.0;
  for (int n : {2, 3, 4}) {
    SdpInstance inst = identity_instance(n);
    IterateState st = IterateState::make(SymMatrix::Identity(n),
                                         SymMatrix::Identity(n),
                                         Vector::Constant(1, std::sqrt(double(n))));
    CHECK(kappa_pipeline(inst, st) == doctest::Approx(phi2).epsilon(1e-9));
  }
}

TEST_CASE("pipeline conditioning is reported by the solver") {
  SdpInstance inst = generate_random_sdp(4, 3, 9);
  IterateState st = seeded_state(inst);
  NewtonSolution sol = solve_exact(inst, st, 0.95 * st.nu);
  CHECK(sol.kappa_pipeline == doctest::Approx(kappa_pipeline(inst, st)));
  CHECK(sol.kappa_pipeline >= 1.0);
}

TEST_CASE("vector solve matches the diagonal embedding") {
  for (int t = 0; t < 6; ++t) {
    LpInstance lp = generate_random_lp(6, 3, 900 + t);
    LpIterate st = seeded_state_lp(lp);
    const double target = (1.0 - 0.1 / std::sqrt(6.0)) * st.nu;
    LpNewtonSolution sol = solve_lp(lp, st, target);

    // Defining relations.
    Vector lhs = sol.ds.array() * st.y.array() + st.s.array() * sol.dy.array();
    Vector rhs = Vector::Constant(6, target) -
                 (st.s.array() * st.y.array()).matrix();
    CHECK((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    Vector span = Vector::Zero(6);
    for (int k = 0; k < lp.m; ++k) span += sol.dx[k] * lp.constraint_vecs[k];
    CHECK((span - sol.ds).norm() <= 1e-10 * (1.0 + sol.ds.norm()));
    for (int k = 0; k < lp.m; ++k)
      CHECK(std::abs(lp.constraint_vecs[k].dot(sol.dy)) <=
            1e-9 * (1.0 + sol.dy.norm()));

    // The diagonal embedding reproduces the same coordinates.
    SdpInstance emb = lp_embed(lp);
    IterateState est = IterateState::make(SymMatrix::Diagonal(st.s),
                                          SymMatrix::Diagonal(st.y), st.x);
    NewtonSolution esol = solve_exact(emb, est, target);
    CHECK((esol.dx - sol.dx).norm() <= 1e-8 * (1.0 + sol.dx.norm()));
    CHECK((esol.dY.mat().diagonal() - sol.dy).norm() <=
          1e-8 * (1.0 + sol.dy.norm()));
  }
}

TEST_CASE("vector solve rejects iterates outside the cone") {
  LpInstance lp = generate_random_lp(4, 2, 5);
  LpIterate st = seeded_state_lp(lp);
  st.s[0] = -1.0;
  CHECK_THROWS_AS(solve_lp(lp, st, 1.0), NotPositiveDefinite);
}
