#include "qipm/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "qipm/rng.hpp"

namespace qipm {

namespace {

constexpr double kGramFloor = 1e-10;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Vector flatten(const Matrix& m) {
  Vector v(m.size());
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(idx++) = m(i, j);
  return v;
}

}  // namespace

Matrix SdpInstance::gram() const {
  Matrix g(m, m);
  for (int k = 0; k < m; ++k)
    for (int l = k; l < m; ++l) {
      g(k, l) = trace_product(constraint_mats[k], constraint_mats[l]);
      g(l, k) = g(k, l);
    }
  return g;
}

void SdpInstance::validate() const {
  if (n < 1 || m < 1) throw DimensionMismatch("instance needs n >= 1, m >= 1");
  if (static_cast<int>(constraint_mats.size()) != m)
    throw DimensionMismatch("constraint matrix count does not match m");
  for (const auto& a : constraint_mats)
    if (a.dim() != n) throw DimensionMismatch("constraint matrix has wrong dim");
  if (rhs_mat.dim() != n || dual_anchor.dim() != n)
    throw DimensionMismatch("rhs / anchor matrix has wrong dim");
  if (cost_vec.size() != m) throw DimensionMismatch("cost vector has wrong size");
  if (seed_primal_x && seed_primal_x->size() != m)
    throw DimensionMismatch("primal seed coordinate vector has wrong size");
  if (seed_dual_y && seed_dual_y->dim() != n)
    throw DimensionMismatch("dual seed matrix has wrong dim");

  Eigen::SelfAdjointEigenSolver<Matrix> es(gram(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) <= kGramFloor)
    throw InvalidInput("constraint matrices are numerically dependent");

  for (int k = 0; k < m; ++k) {
    const double ck = trace_product(dual_anchor, constraint_mats[k]);
    if (std::abs(ck - cost_vec(k)) > 1e-10 * std::max(1.0, std::abs(cost_vec(k))))
      throw InvalidInput("cost vector is inconsistent with the dual anchor");
  }
}

Matrix LpInstance::gram() const {
  Matrix g(m, m);
  for (int k = 0; k < m; ++k)
    for (int l = k; l < m; ++l) {
      g(k, l) = constraint_vecs[k].dot(constraint_vecs[l]);
      g(l, k) = g(k, l);
    }
  return g;
}

Matrix LpInstance::a_cols() const {
  Matrix a(n, m);
  for (int k = 0; k < m; ++k) a.col(k) = constraint_vecs[k];
  return a;
}

void LpInstance::validate() const {
  if (n < 1 || m < 1) throw DimensionMismatch("instance needs n >= 1, m >= 1");
  if (static_cast<int>(constraint_vecs.size()) != m)
    throw DimensionMismatch("constraint vector count does not match m");
  for (const auto& a : constraint_vecs)
    if (a.size() != n) throw DimensionMismatch("constraint vector has wrong size");
  if (rhs_vec.size() != n || dual_anchor.size() != n)
    throw DimensionMismatch("rhs / anchor vector has wrong size");
  if (cost_vec.size() != m) throw DimensionMismatch("cost vector has wrong size");

  Eigen::SelfAdjointEigenSolver<Matrix> es(gram(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) <= kGramFloor)
    throw InvalidInput("constraint vectors are numerically dependent");

  for (int k = 0; k < m; ++k) {
    const double ck = constraint_vecs[k].dot(dual_anchor);
    if (std::abs(ck - cost_vec(k)) > 1e-8 * std::max(1.0, std::abs(cost_vec(k))))
      throw InvalidInput("cost vector is inconsistent with the dual anchor");
  }
}

IterateState IterateState::make(SymMatrix s, SymMatrix y, Vector coords) {
  IterateState st;
  const int n = s.dim();
  st.S = std::move(s);
  st.Y = std::move(y);
  st.x = std::move(coords);
  st.nu = trace_product(st.S, st.Y) / n;
  st.drift_primal = SymMatrix::Zero(n);
  st.drift_dual = SymMatrix::Zero(n);
  st.refresh_inverse();
  return st;
}

void IterateState::refresh_inverse() { Y_inv = inverse_sym(Y); }

LpIterate LpIterate::make(Vector s, Vector y, Vector coords) {
  LpIterate st;
  const auto n = s.size();
  st.s = std::move(s);
  st.y = std::move(y);
  st.x = std::move(coords);
  st.nu = st.s.dot(st.y) / static_cast<double>(n);
  st.drift_primal = Vector::Zero(n);
  st.drift_dual = Vector::Zero(n);
  return st;
}

double duality_gap(const IterateState& state) { return state.trace_sy(); }

double gap_identity_residual(const IterateState& state, const SdpInstance& inst) {
  const double lhs = state.trace_sy();
  const double rhs = trace_product(inst.dual_anchor, state.S) +
                     trace_product(inst.rhs_mat, inst.dual_anchor) -
                     trace_product(inst.rhs_mat, state.Y);
  return std::abs(lhs - rhs);
}

double dual_residual(const IterateState& state, const SdpInstance& inst) {
  Vector r(inst.m);
  for (int k = 0; k < inst.m; ++k)
    r(k) = trace_product(state.Y, inst.constraint_mats[k]) - inst.cost_vec(k);
  return r.norm();
}

double primal_residual(const IterateState& state, const SdpInstance& inst) {
  Matrix span(static_cast<Eigen::Index>(inst.n) * inst.n, inst.m);
  for (int k = 0; k < inst.m; ++k)
    span.col(k) = flatten(inst.constraint_mats[k].mat());
  const Vector target = flatten(state.S.mat() + inst.rhs_mat.mat());
  const Vector z = span.colPivHouseholderQr().solve(target);
  return (target - span * z).norm();
}

double duality_gap(const LpIterate& state) { return state.s.dot(state.y); }

double dual_residual(const LpIterate& state, const LpInstance& inst) {
  Vector r(inst.m);
  for (int k = 0; k < inst.m; ++k)
    r(k) = inst.constraint_vecs[k].dot(state.y) - inst.cost_vec(k);
  return r.norm();
}

double primal_residual(const LpIterate& state, const LpInstance& inst) {
  Matrix span(inst.n, inst.m);
  for (int k = 0; k < inst.m; ++k) span.col(k) = inst.constraint_vecs[k];
  const Vector target = state.s + inst.rhs_vec;
  const Vector z = span.colPivHouseholderQr().solve(target);
  return (target - span * z).norm();
}

SdpInstance generate_random_sdp(int n, int m, std::uint64_t seed) {
  if (n < 1) throw DimensionMismatch("instance dimension must be at least 1");
  const long cap = static_cast<long>(n) * (n + 1) / 2;
  if (m < 1 || m > cap)
    throw DimensionMismatch("constraint count must lie in [1, n(n+1)/2]");

  Engine eng = make_engine(seed, "instance");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> eig(0.7, 1.4);

  SdpInstance inst;
  inst.n = n;
  inst.m = m;

  for (int attempt = 0; attempt < 64; ++attempt) {
    inst.constraint_mats.clear();
    for (int k = 0; k < m; ++k) {
      Matrix r(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) = gauss(eng);
      SymMatrix a = SymMatrix::Symmetrized(r);
      inst.constraint_mats.push_back(a.scaled(1.0 / spectral_norm(a)));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(inst.gram(), Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) > kGramFloor) break;
    if (attempt == 63)
      throw InvalidInput("failed to draw independent constraint matrices");
  }

  Matrix q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q(i, j) = gauss(eng);
  const Matrix orth = Eigen::HouseholderQR<Matrix>(q).householderQ();
  Vector lam(n);
  for (int i = 0; i < n; ++i) lam(i) = eig(eng);
  const SymMatrix y0 =
      SymMatrix::Symmetrized(orth * lam.asDiagonal() * orth.transpose());

  SymMatrix s0 = inverse_sym(y0);  // on the central path at ν = 1
  Vector x0(m);
  for (int k = 0; k < m; ++k) x0(k) = unit(eng);

  Matrix b = -s0.mat();
  for (int k = 0; k < m; ++k) b += x0(k) * inst.constraint_mats[k].mat();
  SymMatrix rhs(b);

  const double t = 1.0 / std::max(1.0, spectral_norm(rhs));
  inst.rhs_mat = rhs.scaled(t);
  inst.seed_primal_x = Vector(t * x0);
  inst.seed_dual_y = y0;
  inst.dual_anchor = y0;
  inst.cost_vec = Vector(m);
  for (int k = 0; k < m; ++k)
    inst.cost_vec(k) = trace_product(inst.dual_anchor, inst.constraint_mats[k]);

  inst.validate();
  return inst;
}

LpInstance generate_random_lp(int n, int m, std::uint64_t seed) {
  if (n < 1) throw DimensionMismatch("instance dimension must be at least 1");
  if (m < 1 || m > n)
    throw DimensionMismatch("constraint count must lie in [1, n]");

  Engine eng = make_engine(seed, "instance");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.5, 1.5);

  LpInstance inst;
  inst.n = n;
  inst.m = m;

  for (int attempt = 0; attempt < 64; ++attempt) {
    inst.constraint_vecs.clear();
    for (int k = 0; k < m; ++k) {
      Vector a(n);
      for (int i = 0; i < n; ++i) a(i) = gauss(eng);
      inst.constraint_vecs.push_back(a / a.norm());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(inst.gram(), Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) > kGramFloor) break;
    if (attempt == 63)
      throw InvalidInput("failed to draw independent constraint vectors");
  }

  Vector y0(n);
  for (int i = 0; i < n; ++i) y0(i) = pos(eng);
  Vector s0 = y0.cwiseInverse();  // s ⊙ y = 1 exactly on the path
  Vector x0(m);
  for (int k = 0; k < m; ++k) x0(k) = unit(eng);

  const Matrix a_cols = inst.a_cols();
  Vector b = a_cols * x0 - s0;

  const double t = 1.0 / std::max(1.0, b.norm());
  b *= t;
  s0 *= t;
  x0 *= t;

  inst.rhs_vec = b;
  inst.cost_vec = Vector(m);
  for (int k = 0; k < m; ++k) inst.cost_vec(k) = inst.constraint_vecs[k].dot(y0);
  // Minimum-norm anchor keeps parsing a written file equivalent to this
  // construction (files carry no anchor line).
  const Matrix g = inst.gram();
  inst.dual_anchor = a_cols * g.ldlt().solve(inst.cost_vec);
  inst.seed_primal_x = x0;
  inst.seed_primal_s = s0;
  inst.seed_dual_y = y0;

  inst.validate();
  return inst;
}

SdpInstance generate_maxcut_sdp(const std::vector<WeightedEdge>& edges,
                                int n_vertices) {
  if (edges.empty()) throw EmptyGraph("max-cut generator needs at least one edge");
  int n = n_vertices;
  for (const auto& e : edges) n = std::max({n, e.u, e.v});
  if (n < 2) throw InvalidInput("max-cut graph needs at least two vertices");

  Matrix w = Matrix::Zero(n, n);
  for (const auto& e : edges) {
    if (e.u < 1 || e.u > n || e.v < 1 || e.v > n)
      throw InvalidInput("edge endpoint out of range");
    if (e.u == e.v) throw InvalidInput("self-loops are not allowed");
    w(e.u - 1, e.v - 1) += e.w;
    w(e.v - 1, e.u - 1) += e.w;
  }
  Matrix lap = Matrix(w.rowwise().sum().asDiagonal()) - w;

  SdpInstance inst;
  inst.n = n;
  inst.m = n;
  for (int k = 0; k < n; ++k) {
    Matrix ek = Matrix::Zero(n, n);
    ek(k, k) = 1.0;
    inst.constraint_mats.emplace_back(ek);
  }
  inst.rhs_mat = SymMatrix(Matrix(0.25 * lap));
  inst.dual_anchor = SymMatrix::Identity(n);
  inst.cost_vec = Vector::Ones(n);
  inst.seed_primal_x =
      Vector(Vector::Constant(n, max_eigenvalue(inst.rhs_mat) + 1.0));

  inst.validate();
  return inst;
}

SdpInstance lp_embed(const LpInstance& lp) {
  SdpInstance inst;
  inst.n = lp.n;
  inst.m = lp.m;
  for (const auto& a : lp.constraint_vecs)
    inst.constraint_mats.push_back(SymMatrix::Diagonal(a));
  inst.rhs_mat = SymMatrix::Diagonal(lp.rhs_vec);
  inst.dual_anchor = SymMatrix::Diagonal(lp.dual_anchor);
  inst.cost_vec = lp.cost_vec;
  inst.seed_primal_x = lp.seed_primal_x;
  if (lp.seed_dual_y) inst.seed_dual_y = SymMatrix::Diagonal(*lp.seed_dual_y);
  inst.validate();
  return inst;
}

namespace {

struct Line {
  int number;
  std::string tag;
  std::istringstream rest;
};

double parse_double(Line& ln) {
  double v;
  if (!(ln.rest >> v)) throw ParseError(ln.number, "expected a numeric value");
  return v;
}

int parse_index(Line& ln, int lo, int hi, const char* what) {
  long v;
  if (!(ln.rest >> v))
    throw ParseError(ln.number, std::string("expected an index for ") + what);
  if (v < lo || v > hi)
    throw ParseError(ln.number, std::string(what) + " index out of range");
  return static_cast<int>(v);
}

void expect_end(Line& ln) {
  std::string extra;
  if (ln.rest >> extra)
    throw ParseError(ln.number, "unexpected trailing token '" + extra + "'");
}

}  // namespace

AnyInstance read_instance(std::istream& in) {
  std::string raw;
  int lineno = 0;
  std::string header_tag;
  int n = 0, m = 0;
  bool have_header = false;
  int header_line = 0;

  // entry collectors
  std::set<std::tuple<int, int, int>> seen_a;
  std::set<std::pair<int, int>> seen_b, seen_c, seen_y2;
  std::set<int> seen_x, seen_bv, seen_y1;
  std::set<std::pair<int, int>> seen_av;
  std::set<int> seen_cv;

  std::vector<Matrix> a_mats;
  Matrix b_mat, c_mat, y_mat;
  std::vector<Vector> a_vecs;
  Vector b_vec, c_vec, y_vec, x_vec;
  bool any_seed_x = false, any_seed_y = false;

  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    std::string tag;
    if (!(ss >> tag)) continue;
    Line ln{lineno, tag, std::istringstream(raw)};
    std::string dummy;
    ln.rest >> dummy;  // skip the tag

    if (!have_header) {
      if (tag != "SDP" && tag != "LP")
        throw ParseError(lineno, "file must start with an SDP or LP header");
      header_tag = tag;
      header_line = lineno;
      long nn, mm;
      if (!(ln.rest >> nn >> mm))
        throw ParseError(lineno, "header needs dimensions n and m");
      expect_end(ln);
      if (nn < 1 || mm < 1)
        throw ParseError(header_line, "dimensions must be positive");
      n = static_cast<int>(nn);
      m = static_cast<int>(mm);
      have_header = true;
      if (header_tag == "SDP") {
        a_mats.assign(m, Matrix::Zero(n, n));
        b_mat = Matrix::Zero(n, n);
        c_mat = Matrix::Zero(n, n);
        y_mat = Matrix::Zero(n, n);
        x_vec = Vector::Zero(m);
      } else {
        a_vecs.assign(m, Vector::Zero(n));
        b_vec = Vector::Zero(n);
        c_vec = Vector::Zero(m);
        y_vec = Vector::Zero(n);
        x_vec = Vector::Zero(m);
      }
      continue;
    }

    if (header_tag == "SDP") {
      if (tag == "A") {
        const int k = parse_index(ln, 1, m, "constraint");
        const int i = parse_index(ln, 1, n, "row");
        const int j = parse_index(ln, 1, n, "column");
        if (i > j)
          throw ParseError(lineno,
                           "matrix entries must be given in the upper triangle");
        const double v = parse_double(ln);
        expect_end(ln);
        if (!seen_a.insert({k, i, j}).second)
          throw ParseError(lineno, "duplicate constraint matrix entry");
        a_mats[k - 1](i - 1, j - 1) = v;
        a_mats[k - 1](j - 1, i - 1) = v;
      } else if (tag == "B" || tag == "C") {
        const int i = parse_index(ln, 1, n, "row");
        const int j = parse_index(ln, 1, n, "column");
        if (i > j)
          throw ParseError(lineno,
                           "matrix entries must be given in the upper triangle");
        const double v = parse_double(ln);
        expect_end(ln);
        auto& seen = (tag == "B") ? seen_b : seen_c;
        if (!seen.insert({i, j}).second)
          throw ParseError(lineno, "duplicate matrix entry");
        Matrix& target = (tag == "B") ? b_mat : c_mat;
        target(i - 1, j - 1) = v;
        target(j - 1, i - 1) = v;
      } else if (tag == "SEEDX") {
        const int k = parse_index(ln, 1, m, "seed coordinate");
        const double v = parse_double(ln);
        expect_end(ln);
        if (!seen_x.insert(k).second)
          throw ParseError(lineno, "duplicate seed coordinate");
        x_vec(k - 1) = v;
        any_seed_x = true;
      } else if (tag == "SEEDY") {
        const int i = parse_index(ln, 1, n, "row");
        const int j = parse_index(ln, 1, n, "column");
        if (i > j)
          throw ParseError(lineno,
                           "matrix entries must be given in the upper triangle");
        const double v = parse_double(ln);
        expect_end(ln);
        if (!seen_y2.insert({i, j}).second)
          throw ParseError(lineno, "duplicate seed matrix entry");
        y_mat(i - 1, j - 1) = v;
        y_mat(j - 1, i - 1) = v;
        any_seed_y = true;
      } else {
        throw ParseError(lineno, "unknown record '" + tag + "'");
      }
    } else {
      if (tag == "a") {
        const int k = parse_index(ln, 1, m, "constraint");
        const int i = parse_index(ln, 1, n, "component");
        const double v = parse_double(ln);
        expect_end(ln);
        if (!seen_av.insert({k, i}).second)
          throw ParseError(lineno, "duplicate constraint vector entry");
        a_vecs[k - 1](i - 1) = v;
      } else if (tag == "b") {
        const int i = parse_index(ln, 1, n, "component");
        const double v = parse_double(ln);
        expect_end(ln);
        if (!seen_bv.insert(i).second)
          throw ParseError(lineno, "duplicate rhs entry");
        b_vec(i - 1) = v;
      } else if (tag == "c") {
        const int k = parse_index(ln, 1, m, "component");
        const double v = parse_double(ln);
        expect_end(ln);
        if (!seen_cv.insert(k).second)
          throw ParseError(lineno, "duplicate cost entry");
        c_vec(k - 1) = v;
      } else if (tag == "SEEDX") {
        const int k = parse_index(ln, 1, m, "seed coordinate");
        const double v = parse_double(ln);
        expect_end(ln);
        if (!seen_x.insert(k).second)
          throw ParseError(lineno, "duplicate seed coordinate");
        x_vec(k - 1) = v;
        any_seed_x = true;
      } else if (tag == "SEEDY") {
        const int i = parse_index(ln, 1, n, "component");
        const double v = parse_double(ln);
        expect_end(ln);
        if (!seen_y1.insert(i).second)
          throw ParseError(lineno, "duplicate seed entry");
        y_vec(i - 1) = v;
        any_seed_y = true;
      } else {
        throw ParseError(lineno, "unknown record '" + tag + "'");
      }
    }
  }

  if (!have_header) throw ParseError(1, "empty instance file");

  if (header_tag == "SDP") {
    SdpInstance inst;
    inst.n = n;
    inst.m = m;
    for (auto& a : a_mats) inst.constraint_mats.emplace_back(std::move(a));
    inst.rhs_mat = SymMatrix(std::move(b_mat));
    inst.dual_anchor = SymMatrix(std::move(c_mat));
    inst.cost_vec = Vector(m);
    for (int k = 0; k < m; ++k)
      inst.cost_vec(k) = trace_product(inst.dual_anchor, inst.constraint_mats[k]);
    if (any_seed_x) inst.seed_primal_x = x_vec;
    if (any_seed_y) inst.seed_dual_y = SymMatrix(std::move(y_mat));
    inst.validate();
    return inst;
  }

  LpInstance inst;
  inst.n = n;
  inst.m = m;
  inst.constraint_vecs = std::move(a_vecs);
  inst.rhs_vec = std::move(b_vec);
  inst.cost_vec = std::move(c_vec);
  inst.dual_anchor = inst.a_cols() * inst.gram().ldlt().solve(inst.cost_vec);
  if (any_seed_x) {
    inst.seed_primal_x = x_vec;
    inst.seed_primal_s = Vector(inst.a_cols() * x_vec - inst.rhs_vec);
  }
  if (any_seed_y) inst.seed_dual_y = y_vec;
  inst.validate();
  return inst;
}

AnyInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open instance file: " + path);
  return read_instance(in);
}

namespace {

void write_sym_entries(std::ostream& out, const char* tag, const SymMatrix& a) {
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j)
      if (a(i, j) != 0.0)
        out << tag << ' ' << i + 1 << ' ' << j + 1 << ' ' << fmt17(a(i, j))
            << '\n';
}

}  // namespace

void write_instance(std::ostream& out, const SdpInstance& inst) {
  out << "SDP " << inst.n << ' ' << inst.m << '\n';
  for (int k = 0; k < inst.m; ++k) {
    const SymMatrix& a = inst.constraint_mats[k];
    for (int i = 0; i < inst.n; ++i)
      for (int j = i; j < inst.n; ++j)
        if (a(i, j) != 0.0)
          out << "A " << k + 1 << ' ' << i + 1 << ' ' << j + 1 << ' '
              << fmt17(a(i, j)) << '\n';
  }
  write_sym_entries(out, "B", inst.rhs_mat);
  write_sym_entries(out, "C", inst.dual_anchor);
  if (inst.seed_primal_x)
    for (int k = 0; k < inst.m; ++k)
      out << "SEEDX " << k + 1 << ' ' << fmt17((*inst.seed_primal_x)(k)) << '\n';
  if (inst.seed_dual_y) write_sym_entries(out, "SEEDY", *inst.seed_dual_y);
}

void write_instance(std::ostream& out, const LpInstance& inst) {
  out << "LP " << inst.n << ' ' << inst.m << '\n';
  for (int k = 0; k < inst.m; ++k)
    for (int i = 0; i < inst.n; ++i)
      if (inst.constraint_vecs[k](i) != 0.0)
        out << "a " << k + 1 << ' ' << i + 1 << ' '
            << fmt17(inst.constraint_vecs[k](i)) << '\n';
  for (int i = 0; i < inst.n; ++i)
    if (inst.rhs_vec(i) != 0.0)
      out << "b " << i + 1 << ' ' << fmt17(inst.rhs_vec(i)) << '\n';
  for (int k = 0; k < inst.m; ++k)
    out << "c " << k + 1 << ' ' << fmt17(inst.cost_vec(k)) << '\n';
  if (inst.seed_primal_x)
    for (int k = 0; k < inst.m; ++k)
      out << "SEEDX " << k + 1 << ' ' << fmt17((*inst.seed_primal_x)(k)) << '\n';
  if (inst.seed_dual_y)
    for (int i = 0; i < inst.n; ++i)
      out << "SEEDY " << i + 1 << ' ' << fmt17((*inst.seed_dual_y)(i)) << '\n';
}

void write_instance_file(const std::string& path, const AnyInstance& inst) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open output file: " + path);
  std::visit([&out](const auto& v) { write_instance(out, v); }, inst);
}

std::vector<WeightedEdge> read_edge_list(std::istream& in, int* n_out) {
  std::vector<WeightedEdge> edges;
  std::string raw;
  int lineno = 0;
  int declared_n = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    std::string first;
    if (!(ss >> first)) continue;
    if (first == "GRAPH") {
      if (!(ss >> declared_n) || declared_n < 1)
        throw ParseError(lineno, "GRAPH header needs a vertex count");
      continue;
    }
    WeightedEdge e;
    std::istringstream es(raw);
    if (!(es >> e.u >> e.v))
      throw ParseError(lineno, "edge line needs two vertex ids");
    if (!(es >> e.w)) e.w = 1.0;
    edges.push_back(e);
  }
  if (n_out) *n_out = declared_n;
  return edges;
}

}  // namespace qipm
