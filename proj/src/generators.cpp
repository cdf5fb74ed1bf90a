#include "avgcycles/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "avgcycles/errors.hpp"
#include "avgcycles/trigkernel.hpp"

namespace avgcycles {

using trig::kPi;
using trig::kTwoPi;

namespace {

constexpr double kRLo = 0.4, kRHi = 1.8, kZLo = -1.2, kZHi = 1.2;

long long ipow(long long b, int e) {
  long long r = 1;
  for (int k = 0; k < e; ++k) r *= b;
  return r;
}

bool is_two_pi(double phi) { return std::abs(phi - kTwoPi) < 1e-14; }

std::vector<double> default_mu(int m, int d) {
  std::vector<double> mu(static_cast<std::size_t>(d), 0.0);
  for (int k = m; k < d; ++k) mu[k] = -0.5 - 0.25 * (k - m);
  return mu;
}

// Exponents that matter on the tail-free manifold: tail degree <= max_tail.
std::vector<CoefRef> slots(const SystemSpec& s, int order, int max_tail) {
  std::vector<CoefRef> out;
  for (const CoefRef& c : all_coefficients(s, order)) {
    int tail = 0;
    for (int k = s.m + 1; k <= s.d; ++k) tail += c.exponent[k + 1];
    if (tail <= max_tail) out.push_back(c);
  }
  return out;
}

std::vector<std::vector<double>> product_grid(const std::vector<int>& counts) {
  std::vector<std::vector<double>> axes;
  for (std::size_t k = 0; k < counts.size(); ++k)
    axes.push_back(k == 0 ? chebyshev_nodes(counts[k], kRLo, kRHi) : chebyshev_nodes(counts[k], kZLo, kZHi));
  std::vector<std::vector<double>> out = {{}};
  for (const auto& ax : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& p : out)
      for (double v : ax) {
        auto q = p;
        q.push_back(v);
        next.push_back(q);
      }
    out = std::move(next);
  }
  for (int c : counts)
    if (c == 0) return {};
  return out;
}

Eigen::MatrixXd nullspace(const Eigen::MatrixXd& M, int cols) {
  if (M.rows() == 0) return Eigen::MatrixXd::Identity(cols, cols);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = 1e-10 * std::max(1.0, sv.size() ? sv[0] : 0.0);
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) rank += sv[k] > tol;
  return svd.matrixV().rightCols(cols - rank);
}

int count_simple(const ZeroSearch& zs) {
  int c = 0;
  for (const auto& z : zs.zeros) c += z.simple;
  return c;
}

std::vector<int> first_order_grid(int n, int m, double phi) {
  std::vector<int> g;
  if (!is_two_pi(phi)) {
    g.assign(static_cast<std::size_t>(m + 1), n);
  } else if (m == 0) {
    g = {n % 2 ? (n - 1) / 2 : (n - 2) / 2};
  } else {
    g = n % 2 ? std::vector<int>{(n - 1) / 2, n} : std::vector<int>{n / 2, n - 1};
    for (int k = 1; k < m; ++k) g.push_back(n);
  }
  return g;
}

GeneratedCase first_order_case(const std::string& name, int n, int m, double phi, const GeneratorOptions& opt) {
  const int d = opt.d < 0 ? m : opt.d;
  if (n < 1 || m < 0 || d < m) throw InvalidArgument(name + ": need n >= 1 and 0 <= m <= d");
  GeneratedCase gc;
  gc.generator = name;
  gc.order = 1;
  gc.seed = opt.seed;
  gc.expected = static_cast<int>(count_first_order(n, m, phi));
  gc.upper_bound = bound_first_order(n, m);
  gc.targets = product_grid(first_order_grid(n, m, phi));
  gc.box = default_search_box(m);
  SystemSpec base = SystemSpec::zero(n, m, d, phi, default_mu(m, d));
  const auto sl = slots(base, 1, 0);

  std::vector<PolyVec> images;
  for (const CoefRef& c : sl) {
    set_coef(base, c, 1.0);
    images.push_back(build_f1(base));
    set_coef(base, c, 0.0);
  }
  const auto rows = static_cast<Eigen::Index>(gc.targets.size() * static_cast<std::size_t>(m + 1));
  Eigen::MatrixXd M(rows, static_cast<Eigen::Index>(sl.size()));
  for (std::size_t t = 0; t < gc.targets.size(); ++t)
    for (int l = 0; l <= m; ++l)
      for (std::size_t c = 0; c < sl.size(); ++c)
        M(static_cast<Eigen::Index>(t * (m + 1) + l), static_cast<Eigen::Index>(c)) = images[c][l].eval(gc.targets[t]);
  const Eigen::MatrixXd N = nullspace(M, static_cast<int>(sl.size()));
  if (N.cols() == 0) throw InfeasibleTarget(name + ": coefficient map cannot interpolate the target zeros");

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int attempt = 1; attempt <= opt.max_attempts; ++attempt) {
    Eigen::VectorXd u(N.cols());
    for (auto& v : u) v = g(rng);
    Eigen::VectorXd x = N * u;
    x /= x.cwiseAbs().maxCoeff();
    SystemSpec s = base;
    for (std::size_t c = 0; c < sl.size(); ++c) set_coef(s, sl[c], std::abs(x[c]) < 1e-14 ? 0.0 : x[c]);
    gc.spec = s;
    gc.attempts = attempt;
    const ZeroSearch zs = find_simple_zeros(build_f1(s), gc.box);
    if (count_simple(zs) == gc.expected && static_cast<int>(zs.zeros.size()) == gc.expected) return gc;
  }
  throw InfeasibleTarget(name + ": no attempt certified the target zero count");
}

// rf2 is quadratic in the first-order coefficients and linear in the second-order ones.
GeneratedCase second_order_case(const std::string& name, int n, int m, double phi, const std::vector<int>& grid,
                                long long expected, const GeneratorOptions& opt) {
  const int d = opt.d < 0 ? m : opt.d;
  if (n < 1 || m < 0 || d < m) throw InvalidArgument(name + ": need n >= 1 and 0 <= m <= d");
  GeneratedCase gc;
  gc.generator = name;
  gc.order = 2;
  gc.seed = opt.seed;
  gc.expected = static_cast<int>(expected);
  gc.upper_bound = bound_second_order(n, m);
  gc.targets = product_grid(grid);
  gc.box = default_search_box(m);
  SystemSpec base = SystemSpec::zero(n, m, d, phi, default_mu(m, d));
  const auto s1 = slots(base, 1, 1);
  const auto s2 = slots(base, 2, 0);
  const auto k1 = static_cast<Eigen::Index>(s1.size());

  // kernel of the f1 map on the first-order slots
  std::map<std::pair<int, Monomial>, Eigen::Index> row_of;
  std::vector<PolyVec> f1img;
  for (const CoefRef& c : s1) {
    set_coef(base, c, 1.0);
    f1img.push_back(build_f1(base));
    set_coef(base, c, 0.0);
    for (int l = 0; l <= m; ++l)
      for (const auto& [e, v] : f1img.back()[l].terms()) row_of.emplace(std::make_pair(l, e), 0);
  }
  Eigen::Index nr = 0;
  for (auto& [key, r] : row_of) r = nr++;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nr, k1);
  for (Eigen::Index c = 0; c < k1; ++c)
    for (int l = 0; l <= m; ++l)
      for (const auto& [e, v] : f1img[c][l].terms()) K(row_of.at({l, e}), c) = v;
  const Eigen::MatrixXd N = nullspace(K, static_cast<int>(k1));
  const auto ku = N.cols();

  // functionals: rf2_l at every target, plus rf2_0 at a reference point (= 1)
  std::vector<double> ref = {1.13};
  for (int k = 0; k < m; ++k) ref.push_back(0.37 + 0.11 * k);
  const auto M = static_cast<Eigen::Index>(gc.targets.size() * static_cast<std::size_t>(m + 1) + 1);
  auto functionals = [&](const PolyVec& rf2) {
    Eigen::VectorXd v(M);
    Eigen::Index i = 0;
    for (const auto& t : gc.targets)
      for (int l = 0; l <= m; ++l) v[i++] = rf2[l].eval(t);
    v[i] = rf2[0].eval(ref);
    return v;
  };
  auto apply = [&](SystemSpec& s, const Eigen::VectorXd& x1, const Eigen::VectorXd& x2) {
    for (Eigen::Index c = 0; c < k1; ++c) set_coef(s, s1[c], x1[c]);
    for (std::size_t c = 0; c < s2.size(); ++c) set_coef(s, s2[c], x2[static_cast<Eigen::Index>(c)]);
  };
  AvgOptions avg;
  avg.f1_zero_tol = 1e-9;
  const Eigen::VectorXd zero2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s2.size()));
  auto quad_probe = [&](const Eigen::VectorXd& u) {
    SystemSpec s = base;
    apply(s, N * u, zero2);
    return functionals(build_f2(s, avg));
  };

  std::vector<Eigen::MatrixXd> Q(static_cast<std::size_t>(M), Eigen::MatrixXd::Zero(ku, ku));
  std::vector<Eigen::VectorXd> diag(static_cast<std::size_t>(ku));
  for (Eigen::Index a = 0; a < ku; ++a) {
    diag[a] = quad_probe(Eigen::VectorXd::Unit(ku, a));
    for (Eigen::Index e = 0; e < M; ++e) Q[e](a, a) = diag[a][e];
  }
  for (Eigen::Index a = 0; a < ku; ++a)
    for (Eigen::Index b = a + 1; b < ku; ++b) {
      const Eigen::VectorXd v = quad_probe(Eigen::VectorXd::Unit(ku, a) + Eigen::VectorXd::Unit(ku, b));
      for (Eigen::Index e = 0; e < M; ++e) Q[e](a, b) = Q[e](b, a) = 0.5 * (v[e] - diag[a][e] - diag[b][e]);
    }
  Eigen::MatrixXd L(M, static_cast<Eigen::Index>(s2.size()));
  for (std::size_t c = 0; c < s2.size(); ++c) {
    SystemSpec s = base;
    set_coef(s, s2[c], 1.0);
    L.col(static_cast<Eigen::Index>(c)) = functionals(build_f2(s, avg));
  }
  Eigen::VectorXd target = Eigen::VectorXd::Zero(M);
  target[M - 1] = 1.0;

  const Eigen::Index nx = ku + L.cols();
  auto residual = [&](const Eigen::VectorXd& th) {
    const Eigen::VectorXd u = th.head(ku);
    Eigen::VectorXd r = L * th.tail(L.cols()) - target;
    for (Eigen::Index e = 0; e < M; ++e) r[e] += u.dot(Q[e] * u);
    return r;
  };
  auto jac = [&](const Eigen::VectorXd& th) {
    const Eigen::VectorXd u = th.head(ku);
    Eigen::MatrixXd J(M, nx);
    for (Eigen::Index e = 0; e < M; ++e) J.row(e).head(ku) = (2.0 * Q[e] * u).transpose();
    J.rightCols(L.cols()) = L;
    return J;
  };

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int attempt = 1; attempt <= opt.max_attempts; ++attempt) {
    gc.attempts = attempt;
    Eigen::VectorXd th = Eigen::VectorXd::Zero(nx);
    for (Eigen::Index a = 0; a < ku; ++a) th[a] = g(rng);
    double lambda = 1e-3;
    Eigen::VectorXd r = residual(th);
    for (int it = 0; it < 500 && r.norm() > 1e-13; ++it) {
      const Eigen::MatrixXd J = jac(th);
      const Eigen::MatrixXd A = J * J.transpose();
      // minimum-norm damped step in the underdetermined regime
      const Eigen::VectorXd step = -J.transpose() * (A + lambda * Eigen::MatrixXd::Identity(M, M)).ldlt().solve(r);
      const Eigen::VectorXd trial = th + step;
      const Eigen::VectorXd rt = residual(trial);
      if (rt.norm() < r.norm()) {
        th = trial;
        r = rt;
        lambda = std::max(lambda * 0.3, 1e-15);
      } else {
        lambda *= 10.0;
        if (lambda > 1e12) break;
      }
    }
    if (r.norm() > 1e-11) continue;
    Eigen::VectorXd x1 = N * th.head(ku);
    Eigen::VectorXd x2 = th.tail(L.cols());
    const double t = 1.0 / std::max(1e-300, x1.cwiseAbs().maxCoeff());
    x1 *= t;
    x2 *= t * t;
    SystemSpec s = base;
    apply(s, x1, x2);
    gc.spec = project_to_kernel(s);  // removes round-off left in f1
    const PolyVec rf2 = build_f2(gc.spec, avg);
    const ZeroSearch zs = find_simple_zeros(rf2, gc.box);
    const int found = count_simple(zs);
    if (found >= gc.expected && found <= gc.upper_bound) return gc;
  }
  throw InfeasibleTarget(name + ": no attempt reached the target zero count");
}

}  // namespace

SearchBox default_search_box(int m) {
  std::vector<double> lo = {0.05}, hi = {2.4};
  for (int k = 0; k < m; ++k) lo.push_back(-2.0), hi.push_back(2.0);
  return SearchBox::uniform(lo, hi, m == 0 ? 60 : (m == 1 ? 24 : 12));
}

std::vector<double> chebyshev_nodes(int count, double lo, double hi) {
  std::vector<double> x;
  for (int k = 0; k < count; ++k)
    x.push_back(0.5 * (lo + hi) - 0.5 * (hi - lo) * std::cos(kPi * (k + 0.5) / count));
  return x;
}

long long count_first_order(int n, int m, double phi) {
  if (!is_two_pi(phi)) return ipow(n, m + 1);
  if (m == 0) return n % 2 ? (n - 1) / 2 : (n - 2) / 2;
  return ipow(n, m) * (n - 1) / 2;
}

long long count_second_order(const std::string& generator, int n, int m) {
  if (generator == "prop12") return 2LL * n * ipow(2 * n - 1, m);
  if (generator == "cor13") return ipow(2 * n, 2);
  if (generator == "prop18") return n % 2 ? ipow(2 * n - 1, m + 1) : (2LL * n - 2) * ipow(2 * n - 1, m);
  if (generator == "prop21") return n % 2 ? n - 1 : n;
  throw InvalidArgument("count_second_order: unknown generator " + generator);
}

long long bound_first_order(int n, int m) { return ipow(n, m + 1); }
long long bound_second_order(int n, int m) { return ipow(2 * n, m + 1); }

PolyVec certified_system(const GeneratedCase& c) {
  AvgOptions avg;
  avg.f1_zero_tol = 1e-9;
  return c.order == 1 ? build_f1(c.spec) : build_f2(c.spec, avg);
}

GeneratedCase gen_prop10(int n, int m, double phi, const GeneratorOptions& opt) {
  if (!(phi > 0.0 && phi < kTwoPi) || std::abs(phi - kPi) < 1e-14)
    throw InvalidArgument("gen_prop10: phi must lie in (0, 2pi) minus {pi}");
  return first_order_case("prop10", n, m, phi, opt);
}

GeneratedCase gen_prop16(int n, int m, const GeneratorOptions& opt) { return first_order_case("prop16", n, m, kPi, opt); }

GeneratedCase gen_prop20(int n, int m, const GeneratorOptions& opt) {
  return first_order_case("prop20", n, m, kTwoPi, opt);
}

GeneratedCase gen_prop12(int n, int m, double phi, const GeneratorOptions& opt) {
  if (!(phi > 0.0 && phi < kTwoPi) || std::abs(phi - kPi) < 1e-14)
    throw InvalidArgument("gen_prop12: phi must lie in (0, 2pi) minus {pi}");
  std::vector<int> grid = {2 * n};
  for (int k = 0; k < m; ++k) grid.push_back(2 * n - 1);
  return second_order_case("prop12", n, m, phi, grid, count_second_order("prop12", n, m), opt);
}

GeneratedCase gen_cor13(int n, double phi, const GeneratorOptions& opt) {
  if (!(phi > 0.0 && phi < kTwoPi) || std::abs(phi - kPi) < 1e-14)
    throw InvalidArgument("gen_cor13: phi must lie in (0, 2pi) minus {pi}");
  return second_order_case("cor13", n, 1, phi, {2 * n, 2 * n}, count_second_order("cor13", n, 1), opt);
}

GeneratedCase gen_prop18(int n, int m, const GeneratorOptions& opt) {
  std::vector<int> grid = {n % 2 ? 2 * n - 1 : 2 * n - 2};
  for (int k = 0; k < m; ++k) grid.push_back(2 * n - 1);
  return second_order_case("prop18", n, m, kPi, grid, count_second_order("prop18", n, m), opt);
}

GeneratedCase gen_prop21(int n, const GeneratorOptions& opt) {
  return second_order_case("prop21", n, 0, kTwoPi, {n % 2 ? n - 1 : n}, count_second_order("prop21", n, 0), opt);
}

}  // namespace avgcycles

namespace avgcycles {

GeneratedCase gen_th4(const PolyVec& P, const PolyVec& Q, double phi, double delta, const GeneratorOptions& opt) {
  if (P.empty() || P.size() != Q.size()) throw DimensionMismatch("gen_th4: P and Q must have m + 1 components each");
  const int m = static_cast<int>(P.size()) - 1;
  for (int l = 0; l <= m; ++l)
    if (P[l].nvars() != m + 1 || Q[l].nvars() != m + 1)
      throw DimensionMismatch("gen_th4: polynomials must be in (r, z_1..z_m)");
  if (!(delta > 0.0)) throw InvalidArgument("gen_th4: delta must be positive");
  if (!(phi > 0.0 && phi <= kTwoPi)) throw InvalidArgument("gen_th4: phi must lie in (0, 2pi]");
  int n = 1;
  for (int l = 0; l <= m; ++l) n = std::max({n, P[l].total_degree(), (Q[l].total_degree() + 1) / 2});

  GeneratedCase gc;
  gc.generator = "th4";
  gc.order = 2;
  gc.seed = opt.seed;
  gc.delta = delta;
  gc.upper_bound = bound_second_order(n, m);
  gc.box = default_search_box(m);
  const Poly r = Poly::variable(m + 1, 0);
  for (int l = 0; l <= m; ++l) gc.reference.push_back(r * P[l] + Q[l]);

  // O(1) layer X_a = a0 + k y, X_b = b0 - k x, shared by both zones: f1 and r f2
  // vanish on it, and the constants give r A_1 an r^0 part.
  SystemSpec base = SystemSpec::zero(n, m, m, phi, std::vector<double>(static_cast<std::size_t>(m), 0.0));
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  const double a0 = u(rng), b0 = u(rng), k = u(rng);
  std::vector<int> e0(static_cast<std::size_t>(m + 2), 0), ex = e0, ey = e0;
  ex[0] = 1;
  ey[1] = 1;
  for (Zone z : {Zone::plus, Zone::minus}) {
    FieldTables& t = base.tables(1, z);
    t.x.set(e0, a0);
    t.x.set(ey, k);
    t.y.set(e0, b0);
    t.y.set(ex, -k);
  }
  AvgOptions raw;
  raw.f1_zero_tol = std::numeric_limits<double>::infinity();
  double base_rf2 = 0.0;
  for (const Poly& p : build_f2(base, raw)) base_rf2 = std::max(base_rf2, p.max_abs_coeff());
  if (base_rf2 > 1e-12) throw InfeasibleTarget("gen_th4: rotation layer does not annihilate r f2");

  // Unknown layer: every coefficient. Rows: f1 coefficients (= 0), and the
  // delta-linear part of r f2, which polarization gives exactly.
  std::vector<CoefRef> sl = all_coefficients(base, 1);
  for (const CoefRef& c : all_coefficients(base, 2)) sl.push_back(c);
  std::map<std::pair<int, Monomial>, Eigen::Index> f1_row, f2_row;
  std::vector<PolyVec> f1img, lin;
  for (const CoefRef& c : sl) {
    const double b = get_coef(base, c);
    SystemSpec s = base;
    set_coef(s, c, b + 1.0);
    f1img.push_back(build_f1(s));
    PolyVec plus = build_f2(s, raw);
    set_coef(s, c, b - 1.0);
    const PolyVec minus = build_f2(s, raw);
    for (int l = 0; l <= m; ++l) plus[l] = (plus[l] - minus[l]) * 0.5;
    lin.push_back(plus);
    for (int l = 0; l <= m; ++l) {
      for (const auto& [e, v] : f1img.back()[l].terms()) f1_row.emplace(std::make_pair(l, e), 0);
      for (const auto& [e, v] : lin.back()[l].terms()) f2_row.emplace(std::make_pair(l, e), 0);
    }
  }
  for (int l = 0; l <= m; ++l)
    for (const auto& [e, v] : gc.reference[l].terms()) f2_row.emplace(std::make_pair(l, e), 0);
  Eigen::Index nr = 0;
  for (auto& [key, row] : f1_row) row = nr++;
  for (auto& [key, row] : f2_row) row = nr++;
  const auto nc = static_cast<Eigen::Index>(sl.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nr, nc);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nr);
  for (Eigen::Index c = 0; c < nc; ++c)
    for (int l = 0; l <= m; ++l) {
      for (const auto& [e, v] : f1img[c][l].terms()) A(f1_row.at({l, e}), c) = v;
      for (const auto& [e, v] : lin[c][l].terms()) A(f2_row.at({l, e}), c) = v;
    }
  for (int l = 0; l <= m; ++l)
    for (const auto& [e, v] : gc.reference[l].terms()) rhs[f2_row.at({l, e})] = 2.0 * v;

  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  const Eigen::VectorXd x = cod.solve(rhs);
  const double miss = (A * x - rhs).norm();
  if (miss > 1e-9 * std::max(1.0, rhs.norm()))
    throw InfeasibleTarget("gen_th4: target outside the reachable span of the delta layer (residual " +
                           std::to_string(miss) + ")");
  gc.spec = base;
  for (Eigen::Index c = 0; c < nc; ++c) set_coef(gc.spec, sl[c], get_coef(base, sl[c]) + delta * x[c]);
  AvgOptions avg;
  avg.f1_zero_tol = 1e-9;
  const PolyVec rf2 = build_f2(gc.spec, avg);
  for (int l = 0; l <= m; ++l)
    gc.realization_error =
        std::max(gc.realization_error, (rf2[l] * (0.5 / delta) - gc.reference[l]).max_abs_coeff());

  const ZeroSearch zs = find_simple_zeros(gc.reference, gc.box);
  for (const ZeroRecord& z : zs.zeros)
    if (z.simple) gc.targets.push_back(z.nu);
  gc.expected = static_cast<int>(gc.targets.size());
  gc.attempts = 1;
  return gc;
}

}  // namespace avgcycles
