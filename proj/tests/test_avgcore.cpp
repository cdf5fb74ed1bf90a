#include <cmath>
#include <random>

#include "avgcycles/avgcore.hpp"
#include "avgcycles/errors.hpp"
#include "avgcycles/fields.hpp"
#include "avgcycles/trigkernel.hpp"
#include "doctest.h"

using namespace avgcycles;
using trig::kPi;
using trig::kTwoPi;

namespace {

std::vector<double> random_nu(std::mt19937& rng, int m) {
  std::uniform_real_distribution<double> r(0.3, 1.5), z(-1.0, 1.0);
  std::vector<double> nu = {r(rng)};
  for (int k = 0; k < m; ++k) nu.push_back(z(rng));
  return nu;
}

double max_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("cylindrical fields of single constant terms") {
  SystemSpec s = SystemSpec::zero(1, 0, 0, kPi / 2, {});
  s.first[0].x.set({0, 0}, 1.0);
  auto f = build_cylindrical_fields(s);
  CHECK(f.A[0].rows[1].eval(0.7, 2.0, {}) == doctest::Approx(std::cos(0.7)));
  CHECK(f.A[0].rows[0].eval(0.7, 2.0, {}) == doctest::Approx(-std::sin(0.7) / 2.0));
  CHECK(f.A[1].rows[0].is_zero());
  SystemSpec t = SystemSpec::zero(1, 0, 0, kPi / 2, {});
  t.first[0].y.set({0, 0}, 1.0);
  auto g = build_cylindrical_fields(t);
  CHECK(g.A[0].rows[1].eval(0.7, 2.0, {}) == doctest::Approx(std::sin(0.7)));
  CHECK(g.A[0].rows[0].eval(0.7, 2.0, {}) == doctest::Approx(std::cos(0.7) / 2.0));
}

TEST_CASE("F expansion structure") {
  SystemSpec s = random_spec(2, 1, 2, 1.0, 3, false);
  auto F = build_F_expansion(s);
  CHECK(F.F1[0].size() == 3);
  auto A = build_cylindrical_fields(s).A[0].rows;
  // second-order tables zero: F2 = -A1 A_{l+2}
  CHECK((F.F2[0][1] + A[0] * A[2]).is_zero());
  SystemSpec e = random_spec(2, 1, 1, 1.0, 3);
  CHECK(build_F_expansion(e).F1[1].size() == 2);
}

TEST_CASE("f1 hand values") {
  SystemSpec s = SystemSpec::zero(1, 0, 0, kPi / 2, {});
  CHECK(build_f1(s)[0].is_zero());
  s.first[0].x.set({0, 0}, 1.0);
  auto f1 = build_f1(s);
  CHECK(f1[0].total_degree() == 0);
  CHECK(f1[0].eval({0.8}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(numeric_f1(s, {0.8})[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("f1 matches the quadrature oracle") {
  std::mt19937 rng(5);
  int seed = 100;
  for (double phi : {kPi / 3, kPi, kTwoPi})
    for (int m = 0; m <= 2; ++m) {
      const SystemSpec s = random_spec(3, m, std::max(m, 2), phi, seed++);
      const auto f1 = build_f1(s);
      for (int l = 0; l <= m; ++l) CHECK(f1[l].total_degree() <= s.n);
      for (int t = 0; t < 3; ++t) {
        const auto nu = random_nu(rng, m);
        CHECK(max_diff(eval_vec(f1, nu), numeric_f1(s, nu)) < 1e-9);
      }
    }
}

TEST_CASE("gamma matches the oracle and rejects degenerate eigenvalues") {
  std::mt19937 rng(8);
  const SystemSpec s = random_spec(2, 1, 3, 2.0, 41);
  auto gamma = build_gamma(s);
  REQUIRE(gamma.size() == 2);
  for (int t = 0; t < 3; ++t) {
    const auto nu = random_nu(rng, 1);
    Eigen::VectorXd v(2);
    v << gamma[0].eval(nu), gamma[1].eval(nu);
    CHECK(max_diff(v, numeric_gamma(s, nu)) < 1e-9);
  }
  CHECK(build_gamma(random_spec(2, 2, 2, 2.0, 1)).empty());
  SystemSpec bad = s;
  bad.mu[1] = 1e-14;
  CHECK_THROWS_AS(build_gamma(bad), DegenerateEigenvalue);
  // the literal convention differs for mu != 1
  AvgOptions lit;
  lit.gamma = GammaConvention::literal_text;
  CHECK(std::abs(build_gamma(s, lit)[0].eval({0.7, 0.2}) - gamma[0].eval({0.7, 0.2})) > 1e-6);
}

TEST_CASE("kernel constraints and projection") {
  SystemSpec s = SystemSpec::zero(2, 0, 0, 1.0, {});
  for (const auto& c : f1_kernel_constraints(s)) CHECK(!c.terms.empty());
  const SystemSpec r = random_spec(2, 1, 2, 2.2, 9);
  const SystemSpec p = project_to_kernel(r);
  for (const auto& f : build_f1(p)) CHECK(f.max_abs_coeff() < 1e-12);
  CHECK_THROWS_AS(build_f2(r), F1NotZero);
  // m = 0, phi != pi: a+_{i00} I(i+1,0) + a-_{i00} J(i+1,0) is the r^i relation
  SystemSpec q = SystemSpec::zero(2, 0, 0, 1.0, {});
  bool found = false;
  for (const auto& c : f1_kernel_constraints(q)) {
    if (c.monomial != Monomial{1}) continue;
    for (const auto& [ref, w] : c.terms)
      if (ref.component == 0 && ref.exponent == std::vector<int>{1, 0}) {
        found = true;
        CHECK(w == doctest::Approx(ref.zone == Zone::plus ? trig::trig_I(2, 0, 1.0) : trig::trig_J(2, 0, 1.0)));
      }
  }
  CHECK(found);
}

TEST_CASE("f2 matches the order-2 oracle after projection") {
  std::mt19937 rng(13);
  int seed = 200;
  for (double phi : {kPi / 3, kPi, kTwoPi})
    for (int m = 0; m <= 2; ++m) {
      const int d = std::min(3, m + 1);
      const SystemSpec s = project_to_kernel(random_spec(2, m, d, phi, seed++));
      const auto rf2 = build_f2(s);
      for (int l = 0; l <= m; ++l) CHECK(rf2[l].total_degree() <= 2 * s.n);
      for (int t = 0; t < 2; ++t) {
        const auto nu = random_nu(rng, m);
        const Eigen::VectorXd a = eval_f2(rf2, nu), b = numeric_f2(s, nu);
        CHECK(max_diff(a, b) < 1e-8 * (1.0 + b.cwiseAbs().maxCoeff()));
      }
    }
}

TEST_CASE("m = d: f2 is twice xi g2") {
  const SystemSpec s = project_to_kernel(random_spec(2, 1, 1, 2.0, 77));
  const auto rf2 = build_f2(s);
  const std::vector<double> nu = {0.9, -0.4};
  CHECK(max_diff(eval_f2(rf2, nu), 2.0 * numeric_g(s, 2, lift_to_z(s, nu)).head(2)) < 1e-9);
}

TEST_CASE("parity structure at pi and 2pi") {
  SystemSpec s = SystemSpec::zero(3, 0, 0, kPi, {});
  for (int i = 0; i <= 3; i += 2)
    for (int j = 0; i + j <= 3; ++j) s.first[0].x.set({i, j}, 1.0 + i + j), s.first[1].x.set({i, j}, -0.5 + j);
  CHECK(build_f1(s)[0].is_zero());

  const SystemSpec c = random_spec(3, 0, 1, kTwoPi, 5);
  const Poly rf10 = build_f1(c)[0] * Poly::variable(1, 0);
  CHECK(!rf10.is_zero());
  for (const auto& [e, v] : rf10.terms()) CHECK(e[0] % 2 == 0);
}

TEST_CASE("zero spec gives zero averaged functions") {
  const SystemSpec s = SystemSpec::zero(2, 1, 2, 1.0, {0.0, -0.5});
  CHECK(build_f1(s)[0].is_zero());
  CHECK(build_f2(s)[1].is_zero());
  CHECK(numeric_g(s, 1, {1.0, 0.2, 0.3}).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("r f20 has no r^0 term in the continuous case") {
  const SystemSpec s = project_to_kernel(random_spec(2, 0, 0, kTwoPi, 31));
  const Poly rf20 = build_f2(s)[0];
  CHECK(std::abs(rf20.coeff({0})) < 1e-14);
  // independent check: r * f20 from quadrature decays with r
  const double a = 1e-2 * numeric_f2(s, {1e-2})[0], b = 1e-3 * numeric_f2(s, {1e-3})[0];
  CHECK(std::abs(a) < 1e-3);
  CHECK(std::abs(b) < 1e-2 * std::abs(a) + 1e-12);
}
