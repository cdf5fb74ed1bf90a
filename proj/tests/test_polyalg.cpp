#include <cmath>
#include <random>

#include "avgcycles/errors.hpp"
#include "avgcycles/polyalg.hpp"
#include "doctest.h"

using namespace avgcycles;

namespace {

Poly random_poly(std::mt19937& rng, int nvars, int deg) {
  std::uniform_int_distribution<int> e(0, deg), c(-5, 5), cnt(1, 6);
  Poly p(nvars);
  const int n = cnt(rng);
  for (int k = 0; k < n; ++k) {
    Monomial m(nvars);
    for (auto& v : m) v = e(rng);
    p.add_term(m, c(rng));
  }
  return p;
}

bool same(const Poly& a, const Poly& b) { return (a - b).is_zero(); }

}  // namespace

TEST_CASE("evaluation and arithmetic") {
  const Poly r = Poly::variable(2, 0), z = Poly::variable(2, 1);
  CHECK(Poly::constant(2, 1.0).eval({4.0, 5.0}) == 1.0);
  CHECK((r * z).eval({2.0, 3.0}) == 6.0);
  const Poly r1 = Poly::variable(1, 0), one = Poly::constant(1, 1.0);
  CHECK((r1 * r1 - one).eval({1.0}) == 0.0);
  CHECK(same((r1 + one) * (r1 - one), r1 * r1 - one));
  CHECK((r + r * -1.0).is_zero());
  CHECK((r * 0.0).is_zero());
  CHECK((r * r * z).diff(0).to_string() == "2*r*z1");
  CHECK((r * r).diff(1).is_zero());
  CHECK(Poly::constant(2, 3.0).diff(0).is_zero());
  CHECK_THROWS_AS(r.eval({1.0}), DimensionMismatch);
  CHECK_THROWS_AS(r + Poly::variable(3, 0), DimensionMismatch);
  CHECK_THROWS_AS(r.diff(2), InvalidArgument);
}

TEST_CASE("ring laws on random integer polynomials") {
  std::mt19937 rng(7);
  for (int t = 0; t < 50; ++t) {
    const Poly a = random_poly(rng, 3, 3), b = random_poly(rng, 3, 3), c = random_poly(rng, 3, 3);
    CHECK(same((a * b) * c, a * (b * c)));
    CHECK(same(a * (b + c), a * b + a * c));
    CHECK(same(a + b, b + a));
  }
}

TEST_CASE("derivative agrees with central differences") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 30; ++t) {
    const Poly p = random_poly(rng, 3, 4);
    std::vector<double> x = {u(rng), u(rng), u(rng)};
    for (int v = 0; v < 3; ++v) {
      const double h = 1e-5;
      auto xp = x, xm = x;
      xp[v] += h;
      xm[v] -= h;
      const double fd = (p.eval(xp) - p.eval(xm)) / (2 * h);
      const double ex = p.diff(v).eval(x);
      CHECK(std::abs(fd - ex) <= 1e-6 * std::max(1.0, std::abs(ex)));
    }
  }
}

TEST_CASE("jacobian and determinant") {
  const Poly r = Poly::variable(2, 0), z = Poly::variable(2, 1);
  auto J = jacobian({r - Poly::constant(2, 1), z - Poly::constant(2, 2)}, {1.0, 2.0});
  CHECK(J.matrix.isIdentity());
  CHECK(J.det == doctest::Approx(1.0));
  const Poly r1 = Poly::variable(1, 0);
  CHECK(jacobian({r1 * r1 - Poly::constant(1, 1)}, {1.0}).det == doctest::Approx(2.0));
  CHECK(jacobian({r * z, r + z}, {0.0, 0.0}).det == 0.0);
  CHECK_THROWS_AS(jacobian({r}, {0.0, 0.0}), DimensionMismatch);
}

TEST_CASE("bezout bound") {
  const Poly r = Poly::variable(2, 0), z = Poly::variable(2, 1);
  CHECK(bezout_bound({r * r - Poly::constant(2, 1), z * z * r}) == 6);
  CHECK(bezout_bound({Poly::variable(1, 0) - Poly::constant(1, 1)}) == 1);
  CHECK(bezout_bound({r, Poly::constant(2, 2.0)}) == 0);
  // permutation invariance
  CHECK(bezout_bound({z * z * r, r * r * r}) == bezout_bound({r * r * r, z * z * r}));
}

TEST_CASE("pretty printer uses graded order") {
  const Poly r = Poly::variable(2, 0), z = Poly::variable(2, 1);
  CHECK((r * r * z * 2.0 - Poly::constant(2, 0.5) + z).to_string() == "2*r^2*z1 + z1 - 0.5");
  CHECK(Poly(2).to_string() == "0");
}
