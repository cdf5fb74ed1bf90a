#include <cmath>

#include "avgcycles/errors.hpp"
#include "avgcycles/generators.hpp"
#include "avgcycles/trigkernel.hpp"
#include "doctest.h"

using namespace avgcycles;
using avgcycles::trig::kPi;
using avgcycles::trig::kTwoPi;

namespace {

int simple_zeros(const GeneratedCase& gc) {
  int c = 0;
  for (const auto& z : find_simple_zeros(certified_system(gc), gc.box).zeros) c += z.simple;
  return c;
}

struct Th4Target {
  PolyVec P, Q;
};

// r P + Q = (r^2 - 1.5 r + 0.5, r z + r - r^2): roots (1, 0) and (0.5, -0.5).
Th4Target two_root_target() {
  const Poly r = Poly::variable(2, 0), z = Poly::variable(2, 1), one = Poly::constant(2, 1.0);
  return {{one * -1.5, z + one}, {r * r + one * 0.5, r * r * -1.0}};
}

double nearest(const std::vector<ZeroRecord>& zs, std::vector<double> p) {
  double best = 1e300;
  for (const auto& z : zs) best = std::min(best, std::hypot(z.nu[0] - p[0], z.nu[1] - p[1]));
  return best;
}

}  // namespace

TEST_CASE("count formulas") {
  CHECK(count_first_order(3, 0, 1.0) == 3);
  CHECK(count_first_order(2, 2, kPi) == 8);
  CHECK(count_first_order(5, 0, kTwoPi) == 2);
  CHECK(count_first_order(4, 0, kTwoPi) == 1);
  CHECK(count_first_order(3, 1, kTwoPi) == 3);
  CHECK(count_first_order(2, 2, kTwoPi) == 2);
  CHECK(count_second_order("prop12", 2, 1) == 12);
  CHECK(count_second_order("prop12", 3, 0) == 6);
  CHECK(count_second_order("cor13", 2, 1) == 16);
  CHECK(count_second_order("prop18", 3, 1) == 25);
  CHECK(count_second_order("prop18", 2, 1) == 6);
  CHECK(count_second_order("prop21", 3, 0) == 2);
  CHECK(count_second_order("prop21", 4, 0) == 4);
  CHECK(bound_first_order(3, 1) == 9);
  CHECK(bound_second_order(2, 1) == 16);
  CHECK_THROWS_AS(count_second_order("nope", 1, 0), InvalidArgument);
  for (int n = 1; n <= 3; ++n)
    for (int m = 0; m <= 2; ++m) CHECK(count_second_order("prop12", n, m) <= bound_second_order(n, m));
}

TEST_CASE("chebyshev nodes") {
  const auto x = chebyshev_nodes(3, 0.0, 2.0);
  REQUIRE(x.size() == 3);
  CHECK(x[1] == doctest::Approx(1.0));
  CHECK(x[0] + x[2] == doctest::Approx(2.0));
  for (double v : x) CHECK((v > 0.0 && v < 2.0));
}

TEST_CASE("first-order generators reach the exact count") {
  for (int n = 1; n <= 3; ++n)
    for (int m = 0; m <= 1; ++m) {
      CAPTURE(n);
      CAPTURE(m);
      const auto a = gen_prop10(n, m, kPi / 2);
      CHECK(a.expected == n * (m ? n : 1));
      CHECK(simple_zeros(a) == a.expected);
      const auto b = gen_prop16(n, m);
      CHECK(simple_zeros(b) == b.expected);
      if (count_first_order(n, m, kTwoPi) > 0) {
        const auto c = gen_prop20(n, m);
        CHECK(simple_zeros(c) == c.expected);
      }
    }
  CHECK_THROWS_AS(gen_prop10(2, 0, kPi), InvalidArgument);
  CHECK_THROWS_AS(gen_prop10(0, 0, 1.0), InvalidArgument);
}

TEST_CASE("generators are deterministic in the seed") {
  const auto a = gen_prop10(2, 1, 1.0, {.seed = 7});
  const auto b = gen_prop10(2, 1, 1.0, {.seed = 7});
  CHECK(spec_to_json_text(a.spec) == spec_to_json_text(b.spec));
}

TEST_CASE("second-order generators meet the lower bound") {
  const auto a = gen_prop12(2, 0, kPi / 2);
  CHECK(a.expected == 4);
  CHECK(simple_zeros(a) >= 4);
  const auto b = gen_cor13(1, 1.0);
  CHECK(simple_zeros(b) == 4);
  const auto c = gen_prop18(2, 0);
  CHECK(simple_zeros(c) >= 2);
  const auto d = gen_prop21(3);
  CHECK(simple_zeros(d) >= 2);
  // r f20 has no r^0 term at phi = 2pi, so only n - 1 positive zeros are reachable
  CHECK_THROWS_AS(gen_prop21(2), InfeasibleTarget);
}

TEST_CASE("th4 realization converges linearly in delta") {
  const auto t = two_root_target();
  double prev = 0.0;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    const auto gc = gen_th4(t.P, t.Q, kPi / 2, delta);
    CHECK(gc.expected == 2);
    const auto zs = find_simple_zeros(certified_system(gc), gc.box).zeros;
    CHECK(zs.size() == 2);
    const double err = std::max(nearest(zs, {1.0, 0.0}), nearest(zs, {0.5, -0.5}));
    CHECK(err < 5.0 * delta);
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(10.0).epsilon(0.2));
    prev = err;
  }
}

TEST_CASE("th4 realized f2 agrees with the quadrature oracle") {
  const auto t = two_root_target();
  const auto gc = gen_th4(t.P, t.Q, 2.0, 1e-2);
  const PolyVec rf2 = certified_system(gc);
  for (const std::vector<double>& nu : {std::vector<double>{0.7, 0.2}, std::vector<double>{1.4, -0.6}}) {
    const Eigen::VectorXd a = eval_f2(rf2, nu);
    const Eigen::VectorXd b = numeric_f2(gc.spec, nu);
    CHECK((a - b).norm() < 1e-8 * std::max(1.0, b.norm()));
  }
}

TEST_CASE("th4 rejects unreachable and malformed targets") {
  const auto t = two_root_target();
  CHECK_THROWS_AS(gen_th4(t.P, t.Q, kPi, 1e-3), InfeasibleTarget);
  CHECK_THROWS_AS(gen_th4(t.P, t.Q, kPi / 2, 0.0), InvalidArgument);
  CHECK_THROWS_AS(gen_th4({t.P[0]}, t.Q, kPi / 2, 1e-3), DimensionMismatch);
}
