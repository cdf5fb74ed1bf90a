#include <sstream>

#include "avgcycles/errors.hpp"
#include "avgcycles/rootfind.hpp"
#include "doctest.h"

using namespace avgcycles;

TEST_CASE("single variable") {
  const Poly r = Poly::variable(1, 0);
  const auto zs = find_simple_zeros({r * r - Poly::constant(1, 1)}, SearchBox::uniform({0.1}, {2.0}));
  REQUIRE(zs.zeros.size() == 1);
  CHECK(zs.zeros[0].nu[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(zs.zeros[0].jac_det == doctest::Approx(2.0));
  CHECK(zs.zeros[0].simple);
}

TEST_CASE("two variables, product of linear factors") {
  const Poly r = Poly::variable(2, 0), z = Poly::variable(2, 1);
  const Poly one = Poly::constant(2, 1.0);
  const PolyVec F = {(r - one * 0.5) * (r - one * 1.5), (z + one * 0.3) * (z - one * 0.7)};
  const auto box = SearchBox::uniform({0.1, -1.0}, {2.0, 1.0});
  const auto zs = find_simple_zeros(F, box);
  CHECK(zs.zeros.size() == 4);
  for (const auto& x : zs.zeros) CHECK(x.residual < 1e-10);
  // idempotent
  const auto again = find_simple_zeros(F, box);
  REQUIRE(again.zeros.size() == zs.zeros.size());
  for (std::size_t k = 0; k < zs.zeros.size(); ++k) CHECK(again.zeros[k].nu == zs.zeros[k].nu);
  CHECK(certify_count(F, box, 4).pass);
  CHECK(!certify_count(F, box, 5).pass);
  const auto rec = find_simple_zeros({r - one, z - one * 2.0}, SearchBox::uniform({0.1, 0.0}, {3.0, 3.0}));
  REQUIRE(rec.zeros.size() == 1);
  CHECK(rec.zeros[0].nu[1] == doctest::Approx(2.0));
}

TEST_CASE("degenerate and invalid input") {
  const Poly r = Poly::variable(1, 0);
  CHECK(!certify_count({Poly(1)}, SearchBox::uniform({0.1}, {1.0}), 1).pass);
  CHECK_THROWS_AS(find_simple_zeros({r}, SearchBox::uniform({1.0}, {0.5})), InvalidArgument);
  // zero at r = 0 only: seeds run into r_min and nothing is kept
  const auto zs = find_simple_zeros({r * r * r + r}, SearchBox::uniform({0.01}, {1.0}));
  CHECK(zs.zeros.empty());
}

TEST_CASE("csv") {
  std::ostringstream os;
  write_zero_csv(os, {{{1.0, 2.0}, 0.0, 1.0, true}});
  CHECK(os.str().rfind("r,z1,residual,jac_det,simple\n", 0) == 0);
}
