#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "avgcycles/errors.hpp"
#include "avgcycles/trigkernel.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace avgcycles;
using namespace avgcycles::trig;

TEST_CASE("trig_I closed values") {
  CHECK(trig_I(2, 1, kPi / 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(trig_I(0, 0, kTwoPi) == doctest::Approx(kTwoPi));
  CHECK(trig_I(2, 0, kTwoPi) == doctest::Approx(kPi));
  CHECK(trig_I(2, 2, kTwoPi) == doctest::Approx(kPi / 4));
  CHECK(trig_J(0, 0, kPi) == doctest::Approx(kPi));
  CHECK(trig_J(3, 4, kTwoPi) == 0.0);
}

TEST_CASE("trig_I matches brute-force quadrature") {
  for (double phi : {0.3, 1.0, kPi / 2, 2.5, kPi, 4.0, 5.9, kTwoPi}) {
    for (int p = 0; p <= 9; ++p) {
      for (int q = 0; q <= 9; ++q) {
        const double ref = oracle::integrate([&](double s) { return oracle::cs(s, p, q); }, 0.0, phi);
        CHECK(std::abs(trig_I(p, q, phi) - ref) < 1e-13);
        const double refj = oracle::integrate([&](double s) { return oracle::cs(s, p, q); }, phi, kTwoPi);
        CHECK(std::abs(trig_J(p, q, phi) - refj) < 1e-13);
      }
    }
  }
}

TEST_CASE("harmonics reproduce cos^p sin^q") {
  for (int p = 0; p <= 6; ++p) {
    for (int q = 0; q <= 6; ++q) {
      const auto c = harmonics(p, q);
      const int n = p + q;
      for (double s : {0.1, 1.3, 2.9, 5.0}) {
        std::complex<double> v = 0.0;
        for (int k = -n; k <= n; ++k) v += c[k + n] * std::exp(std::complex<double>(0.0, k * s));
        CHECK(std::abs(v.real() - oracle::cs(s, p, q)) < 1e-14);
        CHECK(std::abs(v.imag()) < 1e-14);
      }
    }
  }
}

TEST_CASE("power_exp_integral branches agree with quadrature") {
  for (int n = 0; n <= 4; ++n) {
    for (std::complex<double> z : {std::complex<double>(0.0, 0.0), {0.05, 0.0}, {0.0, 3.0}, {-1.5, 2.0}, {2.0, 0.0}}) {
      const double a = 0.4, b = 5.1;
      const double re = oracle::integrate([&](double s) { return (std::pow(s, n) * std::exp(z * s)).real(); }, a, b, 256);
      const double im = oracle::integrate([&](double s) { return (std::pow(s, n) * std::exp(z * s)).imag(); }, a, b, 256);
      const auto v = power_exp_integral(n, z, a, b);
      CHECK(std::abs(v.real() - re) < 1e-10 * (1.0 + std::abs(re)));
      CHECK(std::abs(v.imag() - im) < 1e-10 * (1.0 + std::abs(im)));
    }
  }
}

TEST_CASE("exp_trig") {
  CHECK(exp_trig(1.0, 1, 0, 0.0, kPi) == doctest::Approx(-(std::exp(kPi) + 1.0) / 2.0).epsilon(1e-14));
  for (double mu : {-2.0, -0.3, -1e-9, 0.0, 1e-10, 5e-4, 0.7}) {
    for (int p = 0; p <= 5; ++p) {
      for (int q = 0; q <= 5; ++q) {
        const double a = 0.0, b = 4.2;
        const double ref = oracle::integrate(
            [&](double s) { return std::exp(mu * s) * oracle::cs(s, p, q); }, a, b, 128);
        CHECK(std::abs(exp_trig(mu, p, q, a, b) - ref) < 1e-12 * (1.0 + std::abs(ref)));
      }
    }
  }
}

TEST_CASE("nested kernels match double quadrature") {
  for (double phi : {1.1, kPi, 5.0}) {
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3; ++j)
        for (int p = 0; p <= 3; ++p)
          for (int q = 0; q <= 3; ++q) {
            auto outer = [&](double s) {
              return oracle::cs(s, i, j) * oracle::integrate([&](double t) { return oracle::cs(t, p, q); }, 0.0, s, 8);
            };
            CHECK(std::abs(nested_I(i, j, p, q, phi) - oracle::integrate(outer, 0.0, phi, 16)) < 1e-12);
            CHECK(std::abs(nested_J(i, j, p, q, phi) - oracle::integrate(outer, phi, kTwoPi, 16)) < 1e-12);
          }
  }
}

TEST_CASE("double_exp_trig") {
  CHECK(double_exp_trig(0, 0, 0, 0, 1.0, 0.0, 1.0) == doctest::Approx(std::numbers::e - 2.0).epsilon(1e-14));
  for (double mu : {-1.0, 1e-4, 0.0, 0.8}) {
    for (int i = 0; i <= 2; ++i)
      for (int j = 0; j <= 2; ++j)
        for (int p = 0; p <= 2; ++p)
          for (int q = 0; q <= 2; ++q) {
            auto outer = [&](double s) {
              return oracle::cs(s, i, j) *
                     oracle::integrate([&](double t) { return std::exp(mu * (s - t)) * oracle::cs(t, p, q); }, 0.0, s, 8);
            };
            const double a = 0.5, b = 5.5;
            const double ref = oracle::integrate(outer, a, b, 16);
            CHECK(std::abs(double_exp_trig(i, j, p, q, mu, a, b) - ref) < 1e-11 * (1.0 + std::abs(ref)));
          }
  }
}

TEST_CASE("vanishing rules hold for exponents up to 8") {
  const double tol = 1e-12;
  int mismatches = 0;
  for (double phi : {kPi, kTwoPi}) {
    for (int p = 0; p <= 8; ++p)
      for (int q = 0; q <= 8; ++q) {
        const bool zi = std::abs(trig_I(p, q, phi)) < tol;
        const bool zj = std::abs(trig_J(p, q, phi)) < tol;
        mismatches += zi != lemma_vanish_predicate({Interval::first, Kind::plain, phi, 0, 0, p, q});
        mismatches += zj != lemma_vanish_predicate({Interval::second, Kind::plain, phi, 0, 0, p, q});
        for (int i = 0; i <= 8; ++i)
          for (int j = 0; j <= 8; ++j) {
            const bool ni = std::abs(nested_I(i, j, p, q, phi)) < tol;
            const bool nj = std::abs(nested_J(i, j, p, q, phi)) < tol;
            const bool pi = lemma_vanish_predicate({Interval::first, Kind::nested, phi, i, j, p, q});
            const bool pj = lemma_vanish_predicate({Interval::second, Kind::nested, phi, i, j, p, q});
            if (ni != pi || nj != pj) {
              ++mismatches;
              if (mismatches < 10)
                MESSAGE("phi=" << phi << " i=" << i << " j=" << j << " p=" << p << " q=" << q
                               << " I=" << nested_I(i, j, p, q, phi) << " J=" << nested_J(i, j, p, q, phi));
            }
          }
      }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(trig_I(-1, 0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(trig_I(0, 0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(trig_I(0, 0, 7.0), InvalidArgument);
  CHECK_THROWS_AS(nested(0, 0, 0, 0, 2.0, 1.0), InvalidArgument);
}

TEST_CASE("concurrent memoized access") {
  clear_cache();
  std::vector<std::thread> pool;
  std::vector<double> out(8, 0.0);
  for (int t = 0; t < 8; ++t)
    pool.emplace_back([&, t] {
      double acc = 0.0;
      for (int p = 0; p <= 20; ++p)
        for (int q = 0; q <= 20; ++q) acc += trig_I(p, q, 2.0);
      out[t] = acc;
    });
  for (auto& th : pool) th.join();
  for (int t = 1; t < 8; ++t) CHECK(out[t] == out[0]);
  CHECK(cache_size() > 0);
}
