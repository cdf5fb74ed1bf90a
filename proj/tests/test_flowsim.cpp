#include <cmath>
#include <random>

#include <boost/numeric/odeint.hpp>

#include "avgcycles/avgcore.hpp"
#include "avgcycles/errors.hpp"
#include "avgcycles/flowsim.hpp"
#include "avgcycles/trigkernel.hpp"
#include "doctest.h"

using namespace avgcycles;
using trig::kPi;
using trig::kTwoPi;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double a : v) x[k++] = a;
  return x;
}

// Adaptive Fehlberg 7(8) over one period, as an independent reference.
Eigen::VectorXd reference_return(const ThetaSystem& sys, const Eigen::VectorXd& z) {
  using State = std::vector<double>;
  namespace ode = boost::numeric::odeint;
  State x(z.data(), z.data() + z.size());
  const double phi = sys.spec().phi;
  for (int zone = 0; zone < 2; ++zone) {
    const double a = zone == 0 ? 0.0 : phi, b = zone == 0 ? phi : kTwoPi;
    if (b <= a) continue;
    auto f = [&](const State& s, State& ds, double t) {
      const Eigen::VectorXd v = sys.rhs(t, Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(s.size())), zone == 0);
      ds.assign(v.data(), v.data() + v.size());
    };
    ode::integrate_adaptive(ode::make_controlled(1e-14, 1e-14, ode::runge_kutta_fehlberg78<State>()), f, x, a, b, 1e-3);
  }
  return Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

}  // namespace

TEST_CASE("unperturbed flow") {
  const SystemSpec s = random_spec(2, 1, 2, 2.0, 3);
  const ThetaSystem sys(s, 0.0);
  const Eigen::VectorXd z = vec({0.8, 0.3, 0.5});
  const Eigen::VectorXd P = return_map(sys, z);
  CHECK(P[0] == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(P[1] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(P[2] == doctest::Approx(0.5 * std::exp(kTwoPi * s.mu[1])).epsilon(1e-9));
  const Eigen::VectorXd on = vec({0.8, 0.3, 0.0});
  CHECK((return_map(sys, on) - on).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("fixed-step flow agrees with an adaptive reference") {
  const SystemSpec s = random_spec(2, 0, 1, 1.7, 21, false);
  const ThetaSystem sys(s, 0.01);
  const Eigen::VectorXd z = vec({0.9, 0.2});
  CHECK((return_map(sys, z) - reference_return(sys, z)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("flow errors") {
  SystemSpec s = SystemSpec::zero(1, 0, 0, kPi, {});
  s.first[0].y.set({0, 0}, -1.0);  // A_1 = -cos(theta)/r on the plus zone
  CHECK_THROWS_AS(return_map(ThetaSystem(s, 2.0), vec({0.5})), FlowError);
  try {
    return_map(ThetaSystem(s, 2.0), vec({0.5}));
  } catch (const FlowError& e) {
    CHECK(e.kind == FlowError::Kind::denominator_vanished);
  }
}

TEST_CASE("displacement is eps * Y(2pi - phi) g1 to first order") {
  for (std::uint64_t seed : {1u, 2u}) {
    const SystemSpec s = random_spec(2, 1, 2, 2.5, seed);
    const std::vector<double> z = {0.8, -0.3, 0.0};  // on the tail-free manifold
    Eigen::VectorXd g1 = numeric_g(s, 1, z);
    g1[2] *= std::exp(s.mu[1] * (kTwoPi - s.phi));
    std::vector<double> eps = {1e-2, 5e-3, 2.5e-3, 1.25e-3, 1e-3}, err;
    for (double e : eps) {
      const Eigen::VectorXd P = return_map(ThetaSystem(s, e), Eigen::Map<const Eigen::VectorXd>(z.data(), 3));
      err.push_back(((P - Eigen::Map<const Eigen::VectorXd>(z.data(), 3)) / e - g1).cwiseAbs().maxCoeff());
    }
    CHECK(std::abs(loglog_slope(eps, err) - 1.0) < 0.15);
  }
}

TEST_CASE("second-order displacement matches g2 when f1 vanishes") {
  const SystemSpec s = project_to_kernel(random_spec(2, 1, 1, 2.0, 5));
  const std::vector<double> z = {0.9, 0.4};
  const Eigen::Map<const Eigen::VectorXd> zv(z.data(), 2);
  const Eigen::VectorXd g2 = numeric_g(s, 2, z);
  std::vector<double> eps = {1e-2, 5e-3, 2.5e-3}, err;
  for (double e : eps) err.push_back(((return_map(ThetaSystem(s, e), zv) - zv) / (e * e) - g2).cwiseAbs().maxCoeff());
  CHECK(err.back() < 0.05 * g2.cwiseAbs().maxCoeff());
  CHECK(std::abs(loglog_slope(eps, err) - 1.0) < 0.15);
}

TEST_CASE("refine_cycle on a one-dimensional example") {
  // f10(r) = pi/2 (r - r^3/4) type example: a = x - x^3 style perturbation
  SystemSpec s = SystemSpec::zero(3, 0, 0, kTwoPi, {});
  s.first[0].x.set({1, 0}, 1.0);
  s.first[0].x.set({3, 0}, -1.0);
  const PolyVec f1 = build_f1(s);
  // f10 = pi r - 3 pi r^3 / 4 -> zero at r = 2/sqrt(3)
  const double rstar = 2.0 / std::sqrt(3.0);
  CHECK(std::abs(f1[0].eval({rstar})) < 1e-12);
  const CycleRecord c = refine_cycle(s, 1e-3, {rstar});
  CHECK(c.converged);
  CHECK(c.period_residual < 1e-10);
  CHECK(c.distance < 1e-2);
  const CycleRecord zero = refine_cycle(s, 0.0, {rstar});
  CHECK(zero.distance == 0.0);
}

TEST_CASE("loglog slope") {
  CHECK(loglog_slope({1, 2, 4}, {3, 6, 12}) == doctest::Approx(1.0));
  CHECK(loglog_slope({1, 10}, {1, 100}) == doctest::Approx(2.0));
}
