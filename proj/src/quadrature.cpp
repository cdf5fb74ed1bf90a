#include "avgcycles/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "avgcycles/errors.hpp"

namespace avgcycles {
namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  Eigen::VectorXd kronrod;
  double error;
};

Panel gk15(const std::function<Eigen::VectorXd(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Eigen::VectorXd fc = f(c);
  Eigen::VectorXd k = kKronrod[7] * fc;
  Eigen::VectorXd g = kGauss[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const Eigen::VectorXd s = f(c - h * kNodes[i]) + f(c + h * kNodes[i]);
    k += kKronrod[i] * s;
    if (i % 2 == 1) g += kGauss[i / 2] * s;
  }
  return {h * k, (h * (k - g)).cwiseAbs().maxCoeff()};
}

Eigen::VectorXd adapt(const std::function<Eigen::VectorXd(double)>& f, double a, double b,
                      const Panel& whole, double tol, int depth, const QuadOptions& opt) {
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * whole.kronrod.cwiseAbs().maxCoeff();
  if (whole.error <= std::max(tol, floor)) return whole.kronrod;
  if (depth >= opt.max_depth)
    throw QuadratureFailure("adaptive quadrature: depth limit " + std::to_string(opt.max_depth) +
                            " reached on [" + std::to_string(a) + ", " + std::to_string(b) +
                            "], error estimate " + std::to_string(whole.error));
  const double c = 0.5 * (a + b);
  const Panel left = gk15(f, a, c), right = gk15(f, c, b);
  // Converged once the refined estimates agree with the coarse one.
  if (left.error + right.error <= tol) return left.kronrod + right.kronrod;
  return adapt(f, a, c, left, 0.5 * tol, depth + 1, opt) + adapt(f, c, b, right, 0.5 * tol, depth + 1, opt);
}

}  // namespace

Eigen::VectorXd integrate(const std::function<Eigen::VectorXd(double)>& f, double a, double b,
                          const QuadOptions& opt) {
  if (a == b) return Eigen::VectorXd::Zero(f(a).size());
  if (a > b) return -integrate(f, b, a, opt);
  const Panel whole = gk15(f, a, b);
  const double tol = std::max(opt.abs_tol, opt.rel_tol * whole.kronrod.cwiseAbs().maxCoeff());
  return adapt(f, a, b, whole, tol, 0, opt);
}

double integrate_scalar(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt) {
  auto g = [&](double s) {
    Eigen::VectorXd v(1);
    v[0] = f(s);
    return v;
  };
  return integrate(g, a, b, opt)[0];
}

}  // namespace avgcycles
