#include "avgcycles/flowsim.hpp"

#include <cstdio>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "avgcycles/errors.hpp"
#include "avgcycles/trigkernel.hpp"

namespace avgcycles {

using trig::kTwoPi;

ThetaSystem::ThetaSystem(const SystemSpec& s, double eps) : spec_(s), eps_(eps) {
  s.validate();
  for (int order : {1, 2})
    for (Zone z : {Zone::plus, Zone::minus}) {
      auto& dst = tab_[order - 1][zone_index(z)];
      const FieldTables& ft = s.tables(order, z);
      for (int c = 0; c < s.d + 2; ++c) {
        Table t;
        for (const auto& [e, v] : ft.component(c).entries) t.push_back({v, e});
        dst.push_back(std::move(t));
      }
    }
}

double ThetaSystem::eval(const Table& t, const std::vector<std::vector<double>>& pw) const {
  double acc = 0.0;
  for (const Term& term : t) {
    double v = term.c;
    for (std::size_t k = 0; k < term.e.size(); ++k) v *= pw[k][term.e[k]];
    acc += v;
  }
  return acc;
}

Eigen::VectorXd ThetaSystem::rhs(double theta, const Eigen::VectorXd& x, bool plus) const {
  const int d = spec_.d, n = spec_.n;
  const double r = x[0], c = std::cos(theta), s = std::sin(theta);
  std::vector<double> base(static_cast<std::size_t>(d + 2));
  base[0] = r * c;
  base[1] = r * s;
  for (int k = 0; k < d; ++k) base[k + 2] = x[k + 1];
  std::vector<std::vector<double>> pw(base.size(), std::vector<double>(static_cast<std::size_t>(n + 1), 1.0));
  for (std::size_t k = 0; k < base.size(); ++k)
    for (int p = 1; p <= n; ++p) pw[k][p] = pw[k][p - 1] * base[k];

  const int zi = plus ? 0 : 1;
  Eigen::VectorXd num(d + 1);
  double den = 1.0;
  for (int order = 1; order <= 2; ++order) {
    const auto& T = tab_[order - 1][zi];
    const double w = order == 1 ? eps_ : eps_ * eps_;
    const double X = eval(T[0], pw), Y = eval(T[1], pw);
    den += w * (Y * c - X * s) / r;
    if (order == 1) num.setZero();
    num[0] += w * (X * c + Y * s);
    for (int k = 0; k < d; ++k) num[k + 1] += w * eval(T[k + 2], pw);
  }
  for (int k = 0; k < d; ++k) num[k + 1] += spec_.mu[k] * x[k + 1];
  if (!(den > 0.0)) throw FlowError(FlowError::Kind::denominator_vanished, "theta' vanished (eps too large)");
  return num / den;
}

namespace {

// RK4 on the deviation y = x - origin, so P(z) - z keeps its relative
// precision even when it is O(eps^2).
Eigen::VectorXd rk4_span(const ThetaSystem& sys, const Eigen::VectorXd& origin, Eigen::VectorXd y, double a, double b,
                         bool plus, int steps, std::vector<std::pair<double, Eigen::VectorXd>>* dense) {
  const double h = (b - a) / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = a + k * h;
    const Eigen::VectorXd k1 = sys.rhs(t, origin + y, plus);
    const Eigen::VectorXd k2 = sys.rhs(t + 0.5 * h, origin + (y + 0.5 * h * k1), plus);
    const Eigen::VectorXd k3 = sys.rhs(t + 0.5 * h, origin + (y + 0.5 * h * k2), plus);
    const Eigen::VectorXd k4 = sys.rhs(t + h, origin + (y + h * k3), plus);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!(origin[0] + y[0] > 0.0)) throw FlowError(FlowError::Kind::r_crossed_zero, "r crossed zero");
    if (dense) dense->emplace_back(t + h, origin + y);
  }
  return y;
}

Eigen::VectorXd deviation(const ThetaSystem& sys, const Eigen::VectorXd& x0, double theta0, double theta1,
                          const FlowOptions& opt, std::vector<std::pair<double, Eigen::VectorXd>>* dense) {
  if (theta1 < theta0) throw InvalidArgument("integrate_theta: theta1 < theta0");
  if (x0.size() != sys.spec().d + 1) throw DimensionMismatch("integrate_theta: state dimension");
  if (!(x0[0] > 0.0)) throw InvalidArgument("integrate_theta: r must be positive");
  const double phi = sys.spec().phi;
  std::vector<double> cuts = {theta0};
  for (double base = std::floor(theta0 / kTwoPi) * kTwoPi; base <= theta1; base += kTwoPi)
    for (double c : {base, base + phi})
      if (c > theta0 && c < theta1) cuts.push_back(c);
  cuts.push_back(theta1);
  std::sort(cuts.begin(), cuts.end());
  if (dense) dense->emplace_back(theta0, x0);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x0.size());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (b - a <= 0.0) continue;
    double mid = std::fmod(0.5 * (a + b), kTwoPi);
    if (mid < 0) mid += kTwoPi;
    const bool plus = mid < phi;
    const int steps = std::max(1, static_cast<int>(std::ceil(opt.steps_per_2pi * (b - a) / kTwoPi)));
    y = rk4_span(sys, x0, y, a, b, plus, steps, dense);
  }
  return y;
}

}  // namespace

Eigen::VectorXd integrate_theta(const ThetaSystem& sys, const Eigen::VectorXd& x0, double theta0, double theta1,
                                const FlowOptions& opt, std::vector<std::pair<double, Eigen::VectorXd>>* dense) {
  return x0 + deviation(sys, x0, theta0, theta1, opt, dense);
}

Eigen::VectorXd return_map(const ThetaSystem& sys, const Eigen::VectorXd& z, const FlowOptions& opt) {
  return integrate_theta(sys, z, 0.0, kTwoPi, opt);
}

Eigen::VectorXd displacement(const ThetaSystem& sys, const Eigen::VectorXd& z, const FlowOptions& opt) {
  return deviation(sys, z, 0.0, kTwoPi, opt, nullptr);
}

CycleRecord refine_cycle(const SystemSpec& s, double eps, const std::vector<double>& nu, const FlowOptions& opt) {
  if (static_cast<int>(nu.size()) != s.m + 1) throw DimensionMismatch("refine_cycle: nu must have m+1 entries");
  const ThetaSystem sys(s, eps);
  const int n = s.d + 1;
  CycleRecord rec;
  rec.epsilon = eps;
  rec.predicted = Eigen::VectorXd::Zero(n);
  for (int k = 0; k <= s.m; ++k) rec.predicted[k] = nu[k];
  Eigen::VectorXd z = rec.predicted;
  Eigen::VectorXd G = displacement(sys, z, opt);
  double res = G.cwiseAbs().maxCoeff();
  for (int it = 0; it < opt.newton_max_iter; ++it) {
    Eigen::MatrixXd J(n, n);
    for (int k = 0; k < n; ++k) {
      const double h = opt.fd_step * std::max(1.0, std::abs(z[k]));
      Eigen::VectorXd zp = z, zm = z;
      zp[k] += h;
      zm[k] -= h;
      J.col(k) = (displacement(sys, zp, opt) - displacement(sys, zm, opt)) / (2.0 * h);
    }
    const Eigen::VectorXd step = J.fullPivLu().solve(-G);
    // the residual alone can already sit below period_tol at the seed
    if (res < opt.period_tol && step.norm() <= opt.step_tol * (1.0 + z.norm())) break;
    double lambda = 1.0;
    bool improved = false;
    for (int h = 0; h < 20; ++h, lambda *= 0.5) {
      const Eigen::VectorXd zt = z + lambda * step;
      if (!(zt[0] > 0.0)) continue;
      const Eigen::VectorXd Gt = displacement(sys, zt, opt);
      const double rt = Gt.cwiseAbs().maxCoeff();
      if (rt < res) {
        z = zt;
        G = Gt;
        res = rt;
        improved = true;
        break;
      }
    }
    rec.iterations = it + 1;
    if (!improved || (res < opt.period_tol && lambda * step.norm() <= opt.step_tol * (1.0 + z.norm()))) break;
  }
  rec.fixed_point = z;
  rec.period_residual = res;
  rec.distance = (z - rec.predicted).norm();
  rec.converged = res < opt.period_tol;
  if (!rec.converged) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "refine_cycle: no convergence at eps=%.3g, last residual %.3e", eps, res);
    throw FlowError(FlowError::Kind::no_convergence, msg);
  }
  return rec;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("loglog_slope: need >= 2 matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_cycle_csv(std::ostream& os, const std::vector<CycleRecord>& cycles) {
  os << "epsilon,fixed_point,predicted,period_residual,distance,iterations\n";
  os.precision(17);
  auto vec = [&](const Eigen::VectorXd& v) {
    for (Eigen::Index k = 0; k < v.size(); ++k) os << (k ? " " : "") << v[k];
  };
  for (const auto& c : cycles) {
    os << c.epsilon << ",";
    vec(c.fixed_point);
    os << ",";
    vec(c.predicted);
    os << "," << c.period_residual << "," << c.distance << "," << c.iterations << "\n";
  }
}

}  // namespace avgcycles
