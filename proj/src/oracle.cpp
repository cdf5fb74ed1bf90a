// Quadrature oracle for the averaged functions. Deliberately shares nothing
// with the closed-form builders beyond the coefficient tables: fields are evaluated
// from the coefficient tables in Cartesian form and pushed through the
// cylindrical change of variables numerically.

#include <cmath>
#include <complex>

#include "avgcycles/avgcore.hpp"
#include "avgcycles/errors.hpp"
#include "avgcycles/quadrature.hpp"
#include "avgcycles/trigkernel.hpp"

namespace avgcycles {
namespace {

using cplx = std::complex<double>;
using trig::kTwoPi;
constexpr double kStep = 1e-20;  // complex-step increment

template <class T>
T eval_table(const CoefficientTable& t, const T& x, const T& y, const std::vector<T>& z) {
  T acc = 0.0;
  for (const auto& [e, c] : t.entries) {
    T v = c;
    for (int k = 0; k < e[0]; ++k) v *= x;
    for (int k = 0; k < e[1]; ++k) v *= y;
    for (std::size_t l = 0; l < z.size(); ++l)
      for (int k = 0; k < e[l + 2]; ++k) v *= z[l];
    acc += v;
  }
  return acc;
}

// Rows: angular, radial, z_1..z_d.
template <class T>
std::vector<T> cyl(const FieldTables& f, double theta, const std::vector<T>& state) {
  const T r = state[0];
  const std::vector<T> z(state.begin() + 1, state.end());
  const double c = std::cos(theta), s = std::sin(theta);
  const T x = r * c, y = r * s;
  const T X = eval_table(f.x, x, y, z), Y = eval_table(f.y, x, y, z);
  std::vector<T> out;
  out.push_back((Y * c - X * s) / r);
  out.push_back(X * c + Y * s);
  for (const auto& t : f.z) out.push_back(eval_table(t, x, y, z));
  return out;
}

struct Oracle {
  const SystemSpec& s;

  bool in_plus(double theta) const {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    return t <= s.phi;
  }

  template <class T>
  std::vector<T> F1(bool plus, double theta, const std::vector<T>& st) const {
    const auto A = cyl(s.tables(1, plus ? Zone::plus : Zone::minus), theta, st);
    std::vector<T> out(static_cast<std::size_t>(s.d + 1));
    for (int k = 0; k <= s.d; ++k) {
      out[k] = A[k + 1];
      if (k > s.m) out[k] -= s.mu[k - 1] * st[k] * A[0];
    }
    return out;
  }

  std::vector<double> F2(bool plus, double theta, const std::vector<double>& st) const {
    const Zone zn = plus ? Zone::plus : Zone::minus;
    const auto A = cyl(s.tables(1, zn), theta, st);
    const auto B = cyl(s.tables(2, zn), theta, st);
    std::vector<double> out(static_cast<std::size_t>(s.d + 1));
    for (int k = 0; k <= s.d; ++k) {
      out[k] = B[k + 1] - A[0] * A[k + 1];
      if (k > s.m) {
        const double mz = s.mu[k - 1] * st[k];
        out[k] += mz * A[0] * A[0] - mz * B[0];
      }
    }
    return out;
  }

  std::vector<double> flow(double t, const std::vector<double>& z) const {
    std::vector<double> x = z;
    for (int k = s.m + 1; k <= s.d; ++k) x[k] *= std::exp(s.mu[k - 1] * t);
    return x;
  }

  double Y(int k, double t) const { return k > s.m ? std::exp(s.mu[k - 1] * t) : 1.0; }

  Eigen::VectorXd DF1(bool plus, double t, const std::vector<double>& x, const Eigen::VectorXd& v) const {
    std::vector<cplx> xc(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) xc[k] = cplx(x[k], kStep * v[static_cast<Eigen::Index>(k)]);
    const auto f = F1(plus, t, xc);
    Eigen::VectorXd out(static_cast<Eigen::Index>(f.size()));
    for (std::size_t k = 0; k < f.size(); ++k) out[static_cast<Eigen::Index>(k)] = f[k].imag() / kStep;
    return out;
  }

  // Y(theta) int_0^theta Y^{-1}(t) g(t) dt
  template <class G>
  Eigen::VectorXd variation(double theta, G&& g) const {
    auto integrand = [&](double t) {
      Eigen::VectorXd v = g(t);
      for (int k = 0; k <= s.d; ++k) v[k] /= Y(k, t);
      return v;
    };
    Eigen::VectorXd out = integrate(integrand, 0.0, theta);
    for (int k = 0; k <= s.d; ++k) out[k] *= Y(k, theta);
    return out;
  }

  Eigen::VectorXd y1(bool plus, double theta, const std::vector<double>& z) const {
    return variation(theta, [&](double t) {
      const auto f = F1(plus, t, flow(t, z));
      return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size())));
    });
  }

  Eigen::VectorXd half_y2(bool plus, double theta, const std::vector<double>& z) const {
    return variation(theta, [&](double t) {
      const auto x = flow(t, z);
      const auto f2 = F2(plus, t, x);
      Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(f2.data(), static_cast<Eigen::Index>(f2.size()));
      return Eigen::VectorXd(v + DF1(plus, t, x, y1(plus, t, z)));
    });
  }

  // Derivative of g1 along a direction v of the initial condition.
  Eigen::VectorXd dg1(const std::vector<double>& z, const Eigen::VectorXd& v) const {
    auto piece = [&](bool plus, double theta) {
      return variation(theta, [&](double t) {
        Eigen::VectorXd w = v;
        for (int k = 0; k <= s.d; ++k) w[k] *= Y(k, t);
        return DF1(plus, t, flow(t, z), w);
      });
    };
    return piece(true, s.phi) - piece(false, s.phi - kTwoPi);
  }
};

void check_point(const SystemSpec& s, const std::vector<double>& z) {
  if (static_cast<int>(z.size()) != s.d + 1) throw DimensionMismatch("numeric_g: z must have d+1 entries");
  if (!(z[0] > 0.0)) throw InvalidArgument("numeric_g: r must be positive");
}

}  // namespace

Eigen::VectorXd numeric_g(const SystemSpec& s, int order, const std::vector<double>& z) {
  s.validate();
  check_point(s, z);
  const Oracle o{s};
  if (order == 1) return o.y1(true, s.phi, z) - o.y1(false, s.phi - kTwoPi, z);
  if (order == 2) return o.half_y2(true, s.phi, z) - o.half_y2(false, s.phi - kTwoPi, z);
  throw InvalidArgument("numeric_g: order must be 1 or 2");
}

Eigen::VectorXd numeric_f1(const SystemSpec& s, const std::vector<double>& nu) {
  return numeric_g(s, 1, lift_to_z(s, nu)).head(s.m + 1);
}

Eigen::VectorXd numeric_gamma(const SystemSpec& s, const std::vector<double>& nu) {
  const Eigen::VectorXd g = numeric_g(s, 1, lift_to_z(s, nu));
  Eigen::VectorXd out(s.d - s.m);
  for (int w = s.m + 1; w <= s.d; ++w) {
    const double mu = s.mu[w - 1];
    const double delta = std::exp(mu * s.phi) * (1.0 - std::exp(-kTwoPi * mu));
    if (std::abs(1.0 - std::exp(-kTwoPi * mu)) < 1e-12) throw DegenerateEigenvalue("numeric_gamma: degenerate mu");
    out[w - s.m - 1] = -g[w] / delta;
  }
  return out;
}

Eigen::VectorXd numeric_f2(const SystemSpec& s, const std::vector<double>& nu) {
  const auto z = lift_to_z(s, nu);
  const Oracle o{s};
  Eigen::VectorXd out = numeric_g(s, 2, z).head(s.m + 1);
  if (s.m < s.d) {
    const Eigen::VectorXd gamma = numeric_gamma(s, nu);
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(s.d + 1);
    for (int w = s.m + 1; w <= s.d; ++w) dir[w] = gamma[w - s.m - 1];
    out += o.dg1(z, dir).head(s.m + 1);
  }
  return 2.0 * out;
}

}  // namespace avgcycles
