#include "avgcycles/avgcore.hpp"

#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include "avgcycles/errors.hpp"
#include "avgcycles/fields.hpp"
#include "avgcycles/trigkernel.hpp"

namespace avgcycles {
namespace {

using trig::kTwoPi;

// Polynomial in nu whose r exponent may be -1 before the final shift.
using NuTerms = std::map<std::vector<int>, double>;

std::vector<int> nu_key(const TrigMono& t, int m) {
  std::vector<int> k(static_cast<std::size_t>(m + 1));
  k[0] = t.r;
  for (int l = 0; l < m; ++l) k[l + 1] = t.z[l];
  return k;
}

std::vector<int> add_keys(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> c = a;
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += b[k];
  return c;
}

Poly to_poly(const NuTerms& t, int nvars, int r_shift) {
  Poly p(nvars);
  for (const auto& [e, c] : t) {
    Monomial m = e;
    m[0] += r_shift;
    if (m[0] < 0) throw Error("internal: negative r exponent in averaged function");
    p.add_term(m, c);
  }
  return p;
}

NuTerms from_poly(const Poly& p) {
  NuTerms t;
  for (const auto& [e, c] : p.terms()) t[e] = c;
  return t;
}

struct Interval {
  double a, b;
  bool plus;
};

std::vector<Interval> zones(double phi) {
  std::vector<Interval> z = {{0.0, phi, true}};
  if (phi < kTwoPi) z.push_back({phi, kTwoPi, false});
  return z;
}

double plain(int p, int q, const Interval& iv) {
  return iv.plus ? trig::trig_I(p, q, iv.b) : trig::trig_J(p, q, iv.a);
}

// Memo for the iterated kernels used while assembling one f2.
class KernelMemo {
 public:
  // int over the zone of cos^i sin^j (s) * y(s), where y is the first-order
  // solution component generated by cos^p sin^q with eigenvalue mu.
  double y1_kernel(int i, int j, int p, int q, double mu, const Interval& iv) {
    const auto key = std::make_tuple(i, j, p, q, mu, iv.plus);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    double v = 0.0;
    if (mu == 0.0) {
      v = trig::nested(i, j, p, q, iv.a, iv.b, 0.0);
      if (!iv.plus) v -= trig::trig_J(i, j, iv.a) * trig::trig_I(p, q, kTwoPi);
    } else {
      v = trig::double_exp_trig(i, j, p, q, mu, iv.a, iv.b);
      if (!iv.plus) v -= trig::exp_trig(mu, i, j, iv.a, iv.b) * trig::exp_trig(-mu, p, q, 0.0, kTwoPi);
    }
    memo_.emplace(key, v);
    return v;
  }

 private:
  std::map<std::tuple<int, int, int, int, double, bool>, double> memo_;
};

void accumulate_product(NuTerms& out, const TrigPoly& outer, const TrigPoly& inner, double mu,
                        const Interval& iv, int m, KernelMemo& memo) {
  for (const auto& [t1, c1] : outer.terms())
    for (const auto& [t2, c2] : inner.terms()) {
      const double k = memo.y1_kernel(t1.p, t1.q, t2.p, t2.q, mu, iv);
      if (k == 0.0) continue;
      out[add_keys(nu_key(t1, m), nu_key(t2, m))] += c1 * c2 * k;
    }
}

NuTerms multiply(const NuTerms& a, const NuTerms& b) {
  NuTerms out;
  for (const auto& [e1, c1] : a)
    for (const auto& [e2, c2] : b) out[add_keys(e1, e2)] += c1 * c2;
  return out;
}

// d g_{1l} / d z_w at z_nu.
NuTerms dg1_dtail(const FExpansion& F, const SystemSpec& s, int l, int w) {
  const double mu = s.mu[w - 1];
  NuTerms out;
  for (const Interval& iv : zones(s.phi)) {
    const int zi = iv.plus ? 0 : 1;
    const TrigPoly D = F.F1[zi][l].diff_z(w - 1).restrict_tail(s.m);
    const double scale = iv.plus ? 1.0 : std::exp(-kTwoPi * mu);
    for (const auto& [t, c] : D.terms())
      out[nu_key(t, s.m)] += c * scale * trig::exp_trig(mu, t.p, t.q, iv.a, iv.b);
  }
  return out;
}

}  // namespace

PolyVec build_f1(const SystemSpec& s) {
  const FExpansion F = build_F_expansion(s);
  PolyVec out;
  for (int l = 0; l <= s.m; ++l) {
    NuTerms acc;
    for (const Interval& iv : zones(s.phi)) {
      const TrigPoly row = F.F1[iv.plus ? 0 : 1][l].restrict_tail(s.m);
      for (const auto& [t, c] : row.terms()) acc[nu_key(t, s.m)] += c * plain(t.p, t.q, iv);
    }
    out.push_back(to_poly(acc, s.m + 1, 0));
  }
  return out;
}

std::vector<Poly> build_gamma(const SystemSpec& s, const AvgOptions& opt) {
  const FExpansion F = build_F_expansion(s);
  std::vector<Poly> out;
  for (int w = s.m + 1; w <= s.d; ++w) {
    const double mu = s.mu[w - 1];
    const double delta = 1.0 - std::exp(-kTwoPi * mu);
    if (std::abs(delta) < 1e-12)
      throw DegenerateEigenvalue("gamma: |1 - exp(-2 pi mu_" + std::to_string(w) + ")| < 1e-12");
    NuTerms acc;
    for (const Interval& iv : zones(s.phi)) {
      const TrigPoly row = F.F1[iv.plus ? 0 : 1][w].restrict_tail(s.m);
      for (const auto& [t, c] : row.terms()) {
        double k = 0.0;
        if (opt.gamma == GammaConvention::derived)
          k = trig::exp_trig(-mu, t.p, t.q, iv.a, iv.b);
        else
          k = (iv.plus ? 1.0 : std::exp(-kTwoPi)) * trig::exp_trig(-1.0, t.p, t.q, iv.a, iv.b);
        acc[nu_key(t, s.m)] += -c * k / delta;
      }
    }
    out.push_back(to_poly(acc, s.m + 1, 0));
  }
  return out;
}

PolyVec build_f2(const SystemSpec& s, const AvgOptions& opt) {
  const PolyVec f1 = build_f1(s);
  double worst = 0.0;
  for (const auto& p : f1) worst = std::max(worst, p.max_abs_coeff());
  if (worst > opt.f1_zero_tol)
    throw F1NotZero("build_f2: f1 is not identically zero (largest coefficient " + std::to_string(worst) + ")",
                    worst);

  const FExpansion F = build_F_expansion(s);
  const std::vector<Poly> gamma = build_gamma(s, opt);
  KernelMemo memo;
  PolyVec out;
  for (int l = 0; l <= s.m; ++l) {
    NuTerms acc;
    for (const Interval& iv : zones(s.phi)) {
      const int zi = iv.plus ? 0 : 1;
      const TrigPoly f2row = F.F2[zi][l].restrict_tail(s.m);
      for (const auto& [t, c] : f2row.terms())
        acc[nu_key(t, s.m)] += c * plain(t.p, t.q, iv);
      for (int k = 0; k <= s.d; ++k) {
        const TrigPoly outer = (k == 0 ? F.F1[zi][l].diff_r() : F.F1[zi][l].diff_z(k - 1)).restrict_tail(s.m);
        if (outer.is_zero()) continue;
        const TrigPoly inner = F.F1[zi][k].restrict_tail(s.m);
        const double mu = k == 0 ? 0.0 : s.mu[k - 1];
        accumulate_product(acc, outer, inner, mu, iv, s.m, memo);
      }
    }
    for (int w = s.m + 1; w <= s.d; ++w)
      for (const auto& [e, c] : multiply(dg1_dtail(F, s, l, w), from_poly(gamma[w - s.m - 1]))) acc[e] += c;
    for (auto& [e, c] : acc) c *= 2.0;
    out.push_back(to_poly(acc, s.m + 1, 1));
  }
  return out;
}

Eigen::VectorXd eval_f2(const PolyVec& rf2, const std::vector<double>& nu) {
  Eigen::VectorXd v = eval_vec(rf2, nu);
  return v / nu.at(0);
}

std::vector<LinearConstraint> f1_kernel_constraints(const SystemSpec& s) {
  std::map<std::pair<int, Monomial>, LinearConstraint> rows;
  SystemSpec unit = SystemSpec::zero(s.n, s.m, s.d, s.phi, s.mu);
  for (const CoefRef& ref : all_coefficients(s, 1)) {
    set_coef(unit, ref, 1.0);
    const PolyVec f1 = build_f1(unit);
    set_coef(unit, ref, 0.0);
    for (int l = 0; l <= s.m; ++l)
      for (const auto& [e, c] : f1[l].terms()) {
        if (std::abs(c) < 1e-14) continue;
        auto& row = rows[{l, e}];
        row.component = l;
        row.monomial = e;
        row.terms.emplace_back(ref, c);
      }
  }
  std::vector<LinearConstraint> out;
  for (auto& [k, v] : rows) out.push_back(std::move(v));
  return out;
}

SystemSpec project_to_kernel(const SystemSpec& s, const std::set<CoefRef>& pinned) {
  const auto cons = f1_kernel_constraints(s);
  if (cons.empty()) return s;
  std::map<CoefRef, int> col;
  for (const auto& c : cons)
    for (const auto& [ref, w] : c.terms)
      if (!pinned.count(ref)) col.emplace(ref, 0);
  int idx = 0;
  for (auto& [ref, k] : col) k = idx++;

  const auto rows = static_cast<Eigen::Index>(cons.size());
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(rows, idx);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
  double scale = 1.0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (const auto& [ref, w] : cons[r].terms) {
      const double v = get_coef(s, ref);
      rhs[r] -= w * v;
      scale = std::max(scale, std::abs(v));
      auto it = col.find(ref);
      if (it != col.end()) C(r, it->second) = w;
    }
  const Eigen::VectorXd delta = idx > 0 ? Eigen::VectorXd(C.completeOrthogonalDecomposition().solve(rhs))
                                        : Eigen::VectorXd::Zero(0);
  const double resid = idx > 0 ? (C * delta - rhs).cwiseAbs().maxCoeff() : rhs.cwiseAbs().maxCoeff();
  if (resid > 1e-10 * scale)
    throw InfeasibleConstraint("project_to_kernel: constraints cannot be met with the pinned coefficients "
                               "(residual " + std::to_string(resid) + ")");
  SystemSpec out = s;
  for (const auto& [ref, k] : col) set_coef(out, ref, get_coef(s, ref) + delta[k]);
  return out;
}

AveragedSystem average(const SystemSpec& s, bool with_f2, const AvgOptions& opt) {
  AveragedSystem a;
  a.f1 = build_f1(s);
  a.gamma = build_gamma(s, opt);
  a.kernel_constraints = f1_kernel_constraints(s);
  if (with_f2) a.rf2 = build_f2(s, opt);
  return a;
}

std::vector<double> lift_to_z(const SystemSpec& s, const std::vector<double>& nu) {
  if (static_cast<int>(nu.size()) != s.m + 1) throw DimensionMismatch("lift_to_z: nu must have m+1 entries");
  std::vector<double> z(nu);
  z.resize(static_cast<std::size_t>(s.d + 1), 0.0);
  return z;
}

}  // namespace avgcycles
