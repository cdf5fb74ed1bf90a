#include "avgcycles/polyalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "avgcycles/errors.hpp"

namespace avgcycles {

Poly Poly::constant(int nvars, double c) {
  Poly p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Poly Poly::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw InvalidArgument("Poly::variable: index out of range");
  Monomial e(nvars, 0);
  e[index] = 1;
  return monomial(e, 1.0);
}

Poly Poly::monomial(const Monomial& e, double c) {
  Poly p(static_cast<int>(e.size()));
  for (int v : e)
    if (v < 0) throw InvalidArgument("Poly::monomial: negative exponent");
  p.add_term(e, c);
  return p;
}

int Poly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int v : e) s += v;
    d = std::max(d, s);
  }
  return d;
}

int Poly::degree_in(int var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
  return d;
}

int Poly::min_degree_in(int var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = d < 0 ? e.at(var) : std::min(d, e.at(var));
  return d;
}

double Poly::coeff(const Monomial& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

double Poly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void Poly::add_term(const Monomial& e, double c) {
  if (static_cast<int>(e.size()) != nvars_) throw DimensionMismatch("Poly::add_term: monomial length");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kPrune) terms_.erase(it);
}

Poly Poly::pruned(double tol) const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_)
    if (std::abs(c) > tol) out.terms_.emplace(e, c);
  return out;
}

void Poly::require_same(const Poly& o) const {
  if (o.nvars_ != nvars_) throw DimensionMismatch("Poly: variable count mismatch");
}

double Poly::eval(const std::vector<double>& point) const {
  if (static_cast<int>(point.size()) != nvars_) throw DimensionMismatch("Poly::eval: point length");
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (int k = 0; k < nvars_; ++k)
      for (int n = 0; n < e[k]; ++n) t *= point[k];
    acc += t;
  }
  return acc;
}

Poly Poly::diff(int var) const {
  if (var < 0 || var >= nvars_) throw InvalidArgument("Poly::diff: index out of range");
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Monomial f = e;
    f[var] -= 1;
    out.add_term(f, c * e[var]);
  }
  return out;
}

Poly Poly::divide_by_var(int var, int k) const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e.at(var) < k) throw InvalidArgument("Poly::divide_by_var: not divisible");
    Monomial f = e;
    f[var] -= k;
    out.terms_.emplace(f, c);
  }
  return out;
}

Poly Poly::operator+(const Poly& o) const {
  Poly out = *this;
  out += o;
  return out;
}

Poly& Poly::operator+=(const Poly& o) {
  require_same(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly Poly::operator-(const Poly& o) const { return *this + o * -1.0; }

Poly Poly::operator*(const Poly& o) const {
  require_same(o);
  Poly out(nvars_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Monomial f(nvars_);
      for (int k = 0; k < nvars_; ++k) f[k] = e1[k] + e2[k];
      out.add_term(f, c1 * c2);
    }
  return out;
}

Poly Poly::operator*(double c) const {
  Poly out(nvars_);
  for (const auto& [e, v] : terms_) out.add_term(e, v * c);
  return out;
}

std::string variable_name(int index) { return index == 0 ? "r" : "z" + std::to_string(index); }

std::string Poly::to_string(int precision) const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Monomial, double>> sorted(terms_.begin(), terms_.end());
  auto deg = [](const Monomial& e) {
    int s = 0;
    for (int v : e) s += v;
    return s;
  };
  std::stable_sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) {
    if (deg(a.first) != deg(b.first)) return deg(a.first) > deg(b.first);
    return a.first > b.first;
  });
  std::ostringstream os;
  os.precision(precision);
  bool first = true;
  for (const auto& [e, c] : sorted) {
    const bool neg = c < 0;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (std::abs(c) != 1.0 || deg(e) == 0) {
      os << std::abs(c);
      wrote = true;
    }
    for (int k = 0; k < nvars_; ++k) {
      if (e[k] == 0) continue;
      if (wrote) os << "*";
      os << variable_name(k);
      if (e[k] > 1) os << "^" << e[k];
      wrote = true;
    }
  }
  return os.str();
}

double poly_eval(const Poly& p, const std::vector<double>& point) { return p.eval(point); }
Poly poly_add(const Poly& p, const Poly& q) { return p + q; }
Poly poly_mul(const Poly& p, const Poly& q) { return p * q; }
Poly poly_scale(const Poly& p, double c) { return p * c; }
Poly poly_diff(const Poly& p, int var) { return p.diff(var); }

Eigen::VectorXd eval_vec(const PolyVec& F, const std::vector<double>& point) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(F.size()));
  for (std::size_t k = 0; k < F.size(); ++k) v[static_cast<Eigen::Index>(k)] = F[k].eval(point);
  return v;
}

JacobianResult jacobian(const PolyVec& F, const std::vector<double>& point) {
  const auto n = static_cast<Eigen::Index>(F.size());
  if (n == 0 || F.front().nvars() != n) throw DimensionMismatch("jacobian: system is not square");
  JacobianResult out;
  out.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (F[i].nvars() != n) throw DimensionMismatch("jacobian: inconsistent variable count");
    for (Eigen::Index k = 0; k < n; ++k) out.matrix(i, k) = F[i].diff(static_cast<int>(k)).eval(point);
  }
  out.det = out.matrix.fullPivLu().determinant();
  return out;
}

long long bezout_bound(const PolyVec& F) {
  if (F.empty() || F.front().nvars() != static_cast<int>(F.size()))
    throw DimensionMismatch("bezout_bound: system is not square");
  long long b = 1;
  for (const auto& p : F) {
    const int d = p.total_degree();
    if (d <= 0) return 0;
    b *= d;
  }
  return b;
}

}  // namespace avgcycles
