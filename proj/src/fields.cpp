#include "avgcycles/fields.hpp"

#include <cmath>

#include "avgcycles/errors.hpp"

namespace avgcycles {

void TrigPoly::add(const TrigMono& t, double c) {
  if (c == 0.0) return;
  if (static_cast<int>(t.z.size()) != d_) throw DimensionMismatch("TrigPoly: z exponent length");
  auto [it, inserted] = terms_.emplace(t, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const {
  TrigPoly out = *this;
  for (const auto& [t, c] : o.terms_) out.add(t, c);
  return out;
}

TrigPoly TrigPoly::operator-(const TrigPoly& o) const { return *this + o * -1.0; }

TrigPoly TrigPoly::operator*(const TrigPoly& o) const {
  if (o.d_ != d_) throw DimensionMismatch("TrigPoly: dimension mismatch");
  TrigPoly out(d_);
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : o.terms_) {
      TrigMono t{a.r + b.r, a.z, a.p + b.p, a.q + b.q};
      for (int k = 0; k < d_; ++k) t.z[k] += b.z[k];
      out.add(t, ca * cb);
    }
  return out;
}

TrigPoly TrigPoly::operator*(double c) const {
  TrigPoly out(d_);
  if (c == 0.0) return out;
  for (const auto& [t, v] : terms_) out.terms_.emplace(t, v * c);
  return out;
}

TrigPoly TrigPoly::diff_r() const {
  TrigPoly out(d_);
  for (const auto& [t, c] : terms_) {
    if (t.r == 0) continue;
    TrigMono u = t;
    u.r -= 1;
    out.add(u, c * t.r);
  }
  return out;
}

TrigPoly TrigPoly::diff_z(int k) const {
  TrigPoly out(d_);
  for (const auto& [t, c] : terms_) {
    if (t.z.at(k) == 0) continue;
    TrigMono u = t;
    u.z[k] -= 1;
    out.add(u, c * t.z[k]);
  }
  return out;
}

TrigPoly TrigPoly::restrict_tail(int m) const {
  TrigPoly out(d_);
  for (const auto& [t, c] : terms_) {
    bool keep = true;
    for (int k = m; k < d_; ++k) keep = keep && t.z[k] == 0;
    if (keep) out.terms_.emplace(t, c);
  }
  return out;
}

TrigPoly TrigPoly::shifted(int dr, int dp, int dq) const {
  TrigPoly out(d_);
  for (const auto& [t, c] : terms_) out.terms_.emplace(TrigMono{t.r + dr, t.z, t.p + dp, t.q + dq}, c);
  return out;
}

double TrigPoly::eval(double theta, double r, const std::vector<double>& z) const {
  const double cs = std::cos(theta), sn = std::sin(theta);
  double acc = 0.0;
  for (const auto& [t, c] : terms_) {
    double v = c * std::pow(r, t.r) * std::pow(cs, t.p) * std::pow(sn, t.q);
    for (int k = 0; k < d_; ++k) v *= std::pow(z[k], t.z[k]);
    acc += v;
  }
  return acc;
}

TrigPoly substitute_polar(const CoefficientTable& t, int d) {
  TrigPoly out(d);
  for (const auto& [e, c] : t.entries) {
    TrigMono m{e[0] + e[1], std::vector<int>(e.begin() + 2, e.end()), e[0], e[1]};
    out.add(m, c);
  }
  return out;
}

CylField build_cylindrical(const FieldTables& t, int d) {
  const TrigPoly X = substitute_polar(t.x, d);
  const TrigPoly Y = substitute_polar(t.y, d);
  CylField f;
  f.rows.reserve(static_cast<std::size_t>(d + 2));
  f.rows.push_back(Y.shifted(-1, 1, 0) - X.shifted(-1, 0, 1));
  f.rows.push_back(X.shifted(0, 1, 0) + Y.shifted(0, 0, 1));
  for (int l = 0; l < d; ++l) f.rows.push_back(substitute_polar(t.z[l], d));
  return f;
}

CylFields build_cylindrical_fields(const SystemSpec& s) {
  s.validate();
  CylFields out;
  for (Zone z : {Zone::plus, Zone::minus}) {
    out.A[zone_index(z)] = build_cylindrical(s.tables(1, z), s.d);
    out.B[zone_index(z)] = build_cylindrical(s.tables(2, z), s.d);
  }
  return out;
}

FExpansion build_F_expansion(const SystemSpec& s) {
  const CylFields cf = build_cylindrical_fields(s);
  FExpansion out;
  for (int zi = 0; zi < 2; ++zi) {
    const auto& A = cf.A[zi].rows;
    const auto& B = cf.B[zi].rows;
    auto& F1 = out.F1[zi];
    auto& F2 = out.F2[zi];
    // r' and z_l' for the zero-eigenvalue block
    for (int k = 0; k <= s.m; ++k) {
      F1.push_back(A[k + 1]);
      F2.push_back(B[k + 1] - A[0] * A[k + 1]);
    }
    for (int w = s.m + 1; w <= s.d; ++w) {
      const double mu = s.mu[w - 1];
      TrigPoly zw(s.d);
      std::vector<int> e(static_cast<std::size_t>(s.d), 0);
      e[w - 1] = 1;
      zw.add(TrigMono{0, e, 0, 0}, mu);  // mu * z_w
      F1.push_back(A[w + 1] - zw * A[0]);
      F2.push_back(B[w + 1] + zw * A[0] * A[0] - A[0] * A[w + 1] - zw * B[0]);
    }
  }
  return out;
}

}  // namespace avgcycles
