#pragma once

// Cylindrical-coordinate form of the perturbation fields. A TrigPoly is a sum
// of terms c * r^a * z^k * cos^p(theta) * sin^q(theta); the r exponent may be
// -1 (the 1/r of the angular component).

#include <map>
#include <vector>

#include "avgcycles/system.hpp"

namespace avgcycles {

struct TrigMono {
  int r = 0;
  std::vector<int> z;  // length d
  int p = 0;           // cos exponent
  int q = 0;           // sin exponent
  auto operator<=>(const TrigMono&) const = default;
};

class TrigPoly {
 public:
  TrigPoly() = default;
  explicit TrigPoly(int d) : d_(d) {}

  int d() const { return d_; }
  const std::map<TrigMono, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const TrigMono& t, double c);
  TrigPoly operator+(const TrigPoly& o) const;
  TrigPoly operator-(const TrigPoly& o) const;
  TrigPoly operator*(const TrigPoly& o) const;
  TrigPoly operator*(double c) const;

  TrigPoly diff_r() const;
  TrigPoly diff_z(int k) const;  // k in 0..d-1
  /// Terms with z_{m+1..d} exponents all zero (restriction to the tail-free manifold).
  TrigPoly restrict_tail(int m) const;
  /// Multiplies by r^dr cos^dp sin^dq.
  TrigPoly shifted(int dr, int dp, int dq) const;

  double eval(double theta, double r, const std::vector<double>& z) const;

 private:
  int d_ = 0;
  std::map<TrigMono, double> terms_;
};

/// X(r cos, r sin, z) for a coefficient table, as a TrigPoly.
TrigPoly substitute_polar(const CoefficientTable& t, int d);

/// Rows of the cylindrical field for one order and zone:
/// row 0 = angular part (carries 1/r), row 1 = radial, row 1 + l = z_l.
struct CylField {
  std::vector<TrigPoly> rows;
};

CylField build_cylindrical(const FieldTables& t, int d);

/// Cylindrical fields of both orders and both zones.
struct CylFields {
  std::array<CylField, 2> A;  // first order, indexed by zone
  std::array<CylField, 2> B;  // second order
};

CylFields build_cylindrical_fields(const SystemSpec& s);

/// Expansion of the theta-time right-hand side. F1/F2 rows are indexed by state
/// k = 0 (r), 1..d (z_k).
struct FExpansion {
  std::array<std::vector<TrigPoly>, 2> F1;
  std::array<std::vector<TrigPoly>, 2> F2;
};

FExpansion build_F_expansion(const SystemSpec& s);

}  // namespace avgcycles
