#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace avgcycles {

using Monomial = std::vector<int>;

/// Sparse real polynomial in nvars variables, ordered (r, z_1, ..., z_m).
class Poly {
 public:
  static constexpr double kPrune = 1e-15;

  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) {}

  static Poly constant(int nvars, double c);
  static Poly variable(int nvars, int index);
  static Poly monomial(const Monomial& e, double c);

  int nvars() const { return nvars_; }
  const std::map<Monomial, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;  // -1 for the zero polynomial
  int degree_in(int var) const;
  int min_degree_in(int var) const;
  double coeff(const Monomial& e) const;
  double max_abs_coeff() const;

  /// Adds c to the coefficient of e, pruning if the result is negligible.
  void add_term(const Monomial& e, double c);
  /// Drops every coefficient with |c| <= tol.
  Poly pruned(double tol) const;

  double eval(const std::vector<double>& point) const;
  Poly diff(int var) const;
  /// Divides by var^k; throws if some term has lower degree in var.
  Poly divide_by_var(int var, int k) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(double c) const;
  Poly& operator+=(const Poly& o);

  /// Graded-lex pretty print, e.g. "2*r^2*z1 - 0.5".
  std::string to_string(int precision = 12) const;

 private:
  void require_same(const Poly& o) const;

  int nvars_ = 0;
  std::map<Monomial, double> terms_;
};

using PolyVec = std::vector<Poly>;

double poly_eval(const Poly& p, const std::vector<double>& point);
Poly poly_add(const Poly& p, const Poly& q);
Poly poly_mul(const Poly& p, const Poly& q);
Poly poly_scale(const Poly& p, double c);
Poly poly_diff(const Poly& p, int var);

struct JacobianResult {
  Eigen::MatrixXd matrix;
  double det = 0.0;
};

JacobianResult jacobian(const PolyVec& F, const std::vector<double>& point);
Eigen::VectorXd eval_vec(const PolyVec& F, const std::vector<double>& point);
long long bezout_bound(const PolyVec& F);
std::string variable_name(int index);

}  // namespace avgcycles
