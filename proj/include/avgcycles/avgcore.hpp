#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "avgcycles/polyalg.hpp"
#include "avgcycles/system.hpp"

namespace avgcycles {

enum class GammaConvention {
  derived,      // weight e^{-mu_w s} on both zones (consistent with the displacement map)
  literal_text  // weights e^{-s} and e^{-2pi-s} exactly as printed in the source formula
};

struct AvgOptions {
  GammaConvention gamma = GammaConvention::derived;
  double f1_zero_tol = 1e-10;
};

/// One linear relation sum_k w_k * coef_k = 0; its vanishing for every
/// (component, monomial) pair is equivalent to f1 == 0.
struct LinearConstraint {
  int component = 0;
  Monomial monomial;
  std::vector<std::pair<CoefRef, double>> terms;
};

struct AveragedSystem {
  PolyVec f1;
  std::optional<PolyVec> rf2;  // component l holds r * f_{2l}
  std::vector<Poly> gamma;
  std::vector<LinearConstraint> kernel_constraints;
};

/// f_1 = (f_10, ..., f_1m) over nu = (r, z_1..z_m).
PolyVec build_f1(const SystemSpec& s);

/// gamma_w for w = m+1..d; empty when m = d.
std::vector<Poly> build_gamma(const SystemSpec& s, const AvgOptions& opt = {});

/// r * f_2 (one polynomial per component). Requires f1 == 0 to opt.f1_zero_tol,
/// otherwise throws F1NotZero.
PolyVec build_f2(const SystemSpec& s, const AvgOptions& opt = {});

/// Evaluates f_2 at nu from the r * f_2 polynomials.
Eigen::VectorXd eval_f2(const PolyVec& rf2, const std::vector<double>& nu);

std::vector<LinearConstraint> f1_kernel_constraints(const SystemSpec& s);

/// Nearest spec (least-squares change of the unpinned first-order coefficients)
/// satisfying every kernel constraint. Throws InfeasibleConstraint when the
/// pinned coefficients make that impossible.
SystemSpec project_to_kernel(const SystemSpec& s, const std::set<CoefRef>& pinned = {});

AveragedSystem average(const SystemSpec& s, bool with_f2, const AvgOptions& opt = {});

// Independent quadrature oracle. Fields are evaluated straight from the
// coefficient tables along the explicit unperturbed flow.

/// g_1(z) (order 1) or the eps^2 coefficient g_2(z) (order 2) of the
/// displacement, z in R^{d+1}.
Eigen::VectorXd numeric_g(const SystemSpec& s, int order, const std::vector<double>& z);

/// xi g_1 at z_nu.
Eigen::VectorXd numeric_f1(const SystemSpec& s, const std::vector<double>& nu);
/// -Delta^{-1} xi_perp g_1 at z_nu.
Eigen::VectorXd numeric_gamma(const SystemSpec& s, const std::vector<double>& nu);
/// 2 (d(xi g_1)/dv gamma + xi g_2) at z_nu.
Eigen::VectorXd numeric_f2(const SystemSpec& s, const std::vector<double>& nu);

/// z_nu = (nu, 0, ..., 0) in R^{d+1}.
std::vector<double> lift_to_z(const SystemSpec& s, const std::vector<double>& nu);

}  // namespace avgcycles
