#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "avgcycles/system.hpp"

namespace avgcycles {

struct FlowOptions {
  int steps_per_2pi = 4000;  // fixed-step classical RK4; the return map is then smooth and deterministic
  double fd_step = 1e-5;     // central-difference step for the return-map Jacobian (scaled by max(1, |z_k|))
  int newton_max_iter = 30;
  double period_tol = 1e-10;
  double step_tol = 1e-12;   // Newton stops once |step| <= step_tol * (1 + |z|), even below period_tol
};

/// Right-hand side of the theta-time system in the state (r, z_1, ..., z_d).
class ThetaSystem {
 public:
  ThetaSystem(const SystemSpec& s, double eps);

  /// Throws FlowError(denominator_vanished) if 1 + eps A_1 + eps^2 B_1 <= 0.
  Eigen::VectorXd rhs(double theta, const Eigen::VectorXd& x, bool plus) const;
  const SystemSpec& spec() const { return spec_; }
  double eps() const { return eps_; }

 private:
  struct Term {
    double c;
    std::vector<int> e;
  };
  using Table = std::vector<Term>;
  double eval(const Table& t, const std::vector<std::vector<double>>& pw) const;

  SystemSpec spec_;
  double eps_;
  // [order][zone][component]
  std::vector<Table> tab_[2][2];
};

/// Integrates from theta0 to theta1 (theta0 <= theta1), splitting at every
/// switching angle phi + 2 pi k and 2 pi k.
Eigen::VectorXd integrate_theta(const ThetaSystem& sys, const Eigen::VectorXd& x0, double theta0, double theta1,
                                const FlowOptions& opt = {}, std::vector<std::pair<double, Eigen::VectorXd>>* dense = nullptr);

/// State at theta = 2 pi starting from z at theta = 0.
Eigen::VectorXd return_map(const ThetaSystem& sys, const Eigen::VectorXd& z, const FlowOptions& opt = {});

/// P(z) - z, integrated as a deviation from z so it stays accurate when tiny.
Eigen::VectorXd displacement(const ThetaSystem& sys, const Eigen::VectorXd& z, const FlowOptions& opt = {});

struct CycleRecord {
  double epsilon = 0.0;
  Eigen::VectorXd fixed_point;
  double period_residual = 0.0;
  Eigen::VectorXd predicted;
  double distance = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Newton on P(z) - z seeded at z_nu. Throws FlowError(no_convergence) when
/// the iteration fails; flow errors propagate.
CycleRecord refine_cycle(const SystemSpec& s, double eps, const std::vector<double>& nu, const FlowOptions& opt = {});

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

void write_cycle_csv(std::ostream& os, const std::vector<CycleRecord>& cycles);

}  // namespace avgcycles
