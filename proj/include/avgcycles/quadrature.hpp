#pragma once

#include <functional>

#include <Eigen/Dense>

namespace avgcycles {

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  int max_depth = 40;
};

/// Adaptive Gauss-Kronrod (7/15) integration of a vector-valued integrand.
/// Throws QuadratureFailure when the depth cap is reached before the tolerance.
Eigen::VectorXd integrate(const std::function<Eigen::VectorXd(double)>& f, double a, double b,
                          const QuadOptions& opt = {});

double integrate_scalar(const std::function<double(double)>& f, double a, double b,
                        const QuadOptions& opt = {});

}  // namespace avgcycles
