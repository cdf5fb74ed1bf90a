#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "avgcycles/avgcore.hpp"
#include "avgcycles/rootfind.hpp"
#include "avgcycles/system.hpp"

namespace avgcycles {

/// A constructed example: the spec, the zeros it was built to have, and the
/// box they are certified in.
struct GeneratedCase {
  std::string generator;
  SystemSpec spec;
  int order = 1;  // averaging order whose zeros are targeted
  int expected = 0;
  long long upper_bound = 0;
  std::vector<std::vector<double>> targets;
  SearchBox box;
  std::uint64_t seed = 0;
  int attempts = 0;
  double delta = 0.0;     // gen_th4 only: perturbation scale of the realized spec
  PolyVec reference;      // gen_th4 only: the r P + Q system being realized
  double realization_error = 0.0;  // gen_th4 only: max |coef(r f2 / (2 delta) - reference)|
};

/// The averaged function a case is certified against (f1, or r*f2).
PolyVec certified_system(const GeneratedCase& c);

// Expected zero counts and upper bounds.
long long count_first_order(int n, int m, double phi);  // n^{m+1}, or the phi = 2pi forms
long long count_second_order(const std::string& generator, int n, int m);
long long bound_first_order(int n, int m);   // n^{m+1}
long long bound_second_order(int n, int m);  // (2n)^{m+1}

struct GeneratorOptions {
  std::uint64_t seed = 1;
  int d = -1;  // tail dimension; -1 means d = m
  int max_attempts = 12;
};

GeneratedCase gen_prop10(int n, int m, double phi, const GeneratorOptions& opt = {});
GeneratedCase gen_prop16(int n, int m, const GeneratorOptions& opt = {});
GeneratedCase gen_prop20(int n, int m, const GeneratorOptions& opt = {});
GeneratedCase gen_prop12(int n, int m, double phi, const GeneratorOptions& opt = {});
GeneratedCase gen_cor13(int n, double phi, const GeneratorOptions& opt = {});
GeneratedCase gen_prop18(int n, int m, const GeneratorOptions& opt = {});
GeneratedCase gen_prop21(int n, const GeneratorOptions& opt = {});

/// Realizes the zeros of r P_l + Q_l = 0 (l = 0..m, polynomials in (r, z_1..z_m))
/// as zeros of f_2, with r f_2 / (2 delta) = r P + Q + O(delta). The spec is a
/// fixed O(1) rotation layer plus delta times a layer found by a linear solve;
/// throws InfeasibleTarget when the target lies outside the reachable span.
GeneratedCase gen_th4(const PolyVec& P, const PolyVec& Q, double phi, double delta,
                      const GeneratorOptions& opt = {});

/// r in [0.05, 2.4], every z in [-2, 2]; seed density falls with m.
SearchBox default_search_box(int m);

/// Nodes of a Chebyshev grid on (lo, hi).
std::vector<double> chebyshev_nodes(int count, double lo, double hi);

}  // namespace avgcycles
