#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "avgcycles/polyalg.hpp"

namespace avgcycles {

struct SearchBox {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<int> grid;  // seeds per axis; empty means 15 everywhere
  double r_min = 1e-6;

  static SearchBox uniform(std::vector<double> lo, std::vector<double> hi, int seeds = 15);
};

struct ZeroRecord {
  std::vector<double> nu;
  double residual = 0.0;
  double jac_det = 0.0;
  bool simple = false;
};

struct RootfindOptions {
  double residual_tol = 1e-10;
  double dedup_radius = 1e-6;
  int max_iter = 100;
  int max_halvings = 30;
};

struct ZeroSearch {
  std::vector<ZeroRecord> zeros;  // inside the box, sorted lexicographically
  int seeds = 0;
  int seeds_hit_r_min = 0;  // reported, not an error
  int seeds_diverged = 0;
};

/// Damped Newton from every grid seed, deduplicated. Throws RootfindError if
/// more isolated zeros than the Bezout bound are found.
ZeroSearch find_simple_zeros(const PolyVec& F, const SearchBox& box, const RootfindOptions& opt = {});

/// Scale-aware simplicity threshold 1e-8 * (1 + product of component degrees).
double simplicity_threshold(const PolyVec& F);

struct CountReport {
  int found = 0;  // simple zeros
  int expected = 0;
  long long bezout = 0;
  bool pass = false;
  std::string diagnostic;
};

CountReport certify_count(const PolyVec& F, const SearchBox& box, int expected, const RootfindOptions& opt = {});

void write_zero_csv(std::ostream& os, const std::vector<ZeroRecord>& zeros);

}  // namespace avgcycles
