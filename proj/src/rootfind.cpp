#include "avgcycles/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "avgcycles/errors.hpp"

namespace avgcycles {

SearchBox SearchBox::uniform(std::vector<double> lo, std::vector<double> hi, int seeds) {
  SearchBox b;
  b.grid.assign(lo.size(), seeds);
  b.lo = std::move(lo);
  b.hi = std::move(hi);
  return b;
}

double simplicity_threshold(const PolyVec& F) {
  double prod = 1.0;
  for (const auto& p : F) prod *= std::max(0, p.total_degree());
  return 1e-8 * (1.0 + prod);
}

namespace {

double max_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

struct NewtonResult {
  std::vector<double> x;
  bool converged = false;
  bool hit_r_min = false;
};

NewtonResult newton(const PolyVec& F, const std::vector<std::vector<Poly>>& J, std::vector<double> x,
                    const SearchBox& box, const RootfindOptions& opt) {
  const auto n = static_cast<Eigen::Index>(F.size());
  Eigen::VectorXd f = eval_vec(F, x);
  double res = max_norm(f);
  for (int it = 0; it < opt.max_iter; ++it) {
    if (res < 1e-3 * opt.residual_tol) break;
    Eigen::MatrixXd M(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < n; ++k) M(i, k) = J[i][k].eval(x);
    const Eigen::VectorXd step = M.colPivHouseholderQr().solve(-f);
    if (!step.allFinite()) break;
    double lambda = 1.0;
    bool improved = false;
    for (int h = 0; h <= opt.max_halvings; ++h, lambda *= 0.5) {
      std::vector<double> y = x;
      for (Eigen::Index k = 0; k < n; ++k) y[k] += lambda * step[k];
      const Eigen::VectorXd fy = eval_vec(F, y);
      const double ry = max_norm(fy);
      if (std::isfinite(ry) && ry < res) {
        x = std::move(y);
        f = fy;
        res = ry;
        improved = true;
        break;
      }
    }
    if (!improved) break;
    if (x[0] <= box.r_min) return {x, false, true};
  }
  return {x, res < opt.residual_tol, false};
}

}  // namespace

ZeroSearch find_simple_zeros(const PolyVec& F, const SearchBox& box, const RootfindOptions& opt) {
  const auto n = F.size();
  if (n == 0 || F.front().nvars() != static_cast<int>(n)) throw DimensionMismatch("find_simple_zeros: system not square");
  if (box.lo.size() != n || box.hi.size() != n) throw DimensionMismatch("find_simple_zeros: box dimension");
  for (std::size_t k = 0; k < n; ++k)
    if (!(box.lo[k] < box.hi[k])) throw InvalidArgument("find_simple_zeros: empty box");
  if (box.lo[0] < box.r_min) throw InvalidArgument("find_simple_zeros: box must satisfy lo[0] >= r_min");

  std::vector<std::vector<Poly>> J(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) J[i].push_back(F[i].diff(static_cast<int>(k)));

  std::vector<int> grid = box.grid.empty() ? std::vector<int>(n, 15) : box.grid;
  ZeroSearch out;
  std::vector<int> idx(n, 0);
  std::vector<std::vector<double>> found;
  const double thresh = simplicity_threshold(F);
  while (true) {
    std::vector<double> seed(n);
    for (std::size_t k = 0; k < n; ++k) {
      // interior cell centres, so seeds never sit on the box boundary
      seed[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * (idx[k] + 0.5) / grid[k];
    }
    ++out.seeds;
    const NewtonResult nr = newton(F, J, seed, box, opt);
    if (nr.hit_r_min) {
      ++out.seeds_hit_r_min;
    } else if (!nr.converged) {
      ++out.seeds_diverged;
    } else {
      bool inside = nr.x[0] > box.r_min;
      for (std::size_t k = 0; k < n; ++k) inside = inside && nr.x[k] >= box.lo[k] && nr.x[k] <= box.hi[k];
      bool dup = false;
      for (const auto& y : found) {
        double dist = 0.0;
        for (std::size_t k = 0; k < n; ++k) dist = std::max(dist, std::abs(y[k] - nr.x[k]));
        dup = dup || dist < opt.dedup_radius;
      }
      if (inside && !dup) found.push_back(nr.x);
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == grid[k]) idx[k++] = 0;
    if (k == n) break;
  }
  std::sort(found.begin(), found.end());
  for (const auto& x : found) {
    ZeroRecord z;
    z.nu = x;
    z.residual = max_norm(eval_vec(F, x));
    z.jac_det = jacobian(F, x).det;
    z.simple = std::abs(z.jac_det) > thresh && z.residual < opt.residual_tol;
    out.zeros.push_back(z);
  }
  const long long bez = bezout_bound(F);
  long long simple = 0;
  for (const auto& z : out.zeros) simple += z.simple;
  if (simple > bez)
    throw RootfindError("find_simple_zeros: " + std::to_string(simple) + " simple zeros exceed the Bezout bound " +
                        std::to_string(bez));
  return out;
}

CountReport certify_count(const PolyVec& F, const SearchBox& box, int expected, const RootfindOptions& opt) {
  CountReport rep;
  rep.expected = expected;
  rep.bezout = bezout_bound(F);
  bool degenerate = true;
  for (const auto& p : F) degenerate = degenerate && p.is_zero();
  if (degenerate) {
    rep.diagnostic = "degenerate: identically zero system";
    return rep;
  }
  const ZeroSearch zs = find_simple_zeros(F, box, opt);
  for (const auto& z : zs.zeros) rep.found += z.simple;
  rep.pass = rep.found >= expected && rep.found <= rep.bezout;
  if (!rep.pass)
    rep.diagnostic = "found " + std::to_string(rep.found) + ", expected " + std::to_string(expected) + ", bezout " +
                     std::to_string(rep.bezout);
  return rep;
}

void write_zero_csv(std::ostream& os, const std::vector<ZeroRecord>& zeros) {
  const std::size_t n = zeros.empty() ? 0 : zeros.front().nu.size();
  for (std::size_t k = 0; k < n; ++k) os << variable_name(static_cast<int>(k)) << ",";
  os << "residual,jac_det,simple\n";
  os.precision(17);
  for (const auto& z : zeros) {
    for (double v : z.nu) os << v << ",";
    os << z.residual << "," << z.jac_det << "," << (z.simple ? 1 : 0) << "\n";
  }
}

}  // namespace avgcycles
