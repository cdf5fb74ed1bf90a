#include "avgcycles/trigkernel.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <unordered_map>

#include "avgcycles/errors.hpp"

namespace avgcycles::trig {
namespace {

using cplx = std::complex<double>;

struct CacheKey {
  int p;
  int q;
  std::uint64_t phi_bits;
  bool operator==(const CacheKey&) const = default;
};

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& k) const noexcept {
    std::size_t h = std::hash<std::uint64_t>{}(k.phi_bits);
    h ^= (static_cast<std::size_t>(k.p) * 0x9E3779B97F4A7C15ull) + (h << 6) + (h >> 2);
    h ^= (static_cast<std::size_t>(k.q) * 0xC2B2AE3D27D4EB4Full) + (h << 6) + (h >> 2);
    return h;
  }
};

class TrigCache {
 public:
  bool find(const CacheKey& k, double& out) const {
    std::shared_lock lock(mutex_);
    auto it = map_.find(k);
    if (it == map_.end()) return false;
    out = it->second;
    return true;
  }
  void store(const CacheKey& k, double v) {
    std::unique_lock lock(mutex_);
    map_.emplace(k, v);
  }
  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
  }
  void clear() {
    std::unique_lock lock(mutex_);
    map_.clear();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<CacheKey, double, CacheKeyHash> map_;
};

TrigCache& cache() {
  static TrigCache c;
  return c;
}

void check_exponents(int p, int q) {
  if (p < 0 || q < 0)
    throw InvalidArgument("trig kernel: negative exponent (p=" + std::to_string(p) +
                          ", q=" + std::to_string(q) + ")");
}

void check_phi(double phi) {
  if (!(phi > 0.0) || phi > kTwoPi * (1.0 + 1e-15) || !std::isfinite(phi))
    throw InvalidArgument("trig kernel: phi must lie in (0, 2pi], got " + std::to_string(phi));
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

double recurrence(int p, int q, double phi, double c, double s) {
  const CacheKey key{p, q, std::bit_cast<std::uint64_t>(phi)};
  double v = 0.0;
  if (cache().find(key, v)) return v;

  if (p >= 2) {
    v = ipow(c, p - 1) * ipow(s, q + 1) / (p + q) +
        static_cast<double>(p - 1) / (p + q) * recurrence(p - 2, q, phi, c, s);
  } else if (q >= 2) {
    v = -ipow(c, p + 1) * ipow(s, q - 1) / (p + q) +
        static_cast<double>(q - 1) / (p + q) * recurrence(p, q - 2, phi, c, s);
  } else if (p == 0 && q == 0) {
    v = phi;
  } else if (p == 1 && q == 0) {
    v = s;
  } else if (p == 0 && q == 1) {
    v = 1.0 - c;
  } else {
    v = 0.5 * s * s;
  }
  cache().store(key, v);
  return v;
}

// Real part of sum_k coeff_k * int_a^b s^n e^{(mu + i k) s} ds.
double harmonic_integral(const std::vector<cplx>& coeff, int n, double mu, double a, double b) {
  const int half = static_cast<int>(coeff.size() / 2);
  cplx acc = 0.0;
  for (int k = -half; k <= half; ++k) {
    const cplx c = coeff[k + half];
    if (c == 0.0) continue;
    acc += c * power_exp_integral(n, cplx(mu, k), a, b);
  }
  return acc.real();
}

double plain_integral(int p, int q, double a, double b) {
  if (a == 0.0 && b > 0.0 && b <= kTwoPi) return trig_I(p, q, b);
  if (b == kTwoPi && a > 0.0 && a <= kTwoPi) return trig_J(p, q, a);
  return harmonic_integral(harmonics(p, q), 0, 0.0, a, b);
}

}  // namespace

std::vector<cplx> harmonics(int p, int q) {
  check_exponents(p, q);
  const int n = p + q;
  std::vector<cplx> out(2 * n + 1, 0.0);
  // cos^p = 2^-p sum_a C(p,a) e^{i(2a-p)s};  sin^q = (2i)^-q sum_b C(q,b) (-1)^{q-b} e^{i(2b-q)s}
  std::vector<double> cp(p + 1), cq(q + 1);
  cp[0] = 1.0;
  for (int a = 1; a <= p; ++a) cp[a] = cp[a - 1] * (p - a + 1) / a;
  cq[0] = 1.0;
  for (int b = 1; b <= q; ++b) cq[b] = cq[b - 1] * (q - b + 1) / b;
  const cplx scale = std::pow(0.5, n) * std::pow(cplx(0.0, -1.0), q);
  for (int a = 0; a <= p; ++a) {
    for (int b = 0; b <= q; ++b) {
      const int k = (2 * a - p) + (2 * b - q);
      const double sign = ((q - b) % 2 == 0) ? 1.0 : -1.0;
      out[k + n] += scale * (cp[a] * cq[b] * sign);
    }
  }
  return out;
}

cplx power_exp_integral(int n, cplx z, double a, double b) {
  if (n < 0) throw InvalidArgument("power_exp_integral: negative power");
  if (z == 0.0) return (std::pow(b, n + 1) - std::pow(a, n + 1)) / static_cast<double>(n + 1);
  const double len = std::max(std::abs(a), std::abs(b));
  if (std::abs(z) * len < 1.0) {
    // Taylor series of e^{zs}; |z s| < 1 so terms decay like 1/k!.
    cplx acc = 0.0;
    cplx zk = 1.0;
    double fact = 1.0;
    for (int k = 0; k < 60; ++k) {
      const int e = n + k + 1;
      const cplx term = zk / fact * ((std::pow(b, e) - std::pow(a, e)) / e);
      acc += term;
      if (std::abs(term) <= 1e-18 * std::abs(acc) && k > 2) break;
      zk *= z;
      fact *= (k + 1);
    }
    return acc;
  }
  const cplx eb = std::exp(z * b);
  const cplx ea = std::exp(z * a);
  cplx val = (eb - ea) / z;
  double bn = 1.0, an = 1.0;
  for (int k = 1; k <= n; ++k) {
    bn *= b;
    an *= a;
    val = (bn * eb - an * ea) / z - static_cast<double>(k) / z * val;
  }
  return val;
}

double trig_I(const TrigKey& key) {
  check_exponents(key.p, key.q);
  check_phi(key.phi);
  // Exact endpoint values at multiples of pi/2 keep the vanishing cases exactly zero.
  double c = std::cos(key.phi), s = std::sin(key.phi);
  if (key.phi == kPi / 2) c = 0.0, s = 1.0;
  if (key.phi == kPi) c = -1.0, s = 0.0;
  if (key.phi == 1.5 * kPi) c = 0.0, s = -1.0;
  if (key.phi == kTwoPi) c = 1.0, s = 0.0;
  return recurrence(key.p, key.q, key.phi, c, s);
}

double trig_J(const TrigKey& key) {
  check_exponents(key.p, key.q);
  check_phi(key.phi);
  if (key.phi == kTwoPi) return 0.0;
  return trig_I(key.p, key.q, kTwoPi) - trig_I(key.p, key.q, key.phi);
}

double nested(int i, int j, int p, int q, double a, double b, double base) {
  check_exponents(i, j);
  check_exponents(p, q);
  if (a > b) throw InvalidArgument("nested: a > b");
  if (a == b) return 0.0;
  const auto outer = harmonics(i, j);
  const auto inner = harmonics(p, q);
  const int no = i + j;
  const int ni = p + q;
  // inner(s) = c_0 (s - base) + sum_{k != 0} c_k (e^{iks} - e^{ik base}) / (ik)
  cplx acc = 0.0;
  for (int l = -no; l <= no; ++l) {
    const cplx d = outer[l + no];
    if (d == 0.0) continue;
    const cplx el = power_exp_integral(0, cplx(0.0, l), a, b);
    const cplx c0 = inner[ni];
    if (c0 != 0.0) acc += d * c0 * (power_exp_integral(1, cplx(0.0, l), a, b) - base * el);
    for (int k = -ni; k <= ni; ++k) {
      if (k == 0) continue;
      const cplx c = inner[k + ni];
      if (c == 0.0) continue;
      const cplx ik(0.0, k);
      acc += d * c / ik *
             (power_exp_integral(0, cplx(0.0, l + k), a, b) - std::exp(ik * base) * el);
    }
  }
  return acc.real();
}

double nested_I(int i, int j, int p, int q, double phi) {
  check_phi(phi);
  return nested(i, j, p, q, 0.0, phi, 0.0);
}

double nested_J(int i, int j, int p, int q, double phi) {
  check_phi(phi);
  return nested(i, j, p, q, phi, kTwoPi, 0.0);
}

double exp_trig(const ExpTrigKey& key) {
  check_exponents(key.p, key.q);
  if (!std::isfinite(key.mu)) throw InvalidArgument("exp_trig: mu must be finite");
  if (key.a > key.b) throw InvalidArgument("exp_trig: a > b");
  if (key.a == key.b) return 0.0;
  if (std::abs(key.mu) < kMuSeriesThreshold) {
    const double base = plain_integral(key.p, key.q, key.a, key.b);
    if (key.mu == 0.0) return base;
    return base + key.mu * harmonic_integral(harmonics(key.p, key.q), 1, 0.0, key.a, key.b);
  }
  return harmonic_integral(harmonics(key.p, key.q), 0, key.mu, key.a, key.b);
}

double double_exp_trig(int i, int j, int p, int q, double mu, double a, double b) {
  check_exponents(i, j);
  check_exponents(p, q);
  if (!std::isfinite(mu)) throw InvalidArgument("double_exp_trig: mu must be finite");
  if (a > b) throw InvalidArgument("double_exp_trig: a > b");
  if (a == b) return 0.0;
  const auto outer = harmonics(i, j);
  const auto inner = harmonics(p, q);
  const int no = i + j;
  const int ni = p + q;
  // inner(s) = sum_k c_k (e^{iks} - e^{mu s}) / (ik - mu); the k = 0 term is
  // (e^{mu s} - 1)/mu, expanded in mu when mu is small.
  constexpr double kSmallMu = 1e-3;
  cplx acc = 0.0;
  for (int l = -no; l <= no; ++l) {
    const cplx d = outer[l + no];
    if (d == 0.0) continue;
    const cplx emu = power_exp_integral(0, cplx(mu, l), a, b);
    for (int k = -ni; k <= ni; ++k) {
      const cplx c = inner[k + ni];
      if (c == 0.0) continue;
      if (k == 0 && std::abs(mu) < kSmallMu) {
        cplx series = 0.0;
        double mupow = 1.0;
        double fact = 1.0;
        for (int n = 1; n < 30; ++n) {
          fact *= n;
          const cplx term = mupow / fact * power_exp_integral(n, cplx(0.0, l), a, b);
          series += term;
          if (std::abs(term) <= 1e-18 * std::max(1.0, std::abs(series))) break;
          mupow *= mu;
        }
        acc += d * c * series;
        continue;
      }
      const cplx denom(-mu, k);
      acc += d * c / denom * (power_exp_integral(0, cplx(0.0, l + k), a, b) - emu);
    }
  }
  return acc.real();
}

std::size_t cache_size() { return cache().size(); }
void clear_cache() { cache().clear(); }

bool lemma_vanish_predicate(const LemmaCase& c) {
  const auto odd = [](int v) { return v % 2 != 0; };
  const auto even = [](int v) { return v % 2 == 0; };
  const bool at_pi = std::abs(c.phi - kPi) < 1e-14;
  const bool at_two_pi = std::abs(c.phi - kTwoPi) < 1e-14;
  if (at_two_pi && c.interval == Interval::second) return true;  // empty interval
  if (c.kind == Kind::plain) {
    if (at_pi) return odd(c.p);
    if (at_two_pi) return !(even(c.p) && even(c.q));
    return false;
  }
  if (at_pi) return odd(c.i) && odd(c.p);
  if (at_two_pi) {
    // Symmetry under s -> -s and s -> s + pi of the outer factor and of the
    // inner antiderivative; anything not forced to vanish is reported nonzero.
    const bool pq_even = even(c.p) && even(c.q);
    const bool ij_even = even(c.i) && even(c.j);
    bool may_survive = false;
    if (pq_even) {
      may_survive = ij_even || odd(c.j);
    } else {
      may_survive = (odd(c.q) && ij_even) ||
                    (odd(c.j + c.q) && even(c.i + c.j + c.p + c.q));
    }
    return !may_survive;
  }
  return false;
}

}  // namespace avgcycles::trig
