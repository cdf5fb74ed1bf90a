#pragma once

// Definite integrals of cos^p s sin^q s, optionally weighted by e^{mu s} or
// nested inside one another. Every averaged-function coefficient reduces to
// one of the kernels below.

#include <complex>
#include <vector>

namespace avgcycles::trig {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383280;

/// |mu| below this switches exp_trig to the mu = 0 kernels plus a first-order
/// series correction.
inline constexpr double kMuSeriesThreshold = 1e-8;

struct TrigKey {
  int p = 0;
  int q = 0;
  double phi = kTwoPi;
};

struct ExpTrigKey {
  double mu = 0.0;
  int p = 0;
  int q = 0;
  double a = 0.0;
  double b = 0.0;
};

/// int_0^phi cos^p s sin^q s ds, two-term reduction recurrence, memoized.
double trig_I(const TrigKey& key);
inline double trig_I(int p, int q, double phi) { return trig_I(TrigKey{p, q, phi}); }

/// int_phi^{2pi} cos^p s sin^q s ds.
double trig_J(const TrigKey& key);
inline double trig_J(int p, int q, double phi) { return trig_J(TrigKey{p, q, phi}); }

/// int_a^b cos^i s sin^j s [int_base^s cos^p t sin^q t dt] ds.
double nested(int i, int j, int p, int q, double a, double b, double base = 0.0);

/// int_0^phi cos^i s sin^j s I_{(p,q,s)} ds
double nested_I(int i, int j, int p, int q, double phi);
/// int_phi^{2pi} cos^i s sin^j s I_{(p,q,s)} ds
double nested_J(int i, int j, int p, int q, double phi);

/// int_a^b e^{mu s} cos^p s sin^q s ds
double exp_trig(const ExpTrigKey& key);
inline double exp_trig(double mu, int p, int q, double a, double b) {
  return exp_trig(ExpTrigKey{mu, p, q, a, b});
}

/// int_a^b cos^i s sin^j s [int_0^s e^{mu (s - t)} cos^p t sin^q t dt] ds
double double_exp_trig(int i, int j, int p, int q, double mu, double a, double b);

/// Complex Fourier coefficients c_k, k = -(p+q)..(p+q), of cos^p s sin^q s;
/// element k + (p+q) holds c_k.
std::vector<std::complex<double>> harmonics(int p, int q);

/// int_a^b s^n e^{z s} ds for complex z.
std::complex<double> power_exp_integral(int n, std::complex<double> z, double a, double b);

/// Number of memoized trig_I entries (diagnostics/tests).
std::size_t cache_size();
void clear_cache();

// Vanishing rules for the plain and nested kernels at phi in {pi, 2pi}.

enum class Interval { first, second };
enum class Kind { plain, nested };

struct LemmaCase {
  Interval interval = Interval::first;
  Kind kind = Kind::plain;
  double phi = kPi;
  int i = 0;  // outer exponents (nested only)
  int j = 0;
  int p = 0;
  int q = 0;
};

/// True when the integral described by `c` is predicted to vanish. Only
/// phi = pi and phi = 2pi carry a prediction; other angles return false.
bool lemma_vanish_predicate(const LemmaCase& c);

}  // namespace avgcycles::trig
