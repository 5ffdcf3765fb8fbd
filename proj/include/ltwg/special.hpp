#pragma once

// Bessel functions of the first kind J_m for small integer orders and their
// positive zeros. Self-contained so the accuracy can be audited: an ascending
// series in extended precision near the origin, the Hankel asymptotic
// expansion far from it.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ltwg {

namespace detail {

// Crossover between the ascending series and the Hankel expansion. At x = 16
// the largest series term is ~1e6, so long double keeps ~1e-13 absolute
// accuracy, and the optimally truncated Hankel series is below ~1e-13.
inline constexpr double kBesselSeriesLimit = 16.0;

inline double bessel_j_series(int m, double x) {
  const long double half = static_cast<long double>(x) / 2.0L;
  const long double half_sq = half * half;
  long double term = 1.0L;
  for (int k = 1; k <= m; ++k) term *= half / static_cast<long double>(k);
  long double sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= -half_sq / (static_cast<long double>(k) * static_cast<long double>(k + m));
    sum += term;
    if (std::fabs(term) < 1e-24L * (1.0L + std::fabs(sum)) && k > half) break;
  }
  return static_cast<double>(sum);
}

inline double bessel_j_hankel(int m, double x) {
  const double mu = 4.0 * m * m;
  const double eight_x = 8.0 * x;
  // a_k / (8x)^k built incrementally; P collects even k, Q odd k.
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last_abs = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * eight_x);
    const double a = std::fabs(term);
    if (a > last_abs) break; // asymptotic series started diverging
    last_abs = a;
    switch (k % 4) {
    case 1: q += term; break;
    case 2: p -= term; break;
    case 3: q -= term; break;
    case 0: p += term; break;
    }
    if (a < 1e-17) break;
  }
  const double chi = x - (0.5 * m + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

} // namespace detail

/// J_m(x) for integer order m >= 0 and x >= 0.
inline double bessel_j(int m, double x) {
  if (m < 0) throw std::invalid_argument("bessel_j: negative order");
  if (x < 0.0) {
    const double v = bessel_j(m, -x);
    return (m % 2 == 0) ? v : -v;
  }
  if (x <= detail::kBesselSeriesLimit) return detail::bessel_j_series(m, x);
  return detail::bessel_j_hankel(m, x);
}

inline double bessel_j_derivative(int m, double x) {
  if (m == 0) return -bessel_j(1, x);
  return bessel_j(m - 1, x) - (m / x) * bessel_j(m, x);
}

inline constexpr int kMaxBesselOrder = 5;
inline constexpr int kMaxBesselZeroIndex = 20;

/// k-th positive zero j_{m,k} of J_m, for 0 <= m <= 5 and 1 <= k <= 20.
inline double bessel_zero(int m, int k) {
  if (m < 0 || m > kMaxBesselOrder || k < 1 || k > kMaxBesselZeroIndex) {
    throw std::out_of_range("bessel_zero: (m, k) = (" + std::to_string(m) + ", " +
                            std::to_string(k) + ") outside the implemented range");
  }
  // Zeros of J_m are separated by more than 2.9 for m <= 5, and j_{m,1} > m.
  constexpr double step = 0.1;
  double lo = m + 0.05;
  double f_lo = bessel_j(m, lo);
  int found = 0;
  for (;;) {
    const double hi = lo + step;
    const double f_hi = bessel_j(m, hi);
    if ((f_lo < 0.0) != (f_hi < 0.0) || f_hi == 0.0) {
      if (++found == k) {
        double a = lo;
        double b = hi;
        double fa = f_lo;
        while (b - a > 1e-4) {
          const double c = 0.5 * (a + b);
          const double fc = bessel_j(m, c);
          if ((fc < 0.0) == (fa < 0.0)) {
            a = c;
            fa = fc;
          } else {
            b = c;
          }
        }
        double x = 0.5 * (a + b);
        for (int it = 0; it < 50; ++it) {
          const double dx = bessel_j(m, x) / bessel_j_derivative(m, x);
          const double next = x - dx;
          if (next < a || next > b) break; // never leave the bracket
          x = next;
          if (std::fabs(dx) < 1e-16 * x) break;
        }
        return x;
      }
    }
    lo = hi;
    f_lo = f_hi;
  }
}

} // namespace ltwg
