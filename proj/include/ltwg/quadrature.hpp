#pragma once

// Adaptive composite Gauss-Legendre quadrature for piecewise smooth
// integrands with known breakpoints.

#include "ltwg/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace ltwg {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  int max_depth = 40;
  int max_intervals = 20000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int intervals = 0;
  bool resolved = true;
};

/// Nodes and weights of the 16-point Gauss-Legendre rule on [-1, 1].
inline const std::array<std::pair<double, double>, 16>& gauss_legendre_16() {
  static const auto rule = [] {
    constexpr int n = 16;
    std::array<std::pair<double, double>, n> r{};
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-16) break;
      }
      r[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
    }
    return r;
  }();
  return rule;
}

namespace detail {

template <class F>
double gl16(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (const auto& [x, w] : gauss_legendre_16()) s += w * f(mid + half * x);
  return s * half;
}

template <class F>
void adapt(const F& f, double a, double b, double whole, double tol, int depth,
           const QuadratureConfig& cfg, QuadratureResult& out) {
  const double mid = 0.5 * (a + b);
  const double left = gl16(f, a, mid);
  const double right = gl16(f, mid, b);
  const double diff = std::fabs(left + right - whole);
  if (diff <= tol || depth >= cfg.max_depth || out.intervals >= cfg.max_intervals) {
    out.error_estimate += diff;
    if (diff > tol) out.resolved = false;
    out.value += left + right;
    out.intervals += 2;
    return;
  }
  adapt(f, a, mid, left, 0.5 * tol, depth + 1, cfg, out);
  adapt(f, mid, b, right, 0.5 * tol, depth + 1, cfg, out);
}

} // namespace detail

/// Integrates f over [a, b] to cfg.abs_tol. Throws QuadratureError when the
/// subdivision cap is reached without meeting the tolerance.
template <class F>
QuadratureResult integrate(const F& f, double a, double b, const QuadratureConfig& cfg = {}) {
  QuadratureResult out;
  if (!(b > a)) return out;
  detail::adapt(f, a, b, detail::gl16(f, a, b), cfg.abs_tol, 0, cfg, out);
  if (!out.resolved) {
    throw QuadratureError("adaptive quadrature did not converge on [" + std::to_string(a) +
                              ", " + std::to_string(b) + "]",
                          out.error_estimate);
  }
  return out;
}

/// Integrates over [breaks.front(), breaks.back()], splitting at every
/// interior breakpoint. The tolerance is shared evenly among the pieces.
template <class F>
QuadratureResult integrate_piecewise(const F& f, std::vector<double> breaks,
                                     const QuadratureConfig& cfg = {}) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  QuadratureResult total;
  if (breaks.size() < 2) return total;
  QuadratureConfig piece = cfg;
  piece.abs_tol = cfg.abs_tol / static_cast<double>(breaks.size() - 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const auto r = integrate(f, breaks[i], breaks[i + 1], piece);
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.intervals += r.intervals;
    total.resolved = total.resolved && r.resolved;
  }
  return total;
}

} // namespace ltwg
