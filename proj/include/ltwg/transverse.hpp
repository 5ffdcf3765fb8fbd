#pragma once

// Spectra of the cross-section operators: Dirichlet intervals, intervals with
// a Neumann point, disks, Faber-Krahn type lower bounds, and a finite-difference
// solver used as an independent check of the closed forms.

#include "ltwg/geometry.hpp"
#include "ltwg/special.hpp"
#include "ltwg/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

namespace ltwg {

/// Strict "below threshold" test, treating values within 1e-12 relative of the
/// threshold as lying on it.
inline bool strictly_below(double value, double threshold) {
  return value < threshold - 1e-12 * std::fabs(threshold);
}

enum class SpectrumSource { analytic, numeric };

struct TransverseSpectrum {
  std::vector<double> eigenvalues; // ascending, all < threshold
  double threshold = 0.0;
  SpectrumSource source = SpectrumSource::analytic;

  bool empty() const { return eigenvalues.empty(); }
  std::size_t size() const { return eigenvalues.size(); }
};

inline TransverseSpectrum interval_dirichlet_spectrum(double length, double threshold) {
  if (!(length > 0.0)) throw std::invalid_argument("interval length must be positive");
  TransverseSpectrum s{{}, threshold, SpectrumSource::analytic};
  for (int n = 1;; ++n) {
    const double k = n * std::numbers::pi / length;
    if (!strictly_below(k * k, threshold)) break;
    s.eigenvalues.push_back(k * k);
  }
  return s;
}

namespace detail {

// Dirichlet at 0, Neumann at `length`: ((k - 1/2) pi / length)^2.
inline void append_dirichlet_neumann(double length, double threshold, std::vector<double>& out) {
  if (!(length > 0.0)) return;
  for (int k = 1;; ++k) {
    const double q = (k - 0.5) * std::numbers::pi / length;
    if (!strictly_below(q * q, threshold)) break;
    out.push_back(q * q);
  }
}

} // namespace detail

/// Interval (0, L) with Dirichlet ends and a Neumann point at b. The point
/// severs the form domain, so the spectrum is the union of the
/// Dirichlet-Neumann spectra of (0, b) and (b, L).
inline TransverseSpectrum mixed_interval_spectrum(double length, double b, double threshold) {
  if (!(length > 0.0)) throw std::invalid_argument("interval length must be positive");
  if (!(b > 0.5 * length && b <= length)) {
    throw std::invalid_argument("mixed_interval_spectrum: Neumann point must lie in (L/2, L]");
  }
  TransverseSpectrum s{{}, threshold, SpectrumSource::analytic};
  detail::append_dirichlet_neumann(b, threshold, s.eigenvalues);
  detail::append_dirichlet_neumann(length - b, threshold, s.eigenvalues);
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  return s;
}

/// Dirichlet disk of radius r: j_{m,k}^2 / r^2 below threshold, angular modes
/// m >= 1 listed twice.
inline TransverseSpectrum disk_spectrum(double radius, double threshold) {
  if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
  TransverseSpectrum s{{}, threshold, SpectrumSource::analytic};
  // j_{m,1} > m, so no order above the implemented range can enter while
  // (kMaxBesselOrder + 1)^2 / r^2 >= threshold.
  const double next_order = kMaxBesselOrder + 1.0;
  if (next_order * next_order / (radius * radius) < threshold) {
    throw std::out_of_range("disk_spectrum: radius too large for the implemented Bessel orders");
  }
  for (int m = 0; m <= kMaxBesselOrder; ++m) {
    for (int k = 1;; ++k) {
      if (k > kMaxBesselZeroIndex) {
        throw std::out_of_range("disk_spectrum: more radial modes than implemented zeros");
      }
      const double j = bessel_zero(m, k) / radius;
      if (!strictly_below(j * j, threshold)) break;
      s.eigenvalues.push_back(j * j);
      if (m > 0) s.eigenvalues.push_back(j * j);
    }
  }
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  return s;
}

/// Faber-Krahn: lambda_1(omega) >= pi j_{0,1}^2 / A(omega).
inline double faber_krahn_lower(double area) {
  if (!(area > 0.0)) throw std::invalid_argument("faber_krahn_lower: area must be positive");
  const double j = bessel_zero(0, 1);
  return std::numbers::pi * j * j / area;
}

/// lambda_2(omega) >= 2 pi j_{0,1}^2 / A(omega); with A <= 2 pi this certifies
/// that at most one transverse eigenvalue lies below j_{0,1}^2.
inline double second_eigenvalue_lower(double area) {
  if (!(area > 0.0)) throw std::invalid_argument("second_eigenvalue_lower: area must be positive");
  return 2.0 * faber_krahn_lower(area);
}

/// Exact spectrum of a cross section below `threshold`.
inline TransverseSpectrum transverse_spectrum(const CrossSection& cs, double threshold) {
  if (const auto* iv = std::get_if<IntervalSection>(&cs)) {
    if (iv->neumann_point) return mixed_interval_spectrum(iv->length, *iv->neumann_point, threshold);
    return interval_dirichlet_spectrum(iv->length, threshold);
  }
  return disk_spectrum(std::get<DiskSection>(cs).radius, threshold);
}

/// Symmetrised lumped-mass P1 discretisation of -u'' on a node line
/// (vertex-centred finite volumes). `nodes` lists every grid point including
/// both ends; an end with a Dirichlet condition is eliminated, a Neumann end
/// keeps a half cell.
inline SymTridiagonal line_operator(const std::vector<double>& nodes, bool dirichlet_lo,
                                    bool dirichlet_hi) {
  if (nodes.size() < 2) throw std::invalid_argument("line_operator: need at least two nodes");
  const std::size_t first = dirichlet_lo ? 1 : 0;
  const std::size_t last = dirichlet_hi ? nodes.size() - 2 : nodes.size() - 1;
  SymTridiagonal t;
  if (last + 1 <= first) return t;
  std::vector<double> stiff_diag;
  std::vector<double> mass;
  for (std::size_t i = first; i <= last; ++i) {
    double k = 0.0;
    double m = 0.0;
    if (i > 0) {
      const double d = nodes[i] - nodes[i - 1];
      k += 1.0 / d;
      m += 0.5 * d;
    }
    if (i + 1 < nodes.size()) {
      const double d = nodes[i + 1] - nodes[i];
      k += 1.0 / d;
      m += 0.5 * d;
    }
    stiff_diag.push_back(k);
    mass.push_back(m);
  }
  const std::size_t n = stiff_diag.size();
  t.diag.resize(n);
  t.off.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = stiff_diag[i] / mass[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = nodes[first + i + 1] - nodes[first + i];
    t.off[i] = -(1.0 / d) / std::sqrt(mass[i] * mass[i + 1]);
  }
  return t;
}

/// Concatenates decoupled tridiagonal blocks.
inline SymTridiagonal block_concat(const SymTridiagonal& a, const SymTridiagonal& b) {
  if (a.size() == 0) return b;
  if (b.size() == 0) return a;
  SymTridiagonal t = a;
  t.off.push_back(0.0);
  t.diag.insert(t.diag.end(), b.diag.begin(), b.diag.end());
  t.off.insert(t.off.end(), b.off.begin(), b.off.end());
  return t;
}

inline std::vector<double> uniform_nodes(double lo, double hi, int steps) {
  std::vector<double> x(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) x[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / steps;
  x.back() = hi;
  return x;
}

/// Finite-difference spectrum of an interval cross section on `grid_n`
/// interior nodes (grid_n + 1 steps). A Neumann endpoint keeps a half cell; an
/// interior Neumann point splits the grid into two decoupled one-sided
/// problems with the node at b duplicated. Eigenvalues by Sturm bisection.
inline TransverseSpectrum numeric_interval_spectrum(const IntervalSection& cs, double threshold,
                                                    int grid_n) {
  if (grid_n < 16) throw std::invalid_argument("numeric_interval_spectrum: grid_n must be >= 16");
  if (!(cs.length > 0.0)) throw std::invalid_argument("interval length must be positive");
  const int steps = grid_n + 1;
  SymTridiagonal t;
  if (!cs.neumann_point) {
    t = line_operator(uniform_nodes(0.0, cs.length, steps), true, true);
  } else {
    const double b = *cs.neumann_point;
    if (!(b > 0.0 && b <= cs.length)) throw std::invalid_argument("Neumann point outside (0, L]");
    if (b == cs.length) {
      t = line_operator(uniform_nodes(0.0, b, steps), true, false);
    } else {
      const int lower = std::clamp(static_cast<int>(std::lround(b / cs.length * steps)), 1,
                                   steps - 1);
      t = block_concat(line_operator(uniform_nodes(0.0, b, lower), true, false),
                       line_operator(uniform_nodes(b, cs.length, steps - lower), false, true));
    }
  }
  TransverseSpectrum s{tridiagonal_eigenvalues_below(t, threshold), threshold,
                       SpectrumSource::numeric};
  if (s.eigenvalues.size() == t.size()) {
    throw std::invalid_argument(
        "numeric_interval_spectrum: grid too coarse, every discrete mode lies below threshold");
  }
  return s;
}

} // namespace ltwg
