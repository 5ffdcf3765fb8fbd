#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ltwg {

/// Symmetric tridiagonal matrix: diagonal `diag` (size n) and off-diagonal
/// `off` (size n - 1). A zero off-diagonal entry decouples the blocks.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }

  double gershgorin_lower() const {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < diag.size(); ++i) {
      double r = 0.0;
      if (i > 0) r += std::fabs(off[i - 1]);
      if (i + 1 < diag.size()) r += std::fabs(off[i]);
      lo = std::min(lo, diag[i] - r);
    }
    return lo;
  }

  double gershgorin_upper() const {
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < diag.size(); ++i) {
      double r = 0.0;
      if (i > 0) r += std::fabs(off[i - 1]);
      if (i + 1 < diag.size()) r += std::fabs(off[i]);
      hi = std::max(hi, diag[i] + r);
    }
    return hi;
  }
};

/// Number of eigenvalues of t strictly below x (Sturm sequence count from the
/// pivots of the LDL^T factorization of t - x).
inline int sturm_count(const SymTridiagonal& t, double x) {
  if (t.off.size() + 1 != t.diag.size() && !t.diag.empty()) {
    throw std::invalid_argument("sturm_count: off-diagonal must have n - 1 entries");
  }
  double scale = std::fabs(x);
  for (double d : t.diag) scale = std::max(scale, std::fabs(d));
  for (double e : t.off) scale = std::max(scale, std::fabs(e));
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, scale * scale);

  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double e2 = (i == 0) ? 0.0 : t.off[i - 1] * t.off[i - 1];
    d = (t.diag[i] - x) - ((i == 0) ? 0.0 : e2 / d);
    // A zero pivot means x is an eigenvalue of a leading block; nudging it
    // upward keeps that eigenvalue out of the strict count.
    if (std::fabs(d) < pivmin) d = (d < 0.0) ? -pivmin : pivmin;
    if (d < 0.0) ++count;
  }
  return count;
}

/// All eigenvalues of t strictly below `threshold`, ascending, by bisection.
inline std::vector<double> tridiagonal_eigenvalues_below(const SymTridiagonal& t,
                                                         double threshold) {
  const int k = sturm_count(t, threshold);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k));
  const double lo0 = t.gershgorin_lower();
  for (int idx = 0; idx < k; ++idx) {
    // Smallest x with count(x) > idx lies in (lo, hi].
    double lo = lo0 - 1.0;
    double hi = threshold;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (sturm_count(t, mid) > idx) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

/// Smallest eigenvalue of t by bisection on the Sturm count.
inline double tridiagonal_smallest(const SymTridiagonal& t) {
  if (t.size() == 0) throw std::invalid_argument("tridiagonal_smallest: empty matrix");
  double lo = t.gershgorin_lower() - 1.0;
  double hi = t.gershgorin_upper() + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(t, mid) > 0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace ltwg
