#pragma once

// Richardson extrapolation for sequences computed on geometrically refined
// grids.

#include "ltwg/error.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace ltwg {

struct RichardsonEstimate {
  double extrapolated = 0.0;
  double order = std::numeric_limits<double>::quiet_NaN(); // observed, NaN if unavailable
  double error_estimate = 0.0; // |extrapolated - finest value|
};

/// Observed order from three values on grids refined by `ratio` each step.
inline double observed_order(double coarse, double mid, double fine, double ratio) {
  const double d1 = mid - coarse;
  const double d2 = fine - mid;
  if (d1 == 0.0 || d2 == 0.0 || (d1 > 0.0) != (d2 > 0.0)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return std::log(d1 / d2) / std::log(ratio);
}

/// Extrapolates the values v_k computed at steps h_k (strictly decreasing,
/// constant refinement ratio). With three or more levels the observed order
/// of the last three is used when it is positive; otherwise `assumed_order`.
inline RichardsonEstimate richardson(const std::vector<double>& h, const std::vector<double>& v,
                                     double assumed_order = 2.0) {
  if (h.size() != v.size() || h.size() < 2) {
    throw ConfigError("richardson: need at least two levels with matching values");
  }
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (!(h[i] < h[i - 1])) throw ConfigError("refinement levels must have decreasing steps");
  }
  const std::size_t n = h.size();
  const double ratio = h[n - 2] / h[n - 1];
  RichardsonEstimate r;
  double p = assumed_order;
  if (n >= 3) {
    r.order = observed_order(v[n - 3], v[n - 2], v[n - 1], ratio);
    if (std::isfinite(r.order) && r.order > 0.5) p = r.order;
  }
  const double denom = std::pow(ratio, p) - 1.0;
  r.extrapolated = v[n - 1] + (v[n - 1] - v[n - 2]) / denom;
  r.error_estimate = std::fabs(r.extrapolated - v[n - 1]);
  return r;
}

} // namespace ltwg
