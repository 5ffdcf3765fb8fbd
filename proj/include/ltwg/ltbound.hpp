#pragma once

// The bound side: classical phase-space constants, excess factors, the
// transverse integral I, Riesz means, and the closed-form weak- and
// strong-coupling comparisons.

#include "ltwg/eigensolve.hpp"
#include "ltwg/error.hpp"
#include "ltwg/geometry.hpp"
#include "ltwg/quadrature.hpp"
#include "ltwg/special.hpp"
#include "ltwg/transverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ltwg {

/// L^cl_{sigma,d} = Gamma(sigma + 1) / (2^d pi^{d/2} Gamma(sigma + d/2 + 1)).
inline double classical_constant(double sigma, int d) {
  if (!(sigma > 0.0)) throw std::invalid_argument("classical_constant: sigma must be > 0");
  if (d < 1) throw std::invalid_argument("classical_constant: d must be >= 1");
  const double half_d = 0.5 * d;
  const double ratio = (sigma + half_d + 1.0 < 170.0)
                           ? std::tgamma(sigma + 1.0) / std::tgamma(sigma + half_d + 1.0)
                           : std::exp(std::lgamma(sigma + 1.0) - std::lgamma(sigma + half_d + 1.0));
  return ratio / (std::pow(2.0, d) * std::pow(std::numbers::pi, half_d));
}

/// Best known excess factor r(sigma, d) over the classical constant.
inline double excess_factor(double sigma, int d) {
  if (d < 1) throw std::invalid_argument("excess_factor: d must be >= 1");
  if (!(sigma >= 0.5)) throw ConfigError("excess_factor: sigma must be >= 1/2");
  if (sigma >= 1.5) return 1.0;
  if (sigma >= 1.0) return 2.0;
  return d == 1 ? 2.0 : 4.0;
}

struct BoundSpec {
  double sigma = 0.5;
  int dimension = 1;
  double threshold = std::numbers::pi * std::numbers::pi;

  void validate() const {
    if (!(sigma >= 0.5) || !std::isfinite(sigma)) throw ConfigError("sigma must be >= 1/2");
    if (dimension != 1) throw ConfigError("only the axial dimension d = 1 is supported");
  }
};

/// Sum of (threshold - lambda)^sigma over the eigenvalues below threshold.
inline double riesz_mean(const std::vector<double>& eigenvalues, double threshold, double sigma) {
  double s = 0.0;
  for (double e : eigenvalues) {
    if (e < threshold) s += std::pow(threshold - e, sigma);
  }
  return s;
}

inline double riesz_mean(const Spectrum& eigs, const BoundSpec& spec) {
  return riesz_mean(eigs.eigenvalues, spec.threshold, spec.sigma);
}

struct BoundReport {
  double sigma = 0.5;
  double r = 0.0;
  double Lcl = 0.0;
  double integral = 0.0;
  double bound = 0.0;
  std::optional<double> riesz_mean;
  std::optional<double> slack_ratio;
  double quadrature_error = 0.0;
  int quadrature_intervals = 0;
  bool exact_integral = false; // piecewise-constant integrand, no quadrature error
};

namespace detail {

// Scalar that controls the cross section (bump height, tube radius
// deviation) and the levels at which another transverse mode drops below
// the threshold.
struct ModeLevels {
  const Profile* profile = nullptr;
  std::vector<double> levels;
};

inline ModeLevels mode_levels(const WaveguideGeometry& g) {
  ModeLevels m;
  const double L = g.reference_length();
  if (const auto* b = std::get_if<StripBump>(&g.family())) {
    m.profile = &b->profile;
    for (int k = 2; (k - 1) * L < b->profile.amplitude(); ++k) m.levels.push_back((k - 1) * L);
  } else if (const auto* t = std::get_if<TubeRadial>(&g.family())) {
    m.profile = &t->deviation;
    const double j01 = bessel_zero(0, 1);
    const double r_max = L + t->deviation.amplitude();
    // Mode (m, k) enters once the radius exceeds L j_{m,k} / j_{0,1}.
    for (int order = 0; order <= kMaxBesselOrder; ++order) {
      for (int k = 1; k <= kMaxBesselZeroIndex; ++k) {
        const double rad = L * bessel_zero(order, k) / j01;
        if (rad >= r_max) break;
        if (rad > L) m.levels.push_back(rad - L);
      }
    }
    std::sort(m.levels.begin(), m.levels.end());
    m.levels.erase(std::unique(m.levels.begin(), m.levels.end()), m.levels.end());
  }
  return m;
}

inline std::vector<double> monotone_breaks(const Profile& p) {
  std::vector<double> b = p.breakpoints();
  if (p.kind() == ProfileKind::smooth_bump) {
    b.push_back(0.5 * (p.support().lo + p.support().hi));
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

// Points where the profile crosses `level` inside pieces on which it is
// monotone, by bisection.
inline void add_crossings(const Profile& p, const std::vector<double>& pieces, double level,
                          std::vector<double>& out) {
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    double a = pieces[i];
    double b = pieces[i + 1];
    // Evaluate just inside the piece so jumps at the ends do not count.
    const double eps = 1e-14 * std::max(1.0, std::fabs(b - a));
    double fa = p(a + eps) - level;
    const double fb = p(b - eps) - level;
    if (fa == 0.0 || fb == 0.0 || (fa < 0.0) == (fb < 0.0)) continue;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const double fm = p(mid) - level;
      if ((fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    out.push_back(0.5 * (a + b));
  }
}

inline bool piecewise_constant_family(const WaveguideGeometry& g) {
  if (std::holds_alternative<StripNeumannWindow>(g.family())) return true;
  const Profile& p = std::holds_alternative<StripBump>(g.family())
                         ? std::get<StripBump>(g.family()).profile
                         : std::get<TubeRadial>(g.family()).deviation;
  return p.kind() == ProfileKind::rectangular;
}

} // namespace detail

/// Integrand of I at xi: sum over every transverse eigenvalue below the
/// threshold of (threshold - lambda_j)^{sigma + 1/2}.
inline double bound_integrand(const WaveguideGeometry& g, double sigma, double xi) {
  const double theta = g.threshold();
  const auto ts = transverse_spectrum(cross_section_at(g, xi), theta);
  double s = 0.0;
  for (double e : ts.eigenvalues) s += std::pow(theta - e, sigma + 0.5);
  return s;
}

/// Axial points that split the integrand into smooth pieces: profile
/// breakpoints, the crest of a cos^2 bump, and mode-entry points.
inline std::vector<double> bound_breakpoints(const WaveguideGeometry& g) {
  std::vector<double> breaks = g.breakpoints();
  const auto levels = detail::mode_levels(g);
  if (levels.profile) {
    const auto pieces = detail::monotone_breaks(*levels.profile);
    breaks.insert(breaks.end(), pieces.begin(), pieces.end());
    for (double v : levels.levels) detail::add_crossings(*levels.profile, pieces, v, breaks);
  }
  const Interval1D s = g.perturbation_support();
  breaks.push_back(s.lo);
  breaks.push_back(s.hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

/// I = integral over xi of the bound integrand. Piecewise-constant families
/// are summed exactly; the rest use adaptive Gauss-Legendre on each smooth
/// piece.
inline QuadratureResult bound_integral(const WaveguideGeometry& g, const BoundSpec& spec,
                                       const QuadratureConfig& cfg = {}) {
  spec.validate();
  const auto breaks = bound_breakpoints(g);
  if (detail::piecewise_constant_family(g)) {
    QuadratureResult r;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double a = breaks[i];
      const double b = breaks[i + 1];
      r.value += (b - a) * bound_integrand(g, spec.sigma, 0.5 * (a + b));
      ++r.intervals;
    }
    return r;
  }
  return integrate_piecewise([&](double x) { return bound_integrand(g, spec.sigma, x); }, breaks,
                             cfg);
}

/// Bound side of the inequality for `g` at order sigma.
inline BoundReport lt_bound(const WaveguideGeometry& g, double sigma,
                            const QuadratureConfig& cfg = {}) {
  BoundSpec spec{sigma, 1, g.threshold()};
  spec.validate();
  BoundReport rep;
  rep.sigma = sigma;
  rep.r = excess_factor(sigma, 1);
  rep.Lcl = classical_constant(sigma, 1);
  const auto q = bound_integral(g, spec, cfg);
  rep.integral = q.value;
  rep.quadrature_error = q.error_estimate;
  rep.quadrature_intervals = q.intervals;
  rep.exact_integral = detail::piecewise_constant_family(g);
  rep.bound = rep.r * rep.Lcl * rep.integral;
  return rep;
}

/// Attaches a computed Riesz mean and the slack ratio riesz_mean / bound.
inline void attach_riesz_mean(BoundReport& rep, double riesz) {
  rep.riesz_mean = riesz;
  if (rep.bound > 0.0) {
    rep.slack_ratio = riesz / rep.bound;
  } else {
    rep.slack_ratio = (riesz > 0.0) ? std::numeric_limits<double>::infinity() : 0.0;
  }
}

/// Tube bound through the Faber-Krahn inequality, valid while the area of
/// every cross section is at most twice that of the asymptotic disk (then
/// only lambda_1 can lie below the threshold):
/// j01^{2 sigma + 1} * integral of (1/r0^2 - pi / A(xi))_+^{sigma + 1/2}.
inline QuadratureResult faber_krahn_bound_integral(const WaveguideGeometry& g,
                                                   const BoundSpec& spec,
                                                   const QuadratureConfig& cfg = {}) {
  spec.validate();
  const auto* tube = std::get_if<TubeRadial>(&g.family());
  if (!tube) throw ConfigError("faber_krahn_bound_integral: geometry is not a tube");
  const double r0 = g.reference_length();
  const double r_max = r0 + tube->deviation.amplitude();
  const double pi = std::numbers::pi;
  if (pi * r_max * r_max > 2.0 * pi * r0 * r0 * (1.0 + 1e-14)) {
    throw ConfigError(
        "faber_krahn_bound_integral: cross-section area exceeds twice the asymptotic area, so "
        "the second transverse eigenvalue bound 2 pi j01^2 / A no longer excludes a second "
        "sub-threshold mode");
  }
  const double j01 = bessel_zero(0, 1);
  const double p = spec.sigma + 0.5;
  const auto f = [&](double xi) {
    const double r = r0 + tube->deviation(xi);
    const double area = pi * r * r;
    const double v = 1.0 / (r0 * r0) - pi / area;
    return v > 0.0 ? std::pow(j01, 2.0 * spec.sigma + 1.0) * std::pow(v, p) : 0.0;
  };
  std::vector<double> breaks = detail::monotone_breaks(tube->deviation);
  if (tube->deviation.kind() == ProfileKind::rectangular) {
    QuadratureResult r;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      r.value += (breaks[i + 1] - breaks[i]) * f(0.5 * (breaks[i] + breaks[i + 1]));
      ++r.intervals;
    }
    return r;
  }
  return integrate_piecewise(f, breaks, cfg);
}

struct WeakCouplingMoments {
  double F1 = 0.0;
  double F2 = 0.0;
  double F3 = 0.0;
};

/// pi^2 - pi^4 F1^2 a^2 + 3 pi^4 F1 F2 a^3 - (9/4 F2^2 + 4 F1 F3) pi^4 a^4,
/// truncated after the a^order term. The square of the sigma = 1/2 bound for
/// a single bound state in the unit strip with bump a f.
inline double weak_coupling_lower(const WeakCouplingMoments& F, double alpha, int order) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("weak_coupling_lower: alpha must be >= 0");
  if (order < 2 || order > 4) throw std::invalid_argument("weak_coupling_lower: order in 2..4");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double pi4 = pi2 * pi2;
  double v = pi2 - pi4 * F.F1 * F.F1 * alpha * alpha;
  if (order >= 3) v += 3.0 * pi4 * F.F1 * F.F2 * std::pow(alpha, 3);
  if (order >= 4) v -= (2.25 * F.F2 * F.F2 + 4.0 * F.F1 * F.F3) * pi4 * std::pow(alpha, 4);
  return v;
}

/// Leading weak-coupling asymptote pi^2 - pi^4 F1^2 a^2.
inline double weak_coupling_asymptote(double F1, double alpha) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return pi2 - pi2 * pi2 * F1 * F1 * alpha * alpha;
}

/// Lower bound on the ground state of the unit strip with a Neumann window of
/// length alpha at height b, from the sigma = 1/2 inequality when exactly one
/// eigenvalue lies below pi^2:
/// pi^2 - (r L^cl alpha (pi^2 - pi^2 / 4b^2))^2, i.e. pi^2 - (9/64) pi^4 alpha^2
/// for b = 1.
inline double window_coupling_lower(double alpha, double b = 1.0) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double c = excess_factor(0.5, 1) * classical_constant(0.5, 1);
  const double t = c * alpha * (pi2 - pi2 / (4.0 * b * b));
  return pi2 - t * t;
}

/// Coefficient k in pi^2 - k pi^4 alpha^2 of window_coupling_lower for b = 1.
inline double window_coupling_coefficient() {
  const double c = excess_factor(0.5, 1) * classical_constant(0.5, 1);
  return c * c * 0.75 * 0.75;
}

/// Dirichlet (lower) and Neumann (upper) bracketing sums for the b = 1 window
/// of length alpha: sum over n >= 1 (resp. n >= 0) of
/// (3 pi^2 / 4 - n^2 pi^2 / alpha^2)_+^sigma.
inline std::pair<double, double> bracket_bounds(double alpha, double sigma) {
  if (!(alpha > 0.0)) throw std::invalid_argument("bracket_bounds: alpha must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("bracket_bounds: sigma must be positive");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double head = 0.75 * pi2;
  double lower = 0.0;
  for (int n = 1;; ++n) {
    const double v = head - n * n * pi2 / (alpha * alpha);
    if (!(v > 0.0)) break;
    lower += std::pow(v, sigma);
  }
  return {lower, lower + std::pow(head, sigma)};
}

} // namespace ltwg
