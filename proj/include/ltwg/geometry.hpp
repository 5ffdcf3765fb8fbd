#pragma once

// Data model for locally perturbed waveguides: profiles, cross sections, and
// the three supported families (strip with a bump, strip with a Neumann
// window or crack, axisymmetric tube with a radial bulge).

#include "ltwg/quadrature.hpp"
#include "ltwg/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ltwg {

struct Interval1D {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

enum class ProfileKind { rectangular, smooth_bump, tabulated };

inline const char* to_string(ProfileKind k) {
  switch (k) {
  case ProfileKind::rectangular: return "rectangular";
  case ProfileKind::smooth_bump: return "cos2";
  case ProfileKind::tabulated: return "tabulated";
  }
  return "?";
}

/// Compactly supported, nonnegative, piecewise continuous function of the
/// axial coordinate.
///
/// - rectangular: `amplitude` on the open support interval, zero elsewhere.
/// - smooth_bump: `amplitude * cos^2(pi (x - c) / w)` on the support, where
///   c and w are its centre and width; C^1 at the support ends.
/// - tabulated: piecewise-linear interpolation of (x, value) samples.
class Profile {
public:
  Profile() = default;

  static Profile rectangular(double amplitude, double lo, double hi) {
    check_support(lo, hi);
    if (!(amplitude >= 0.0)) throw std::invalid_argument("profile amplitude must be >= 0");
    Profile p;
    p.kind_ = ProfileKind::rectangular;
    p.support_ = {lo, hi};
    p.amplitude_ = amplitude;
    return p;
  }

  static Profile smooth_bump(double amplitude, double lo, double hi) {
    Profile p = rectangular(amplitude, lo, hi);
    p.kind_ = ProfileKind::smooth_bump;
    return p;
  }

  static Profile tabulated(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2) {
      throw std::invalid_argument("tabulated profile needs at least 2 samples");
    }
    std::sort(samples.begin(), samples.end());
    for (std::size_t i = 1; i < samples.size(); ++i) {
      if (!(samples[i].first > samples[i - 1].first)) {
        throw std::invalid_argument("tabulated profile abscissae must be distinct");
      }
    }
    Profile p;
    p.kind_ = ProfileKind::tabulated;
    p.support_ = {samples.front().first, samples.back().first};
    for (const auto& [x, v] : samples) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("tabulated profile values must be finite and >= 0");
      }
      p.amplitude_ = std::max(p.amplitude_, v);
    }
    p.samples_ = std::move(samples);
    return p;
  }

  ProfileKind kind() const { return kind_; }
  Interval1D support() const { return support_; }
  double amplitude() const { return amplitude_; }
  const std::vector<std::pair<double, double>>& samples() const { return samples_; }

  double operator()(double x) const {
    switch (kind_) {
    case ProfileKind::rectangular:
      return (x > support_.lo && x < support_.hi) ? amplitude_ : 0.0;
    case ProfileKind::smooth_bump: {
      if (x <= support_.lo || x >= support_.hi) return 0.0;
      const double c = 0.5 * (support_.lo + support_.hi);
      const double s = std::cos(std::numbers::pi * (x - c) / support_.length());
      return amplitude_ * s * s;
    }
    case ProfileKind::tabulated: {
      if (x < support_.lo || x > support_.hi) return 0.0;
      const auto it = std::upper_bound(samples_.begin(), samples_.end(), x,
                                       [](double v, const auto& s) { return v < s.first; });
      if (it == samples_.end()) return samples_.back().second;
      if (it == samples_.begin()) return samples_.front().second;
      const auto& [x1, v1] = *it;
      const auto& [x0, v0] = *(it - 1);
      return v0 + (v1 - v0) * (x - x0) / (x1 - x0);
    }
    }
    return 0.0;
  }

  /// Points where the profile may fail to be smooth.
  std::vector<double> breakpoints() const {
    if (kind_ == ProfileKind::tabulated) {
      std::vector<double> b;
      b.reserve(samples_.size());
      for (const auto& s : samples_) b.push_back(s.first);
      return b;
    }
    return {support_.lo, support_.hi};
  }

  /// True when the profile has no jump, including at the support ends.
  bool continuous() const {
    switch (kind_) {
    case ProfileKind::rectangular: return amplitude_ == 0.0;
    case ProfileKind::smooth_bump: return true;
    case ProfileKind::tabulated:
      return samples_.front().second == 0.0 && samples_.back().second == 0.0;
    }
    return false;
  }

  /// x -> value_factor * f(x / length_factor).
  Profile scaled(double length_factor, double value_factor) const {
    Profile p = *this;
    p.support_ = {support_.lo * length_factor, support_.hi * length_factor};
    p.amplitude_ = amplitude_ * value_factor;
    for (auto& [x, v] : p.samples_) {
      x *= length_factor;
      v *= value_factor;
    }
    return p;
  }

private:
  static void check_support(double lo, double hi) {
    if (!(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw std::invalid_argument("profile support must be a finite interval");
    }
  }

  ProfileKind kind_ = ProfileKind::rectangular;
  Interval1D support_{};
  double amplitude_ = 0.0;
  std::vector<std::pair<double, double>> samples_;
};

/// F_n = integral of f^n, n = 1..n_max, by the same composite Gauss-Legendre
/// rule used for the bound integral.
inline std::vector<double> profile_moments(const Profile& p, int n_max,
                                           const QuadratureConfig& cfg = {}) {
  if (n_max < 1) throw std::invalid_argument("profile_moments: n_max must be >= 1");
  if (p.kind() == ProfileKind::tabulated && p.samples().size() < 2) {
    throw std::invalid_argument("profile_moments: tabulated profile with fewer than 2 samples");
  }
  std::vector<double> moments;
  moments.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const auto r = integrate_piecewise([&](double x) { return std::pow(p(x), n); },
                                       p.breakpoints(), cfg);
    moments.push_back(r.value);
  }
  return moments;
}

/// Interval (0, length) with an optional Neumann point; `neumann_point == length`
/// is a Neumann endpoint, a smaller value is an interior crack point.
struct IntervalSection {
  double length = 1.0;
  std::optional<double> neumann_point;
};

struct DiskSection {
  double radius = 1.0;
};

using CrossSection = std::variant<IntervalSection, DiskSection>;

/// Strip {0 < eta < width + f(xi)}.
struct StripBump {
  Profile profile;
};

/// Straight strip of the given width with Neumann condition on the segment
/// [start, start + length] x {b}; b == width is a boundary window, b < width a
/// crack.
struct StripNeumannWindow {
  double start = 0.0;
  double length = 1.0;
  double b = 1.0;
};

/// Circular tube of radius r(xi) = radius + deviation(xi).
struct TubeRadial {
  Profile deviation;
};

using WaveguideFamily = std::variant<StripBump, StripNeumannWindow, TubeRadial>;

class WaveguideGeometry {
public:
  static WaveguideGeometry strip_bump(Profile profile, double width = 1.0) {
    check_width(width);
    WaveguideGeometry g;
    g.family_ = StripBump{std::move(profile)};
    g.asymptotic_ = IntervalSection{width, std::nullopt};
    g.finish();
    return g;
  }

  static WaveguideGeometry strip_window(double start, double length, double b,
                                        double width = 1.0) {
    check_width(width);
    if (!(length >= 0.0) || !std::isfinite(start)) {
      throw std::invalid_argument("window length must be >= 0");
    }
    if (!(b > 0.5 * width && b <= width)) {
      throw std::invalid_argument("window height b must lie in (width/2, width]");
    }
    WaveguideGeometry g;
    g.family_ = StripNeumannWindow{start, length, b};
    g.asymptotic_ = IntervalSection{width, std::nullopt};
    g.finish();
    return g;
  }

  static WaveguideGeometry tube(Profile deviation, double radius = 1.0) {
    check_width(radius);
    WaveguideGeometry g;
    g.family_ = TubeRadial{std::move(deviation)};
    g.asymptotic_ = DiskSection{radius};
    g.finish();
    return g;
  }

  const WaveguideFamily& family() const { return family_; }
  const CrossSection& asymptotic_cross_section() const { return asymptotic_; }
  bool is_tube() const { return std::holds_alternative<TubeRadial>(family_); }

  /// Width of the straight strip or radius of the straight tube.
  double reference_length() const {
    if (const auto* s = std::get_if<IntervalSection>(&asymptotic_)) return s->length;
    return std::get<DiskSection>(asymptotic_).radius;
  }

  /// Axial interval outside which the guide is straight.
  Interval1D perturbation_support() const { return support_; }

  /// Half-width R: cross sections equal the asymptotic one for |xi| > R.
  double half_width() const { return std::max(std::fabs(support_.lo), std::fabs(support_.hi)); }

  /// lambda_1 of the asymptotic cross section, the bottom of the essential
  /// spectrum.
  double threshold() const {
    if (const auto* s = std::get_if<IntervalSection>(&asymptotic_)) {
      const double k = std::numbers::pi / s->length;
      return k * k;
    }
    const double j = bessel_zero(0, 1) / std::get<DiskSection>(asymptotic_).radius;
    return j * j;
  }

  /// Axial points where the cross-section family may be non-smooth.
  std::vector<double> breakpoints() const {
    return std::visit(
        [](const auto& f) -> std::vector<double> {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, StripNeumannWindow>) {
            return {f.start, f.start + f.length};
          } else if constexpr (std::is_same_v<T, StripBump>) {
            return f.profile.breakpoints();
          } else {
            return f.deviation.breakpoints();
          }
        },
        family_);
  }

  /// All lengths multiplied by s.
  WaveguideGeometry scaled(double s) const {
    if (!(s > 0.0)) throw std::invalid_argument("scale factor must be positive");
    const double L = reference_length() * s;
    return std::visit(
        [&](const auto& f) -> WaveguideGeometry {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, StripNeumannWindow>) {
            return strip_window(f.start * s, f.length * s, f.b * s, L);
          } else if constexpr (std::is_same_v<T, StripBump>) {
            return strip_bump(f.profile.scaled(s, s), L);
          } else {
            return tube(f.deviation.scaled(s, s), L);
          }
        },
        family_);
  }

private:
  static void check_width(double w) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("asymptotic width/radius must be positive");
    }
  }

  void finish() {
    std::visit(
        [this](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, StripNeumannWindow>) {
            support_ = {f.start, f.start + f.length};
          } else if constexpr (std::is_same_v<T, StripBump>) {
            support_ = f.profile.support();
          } else {
            support_ = f.deviation.support();
          }
        },
        family_);
  }

  WaveguideFamily family_;
  CrossSection asymptotic_;
  Interval1D support_{};
};

/// omega(xi) with gamma(xi) encoded as the Neumann point.
inline CrossSection cross_section_at(const WaveguideGeometry& g, double xi) {
  const double L = g.reference_length();
  return std::visit(
      [&](const auto& f) -> CrossSection {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, StripNeumannWindow>) {
          if (f.length > 0.0 && xi >= f.start && xi <= f.start + f.length) {
            return IntervalSection{L, f.b};
          }
          return IntervalSection{L, std::nullopt};
        } else if constexpr (std::is_same_v<T, StripBump>) {
          return IntervalSection{L + f.profile(xi), std::nullopt};
        } else {
          return DiskSection{L + f.deviation(xi)};
        }
      },
      g.family());
}

/// Axial padding beyond the perturbation so that a bound state with binding
/// energy `gap_estimate` decays to relative size `tol` at the truncation ends.
inline double domain_truncation(double gap_estimate, double tol) {
  if (!(gap_estimate > 0.0)) {
    throw std::domain_error(
        "domain_truncation: no bound-state scale available; supply an explicit truncation");
  }
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("domain_truncation: tol in (0,1)");
  return std::log(1.0 / tol) / (2.0 * std::sqrt(gap_estimate));
}

} // namespace ltwg
