#pragma once

// Scenario descriptions (INI files or presets) and the end-to-end runs built
// on them: inequality verification, refinement studies, and the weak/strong
// coupling tables.

#include "ltwg/convergence.hpp"
#include "ltwg/error.hpp"
#include "ltwg/geometry.hpp"
#include "ltwg/ltbound.hpp"
#include "ltwg/pipeline.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ltwg {

struct GeometryConfig {
  std::string family = "strip_bump"; // strip_bump | strip_window | tube
  std::string profile = "rectangular"; // rectangular | cos2 | tabulated
  double amplitude = 1.0;
  double support_lo = 0.0;
  double support_hi = 1.0;
  std::vector<std::pair<double, double>> samples;
  double window_start = 0.0;
  double window_length = 1.0;
  double b = 1.0;
  double width = 1.0; // strip width or tube radius

  Profile build_profile() const {
    if (profile == "rectangular") return Profile::rectangular(amplitude, support_lo, support_hi);
    if (profile == "cos2") return Profile::smooth_bump(amplitude, support_lo, support_hi);
    if (profile == "tabulated") return Profile::tabulated(samples);
    throw ConfigError("unknown profile kind '" + profile + "'");
  }

  WaveguideGeometry build() const {
    try {
      if (family == "strip_bump") return WaveguideGeometry::strip_bump(build_profile(), width);
      if (family == "strip_window") {
        return WaveguideGeometry::strip_window(window_start, window_length, b, width);
      }
      if (family == "tube") return WaveguideGeometry::tube(build_profile(), width);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    throw ConfigError("unknown geometry family '" + family + "'");
  }
};

struct Scenario {
  std::string name = "scenario";
  GeometryConfig geometry;
  std::vector<double> sigmas{0.5};
  double h = 0.02;   // finest grid step
  int levels = 2;    // grids h * 2^(levels-1), ..., 2h, h
  double truncation_tol = 1e-6;
  std::optional<Interval1D> extent;
  QuadratureConfig quadrature;
  bool dump_matrix = false;

  void validate() const {
    if (sigmas.empty()) throw ConfigError(name + ": empty sigma list");
    for (double s : sigmas) {
      if (!(s >= 0.5) || !std::isfinite(s)) throw ConfigError(name + ": sigma must be >= 1/2");
    }
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError(name + ": grid step must be positive");
    if (levels < 1 || levels > 6) throw ConfigError(name + ": levels must lie in 1..6");
    if (!(truncation_tol > 0.0 && truncation_tol < 1.0)) {
      throw ConfigError(name + ": truncation_tol must lie in (0, 1)");
    }
    if (!(quadrature.abs_tol > 0.0)) throw ConfigError(name + ": quadrature tolerance must be > 0");
    geometry.build();
  }

  std::vector<double> steps() const {
    std::vector<double> hs;
    for (int k = levels - 1; k >= 0; --k) hs.push_back(h * std::pow(2.0, k));
    return hs;
  }

  GridSpec grid(double step) const {
    GridSpec g;
    g.h = step;
    g.truncation_tol = truncation_tol;
    g.axial_extent = extent;
    return g;
  }
};

namespace detail {

inline std::vector<double> parse_numbers(const std::string& text, const std::string& key) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + tok + "' in key '" + key + "'");
    }
  }
  return out;
}

template <class T>
T get_value(const boost::property_tree::ptree& sec, const std::string& key, T fallback) {
  const auto v = sec.get_optional<std::string>(key);
  if (!v) return fallback;
  if constexpr (std::is_same_v<T, std::string>) {
    return *v;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError("bad boolean '" + *v + "' in key '" + key + "'");
  } else {
    const auto nums = parse_numbers(*v, key);
    if (nums.size() != 1) throw ConfigError("key '" + key + "' expects one number");
    if constexpr (std::is_integral_v<T>) {
      if (nums[0] != std::floor(nums[0])) throw ConfigError("key '" + key + "' expects an integer");
    }
    return static_cast<T>(nums[0]);
  }
}

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "geometry", "profile", "amplitude", "support", "samples", "window_start",
      "window_length", "b", "width", "sigma", "h", "levels", "truncation_tol",
      "extent", "quadrature_tol", "dump_matrix"};
  return keys;
}

} // namespace detail

/// One scenario per INI section:
///
///   [name]
///   geometry = strip_bump | strip_window | tube
///   profile = rectangular | cos2 | tabulated
///   amplitude = 1
///   support = 0 1
///   samples = 0 0, 0.5 0.3, 1 0      (tabulated: x value pairs)
///   window_start = 0 / window_length = 1 / b = 1
///   width = 1
///   sigma = 0.5 1 1.5
///   h = 0.02 / levels = 2 / truncation_tol = 1e-6
///   extent = -5 5                    (optional explicit truncation)
///   quadrature_tol = 1e-10 / dump_matrix = false
inline std::vector<Scenario> parse_scenarios(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  std::vector<Scenario> out;
  for (const auto& [name, sec] : tree) {
    if (sec.empty()) throw ConfigError("config key '" + name + "' outside a section");
    for (const auto& [key, value] : sec) {
      const auto& keys = detail::known_keys();
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw ConfigError("[" + name + "]: unknown key '" + key + "'");
      }
    }
    Scenario s;
    s.name = name;
    auto& g = s.geometry;
    g.family = detail::get_value<std::string>(sec, "geometry", g.family);
    g.profile = detail::get_value<std::string>(sec, "profile", g.profile);
    g.amplitude = detail::get_value(sec, "amplitude", g.amplitude);
    if (const auto v = sec.get_optional<std::string>("support")) {
      const auto nums = detail::parse_numbers(*v, "support");
      if (nums.size() != 2) throw ConfigError("[" + name + "]: support expects two numbers");
      g.support_lo = nums[0];
      g.support_hi = nums[1];
    }
    if (const auto v = sec.get_optional<std::string>("samples")) {
      const auto nums = detail::parse_numbers(*v, "samples");
      if (nums.size() % 2 != 0) throw ConfigError("[" + name + "]: samples expects x value pairs");
      for (std::size_t i = 0; i < nums.size(); i += 2) g.samples.emplace_back(nums[i], nums[i + 1]);
    }
    g.window_start = detail::get_value(sec, "window_start", g.window_start);
    g.window_length = detail::get_value(sec, "window_length", g.window_length);
    g.b = detail::get_value(sec, "b", g.b);
    g.width = detail::get_value(sec, "width", g.width);
    if (const auto v = sec.get_optional<std::string>("sigma")) {
      s.sigmas = detail::parse_numbers(*v, "sigma");
    }
    s.h = detail::get_value(sec, "h", s.h);
    s.levels = detail::get_value(sec, "levels", s.levels);
    s.truncation_tol = detail::get_value(sec, "truncation_tol", s.truncation_tol);
    if (const auto v = sec.get_optional<std::string>("extent")) {
      const auto nums = detail::parse_numbers(*v, "extent");
      if (nums.size() != 2) throw ConfigError("[" + name + "]: extent expects two numbers");
      s.extent = Interval1D{nums[0], nums[1]};
    }
    s.quadrature.abs_tol = detail::get_value(sec, "quadrature_tol", s.quadrature.abs_tol);
    s.dump_matrix = detail::get_value(sec, "dump_matrix", s.dump_matrix);
    s.validate();
    out.push_back(std::move(s));
  }
  if (out.empty()) throw ConfigError("config defines no scenario");
  return out;
}

/// Neumann window of length alpha at height b in the unit strip.
inline Scenario preset_corollary1(double alpha, double b, std::vector<double> sigmas) {
  Scenario s;
  s.name = "corollary1";
  s.geometry.family = "strip_window";
  s.geometry.window_start = 0.0;
  s.geometry.window_length = alpha;
  s.geometry.b = b;
  s.sigmas = std::move(sigmas);
  return s;
}

/// Rectangular bump of height `amplitude` on [0, length] in the unit strip.
inline Scenario preset_corollary2(double amplitude, double length, std::vector<double> sigmas) {
  Scenario s;
  s.name = "corollary2";
  s.geometry.family = "strip_bump";
  s.geometry.profile = "rectangular";
  s.geometry.amplitude = amplitude;
  s.geometry.support_lo = 0.0;
  s.geometry.support_hi = length;
  s.sigmas = std::move(sigmas);
  return s;
}

/// Unit tube with radius r on [0, length].
inline Scenario preset_corollary3(double r, double length, std::vector<double> sigmas) {
  Scenario s;
  s.name = "corollary3";
  s.geometry.family = "tube";
  s.geometry.profile = "rectangular";
  s.geometry.amplitude = r - 1.0;
  s.geometry.support_lo = 0.0;
  s.geometry.support_hi = length;
  s.sigmas = std::move(sigmas);
  return s;
}

struct ScenarioResult {
  Scenario scenario;
  std::vector<WaveguideSolve> levels; // coarse to fine
  std::vector<BoundReport> reports;   // one per sigma, riesz mean from the finest level
  std::vector<double> eps_disc;       // per sigma
  std::optional<double> faber_krahn_integral; // tubes within the single-mode area range
  bool bound_only = false;

  bool violated() const {
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (reports[i].slack_ratio && *reports[i].slack_ratio > 1.0 + eps_disc[i]) return true;
    }
    return false;
  }
};

/// Discretisation tolerance for the slack ratio: change of the Riesz mean
/// between the two finest grids, relative to the bound.
inline double discretization_tolerance(double coarse, double fine, double bound) {
  const double d = std::fabs(fine - coarse);
  if (bound > 0.0) return d / bound;
  return d;
}

/// Bound side only, no eigensolve.
inline ScenarioResult run_bound_only(const Scenario& s) {
  s.validate();
  ScenarioResult res;
  res.scenario = s;
  res.bound_only = true;
  const auto g = s.geometry.build();
  for (double sigma : s.sigmas) {
    res.reports.push_back(lt_bound(g, sigma, s.quadrature));
    res.eps_disc.push_back(0.0);
  }
  if (g.is_tube()) {
    try {
      res.faber_krahn_integral =
          faber_krahn_bound_integral(g, BoundSpec{0.5, 1, g.threshold()}, s.quadrature).value;
    } catch (const ConfigError&) {
    }
  }
  return res;
}

/// Assemble, solve and compare with the bound for every sigma. All levels
/// share one truncation, sized on the finest grid.
inline ScenarioResult run_scenario(const Scenario& s, const SolveOptions& opts = {}) {
  ScenarioResult res = run_bound_only(s);
  res.bound_only = false;
  const auto g = s.geometry.build();
  const auto hs = s.steps();
  GridSpec finest = s.grid(hs.back());
  if (!finest.axial_extent) finest.gap_estimate = pilot_gap(g, finest, opts);
  for (std::size_t k = 0; k < hs.size(); ++k) {
    GridSpec grid = finest;
    grid.h = hs[k];
    SolveOptions o = opts;
    if (k + 1 != hs.size() || !s.dump_matrix) o.on_operator = nullptr;
    res.levels.push_back(solve_on_grid(g, grid, o));
  }
  const WaveguideSolve& fine = res.levels.back();
  for (std::size_t i = 0; i < s.sigmas.size(); ++i) {
    const double sigma = s.sigmas[i];
    attach_riesz_mean(res.reports[i], fine.riesz_mean(sigma));
    if (res.levels.size() >= 2) {
      const double coarse = res.levels[res.levels.size() - 2].riesz_mean(sigma);
      res.eps_disc[i] = discretization_tolerance(coarse, fine.riesz_mean(sigma),
                                                 res.reports[i].bound);
    }
  }
  return res;
}

struct ConvergenceLevel {
  double h = 0.0;
  int certified_count = 0;
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> riesz_means;  // per sigma
};

struct ConvergenceTable {
  Scenario scenario;
  std::vector<ConvergenceLevel> levels;
  std::vector<RichardsonEstimate> eigenvalue_limits; // per eigenvalue index common to all levels
  std::vector<RichardsonEstimate> riesz_limits;      // per sigma
};

/// Solves on k grids h * 2^(k-1), ..., h sharing one truncation and
/// extrapolates eigenvalues and Riesz means.
inline ConvergenceTable run_convergence(const Scenario& s, int k,
                                        const SolveOptions& opts = {}) {
  if (k < 3) throw ConfigError("convergence study needs at least 3 levels");
  Scenario sc = s;
  sc.levels = k;
  sc.validate();
  ConvergenceTable t;
  t.scenario = sc;
  const auto g = sc.geometry.build();
  const auto hs = sc.steps();
  GridSpec finest = sc.grid(hs.back());
  if (!finest.axial_extent) finest.gap_estimate = pilot_gap(g, finest, opts);
  for (double h : hs) {
    GridSpec grid = finest;
    grid.h = h;
    const auto solve = solve_on_grid(g, grid, opts);
    ConvergenceLevel lv;
    lv.h = h;
    lv.certified_count = solve.certified_count;
    lv.eigenvalues = solve.eigenvalues();
    for (double sigma : sc.sigmas) lv.riesz_means.push_back(solve.riesz_mean(sigma));
    t.levels.push_back(std::move(lv));
  }
  std::size_t common = t.levels.front().eigenvalues.size();
  for (const auto& lv : t.levels) common = std::min(common, lv.eigenvalues.size());
  for (std::size_t j = 0; j < common; ++j) {
    std::vector<double> v;
    for (const auto& lv : t.levels) v.push_back(lv.eigenvalues[j]);
    t.eigenvalue_limits.push_back(richardson(hs, v));
  }
  for (std::size_t i = 0; i < sc.sigmas.size(); ++i) {
    std::vector<double> v;
    for (const auto& lv : t.levels) v.push_back(lv.riesz_means[i]);
    t.riesz_limits.push_back(richardson(hs, v));
  }
  return t;
}

struct WeakCouplingRow {
  double alpha = 0.0;
  std::optional<double> lambda; // absent when no bound state is computed
  double asymptote = 0.0;       // pi^2 - pi^4 F1^2 alpha^2
  double lower = 0.0;           // order-4 polynomial
  bool bound_satisfied = true;
  std::optional<double> scaled_binding; // (pi^2 - lambda) / (pi^4 F1^2 alpha^2)
};

struct StrongCouplingRow {
  double alpha = 0.0;
  double riesz_mean = 0.0;
  double bracket_lower = 0.0;
  double bracket_upper = 0.0;
  double lt_bound = 0.0;
  int count = 0;
  bool ordered = false; // lower <= riesz <= min(upper, lt_bound)
};

struct AsymptoticsConfig {
  double h = 0.01;
  int levels = 1;          // > 1: Richardson-extrapolated values
  double truncation_tol = 1e-8;
  double sigma = 0.5;
};

namespace detail {

inline double extrapolate_levels(const std::vector<double>& hs, const std::vector<double>& v) {
  if (v.size() == 1) return v.front();
  return richardson(hs, v).extrapolated;
}

} // namespace detail

/// cos^2 bump alpha * cos^2(pi xi / 2) on [-1, 1] (unit first moment).
inline std::vector<WeakCouplingRow> run_weak_coupling(const std::vector<double>& alphas,
                                                      const AsymptoticsConfig& cfg,
                                                      const SolveOptions& opts = {}) {
  const Profile unit = Profile::smooth_bump(1.0, -1.0, 1.0);
  const auto mom = profile_moments(unit, 3);
  const WeakCouplingMoments F{mom[0], mom[1], mom[2]};
  const double pi2 = std::numbers::pi * std::numbers::pi;
  std::vector<WeakCouplingRow> rows;
  for (double alpha : alphas) {
    WeakCouplingRow row;
    row.alpha = alpha;
    row.asymptote = weak_coupling_asymptote(F.F1, alpha);
    row.lower = weak_coupling_lower(F, alpha, 4);
    if (alpha > 0.0) {
      Scenario s;
      s.geometry.family = "strip_bump";
      s.geometry.profile = "cos2";
      s.geometry.amplitude = alpha;
      s.geometry.support_lo = -1.0;
      s.geometry.support_hi = 1.0;
      s.h = cfg.h;
      s.levels = cfg.levels;
      s.truncation_tol = cfg.truncation_tol;
      const auto g = s.geometry.build();
      const auto hs = s.steps();
      GridSpec finest = s.grid(hs.back());
      finest.gap_estimate = pilot_gap(g, finest, opts);
      std::vector<double> lam;
      for (double h : hs) {
        GridSpec grid = finest;
        grid.h = h;
        const auto solve = solve_on_grid(g, grid, opts);
        if (solve.binding.empty()) break;
        lam.push_back(solve.eigenvalues().front());
      }
      if (lam.size() == hs.size()) {
        row.lambda = detail::extrapolate_levels(hs, lam);
        row.bound_satisfied = *row.lambda >= row.lower;
        row.scaled_binding = (pi2 - *row.lambda) / (pi2 * pi2 * F.F1 * F.F1 * alpha * alpha);
      }
    }
    rows.push_back(row);
  }
  return rows;
}

/// b = 1 Neumann window of length alpha.
inline std::vector<StrongCouplingRow> run_strong_coupling(const std::vector<double>& alphas,
                                                          const AsymptoticsConfig& cfg,
                                                          const SolveOptions& opts = {}) {
  std::vector<StrongCouplingRow> rows;
  for (double alpha : alphas) {
    if (!(alpha > 0.0)) throw ConfigError("strong coupling needs alpha > 0");
    StrongCouplingRow row;
    row.alpha = alpha;
    const auto [lo, up] = bracket_bounds(alpha, cfg.sigma);
    row.bracket_lower = lo;
    row.bracket_upper = up;
    Scenario s = preset_corollary1(alpha, 1.0, {cfg.sigma});
    s.h = cfg.h;
    s.levels = cfg.levels;
    s.truncation_tol = cfg.truncation_tol;
    const auto g = s.geometry.build();
    row.lt_bound = lt_bound(g, cfg.sigma).bound;
    const auto hs = s.steps();
    GridSpec finest = s.grid(hs.back());
    finest.gap_estimate = pilot_gap(g, finest, opts);
    std::vector<double> tr;
    for (double h : hs) {
      GridSpec grid = finest;
      grid.h = h;
      const auto solve = solve_on_grid(g, grid, opts);
      tr.push_back(solve.riesz_mean(cfg.sigma));
      row.count = solve.certified_count;
    }
    row.riesz_mean = detail::extrapolate_levels(hs, tr);
    row.ordered = row.bracket_lower <= row.riesz_mean &&
                  row.riesz_mean <= std::min(row.bracket_upper, row.lt_bound);
    rows.push_back(row);
  }
  return rows;
}

} // namespace ltwg
