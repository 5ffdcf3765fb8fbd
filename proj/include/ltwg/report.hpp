#pragma once

// JSON and CSV emission. JSON is the authoritative record and is a pure
// function of the inputs (no timestamps, no timings).

#include "ltwg/scenario.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace ltwg {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline std::string fmt(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace detail

inline Json to_json(const GeometryConfig& g) {
  Json j;
  j["family"] = g.family;
  if (g.family != "strip_window") {
    j["profile"] = g.profile;
    if (g.profile == "tabulated") {
      Json s = Json::array();
      for (const auto& [x, v] : g.samples) s.push_back({x, v});
      j["samples"] = s;
    } else {
      j["amplitude"] = g.amplitude;
      j["support"] = {g.support_lo, g.support_hi};
    }
  } else {
    j["window_start"] = g.window_start;
    j["window_length"] = g.window_length;
    j["b"] = g.b;
  }
  j["width"] = g.width;
  return j;
}

inline Json to_json(const GridInfo& g) {
  return Json{{"scheme", g.scheme},
              {"xi_min", g.xi_min},
              {"xi_max", g.xi_max},
              {"h_axial", g.h_axial},
              {"h_transverse", g.h_transverse},
              {"axial_nodes", g.axial_nodes},
              {"transverse_lines", g.transverse_lines},
              {"padding", g.padding},
              {"staircase_error", g.staircase_error}};
}

inline Json to_json(const Spectrum& s) {
  double max_res = 0.0;
  for (double r : s.residuals) max_res = std::max(max_res, r);
  return Json{{"eigenvalues", s.eigenvalues},
              {"certified_count", s.certified_count},
              {"threshold", s.threshold},
              {"method", s.method},
              {"max_residual", max_res},
              {"residual_tol", s.tol},
              {"factorizations", s.factorizations},
              {"lanczos_steps", s.lanczos_steps},
              {"slices", s.slices}};
}

inline Json to_json(const WaveguideSolve& w) {
  Json sectors = Json::array();
  for (const auto& s : w.sectors) {
    sectors.push_back(Json{{"m", s.m},
                           {"multiplicity", s.multiplicity},
                           {"dimension", s.dimension},
                           {"threshold_shift", s.threshold_shift},
                           {"grid", to_json(s.grid)},
                           {"spectrum", to_json(s.spectrum)}});
  }
  return Json{{"h", w.h},
              {"threshold_exact", w.threshold_exact},
              {"threshold_discrete", w.threshold_discrete},
              {"gap_estimate", w.gap_used},
              {"padding", w.padding},
              {"certified_count", w.certified_count},
              {"eigenvalues", w.eigenvalues()},
              {"binding_energies", w.binding},
              {"sectors", sectors}};
}

/// Field names: sigma, r, Lcl, integral, bound, riesz_mean, slack_ratio,
/// diagnostics.
inline Json to_json(const BoundReport& r, double eps_disc) {
  Json diag{{"eps_disc", eps_disc},
            {"quadrature_error", r.quadrature_error},
            {"quadrature_intervals", r.quadrature_intervals},
            {"exact_integral", r.exact_integral}};
  return Json{{"sigma", r.sigma},
              {"r", r.r},
              {"Lcl", r.Lcl},
              {"integral", r.integral},
              {"bound", r.bound},
              {"riesz_mean", detail::optional_json(r.riesz_mean)},
              {"slack_ratio", r.slack_ratio ? detail::number_or_null(*r.slack_ratio) : Json(nullptr)},
              {"diagnostics", diag}};
}

inline Json to_json(const ScenarioResult& res) {
  Json j;
  j["name"] = res.scenario.name;
  j["geometry"] = to_json(res.scenario.geometry);
  j["mode"] = res.bound_only ? "bound-only" : "verify";
  j["grid_steps"] = res.bound_only ? Json::array() : Json(res.scenario.steps());
  j["truncation_tol"] = res.scenario.truncation_tol;
  Json reports = Json::array();
  for (std::size_t i = 0; i < res.reports.size(); ++i) {
    reports.push_back(to_json(res.reports[i], res.eps_disc[i]));
  }
  j["reports"] = reports;
  if (res.faber_krahn_integral) j["faber_krahn_integral"] = *res.faber_krahn_integral;
  Json levels = Json::array();
  for (const auto& lv : res.levels) levels.push_back(to_json(lv));
  j["levels"] = levels;
  j["inequality_holds"] = !res.violated();
  return j;
}

inline Json to_json(const RichardsonEstimate& r) {
  return Json{{"extrapolated", r.extrapolated},
              {"observed_order", detail::number_or_null(r.order)},
              {"error_estimate", r.error_estimate}};
}

inline Json to_json(const ConvergenceTable& t) {
  Json levels = Json::array();
  for (const auto& lv : t.levels) {
    levels.push_back(Json{{"h", lv.h},
                          {"certified_count", lv.certified_count},
                          {"eigenvalues", lv.eigenvalues},
                          {"riesz_means", lv.riesz_means}});
  }
  Json eig = Json::array();
  for (const auto& r : t.eigenvalue_limits) eig.push_back(to_json(r));
  Json rm = Json::array();
  for (const auto& r : t.riesz_limits) rm.push_back(to_json(r));
  return Json{{"name", t.scenario.name},
              {"geometry", to_json(t.scenario.geometry)},
              {"sigmas", t.scenario.sigmas},
              {"levels", levels},
              {"eigenvalue_limits", eig},
              {"riesz_limits", rm}};
}

/// Column order of the scenario table.
inline const char* scenario_csv_header() {
  return "name,sigma,r,Lcl,integral,bound,riesz_mean,slack_ratio,eps_disc,certified_count,h,"
         "quadrature_error";
}

inline void write_scenario_csv(std::ostream& os, const ScenarioResult& res) {
  os << scenario_csv_header() << '\n';
  const int count = res.levels.empty() ? -1 : res.levels.back().certified_count;
  for (std::size_t i = 0; i < res.reports.size(); ++i) {
    const auto& r = res.reports[i];
    os << res.scenario.name << ',' << detail::fmt(r.sigma) << ',' << detail::fmt(r.r) << ','
       << detail::fmt(r.Lcl) << ',' << detail::fmt(r.integral) << ',' << detail::fmt(r.bound)
       << ',' << (r.riesz_mean ? detail::fmt(*r.riesz_mean) : "") << ','
       << (r.slack_ratio ? detail::fmt(*r.slack_ratio) : "") << ','
       << detail::fmt(res.eps_disc[i]) << ',' << (count >= 0 ? std::to_string(count) : "")
       << ',' << (res.levels.empty() ? "" : detail::fmt(res.levels.back().h)) << ','
       << detail::fmt(r.quadrature_error) << '\n';
  }
}

/// Columns: h, certified_count, lambda_1..lambda_k, riesz(sigma_1).., then
/// one "extrapolated" row (h = 0) and one "order" row.
inline void write_convergence_csv(std::ostream& os, const ConvergenceTable& t) {
  const std::size_t k = t.eigenvalue_limits.size();
  os << "h,certified_count";
  for (std::size_t j = 0; j < k; ++j) os << ",lambda_" << j + 1;
  for (double s : t.scenario.sigmas) os << ",riesz_" << detail::fmt(s);
  os << '\n';
  for (const auto& lv : t.levels) {
    os << detail::fmt(lv.h) << ',' << lv.certified_count;
    for (std::size_t j = 0; j < k; ++j) os << ',' << detail::fmt(lv.eigenvalues[j]);
    for (double v : lv.riesz_means) os << ',' << detail::fmt(v);
    os << '\n';
  }
  os << "0,";
  for (const auto& r : t.eigenvalue_limits) os << ',' << detail::fmt(r.extrapolated);
  for (const auto& r : t.riesz_limits) os << ',' << detail::fmt(r.extrapolated);
  os << "\norder,";
  for (const auto& r : t.eigenvalue_limits) os << ',' << detail::fmt(r.order);
  for (const auto& r : t.riesz_limits) os << ',' << detail::fmt(r.order);
  os << '\n';
}

inline void write_weak_csv(std::ostream& os, const std::vector<WeakCouplingRow>& rows) {
  os << "alpha,lambda_computed,asymptote,weak_coupling_lower,bound_satisfied,scaled_binding\n";
  for (const auto& r : rows) {
    os << detail::fmt(r.alpha) << ',' << (r.lambda ? detail::fmt(*r.lambda) : "") << ','
       << detail::fmt(r.asymptote) << ',' << detail::fmt(r.lower) << ','
       << (r.bound_satisfied ? 1 : 0) << ','
       << (r.scaled_binding ? detail::fmt(*r.scaled_binding) : "") << '\n';
  }
}

inline void write_strong_csv(std::ostream& os, const std::vector<StrongCouplingRow>& rows) {
  os << "alpha,riesz_mean,bracket_lower,bracket_upper,lt_bound,count,ordered\n";
  for (const auto& r : rows) {
    os << detail::fmt(r.alpha) << ',' << detail::fmt(r.riesz_mean) << ','
       << detail::fmt(r.bracket_lower) << ',' << detail::fmt(r.bracket_upper) << ','
       << detail::fmt(r.lt_bound) << ',' << r.count << ',' << (r.ordered ? 1 : 0) << '\n';
  }
}

} // namespace ltwg
