#pragma once

// Full discrete spectrum of H below the threshold for a waveguide: assembly,
// truncation sizing, angular sectors for tubes, and certified solves.

#include "ltwg/discretize.hpp"
#include "ltwg/eigensolve.hpp"
#include "ltwg/geometry.hpp"
#include "ltwg/ltbound.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace ltwg {

struct SectorSolve {
  int m = 0;
  int multiplicity = 1;
  Spectrum spectrum;
  double threshold_shift = 0.0;
  std::size_t dimension = 0;
  GridInfo grid; // node list dropped
};

/// Bound states of the truncated, discretised guide. Binding energies are
/// measured from the discrete threshold, which removes the transverse
/// discretisation error common to bound states and threshold; eigenvalues
/// are reported as threshold_exact - binding.
struct WaveguideSolve {
  double h = 0.0;
  double threshold_exact = 0.0;
  double threshold_discrete = 0.0;
  double gap_used = 0.0;
  double padding = 0.0;
  int certified_count = 0; // with angular multiplicity
  std::vector<SectorSolve> sectors;
  std::vector<double> binding; // descending, with multiplicity

  std::vector<double> eigenvalues() const {
    std::vector<double> e;
    e.reserve(binding.size());
    for (double b : binding) e.push_back(threshold_exact - b);
    return e;
  }

  double riesz_mean(double sigma) const {
    double s = 0.0;
    for (double b : binding) s += std::pow(b, sigma);
    return s;
  }

  double smallest_binding() const { return binding.empty() ? 0.0 : binding.back(); }
};

struct SolveOptions {
  EigenOptions eigen;
  double pilot_cells = 16.0;    // pilot grid step = reference length / pilot_cells
  double gap_safety = 0.7;      // padding sized for this fraction of the weakest binding
  std::function<void(const SparseSymOperator&)> on_operator; // sees each assembled operator
};

namespace detail {

inline Spectrum certified_solve(const SparseSymOperator& op, double threshold,
                                const EigenOptions& opts) {
  try {
    return eigen_below(op, threshold, opts);
  } catch (const ThresholdBreakdown&) {
    return eigen_below(op, threshold * (1.0 - 1e-9), opts);
  }
}

inline std::vector<int> tube_sectors(const WaveguideGeometry& g) {
  std::vector<int> ms;
  const auto& dev = std::get<TubeRadial>(g.family()).deviation;
  const double r_max = g.reference_length() + dev.amplitude();
  for (int m = 0; m <= kMaxBesselOrder; ++m) {
    const double k = bessel_zero(m, 1) / r_max;
    if (strictly_below(k * k, g.threshold())) ms.push_back(m);
  }
  if (ms.empty()) ms.push_back(0);
  return ms;
}

} // namespace detail

/// Solves on the grid `grid`, which must already fix the truncation (gap
/// estimate or explicit extent).
inline WaveguideSolve solve_on_grid(const WaveguideGeometry& g, const GridSpec& grid,
                                    const SolveOptions& opts = {}) {
  WaveguideSolve out;
  out.h = grid.h;
  out.threshold_exact = g.threshold();
  out.gap_used = grid.gap_estimate.value_or(0.0);
  const auto run = [&](const SparseSymOperator& op, int m, int mult) {
    if (opts.on_operator) opts.on_operator(op);
    SectorSolve s;
    s.m = m;
    s.multiplicity = mult;
    s.threshold_shift = op.threshold_shift;
    s.dimension = static_cast<std::size_t>(op.dimension());
    s.grid = op.grid;
    s.grid.nodes.clear();
    s.spectrum = detail::certified_solve(op, op.threshold_shift, opts.eigen);
    out.threshold_discrete = op.threshold_shift;
    out.padding = op.grid.padding;
    out.certified_count += mult * s.spectrum.certified_count;
    for (double e : s.spectrum.eigenvalues) {
      for (int k = 0; k < mult; ++k) out.binding.push_back(op.threshold_shift - e);
    }
    out.sectors.push_back(std::move(s));
  };
  if (g.is_tube()) {
    for (int m : detail::tube_sectors(g)) {
      run(assemble_tube_axisym(g, m, grid), m, m == 0 ? 1 : 2);
    }
  } else {
    run(assemble_strip(g, grid), 0, 1);
  }
  std::sort(out.binding.begin(), out.binding.end(), std::greater<>());
  return out;
}

/// Binding-energy scale used to size the axial truncation: the weakest
/// binding found by a coarse pilot solve whose padding is sized from the
/// sigma = 1/2 bound, scaled by opts.gap_safety.
inline double pilot_gap(const WaveguideGeometry& g, const GridSpec& base,
                        const SolveOptions& opts = {}) {
  const double theta = g.threshold();
  const double b = lt_bound(g, 0.5).bound;
  if (!(b > 0.0)) return theta;
  const double guess = 0.25 * std::min(b * b, theta);
  GridSpec pilot = base;
  pilot.h = std::max(base.h, g.reference_length() / opts.pilot_cells);
  pilot.gap_estimate = guess;
  pilot.axial_extent.reset();
  SolveOptions quiet = opts;
  quiet.on_operator = nullptr;
  const auto s = solve_on_grid(g, pilot, quiet);
  if (s.binding.empty()) return guess;
  return opts.gap_safety * s.smallest_binding();
}

/// Solve with automatic truncation. An explicit extent or gap estimate in
/// `grid` is honoured; otherwise a pilot solve sizes the padding, and the
/// solve is repeated once if it finds a more weakly bound state than the
/// padding was sized for.
inline WaveguideSolve solve_waveguide(const WaveguideGeometry& g, const GridSpec& grid,
                                      const SolveOptions& opts = {}) {
  if (grid.axial_extent || grid.gap_estimate) return solve_on_grid(g, grid, opts);
  GridSpec spec = grid;
  spec.gap_estimate = pilot_gap(g, grid, opts);
  WaveguideSolve s = solve_on_grid(g, spec, opts);
  if (!s.binding.empty() && s.smallest_binding() < *spec.gap_estimate) {
    spec.gap_estimate = opts.gap_safety * s.smallest_binding();
    s = solve_on_grid(g, spec, opts);
  }
  return s;
}

} // namespace ltwg
