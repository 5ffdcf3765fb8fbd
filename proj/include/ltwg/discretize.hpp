#pragma once

// Sparse assembly of the Dirichlet-Neumann Laplacian on truncated waveguides.
//
// Strips: vertex-quadrature bilinear elements (the average of the two P1
// triangulations of each quadrilateral) with lumped mass. On rectangular
// cells this is the 5-point stencil; Neumann rows keep their half cells, which
// is the ghost-node mirror stencil. Continuous bump profiles use a
// boundary-fitted column mapping; discontinuous ones are stair-cased to
// grid lines placed at the jump heights.
//
// Tubes: vertex-centred finite volumes in (xi, rho) on a half-offset radial
// grid, weighted by rho. The mass-symmetrised matrix is the sqrt(rho)
// similarity transform of the cylindrical operator.

#include "ltwg/error.hpp"
#include "ltwg/geometry.hpp"
#include "ltwg/operator.hpp"
#include "ltwg/special.hpp"
#include "ltwg/transverse.hpp"
#include "ltwg/tridiagonal.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace ltwg {

struct GridSpec {
  double h = 0.02;               // core step, axial and transverse
  double truncation_tol = 1e-6;  // decay tolerance for domain_truncation
  std::optional<double> gap_estimate; // binding energy used to size the padding
  std::optional<Interval1D> axial_extent; // explicit uniform extent, no padding
  double margin = 0.5;  // uniform core beyond the support, in reference lengths
  double grading = 0.5; // far-field grading length, in reference lengths

  void validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("grid step must be positive");
    if (!(truncation_tol > 0.0 && truncation_tol < 1.0)) {
      throw ConfigError("truncation tolerance must lie in (0, 1)");
    }
    if (!(margin >= 0.0) || !(grading > 0.0)) throw ConfigError("bad grid margin/grading");
  }

  /// Same grid for the geometry scaled by s.
  GridSpec scaled(double s) const {
    GridSpec g = *this;
    g.h = h * s;
    if (gap_estimate) g.gap_estimate = *gap_estimate / (s * s);
    if (axial_extent) g.axial_extent = Interval1D{axial_extent->lo * s, axial_extent->hi * s};
    return g;
  }
};

struct AxialMesh {
  std::vector<double> nodes;
  double padding = 0.0;
};

namespace detail {

inline void append_uniform(std::vector<double>& x, double b, double h) {
  const double a = x.back();
  if (!(b > a)) return;
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-9)));
  for (int k = 1; k < n; ++k) x.push_back(a + (b - a) * k / n);
  x.push_back(b);
}

inline std::vector<double> uniform_lines(double lo, double hi, double h) {
  std::vector<double> x{lo};
  append_uniform(x, hi, h);
  return x;
}

} // namespace detail

/// Axial nodes: uniform with breakpoints on grid lines over the core, then a
/// geometrically graded far field out to the truncation padding.
inline AxialMesh axial_mesh(const WaveguideGeometry& g, const GridSpec& spec) {
  spec.validate();
  const double L = g.reference_length();
  const Interval1D s = g.perturbation_support();
  double lo = 0.0;
  double hi = 0.0;
  double pad = 0.0;
  if (spec.axial_extent) {
    lo = spec.axial_extent->lo;
    hi = spec.axial_extent->hi;
    if (!(lo < hi) || s.lo < lo || s.hi > hi) {
      throw ConfigError("axial extent must contain the perturbation support");
    }
  } else {
    if (!spec.gap_estimate) {
      throw ConfigError("grid needs either a gap estimate or an explicit axial extent");
    }
    pad = domain_truncation(*spec.gap_estimate, spec.truncation_tol);
    lo = s.lo - spec.margin * L;
    hi = s.hi + spec.margin * L;
    if (!(hi > lo)) {
      lo -= 0.5 * spec.h;
      hi += 0.5 * spec.h;
    }
  }
  std::vector<double> breaks = g.breakpoints();
  breaks.push_back(s.lo);
  breaks.push_back(s.hi);
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<double> core{lo};
  for (double b : breaks) {
    if (b > lo && b <= hi) detail::append_uniform(core, b, spec.h);
  }
  AxialMesh mesh;
  mesh.padding = pad;
  if (pad <= 0.0) {
    mesh.nodes = std::move(core);
    return mesh;
  }
  const double ell = spec.grading * L;
  const double span = ell * std::log1p(pad / ell);
  const int k_max = std::max(1, static_cast<int>(std::ceil(span / spec.h - 1e-9)));
  std::vector<double> tail(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) tail[k - 1] = ell * std::expm1(span * k / k_max / ell);
  tail.back() = pad;
  mesh.nodes.reserve(core.size() + 2 * tail.size());
  for (auto it = tail.rbegin(); it != tail.rend(); ++it) mesh.nodes.push_back(lo - *it);
  mesh.nodes.insert(mesh.nodes.end(), core.begin(), core.end());
  for (double t : tail) mesh.nodes.push_back(hi + t);
  return mesh;
}

namespace detail {

// Accumulates the upper triangle of the stiffness matrix and the lumped mass,
// then forms M^{-1/2} K M^{-1/2} with bitwise symmetric storage.
class SymmetricAssembler {
public:
  explicit SymmetricAssembler(std::size_t n) : mass_(n, 0.0) {}

  void add(int i, int j, double v) {
    if (i < 0 || j < 0) return;
    if (i > j) std::swap(i, j);
    entries_.emplace_back(i, j, v);
  }
  void add_mass(int i, double m) {
    if (i >= 0) mass_[static_cast<std::size_t>(i)] += m;
  }

  SparseSymOperator build(GridInfo grid) {
    const auto n = static_cast<Eigen::Index>(mass_.size());
    for (auto& t : entries_) {
      const double s = std::sqrt(mass_[static_cast<std::size_t>(t.row())] *
                                 mass_[static_cast<std::size_t>(t.col())]);
      t = Eigen::Triplet<double>(t.row(), t.col(), t.value() / s);
    }
    Eigen::SparseMatrix<double> upper(n, n);
    upper.setFromTriplets(entries_.begin(), entries_.end());
    Eigen::SparseMatrix<double> full = upper.selfadjointView<Eigen::Upper>();
    return SparseSymOperator::from_parts(std::move(full), std::move(mass_), std::move(grid));
  }

private:
  std::vector<Eigen::Triplet<double>> entries_;
  std::vector<double> mass_;
};

struct Point {
  double x;
  double y;
};

// Vertex-quadrature bilinear element on a counter-clockwise quadrilateral.
// Each corner contributes half the P1 stiffness of its corner triangle and a
// quarter-cell mass.
inline void add_quad(SymmetricAssembler& as, const std::array<int, 4>& id,
                     const std::array<Point, 4>& p) {
  for (int k = 0; k < 4; ++k) {
    const int a = k;
    const int b = (k + 1) % 4;
    const int c = (k + 3) % 4;
    const Point ea{p[c].x - p[b].x, p[c].y - p[b].y};
    const Point eb{p[a].x - p[c].x, p[a].y - p[c].y};
    const Point ec{p[b].x - p[a].x, p[b].y - p[a].y};
    const double area = 0.5 * (eb.x * ec.y - eb.y * ec.x);
    const std::array<int, 3> v{id[a], id[b], id[c]};
    const std::array<Point, 3> e{ea, eb, ec};
    for (int r = 0; r < 3; ++r) {
      for (int s = r; s < 3; ++s) {
        if (v[r] < 0 || v[s] < 0) continue;
        const double kij = (e[r].x * e[s].x + e[r].y * e[s].y) / (4.0 * area);
        as.add(v[r], v[s], 0.5 * kij);
      }
    }
    as.add_mass(id[a], 0.5 * area);
  }
}

inline double strip_lower_hint(const WaveguideGeometry& g) {
  const double L = g.reference_length();
  if (const auto* w = std::get_if<StripNeumannWindow>(&g.family())) {
    if (w->length > 0.0) {
      const double k = std::numbers::pi / (2.0 * w->b);
      return k * k;
    }
    return g.threshold();
  }
  const auto& bump = std::get<StripBump>(g.family());
  const double k = std::numbers::pi / (L + bump.profile.amplitude());
  return k * k;
}

} // namespace detail

/// Assembles -Laplace on a strip with a bump or a Neumann window/crack,
/// truncated axially with Dirichlet ends.
inline SparseSymOperator assemble_strip(const WaveguideGeometry& g, const GridSpec& spec) {
  if (g.is_tube()) throw ConfigError("assemble_strip: geometry is a tube");
  const AxialMesh mesh = axial_mesh(g, spec);
  const std::vector<double>& X = mesh.nodes;
  const int nx = static_cast<int>(X.size());
  const double L = g.reference_length();
  const double h = spec.h;

  GridInfo info;
  info.xi_min = X.front();
  info.xi_max = X.back();
  info.h_axial = h;
  info.axial_nodes = X.size();
  info.padding = mesh.padding;

  const auto* window = std::get_if<StripNeumannWindow>(&g.family());
  const Profile* profile = window ? nullptr : &std::get<StripBump>(g.family()).profile;
  const bool mapped = profile && profile->amplitude() > 0.0 && profile->continuous();
  std::vector<double> base;

  std::optional<detail::SymmetricAssembler> as;
  if (mapped) {
    // Column i carries N + 1 equally spaced nodes between 0 and L + f(X_i).
    const int N = std::max(2, static_cast<int>(std::ceil(L / h - 1e-9)));
    const auto stride = static_cast<std::size_t>(N + 1);
    std::vector<int> id(static_cast<std::size_t>(nx) * stride, -1);
    int n = 0;
    for (int i = 1; i + 1 < nx; ++i) {
      const double H = L + (*profile)(X[i]);
      for (int j = 1; j < N; ++j) {
        id[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(j)] = n++;
        info.nodes.push_back({X[i], H * j / N});
      }
    }
    const auto at = [&](int i, int j) {
      return id[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(j)];
    };
    as.emplace(static_cast<std::size_t>(n));
    for (int i = 0; i + 1 < nx; ++i) {
      const double h0 = (L + (*profile)(X[i])) / N;
      const double h1 = (L + (*profile)(X[i + 1])) / N;
      for (int j = 0; j < N; ++j) {
        detail::add_quad(*as, {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)},
                         {detail::Point{X[i], h0 * j}, detail::Point{X[i + 1], h1 * j},
                          detail::Point{X[i + 1], h1 * (j + 1)},
                          detail::Point{X[i], h0 * (j + 1)}});
      }
    }
    info.scheme = "mapped-fe";
    info.transverse_lines = stride;
    info.h_transverse = (L + profile->amplitude()) / N;
    base = uniform_nodes(0.0, L, N);
  } else {
    // Tensor grid with lines at the window height and the bump top.
    double w0 = 0.0;
    double w1 = 0.0;
    bool crack = false;
    bool neumann_top = false;
    std::vector<double> Y;
    if (window && window->length > 0.0) {
      w0 = window->start;
      w1 = window->start + window->length;
      if (window->b < L) {
        crack = true;
        Y = detail::uniform_lines(0.0, window->b, h);
        detail::append_uniform(Y, L, h);
      } else {
        neumann_top = true;
      }
    }
    if (Y.empty()) Y = detail::uniform_lines(0.0, L, h);
    const int jL = static_cast<int>(Y.size()) - 1;
    const int jb = crack ? static_cast<int>(std::find(Y.begin(), Y.end(), window->b) - Y.begin())
                         : -1;
    if (profile && profile->amplitude() > 0.0) {
      detail::append_uniform(Y, L + profile->amplitude(), h);
    }
    const int ny = static_cast<int>(Y.size());
    const auto top = [&](double x) { return profile ? L + (*profile)(x) : L; };

    std::vector<char> active(static_cast<std::size_t>(nx - 1) * static_cast<std::size_t>(ny - 1));
    for (int c = 0; c + 1 < nx; ++c) {
      const double T = top(0.5 * (X[c] + X[c + 1]));
      for (int r = 0; r + 1 < ny; ++r) {
        active[static_cast<std::size_t>(c) * (ny - 1) + r] = 0.5 * (Y[r] + Y[r + 1]) < T;
      }
    }
    const auto act = [&](int c, int r) {
      if (c < 0 || r < 0 || c + 1 >= nx || r + 1 >= ny) return false;
      return active[static_cast<std::size_t>(c) * (ny - 1) + r] != 0;
    };
    const auto cell = [&](int i, int j) { return static_cast<std::size_t>(i) * ny + j; };
    std::vector<int> id(static_cast<std::size_t>(nx) * ny, -1);
    std::vector<int> upper_id(crack ? id.size() : 0, -1);
    int n = 0;
    for (int i = 1; i + 1 < nx; ++i) {
      const bool inside = X[i] > w0 && X[i] < w1;
      for (int j = 1; j < ny; ++j) {
        const bool below = act(i - 1, j - 1) && act(i, j - 1);
        const bool above = act(i - 1, j) && act(i, j);
        if (crack && j == jb && inside) {
          id[cell(i, j)] = n++;
          info.nodes.push_back({X[i], Y[j]});
          upper_id[cell(i, j)] = n++;
          info.nodes.push_back({X[i], Y[j]});
        } else if ((below && above) || (neumann_top && j == jL && below && inside)) {
          id[cell(i, j)] = n++;
          info.nodes.push_back({X[i], Y[j]});
        }
      }
    }
    as.emplace(static_cast<std::size_t>(n));
    for (int c = 0; c + 1 < nx; ++c) {
      for (int r = 0; r + 1 < ny; ++r) {
        if (!act(c, r)) continue;
        std::array<int, 4> ids{id[cell(c, r)], id[cell(c + 1, r)], id[cell(c + 1, r + 1)],
                               id[cell(c, r + 1)]};
        if (crack && r == jb) {
          if (upper_id[cell(c, r)] >= 0) ids[0] = upper_id[cell(c, r)];
          if (upper_id[cell(c + 1, r)] >= 0) ids[1] = upper_id[cell(c + 1, r)];
        }
        detail::add_quad(*as, ids,
                         {detail::Point{X[c], Y[r]}, detail::Point{X[c + 1], Y[r]},
                          detail::Point{X[c + 1], Y[r + 1]}, detail::Point{X[c], Y[r + 1]}});
      }
    }
    if (profile) {
      for (int c = 0; c + 1 < nx; ++c) {
        int r = 0;
        while (act(c, r)) ++r;
        info.staircase_error = std::max(info.staircase_error,
                                        std::fabs(Y[r] - top(0.5 * (X[c] + X[c + 1]))));
      }
    }
    info.scheme = "tensor-fv";
    info.transverse_lines = Y.size();
    for (int j = 0; j + 1 < ny; ++j) info.h_transverse = std::max(info.h_transverse, Y[j + 1] - Y[j]);
    base.assign(Y.begin(), Y.begin() + jL + 1);
  }

  SparseSymOperator op = as->build(std::move(info));
  op.threshold_shift = tridiagonal_smallest(line_operator(base, true, true));
  op.threshold_exact = g.threshold();
  op.lower_hint = detail::strip_lower_hint(g);
  return op;
}

/// Assembles the angular-momentum-m sector of -Laplace on an axisymmetric
/// tube, acting on functions of (xi, rho). The threshold shift is the
/// discrete m = 0 transverse ground level, the bottom of the essential
/// spectrum of the full operator.
inline SparseSymOperator assemble_tube_axisym(const WaveguideGeometry& g, int m,
                                              const GridSpec& spec) {
  if (!g.is_tube()) throw ConfigError("assemble_tube_axisym: geometry is not a tube");
  if (m < 0 || m > kMaxBesselOrder) {
    throw ConfigError("angular index must lie in 0.." + std::to_string(kMaxBesselOrder));
  }
  const AxialMesh mesh = axial_mesh(g, spec);
  const std::vector<double>& X = mesh.nodes;
  const int nx = static_cast<int>(X.size());
  const double r0 = g.reference_length();
  const Profile& dev = std::get<TubeRadial>(g.family()).deviation;
  const auto radius = [&](double x) { return r0 + dev(x); };

  const int N0 = std::max(2, static_cast<int>(std::lround(r0 / spec.h - 0.5)));
  const double h0 = r0 / (N0 + 0.5);
  std::vector<double> R;
  for (int j = 0; j < N0; ++j) R.push_back((j + 0.5) * h0);
  R.push_back(r0);
  if (dev.amplitude() > 0.0) detail::append_uniform(R, r0 + dev.amplitude(), h0);
  const int nr = static_cast<int>(R.size());

  // Dual radial cells [lo_j, hi_j] and their rho-weighted measures.
  std::vector<double> rlo(static_cast<std::size_t>(nr), 0.0);
  std::vector<double> rhi(static_cast<std::size_t>(nr), 0.0);
  std::vector<double> vol(static_cast<std::size_t>(nr), 0.0);
  for (int j = 0; j + 1 < nr; ++j) {
    rlo[j] = (j == 0) ? 0.0 : 0.5 * (R[j - 1] + R[j]);
    rhi[j] = 0.5 * (R[j] + R[j + 1]);
    vol[j] = 0.5 * (rhi[j] * rhi[j] - rlo[j] * rlo[j]);
  }

  GridInfo info;
  info.scheme = "axisym-fv";
  info.xi_min = X.front();
  info.xi_max = X.back();
  info.h_axial = spec.h;
  info.h_transverse = h0;
  info.axial_nodes = X.size();
  info.transverse_lines = R.size();
  info.padding = mesh.padding;

  const auto cell = [&](int i, int j) { return static_cast<std::size_t>(i) * nr + j; };
  std::vector<int> id(static_cast<std::size_t>(nx) * nr, -1);
  int n = 0;
  for (int i = 1; i + 1 < nx; ++i) {
    const double r = radius(X[i]);
    int j = 0;
    for (; j + 1 < nr && R[j] < r * (1.0 - 1e-12); ++j) {
      id[cell(i, j)] = n++;
      info.nodes.push_back({X[i], R[j]});
    }
    info.staircase_error = std::max(info.staircase_error, std::fabs(R[j] - r));
  }

  detail::SymmetricAssembler as(static_cast<std::size_t>(n));
  const double m2 = static_cast<double>(m) * m;
  for (int i = 1; i + 1 < nx; ++i) {
    const double dx = 0.5 * (X[i + 1] - X[i - 1]);
    for (int j = 0; j + 1 < nr; ++j) {
      const int p = id[cell(i, j)];
      if (p < 0) break;
      as.add_mass(p, dx * vol[j]);
      double diag = m2 * dx * vol[j] / (R[j] * R[j]);
      const double w_up = dx * rhi[j] / (R[j + 1] - R[j]);
      diag += w_up;
      as.add(p, id[cell(i, j + 1)], -w_up);
      if (j > 0) diag += dx * rlo[j] / (R[j] - R[j - 1]);
      const double w_right = vol[j] / (X[i + 1] - X[i]);
      diag += w_right + vol[j] / (X[i] - X[i - 1]);
      as.add(p, id[cell(i + 1, j)], -w_right);
      as.add(p, p, diag);
    }
  }
  SparseSymOperator op = as.build(std::move(info));

  SymTridiagonal t;
  for (int j = 0; j < N0; ++j) {
    double k = rhi[j] / (R[j + 1] - R[j]);
    if (j > 0) k += rlo[j] / (R[j] - R[j - 1]);
    t.diag.push_back(k / vol[j]);
    if (j + 1 < N0) t.off.push_back(-(rhi[j] / (R[j + 1] - R[j])) / std::sqrt(vol[j] * vol[j + 1]));
  }
  op.threshold_shift = tridiagonal_smallest(t);
  op.threshold_exact = g.threshold();
  op.angular_index = m;
  const double jm = bessel_zero(m, 1) / (r0 + dev.amplitude());
  op.lower_hint = jm * jm;
  return op;
}

} // namespace ltwg
