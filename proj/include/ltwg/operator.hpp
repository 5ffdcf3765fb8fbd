#pragma once

#include <Eigen/Sparse>

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltwg {

struct NodeCoord {
  double xi = 0.0;
  double eta = 0.0; // transverse height, or radius for axisymmetric grids
};

/// Grid metadata carried by an assembled operator.
struct GridInfo {
  std::string scheme = "matrix"; // tensor-fv | mapped-fe | axisym-fv | matrix
  double xi_min = 0.0;
  double xi_max = 0.0;
  double h_axial = 0.0;      // core axial step
  double h_transverse = 0.0; // largest transverse step
  std::size_t axial_nodes = 0;
  std::size_t transverse_lines = 0;
  double padding = 0.0;         // axial padding beyond the core on each side
  double staircase_error = 0.0; // largest boundary displacement from stair-casing
  std::vector<NodeCoord> nodes; // one per matrix row
};

/// Symmetric sparse matrix M^{-1/2} K M^{-1/2} of a discretised Laplacian with
/// lumped mass M, plus the transverse threshold that defines the shifted
/// operator H. The shift is metadata; matrix entries are never shifted.
class SparseSymOperator {
public:
  using Matrix = Eigen::SparseMatrix<double>;

  SparseSymOperator() = default;

  /// Wraps a symmetric matrix with unit masses.
  static SparseSymOperator from_matrix(Matrix m, double threshold_shift = 0.0) {
    if (m.rows() != m.cols()) throw std::invalid_argument("operator must be square");
    SparseSymOperator op;
    op.matrix_ = std::move(m);
    op.matrix_.makeCompressed();
    op.mass_.assign(static_cast<std::size_t>(op.matrix_.rows()), 1.0);
    op.threshold_shift = threshold_shift;
    op.threshold_exact = threshold_shift;
    return op;
  }

  static SparseSymOperator from_parts(Matrix m, std::vector<double> mass, GridInfo grid) {
    SparseSymOperator op = from_matrix(std::move(m));
    if (mass.size() != static_cast<std::size_t>(op.matrix_.rows())) {
      throw std::invalid_argument("mass vector size mismatch");
    }
    op.mass_ = std::move(mass);
    op.grid = std::move(grid);
    return op;
  }

  const Matrix& matrix() const { return matrix_; }
  const std::vector<double>& mass() const { return mass_; }
  Eigen::Index dimension() const { return matrix_.rows(); }

  /// Discrete lambda_1(omega_0): bottom of the essential spectrum of the
  /// untruncated discrete guide.
  double threshold_shift = 0.0;
  /// Exact lambda_1(omega_0) of the continuum problem.
  double threshold_exact = 0.0;
  /// A value believed to lie below the lowest eigenvalue (used to place a shift).
  std::optional<double> lower_hint;
  int angular_index = 0;
  GridInfo grid;

  /// Gershgorin lower bound for the similar matrix M^{-1} K, which is
  /// nonnegative for M-matrix stiffness with Dirichlet elimination.
  double gershgorin_lower() const {
    std::vector<double> radius(mass_.size(), 0.0);
    std::vector<double> diag(mass_.size(), 0.0);
    for (int k = 0; k < matrix_.outerSize(); ++k) {
      for (Matrix::InnerIterator it(matrix_, k); it; ++it) {
        const auto i = static_cast<std::size_t>(it.row());
        const auto j = static_cast<std::size_t>(it.col());
        if (i == j) {
          diag[i] = it.value();
        } else {
          radius[i] += std::fabs(it.value()) * std::sqrt(mass_[j] / mass_[i]);
        }
      }
    }
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < diag.size(); ++i) lo = std::min(lo, diag[i] - radius[i]);
    return lo;
  }

  /// Exact (bitwise) symmetry of the stored entries.
  bool is_symmetric() const {
    const Matrix t = matrix_.transpose();
    if (t.nonZeros() != matrix_.nonZeros()) return false;
    for (int k = 0; k < matrix_.outerSize(); ++k) {
      Matrix::InnerIterator a(matrix_, k);
      Matrix::InnerIterator b(t, k);
      for (; a && b; ++a, ++b) {
        if (a.row() != b.row() || a.value() != b.value()) return false;
      }
      if (a || b) return false;
    }
    return true;
  }

  /// Coordinate text dump: a comment header, then one "row col value" line per
  /// stored entry (0-based indices, 17 significant digits).
  void write_coo(std::ostream& os) const {
    os << "# n " << matrix_.rows() << " nnz " << matrix_.nonZeros() << " threshold_shift ";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", threshold_shift);
    os << buf << '\n';
    for (int k = 0; k < matrix_.outerSize(); ++k) {
      for (Matrix::InnerIterator it(matrix_, k); it; ++it) {
        std::snprintf(buf, sizeof buf, "%.17g", it.value());
        os << it.row() << ' ' << it.col() << ' ' << buf << '\n';
      }
    }
  }

private:
  Matrix matrix_;
  std::vector<double> mass_;
};

} // namespace ltwg
