#pragma once

// Certified computation of all eigenvalues below a threshold.
//
// The count comes from the inertia of an LDL^T factorization of A - t (Sylvester's
// law). Eigenvalues are then located slice by slice: each slice [a, b) holds a
// known number of eigenvalues and is searched by shift-invert Lanczos with
// the factorization at a, full reorthogonalisation and locking.

#include "ltwg/error.hpp"
#include "ltwg/operator.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace ltwg {

struct EigenOptions {
  double tol = 1e-9;          // residual tolerance, relative to max(1, |threshold|)
  std::size_t dense_cutoff = 2000;
  int slice_size = 12;        // largest eigenvalue count searched with one shift
  int krylov_cap = 160;       // Lanczos basis size per attempt
  std::uint64_t seed = 20240613;
};

struct EigenCluster {
  double value = 0.0;
  int multiplicity = 0;
};

struct Spectrum {
  std::vector<double> eigenvalues; // ascending, all < threshold
  std::vector<double> residuals;   // ||A v - lambda v|| / ||v||
  int certified_count = 0;         // inertia count below threshold
  double threshold = 0.0;
  std::string method = "empty";    // empty | dense | lanczos
  int factorizations = 0;
  int lanczos_steps = 0;
  int slices = 0;
  double tol = 0.0;                // absolute residual tolerance used

  bool consistent() const {
    return static_cast<int>(eigenvalues.size()) == certified_count;
  }

  std::vector<EigenCluster> clusters(double rel_tol = 1e-8) const {
    std::vector<EigenCluster> out;
    const double gap = rel_tol * std::max(1.0, std::fabs(threshold));
    for (double v : eigenvalues) {
      if (!out.empty() && v - out.back().value <= gap) {
        ++out.back().multiplicity;
      } else {
        out.push_back({v, 1});
      }
    }
    return out;
  }
};

/// LDL^T factorization of A - shift with its inertia.
class ShiftedFactor {
public:
  using Matrix = Eigen::SparseMatrix<double>;

  ShiftedFactor(const Matrix& a, double shift) : shift_(shift) {
    Matrix s = a;
    Matrix id(a.rows(), a.cols());
    id.setIdentity();
    s -= shift * id;
    ldlt_.compute(s);
    double scale = std::fabs(shift);
    for (int k = 0; k < a.outerSize(); ++k) {
      for (Matrix::InnerIterator it(a, k); it; ++it) {
        if (it.row() == it.col()) scale = std::max(scale, std::fabs(it.value()));
      }
    }
    if (ldlt_.info() != Eigen::Success) throw ThresholdBreakdown(shift);
    const auto& d = ldlt_.vectorD();
    const double tiny = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (std::fabs(d[i]) <= tiny) throw ThresholdBreakdown(shift);
      if (d[i] < 0.0) ++negatives_;
    }
  }

  double shift() const { return shift_; }
  /// Number of eigenvalues of A strictly below the shift.
  int negatives() const { return negatives_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const { return ldlt_.solve(b); }

private:
  Eigen::SimplicialLDLT<Matrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
  double shift_;
  int negatives_ = 0;
};

/// Inertia count: eigenvalues of A strictly below x.
inline int inertia_below(const Eigen::SparseMatrix<double>& a, double x) {
  return ShiftedFactor(a, x).negatives();
}

namespace detail {

struct LockedPair {
  double value;
  Eigen::VectorXd vector;
  double residual;
};

inline double residual_norm(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& y,
                            double lambda) {
  return (a * y - lambda * y).norm() / y.norm();
}

inline void orthogonalize(Eigen::VectorXd& w, const std::vector<LockedPair>& locked) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& p : locked) w -= p.vector.dot(w) * p.vector;
  }
}

// One shift-invert Lanczos run in the complement of `locked`. Appends
// converged pairs lying in [lo, hi) and returns how many were added.
inline int lanczos_run(const Eigen::SparseMatrix<double>& a, const ShiftedFactor& f, double lo,
                       double hi, int wanted, double abs_tol, const EigenOptions& opts,
                       std::uint64_t seed, std::vector<LockedPair>& locked, int& steps) {
  const Eigen::Index n = a.rows();
  const int cap = static_cast<int>(
      std::min<Eigen::Index>(n - static_cast<Eigen::Index>(locked.size()), opts.krylov_cap));
  if (cap <= 0) return 0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  orthogonalize(v, locked);
  v.normalize();

  Eigen::MatrixXd V(n, cap + 1);
  std::vector<double> alpha;
  std::vector<double> beta;
  V.col(0) = v;
  for (int j = 0; j < cap; ++j) {
    Eigen::VectorXd w = f.solve(V.col(j));
    ++steps;
    const double aj = V.col(j).dot(w);
    alpha.push_back(aj);
    for (int pass = 0; pass < 2; ++pass) {
      w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
      orthogonalize(w, locked);
    }
    const double bj = w.norm();
    beta.push_back(bj);
    const int m = j + 1;
    const bool exhausted = bj <= 1e-12 * std::max(1.0, std::fabs(aj));
    const bool check = exhausted || m == cap || (m >= wanted && (m % 5 == 0));
    if (check) {
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      std::vector<LockedPair> found;
      for (int i = 0; i < m; ++i) {
        const double theta = es.eigenvalues()[i];
        if (theta == 0.0) continue;
        const double lambda = f.shift() + 1.0 / theta;
        if (lambda < lo || lambda >= hi) continue;
        Eigen::VectorXd y = V.leftCols(m) * es.eigenvectors().col(i);
        y.normalize();
        const double res = residual_norm(a, y, lambda);
        if (res <= abs_tol) found.push_back({lambda, std::move(y), res});
      }
      if (static_cast<int>(found.size()) >= wanted || exhausted || m == cap) {
        const int added = static_cast<int>(found.size());
        for (auto& p : found) locked.push_back(std::move(p));
        return added;
      }
    }
    V.col(j + 1) = w / bj;
  }
  return 0;
}

} // namespace detail

/// Every eigenvalue of op.matrix() strictly below `threshold`, with the count
/// certified by inertia. Throws ThresholdBreakdown when threshold is an
/// eigenvalue to machine precision and SolverError when iteration fails.
inline Spectrum eigen_below(const SparseSymOperator& op, double threshold,
                            const EigenOptions& opts = {}) {
  const auto& a = op.matrix();
  const Eigen::Index n = a.rows();
  Spectrum s;
  s.threshold = threshold;
  s.tol = opts.tol * std::max(1.0, std::fabs(threshold));
  if (n == 0) return s;
  const double gersh = op.gershgorin_lower();
  if (threshold <= gersh) return s;

  const ShiftedFactor top(a, threshold);
  s.factorizations = 1;
  s.certified_count = top.negatives();
  if (s.certified_count == 0) return s;

  if (static_cast<std::size_t>(n) <= opts.dense_cutoff) {
    s.method = "dense";
    const Eigen::MatrixXd dense(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double lambda = es.eigenvalues()[i];
      if (lambda >= threshold) break;
      s.eigenvalues.push_back(lambda);
      s.residuals.push_back(detail::residual_norm(a, es.eigenvectors().col(i), lambda));
    }
  } else {
    s.method = "lanczos";
    // Slices [lo, hi) with known counts, refined by bisection until each holds
    // at most slice_size eigenvalues.
    struct Slice {
      double lo;
      double hi;
      int count_lo;
      int count_hi;
      std::shared_ptr<const ShiftedFactor> factor_lo;
    };
    const auto factor_at = [&](double x) {
      for (int k = 0;; ++k) {
        try {
          ++s.factorizations;
          return std::make_shared<const ShiftedFactor>(a, x);
        } catch (const ThresholdBreakdown&) {
          if (k >= 4) throw;
          x -= 1e-7 * std::max(1.0, std::fabs(x));
        }
      }
    };
    const double lo = gersh - 1e-6 * std::max(1.0, std::fabs(gersh));
    std::shared_ptr<const ShiftedFactor> f_lo;
    if (op.lower_hint && *op.lower_hint < threshold) {
      const double hint = *op.lower_hint - 0.02 * std::max(1.0, std::fabs(*op.lower_hint));
      if (hint > lo) {
        auto f = factor_at(hint);
        if (f->negatives() == 0) f_lo = std::move(f);
      }
    }
    if (!f_lo) f_lo = factor_at(lo);
    if (f_lo->negatives() != 0) {
      throw SolverError("inertia inconsistency: eigenvalues below the Gershgorin bound");
    }

    std::vector<Slice> todo;
    todo.push_back({f_lo->shift(), threshold, 0, s.certified_count, std::move(f_lo)});
    std::vector<detail::LockedPair> all;
    int slice_index = 0;
    while (!todo.empty()) {
      Slice sl = std::move(todo.back());
      todo.pop_back();
      const int c = sl.count_hi - sl.count_lo;
      if (c == 0) continue;
      const auto split = [&] {
        const double mid = 0.5 * (sl.lo + sl.hi);
        if (!(mid > sl.lo && mid < sl.hi)) {
          std::ostringstream d;
          d << "slice [" << sl.lo << ", " << sl.hi << ") count " << c;
          throw SolverError("eigenvalue slice cannot be refined", d.str());
        }
        auto fm = factor_at(mid);
        const int cm = fm->negatives();
        if (cm < sl.count_lo || cm > sl.count_hi) {
          throw SolverError("inertia counts are not monotone");
        }
        const double xm = fm->shift();
        todo.push_back({xm, sl.hi, cm, sl.count_hi, std::move(fm)});
        todo.push_back({sl.lo, xm, sl.count_lo, cm, sl.factor_lo});
      };
      if (c > opts.slice_size) {
        split();
        continue;
      }
      ++s.slices;
      std::vector<detail::LockedPair> locked;
      for (int attempt = 0; attempt < 2 * c + 2 && static_cast<int>(locked.size()) < c;
           ++attempt) {
        const std::uint64_t seed = opts.seed + 7919u * static_cast<std::uint64_t>(slice_index) +
                                   104729u * static_cast<std::uint64_t>(attempt);
        detail::lanczos_run(a, *sl.factor_lo, sl.lo, sl.hi, c - static_cast<int>(locked.size()),
                            s.tol, opts, seed, locked, s.lanczos_steps);
      }
      ++slice_index;
      if (static_cast<int>(locked.size()) > c) {
        throw SolverError("inertia inconsistency: more converged eigenvalues than certified");
      }
      if (static_cast<int>(locked.size()) < c) {
        if (c == 1) {
          std::ostringstream d;
          d << "slice [" << sl.lo << ", " << sl.hi << ") found " << locked.size() << " of " << c
            << " after " << s.lanczos_steps << " Lanczos steps";
          throw SolverError("shift-invert Lanczos did not converge", d.str());
        }
        split();
        continue;
      }
      for (auto& p : locked) all.push_back(std::move(p));
    }
    std::sort(all.begin(), all.end(),
              [](const auto& x, const auto& y) { return x.value < y.value; });
    for (const auto& p : all) {
      s.eigenvalues.push_back(p.value);
      s.residuals.push_back(p.residual);
    }
  }
  if (!s.consistent()) {
    std::ostringstream d;
    d << "found " << s.eigenvalues.size() << ", inertia " << s.certified_count;
    throw SolverError("inertia inconsistency", d.str());
  }
  return s;
}

} // namespace ltwg
