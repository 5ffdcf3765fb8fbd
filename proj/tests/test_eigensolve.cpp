#include "ltwg/eigensolve.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ltwg;

namespace {

using Matrix = Eigen::SparseMatrix<double>;

Matrix diagonal(const std::vector<double>& d) {
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t i = 0; i < d.size(); ++i) t.emplace_back(i, i, d[i]);
  Matrix m(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Matrix second_difference(int n, double h) {
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0 / (h * h));
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -1.0 / (h * h));
      t.emplace_back(i + 1, i, -1.0 / (h * h));
    }
  }
  Matrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// Banded symmetric matrix with a spread-out, well separated spectrum.
Matrix random_banded(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 0.05 * i + 0.3 * u(gen));
    for (int k = 1; k <= 3 && i + k < n; ++k) {
      const double v = 0.2 * u(gen);
      t.emplace_back(i, i + k, v);
      t.emplace_back(i + k, i, v);
    }
  }
  Matrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

std::vector<double> dense_below(const Matrix& m, double x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(m)};
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] < x) out.push_back(es.eigenvalues()[i]);
  }
  return out;
}

} // namespace

TEST(EigenBelow, DiagonalCase) {
  const auto op = SparseSymOperator::from_matrix(diagonal({5, 3, 1, 9, 2, 8, 4, 10, 7, 6}));
  const auto s = eigen_below(op, 4.5);
  EXPECT_EQ(s.certified_count, 4);
  ASSERT_EQ(s.eigenvalues.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.eigenvalues[i], i + 1.0, 1e-12);
  EXPECT_TRUE(s.consistent());
}

TEST(EigenBelow, BelowGershgorinIsEmpty) {
  const auto op = SparseSymOperator::from_matrix(second_difference(50, 0.02));
  const auto s = eigen_below(op, op.gershgorin_lower() - 1e-3);
  EXPECT_TRUE(s.eigenvalues.empty());
  EXPECT_EQ(s.certified_count, 0);
}

TEST(EigenBelow, ThresholdOnEigenvalueBreaksDown) {
  const auto op = SparseSymOperator::from_matrix(diagonal({1, 2, 3, 4, 5}));
  EXPECT_THROW(eigen_below(op, 3.0), ThresholdBreakdown);
}

TEST(EigenBelow, SecondDifferenceClosedForm) {
  const int n = 999;
  const double h = 1e-3;
  const auto op = SparseSymOperator::from_matrix(second_difference(n, h));
  const auto s = eigen_below(op, 50.0);
  ASSERT_EQ(s.certified_count, 2);
  ASSERT_EQ(s.eigenvalues.size(), 2u);
  for (int k = 1; k <= 2; ++k) {
    const double sn = std::sin(k * std::numbers::pi * h / 2.0);
    EXPECT_NEAR(s.eigenvalues[k - 1], 4.0 / (h * h) * sn * sn, 1e-8);
  }
  EXPECT_NEAR(s.eigenvalues[0], std::numbers::pi * std::numbers::pi, 1e-4);
  for (double r : s.residuals) EXPECT_LE(r, s.tol);
}

TEST(EigenBelow, SparsePathMatchesDense) {
  const Matrix m = random_banded(480, 7);
  const auto op = SparseSymOperator::from_matrix(m);
  EigenOptions opts;
  opts.dense_cutoff = 0;
  const double x = 6.0;
  const auto s = eigen_below(op, x, opts);
  const auto ref = dense_below(m, x);
  EXPECT_EQ(s.method, "lanczos");
  ASSERT_EQ(s.eigenvalues.size(), ref.size());
  EXPECT_EQ(s.certified_count, static_cast<int>(ref.size()));
  EXPECT_GT(s.slices, 1);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    EXPECT_NEAR(s.eigenvalues[i], ref[i], 1e-10 * std::max(1.0, std::fabs(ref[i])));
  }
  for (double r : s.residuals) EXPECT_LE(r, s.tol);
}

TEST(EigenBelow, SparsePathOnLaplacian) {
  const int n = 3000;
  const double h = 1.0 / (n + 1);
  const auto op = SparseSymOperator::from_matrix(second_difference(n, h));
  const auto s = eigen_below(op, 2000.0);
  int expected = 0;
  for (int k = 1; k <= n; ++k) {
    const double sn = std::sin(k * std::numbers::pi * h / 2.0);
    if (4.0 / (h * h) * sn * sn < 2000.0) ++expected;
  }
  EXPECT_EQ(s.method, "lanczos");
  ASSERT_EQ(s.certified_count, expected);
  ASSERT_TRUE(s.consistent());
  for (int k = 1; k <= expected; ++k) {
    const double sn = std::sin(k * std::numbers::pi * h / 2.0);
    EXPECT_NEAR(s.eigenvalues[k - 1], 4.0 / (h * h) * sn * sn, 1e-6);
  }
}

TEST(EigenBelow, ShiftInvariance) {
  const Matrix m = random_banded(300, 11);
  const double c = 3.25;
  Matrix id(m.rows(), m.cols());
  id.setIdentity();
  const Matrix shifted = m + c * id;
  EigenOptions opts;
  opts.dense_cutoff = 0;
  const auto a = eigen_below(SparseSymOperator::from_matrix(m), 4.0, opts);
  const auto b = eigen_below(SparseSymOperator::from_matrix(shifted), 4.0 + c, opts);
  ASSERT_EQ(a.eigenvalues.size(), b.eigenvalues.size());
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) {
    EXPECT_NEAR(b.eigenvalues[i] - a.eigenvalues[i], c, 1e-9 * (4.0 + c));
  }
}

TEST(EigenBelow, Deterministic) {
  const auto op = SparseSymOperator::from_matrix(random_banded(400, 3));
  EigenOptions opts;
  opts.dense_cutoff = 0;
  const auto a = eigen_below(op, 5.0, opts);
  const auto b = eigen_below(op, 5.0, opts);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.residuals, b.residuals);
}

TEST(EigenBelow, InertiaCount) {
  const Matrix m = random_banded(200, 5);
  EXPECT_EQ(inertia_below(m, 3.0), static_cast<int>(dense_below(m, 3.0).size()));
}

TEST(Spectrum, ClustersDegenerateValues) {
  const auto op = SparseSymOperator::from_matrix(diagonal({1, 2, 2, 3, 7}));
  const auto s = eigen_below(op, 5.0);
  const auto c = s.clusters();
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[1].multiplicity, 2);
  EXPECT_DOUBLE_EQ(c[1].value, 2.0);
}
