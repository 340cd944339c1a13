#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "trineq/matrix.hpp"

namespace trineq::testing {

inline double frob_dist(const Matrix& a, const Matrix& b) {
  return (a - b).norm();
}

inline double rel_dist(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// Deterministic random unitary: the eigenbasis of a random Hermitian.
inline Matrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  const HermitianMatrix h = random_hermitian(dim, 1.0, rng);
  return eig_hermitian(h).eigenvectors;
}

inline Matrix diag_matrix(const std::vector<double>& entries) {
  const auto n = static_cast<Eigen::Index>(entries.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    m(i, i) = entries[static_cast<std::size_t>(i)];
  return m;
}

inline PsdMatrix diag_psd(const std::vector<double>& entries) {
  return PsdMatrix{HermitianMatrix(diag_matrix(entries))};
}

/// Random strictly positive diagonal entries in (lo, hi].
inline std::vector<double> random_positive_entries(std::size_t n, double lo,
                                                   double hi,
                                                   std::mt19937_64& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * uniform01(rng);
  return v;
}

}  // namespace trineq::testing
