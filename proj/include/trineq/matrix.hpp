#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "trineq/constants.hpp"
#include "trineq/errors.hpp"

namespace trineq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Square complex matrix with enforced Hermiticity. The constructor
/// symmetrizes its argument as (X + X*)/2, so entries[i][j] equals
/// conj(entries[j][i]) exactly; an already-Hermitian input passes
/// through bit for bit.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const Matrix& raw);

  static HermitianMatrix identity(Eigen::Index dim);
  static HermitianMatrix zero(Eigen::Index dim);

  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }
  double trace() const { return mat_.trace().real(); }

 private:
  Matrix mat_;
};

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending; the
/// columns of `eigenvectors` are the matching orthonormal basis, so
/// reconstruct() = U diag(eigenvalues) U*.
struct Spectrum {
  RealVector eigenvalues;
  Matrix eigenvectors;

  Eigen::Index dim() const { return eigenvalues.size(); }
  Matrix reconstruct() const;
  /// U diag(fx) U* for per-eigenvalue replacement values fx.
  Matrix apply(const RealVector& fx) const;
};

/// Hermitian matrix with nonnegative spectrum. Construction rejects
/// anything whose smallest eigenvalue is below -eps_psd relative to the
/// spectral scale, and clamps the surviving negative noise to zero so
/// fractional powers stay real. spectrum() returns the clamped values.
class PsdMatrix {
 public:
  explicit PsdMatrix(HermitianMatrix h);

  /// Trusted fast path for results of functional calculus whose
  /// eigenvalues are nonnegative by construction.
  static PsdMatrix from_spectrum(Spectrum s);

  Eigen::Index dim() const { return herm_.dim(); }
  const Matrix& matrix() const { return herm_.matrix(); }
  const HermitianMatrix& hermitian() const { return herm_; }
  const Spectrum& spectrum() const { return spec_; }
  double trace() const { return herm_.trace(); }
  /// Smallest eigenvalue before clamping (diagnostic).
  double min_eigenvalue_raw() const { return min_raw_; }

 private:
  PsdMatrix(HermitianMatrix h, Spectrum s, double min_raw)
      : herm_(std::move(h)), spec_(std::move(s)), min_raw_(min_raw) {}

  HermitianMatrix herm_;
  Spectrum spec_;
  double min_raw_ = 0.0;
};

/// Cyclic Jacobi eigensolver for Hermitian matrices. Deterministic,
/// dependency free, accurate at the dimensions used here (<= ~64).
/// Throws ConvergenceError if the off-diagonal mass has not dropped
/// below kJacobiOffTol * ||H||_F after kJacobiMaxSweeps sweeps.
Spectrum eig_hermitian(const HermitianMatrix& h);

/// Spectral functional calculus: U diag(f(lambda)) U*. Throws
/// FunctionDomainError (naming the eigenvalue) if f is not finite there.
HermitianMatrix apply_fn(const HermitianMatrix& h,
                         const std::function<double(double)>& f);

/// Spectral power with the 0^p = 0 convention for p > 0. For p <= 0 the
/// matrix must be strictly positive definite (SingularityError otherwise).
PsdMatrix mat_power(const PsdMatrix& a, double p);

/// Same as mat_power but returns the raw matrix (saves a wrap).
Matrix psd_power_matrix(const PsdMatrix& a, double p);

/// (X + |X|)/2: spectral positive part.
PsdMatrix positive_part(const HermitianMatrix& x);

/// factor * A for factor >= 0, reusing A's eigenbasis.
PsdMatrix scale(const PsdMatrix& a, double factor);

/// Tr sqrt(X*X), the sum of singular values. X may be rectangular.
double trace_norm(const Matrix& x);

/// Uniform draw in (0, 1]; pinned to the mt19937_64 bit stream so equal
/// seeds give bit-identical values on any conforming implementation.
double uniform01(std::mt19937_64& rng);

/// Matrix of independent complex Gaussians with E|g_ij|^2 = scale^2.
Matrix random_complex_gaussian(Eigen::Index dim, double scale,
                               std::mt19937_64& rng);

/// G G* for a dim x dim complex Gaussian G; Wishart-type, PSD by
/// construction and bit-identical per seed.
PsdMatrix random_psd(Eigen::Index dim, double scale, std::mt19937_64& rng);
PsdMatrix random_psd(Eigen::Index dim, double scale, std::uint64_t seed);

/// (G + G*)/2 for a complex Gaussian G.
HermitianMatrix random_hermitian(Eigen::Index dim, double scale,
                                 std::mt19937_64& rng);
HermitianMatrix random_hermitian(Eigen::Index dim, double scale,
                                 std::uint64_t seed);

}  // namespace trineq
