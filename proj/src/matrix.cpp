#include "trineq/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

namespace trineq {

namespace {

double offdiag_norm(const Matrix& a) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) acc += std::norm(a(i, j));
  return std::sqrt(acc);
}

}  // namespace

HermitianMatrix::HermitianMatrix(const Matrix& raw) {
  if (raw.rows() < 1 || raw.rows() != raw.cols()) {
    std::ostringstream msg;
    msg << "HermitianMatrix needs a nonempty square matrix, got " << raw.rows()
        << "x" << raw.cols();
    throw ShapeError(msg.str());
  }
  mat_ = (0.5 * (raw + raw.adjoint())).eval();
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(Matrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(Matrix::Zero(dim, dim));
}

Matrix Spectrum::reconstruct() const { return apply(eigenvalues); }

Matrix Spectrum::apply(const RealVector& fx) const {
  return eigenvectors * fx.asDiagonal() * eigenvectors.adjoint();
}

Spectrum eig_hermitian(const HermitianMatrix& h) {
  const Eigen::Index n = h.dim();
  Matrix a = h.matrix();
  Matrix v = Matrix::Identity(n, n);

  const double scale = a.norm();
  const double stop = kJacobiOffTol * scale;

  // Cyclic Jacobi with complex rotations. Each rotation zeroes a(p,q)
  // exactly; convergence of the off-diagonal mass is quadratic.
  double off = offdiag_norm(a);
  int sweeps = 0;
  while (off > stop) {
    if (sweeps++ >= kJacobiMaxSweeps) {
      throw ConvergenceError("Jacobi eigensolver did not converge", off / scale);
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const Complex phase = apq / r;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        // Smaller-magnitude root of t^2 - 2 tau t - 1 = 0.
        const double t = (tau >= 0.0)
                             ? -1.0 / (tau + std::hypot(1.0, tau))
                             : 1.0 / (-tau + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex sp = s * phase;
        const Complex spc = s * std::conj(phase);
        for (Eigen::Index i = 0; i < n; ++i) {  // columns p, q
          const Complex hip = a(i, p), hiq = a(i, q);
          a(i, p) = c * hip + spc * hiq;
          a(i, q) = -sp * hip + c * hiq;
        }
        for (Eigen::Index j = 0; j < n; ++j) {  // rows p, q
          const Complex hpj = a(p, j), hqj = a(q, j);
          a(p, j) = c * hpj + sp * hqj;
          a(q, j) = -spc * hpj + c * hqj;
        }
        a(p, q) = 0.0;  // annihilated by construction
        a(q, p) = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip + spc * viq;
          v(i, q) = -sp * vip + c * viq;
        }
      }
    }
    off = offdiag_norm(a);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&a](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() < a(j, j).real();
  });

  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    s.eigenvalues[k] = a(order[static_cast<std::size_t>(k)],
                         order[static_cast<std::size_t>(k)]).real();
    s.eigenvectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return s;
}

PsdMatrix::PsdMatrix(HermitianMatrix h) : herm_(std::move(h)) {
  spec_ = eig_hermitian(herm_);
  min_raw_ = spec_.eigenvalues[0];
  const double top = spec_.eigenvalues[spec_.dim() - 1];
  const double spectral_scale = std::max(std::abs(min_raw_), std::abs(top));
  if (min_raw_ < -kEpsPsd * (1.0 + spectral_scale)) {
    std::ostringstream msg;
    msg << "matrix is not positive semidefinite: min eigenvalue " << min_raw_
        << " (scale " << spectral_scale << ")";
    throw InvalidArgument(msg.str());
  }
  for (Eigen::Index i = 0; i < spec_.dim(); ++i)
    if (spec_.eigenvalues[i] < 0.0) spec_.eigenvalues[i] = 0.0;
}

PsdMatrix PsdMatrix::from_spectrum(Spectrum s) {
  for (Eigen::Index i = 0; i < s.dim(); ++i)
    if (s.eigenvalues[i] < 0.0) s.eigenvalues[i] = 0.0;
  HermitianMatrix h(s.reconstruct());
  const double min_raw = s.eigenvalues[0];
  return PsdMatrix(std::move(h), std::move(s), min_raw);
}

HermitianMatrix apply_fn(const HermitianMatrix& h,
                         const std::function<double(double)>& f) {
  const Spectrum s = eig_hermitian(h);
  RealVector fx(s.dim());
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    fx[i] = f(s.eigenvalues[i]);
    if (!std::isfinite(fx[i])) {
      std::ostringstream msg;
      msg << "scalar function not finite at eigenvalue " << s.eigenvalues[i];
      throw FunctionDomainError(msg.str());
    }
  }
  return HermitianMatrix(s.apply(fx));
}

namespace {

RealVector powered_eigenvalues(const PsdMatrix& a, double p) {
  const RealVector& lam = a.spectrum().eigenvalues;
  const double top = lam[lam.size() - 1];
  if (p <= 0.0 && lam[0] <= kEpsPsd * top) {
    std::ostringstream msg;
    msg << "power " << p << " of a singular PSD matrix (min eigenvalue "
        << lam[0] << ")";
    throw SingularityError(msg.str());
  }
  RealVector out(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    out[i] = (lam[i] > 0.0) ? std::pow(lam[i], p) : 0.0;  // 0^p = 0, p > 0
  return out;
}

}  // namespace

PsdMatrix mat_power(const PsdMatrix& a, double p) {
  Spectrum s = a.spectrum();
  s.eigenvalues = powered_eigenvalues(a, p);
  return PsdMatrix::from_spectrum(std::move(s));
}

Matrix psd_power_matrix(const PsdMatrix& a, double p) {
  return a.spectrum().apply(powered_eigenvalues(a, p));
}

PsdMatrix positive_part(const HermitianMatrix& x) {
  Spectrum s = eig_hermitian(x);
  for (Eigen::Index i = 0; i < s.dim(); ++i)
    s.eigenvalues[i] = std::max(s.eigenvalues[i], 0.0);
  return PsdMatrix::from_spectrum(std::move(s));
}

PsdMatrix scale(const PsdMatrix& a, double factor) {
  if (factor < 0.0) throw InvalidArgument("scale factor must be >= 0");
  Spectrum s = a.spectrum();
  s.eigenvalues *= factor;
  return PsdMatrix::from_spectrum(std::move(s));
}

double trace_norm(const Matrix& x) {
  // Singular values via the Gram matrix on the smaller side.
  const Matrix gram = (x.rows() <= x.cols()) ? Matrix(x * x.adjoint())
                                             : Matrix(x.adjoint() * x);
  const Spectrum s = eig_hermitian(HermitianMatrix(gram));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.dim(); ++i)
    acc += std::sqrt(std::max(s.eigenvalues[i], 0.0));
  return acc;
}

double uniform01(std::mt19937_64& rng) {
  // 53-bit mantissa draw mapped to (0, 1].
  const std::uint64_t x = rng() >> 11;
  return static_cast<double>(x + 1) * 0x1.0p-53;
}

Matrix random_complex_gaussian(Eigen::Index dim, double scale,
                               std::mt19937_64& rng) {
  Matrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double radius = std::sqrt(-std::log(uniform01(rng)));
      const double angle = 2.0 * std::numbers::pi * uniform01(rng);
      g(i, j) = scale * Complex(radius * std::cos(angle),
                                radius * std::sin(angle));
    }
  }
  return g;
}

PsdMatrix random_psd(Eigen::Index dim, double scale, std::mt19937_64& rng) {
  if (dim < 1) throw ShapeError("random_psd needs dim >= 1");
  const Matrix g = random_complex_gaussian(dim, scale, rng);
  return PsdMatrix(HermitianMatrix(g * g.adjoint()));
}

PsdMatrix random_psd(Eigen::Index dim, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_psd(dim, scale, rng);
}

HermitianMatrix random_hermitian(Eigen::Index dim, double scale,
                                 std::mt19937_64& rng) {
  if (dim < 1) throw ShapeError("random_hermitian needs dim >= 1");
  return HermitianMatrix(random_complex_gaussian(dim, scale, rng));
}

HermitianMatrix random_hermitian(Eigen::Index dim, double scale,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_hermitian(dim, scale, rng);
}

}  // namespace trineq
