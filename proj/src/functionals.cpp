#include "trineq/functionals.hpp"

#include <cmath>
#include <sstream>

namespace trineq {

namespace {

double sum_powers(const RealVector& lam, double p) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam[i] > 0.0) acc += std::pow(lam[i], p);
  return acc;
}

// Tr(M^{1/p}) of a numerically-PSD Hermitian matrix, 0^{1/p} = 0.
double trace_root_p(const Matrix& m, double p) {
  const PsdMatrix psd{HermitianMatrix(m)};
  return sum_powers(psd.spectrum().eigenvalues, 1.0 / p);
}

}  // namespace

DensityMatrix::DensityMatrix(const PsdMatrix& a)
    : state_(a), original_trace_(a.trace()) {
  if (!(original_trace_ > 0.0)) {
    throw InvalidArgument("density matrix needs a positive trace");
  }
  state_ = scale(a, 1.0 / original_trace_);
}

PExponent::PExponent(double p) : p_(p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "exponent p must be a finite positive real, got " << p;
    throw InvalidArgument(msg.str());
  }
  if (p == 1.0) {
    regime_ = PRegime::Boundary;
  } else if (p < 1.0) {
    regime_ = PRegime::Concave;
  } else if (p == 2.0) {
    regime_ = PRegime::ConvexKnown;
  } else if (p < 2.0) {
    regime_ = PRegime::Conjecture;
  } else {
    regime_ = PRegime::Failure;
  }
}

double PExponent::conjugate() const {
  if (p_ <= 1.0)
    throw InvalidArgument("Hoelder conjugate requires p > 1");
  return p_ / (p_ - 1.0);
}

const char* regime_name(PRegime r) {
  switch (r) {
    case PRegime::Concave: return "concave";
    case PRegime::Boundary: return "boundary";
    case PRegime::Conjecture: return "conjecture";
    case PRegime::ConvexKnown: return "convex_known";
    case PRegime::Failure: return "failure";
  }
  return "unknown";
}

double phi_p(const std::vector<PsdMatrix>& as, const PExponent& p) {
  if (as.empty()) throw InvalidArgument("phi_p needs at least one matrix");
  const Eigen::Index dim = as.front().dim();
  Matrix sum = Matrix::Zero(dim, dim);
  for (const auto& a : as) {
    if (a.dim() != dim)
      throw ShapeError("phi_p arguments must share one dimension");
    sum += psd_power_matrix(a, p.value());
  }
  return trace_root_p(sum, p.value());
}

double psi_p(const PsdMatrix& a, const TensorSpace& space,
             const PExponent& p) {
  if (space.factors() != 2)
    throw ShapeError("psi_p expects a two-factor space");
  if (a.dim() != space.total_dim())
    throw ShapeError("psi_p: operator does not live on the space");
  const Matrix ap = psd_power_matrix(a, p.value());
  const Matrix t2 = partial_trace(ap, space, 2);
  return trace_root_p(t2, p.value());
}

double entropy_of_psd(const PsdMatrix& a) {
  const RealVector& lam = a.spectrum().eigenvalues;
  double s = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam[i] > kEntropyFloor) s -= lam[i] * std::log(lam[i]);
  return s;
}

double entropy(const DensityMatrix& rho) { return entropy_of_psd(rho.state()); }

double ssa_deficit(const DensityMatrix& a, const TensorSpace& space) {
  if (space.factors() != 3)
    throw ShapeError("ssa_deficit expects a three-factor space");
  if (a.dim() != space.total_dim())
    throw ShapeError("ssa_deficit: operator does not live on the space");
  const Matrix& rho = a.matrix();

  const Matrix m13 = partial_trace(rho, space, 2);
  const Matrix m23 = partial_trace(rho, space, 1);
  const Matrix m3 = partial_trace(m23, space.without(1), 1);

  const double s13 = entropy_of_psd(PsdMatrix{HermitianMatrix(m13)});
  const double s23 = entropy_of_psd(PsdMatrix{HermitianMatrix(m23)});
  const double s123 = entropy_of_psd(a.state());
  const double s3 = entropy_of_psd(PsdMatrix{HermitianMatrix(m3)});
  return s13 + s23 - s123 - s3;
}

Sides minkowski2_sides(const PsdMatrix& a, const TensorSpace& space,
                       const PExponent& p) {
  if (space.factors() != 2)
    throw ShapeError("minkowski2_sides expects a two-factor space");
  if (a.dim() != space.total_dim())
    throw ShapeError("minkowski2_sides: operator does not live on the space");
  Sides out;

  const Matrix t1 = partial_trace(a.matrix(), space, 1);
  const PsdMatrix t1p{HermitianMatrix(t1)};
  out.lhs = std::pow(sum_powers(t1p.spectrum().eigenvalues, p.value()),
                     1.0 / p.value());

  const Matrix ap = psd_power_matrix(a, p.value());
  const Matrix t2 = partial_trace(ap, space, 2);
  out.rhs = trace_root_p(t2, p.value());
  return out;
}

Sides minkowski3_sides(const PsdMatrix& a, const TensorSpace& space,
                       const PExponent& p) {
  if (space.factors() != 3)
    throw ShapeError("minkowski3_sides expects a three-factor space");
  if (a.dim() != space.total_dim())
    throw ShapeError("minkowski3_sides: operator does not live on the space");
  Sides out;

  // lhs: trace factor 1, take the p-th power on [d2, d3], trace the d2
  // factor, then Tr(.^{1/p}) on factor 3.
  const Matrix t1 = partial_trace(a.matrix(), space, 1);
  const TensorSpace rest = space.without(1);
  const Matrix t1pow = psd_power_matrix(PsdMatrix{HermitianMatrix(t1)},
                                        p.value());
  const Matrix on3 = partial_trace(t1pow, rest, 1);
  out.lhs = trace_root_p(on3, p.value());

  // rhs: full trace over factors 1 and 3 of (Tr_2 A^p)^{1/p}.
  const Matrix ap = psd_power_matrix(a, p.value());
  const Matrix on13 = partial_trace(ap, space, 2);
  out.rhs = trace_root_p(on13, p.value());
  return out;
}

Sides bks_sides(const PsdMatrix& a, const PsdMatrix& b, double p) {
  if (a.dim() != b.dim())
    throw ShapeError("bks_sides arguments must share one dimension");
  if (!(p > 1.0)) throw InvalidArgument("bks_sides requires p > 1");
  Sides out;

  const Matrix diff_p = psd_power_matrix(b, p) - psd_power_matrix(a, p);
  const Spectrum sp = eig_hermitian(HermitianMatrix(diff_p));
  double lhs = 0.0;
  for (Eigen::Index i = 0; i < sp.dim(); ++i)
    if (sp.eigenvalues[i] > 0.0)
      lhs += std::pow(sp.eigenvalues[i], 1.0 / p);
  out.lhs = lhs;

  const Spectrum sd =
      eig_hermitian(HermitianMatrix(b.matrix() - a.matrix()));
  double rhs = 0.0;
  for (Eigen::Index i = 0; i < sd.dim(); ++i)
    rhs += std::max(sd.eigenvalues[i], 0.0);
  out.rhs = rhs;
  return out;
}

Sides bks_subadditivity_sides(const PsdMatrix& a, const PsdMatrix& c,
                              double p) {
  if (a.dim() != c.dim())
    throw ShapeError("bks_subadditivity_sides arguments must share one dimension");
  if (!(p > 1.0))
    throw InvalidArgument("bks_subadditivity_sides requires p > 1");
  Sides out;
  out.lhs = a.trace() + c.trace();
  out.rhs = phi_p({a, c}, PExponent(p));
  return out;
}

}  // namespace trineq
