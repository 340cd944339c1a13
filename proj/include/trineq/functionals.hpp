#pragma once

#include <vector>

#include "trineq/matrix.hpp"
#include "trineq/tensor.hpp"

namespace trineq {

/// Positive operator normalized to unit trace. Keeps the trace of the
/// operator it was built from.
class DensityMatrix {
 public:
  explicit DensityMatrix(const PsdMatrix& a);

  const PsdMatrix& state() const { return state_; }
  const Matrix& matrix() const { return state_.matrix(); }
  Eigen::Index dim() const { return state_.dim(); }
  double original_trace() const { return original_trace_; }

 private:
  PsdMatrix state_;
  double original_trace_;
};

/// Convexity regime of the exponent p: the trace functional
/// Tr((sum A_j^p)^{1/p}) is jointly concave for 0 < p <= 1, jointly
/// convex at p = 2, conjectured convex on (1,2), and neither for p > 2.
enum class PRegime { Concave, Boundary, Conjecture, ConvexKnown, Failure };

class PExponent {
 public:
  PExponent(double p);  // NOLINT: implicit by design, p is the natural spelling

  double value() const { return p_; }
  PRegime regime() const { return regime_; }
  /// Hoelder conjugate q with 1/p + 1/q = 1; requires p > 1.
  double conjugate() const;

 private:
  double p_;
  PRegime regime_;
};

const char* regime_name(PRegime r);

/// Tr((sum_j A_j^p)^{1/p}) on a tuple of PSD matrices of equal dimension.
double phi_p(const std::vector<PsdMatrix>& as, const PExponent& p);

/// Tr_1((Tr_2 A^p)^{1/p}) on a two-factor space.
double psi_p(const PsdMatrix& a, const TensorSpace& space, const PExponent& p);

/// -Tr(rho ln rho) with the 0 ln 0 = 0 convention.
double entropy(const DensityMatrix& rho);

/// Entropy of an (unnormalized permitted, but trace ~ 1 expected) PSD
/// matrix, from its clamped eigenvalues.
double entropy_of_psd(const PsdMatrix& a);

/// S(A_13) + S(A_23) - S(A_123) - S(A_3) on a three-factor space, with
/// marginals A_23 = Tr_1 A and so on. Strong subadditivity says >= 0.
double ssa_deficit(const DensityMatrix& a, const TensorSpace& space);

struct Sides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Two-space Minkowski sides: lhs = (Tr_2 (Tr_1 A)^p)^{1/p},
/// rhs = Tr_1((Tr_2 A^p)^{1/p}). lhs <= rhs for p >= 1, reversed for
/// 0 < p <= 1.
Sides minkowski2_sides(const PsdMatrix& a, const TensorSpace& space,
                       const PExponent& p);

/// Three-space Minkowski sides: lhs = Tr_3((Tr_2 (Tr_1 A)^p)^{1/p}),
/// rhs = Tr_{1,3}((Tr_2 A^p)^{1/p}); the outer Tr_{1,3} is the full
/// trace of an operator already living on factors 1 and 3.
Sides minkowski3_sides(const PsdMatrix& a, const TensorSpace& space,
                       const PExponent& p);

/// BKS difference inequality sides for p > 1:
/// lhs = Tr((B^p - A^p)_+^{1/p}), rhs = Tr((B - A)_+); lhs >= rhs.
Sides bks_sides(const PsdMatrix& a, const PsdMatrix& b, double p);

/// BKS subadditivity sides for p > 1: lhs = Tr(C + A),
/// rhs = Tr((A^p + C^p)^{1/p}); lhs >= rhs.
Sides bks_subadditivity_sides(const PsdMatrix& a, const PsdMatrix& c,
                              double p);

}  // namespace trineq
