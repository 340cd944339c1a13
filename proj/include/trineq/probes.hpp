#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "trineq/functionals.hpp"
#include "trineq/matrix.hpp"
#include "trineq/tensor.hpp"

namespace trineq::probes {

/// Outcome of a seeded verification campaign. Per-trial seeds are
/// seed + trial index, so serial and parallel runs of the same config
/// produce identical reports.
struct ProbeReport {
  std::string name;
  int trials = 0;
  double worst_slack = 0.0;
  double mean_slack = 0.0;
  int violations = 0;           // trials with slack < -tol
  int worst_trial = -1;
  std::uint64_t seed = 0;
  double p = 0.0;
  std::vector<Eigen::Index> dims;
  double tol = kDefaultTol;
  bool contract = true;         // false: exploratory, nothing asserted
  std::vector<double> slacks;   // per trial
  std::optional<nlohmann::json> witness;
  nlohmann::json extras = nlohmann::json::object();

  nlohmann::json to_json() const;
  std::string to_csv() const;   // rows: trial, seed, slack
  /// Exit-status convention: true when nothing is violated or the run
  /// is exploratory.
  bool passed() const { return !contract || violations == 0; }
};

// -- Convexity probing --------------------------------------------------

/// Slack sign table, shared by reports and tests: the regimes where the
/// sign of the midpoint gap is asserted.
double midpoint_slack(PRegime regime, double raw_gap);
bool midpoint_contract(PRegime regime);

/// Draws two random n-tuples per trial and evaluates the midpoint gap
/// d = Phi_p(mid) - (Phi_p(X) + Phi_p(Y))/2. Slack is d where concavity
/// is known (0 < p <= 1), -d at p = 2, and raw d (exploratory) otherwise.
ProbeReport midpoint_probe(const PExponent& p, int n, Eigen::Index dim,
                           int trials, std::uint64_t seed,
                           double tol = kDefaultTol, int threads = 1);

struct OperatorConvexityWitness {
  PsdMatrix a1;
  PsdMatrix a2;
  ComplexVector v;  // unit vector
  double gap = 0.0; // <v,((A1+A2)/2)^p v> - <v,(A1^p+A2^p)/2 v> > 0
  int attempts = 0;
};

/// Random search for a strict failure of operator convexity of x^p,
/// p > 2: per draw the optimal v is the top eigenvector of
/// ((A1+A2)/2)^p - (A1^p+A2^p)/2. Throws SearchFailureError (with the
/// best gap seen) when the attempt budget is exhausted, which is the
/// expected outcome for p <= 2.
OperatorConvexityWitness operator_convexity_witness(double p,
                                                    Eigen::Index dim,
                                                    std::uint64_t seed,
                                                    int max_attempts,
                                                    double tol_gap = 1e-6);

/// Certificate that the trace functional is not midpoint convex for
/// p > 2: with X = (t A1, B), Y = (t A2, B) and B = P_v + lambda P_v^perp,
/// margin = Phi_p((X+Y)/2) - Phi_p(X)/2 - Phi_p(Y)/2 > 0.
struct ConvexityWitness {
  PsdMatrix a1;
  PsdMatrix a2;
  PsdMatrix b;
  ComplexVector v;
  double lambda = 0.0;
  double t = 0.0;
  double margin = 0.0;
  double vector_gap = 0.0;  // the strict operator-convexity gap at v
};

/// Midpoint margin of the pair (t A1, B), (t A2, B) with
/// B = P_v + lambda P_v^perp. Evaluated in the eigenbasis of B, where B
/// is exactly diagonal: in the standard basis the t^p A^p perturbation
/// would drown in the float representation of B^p's large entries.
double counterexample_margin(const PsdMatrix& a1, const PsdMatrix& a2,
                             const ComplexVector& v, double lambda, double t,
                             double p);

/// Constructive counterexample for p > 2: finds the vector witness, then
/// scans lambda over {1e1..1e6} and t over {1e-1..1e-4} (geometric) and
/// returns the grid point with the largest positive margin. Throws
/// ConstructiveFailureError with the scan table if no margin > 0 exists
/// on the grid.
ConvexityWitness convexity_counterexample(double p, Eigen::Index dim,
                                          std::uint64_t seed,
                                          int max_attempts = 10000);

/// Report wrapper around convexity_counterexample for the CLI: slack is
/// the margin, the witness is always attached.
ProbeReport counterexample_report(double p, Eigen::Index dim,
                                  std::uint64_t seed,
                                  int max_attempts = 10000);

/// Residuals r(t) = Phi_p(tA, B) - Tr B - (t^p/p) Tr(B^{1-p} A^p) on a
/// t-grid, plus a log-log fit of the decay exponent over the points above
/// the noise floor. The expected exponent is 2p.
struct ExpansionReport {
  std::vector<double> t_grid;
  std::vector<double> residuals;
  double fitted_exponent = 0.0;  // NaN when degenerate
  int points_used = 0;
  bool degenerate = false;       // all residuals at noise level
};

ExpansionReport small_t_expansion(const PsdMatrix& a, const PsdMatrix& b,
                                  double p, std::vector<double> t_grid);

// -- Identity checks (relative residuals) -------------------------------

/// Splitting of the two-argument trace functional through the swap
/// projections Pi_pm = (I +- sigma)/2 on the doubled space:
/// 2 Tr((A1^p + A2^p)^{1/p}) =
/// 2^{1/p} [Tr((Pi_+ Ap Pi_+)^{1/p}) + Tr((Pi_- Ap Pi_-)^{1/p})],
/// compressions taken on the range of the projection. Requires 0 < p < 1.
double swap_split_residual(const PsdMatrix& a1, const PsdMatrix& a2,
                           double p);

/// Phi_2(A_1..A_n) = Tr|stack| for the block column stack of the tuple.
double phi2_trace_norm_residual(const std::vector<PsdMatrix>& as);

/// Hoelder-dual witness for the two-space inequality at p > 1:
/// B = c (Tr_1 A)^{p-1} normalized so Tr(B^q) = 1 attains
/// Tr(B Tr_1 A) = (Tr_2 (Tr_1 A)^p)^{1/p}.
struct DualWitness {
  Matrix b;
  double attained = 0.0;
  double lhs = 0.0;
  double bq_trace = 0.0;  // diagnostic, should be 1
};

DualWitness holder_dual_witness(const PsdMatrix& a, const TensorSpace& space,
                                double p);
double dual_witness_residual(const PsdMatrix& a, const TensorSpace& space,
                             double p);

/// Max-abs deviation of the exact group average from the embedded
/// partial trace (absolute, not relative; the identity is exact).
double group_average_residual(const HermitianMatrix& a,
                              const TensorSpace& space,
                              std::size_t averaged_factor);

/// |Psi_p(blockdiag) - Phi_p(blocks)| / scale, blocks carried on the
/// second (fast) factor so the inner partial trace sums them.
double block_diag_residual(const std::vector<PsdMatrix>& as,
                           const PExponent& p);

/// Spectrum and trace identities of the block construction behind the
/// BKS subadditivity proof: M_pm = [[A^{p/2}, 0], [pm C^{p/2}, 0]].
struct BksBlockReport {
  double spectrum_residual_plus = 0.0;   // spec(M*M) vs spec(MM*)
  double spectrum_residual_minus = 0.0;
  double trace_residual_plus = 0.0;      // Tr(M*M)^{1/p} vs Tr(A^p+C^p)^{1/p}
  double trace_residual_minus = 0.0;
  double concavity_slack = 0.0;          // Tr(avg^{1/p}) - Tr(A^p+C^p)^{1/p}
};

BksBlockReport bks_block_report(const PsdMatrix& a, const PsdMatrix& c,
                                double p);

// -- Inequality campaigns ------------------------------------------------

/// Slack sign for the Minkowski inequalities: rhs - lhs for p >= 1,
/// lhs - rhs for p < 1.
double minkowski_slack(double p, const Sides& sides);

/// True iff the three-space inequality is a theorem at this p.
bool minkowski3_contract(double p);

ProbeReport verify_minkowski2(int trials, const TensorSpace& space,
                              const PExponent& p, std::uint64_t seed,
                              double tol = kDefaultTol, int threads = 1,
                              bool exploratory = false);
ProbeReport verify_minkowski3(int trials, const TensorSpace& space,
                              const PExponent& p, std::uint64_t seed,
                              double tol = kDefaultTol, int threads = 1,
                              bool exploratory = false);

/// One-sided difference quotient of the three-space gap at p = 1, which
/// recovers the strong subadditivity deficit as h -> 0.
struct SsaLimit {
  double fd_derivative = 0.0;
  double deficit = 0.0;
  double discrepancy = 0.0;  // |fd_derivative - deficit|
};

SsaLimit ssa_from_limit(const DensityMatrix& a, const TensorSpace& space,
                        double h);

/// Richardson extrapolation of ssa_from_limit over a decreasing h grid
/// (successive ratios assumed equal); first-order one-sided differences.
double ssa_limit_richardson(const DensityMatrix& a, const TensorSpace& space,
                            const std::vector<double>& hs);

ProbeReport verify_ssa(int trials, const TensorSpace& space,
                       std::uint64_t seed, double tol = kDefaultTol,
                       int threads = 1);
ProbeReport verify_ssa_limit(int trials, const TensorSpace& space, double h,
                             std::uint64_t seed, double tol = 1e-6,
                             int threads = 1);

/// Per trial: slack of both BKS inequalities on fresh random pairs;
/// the trial slack is the smaller of the two.
ProbeReport verify_bks(int trials, Eigen::Index dim, double p,
                       std::uint64_t seed, double tol = kDefaultTol,
                       int threads = 1);

/// Identity suite: swap split (p_low), stacked trace norm, group
/// averaging, block-diagonal reduction (p_low), dual witness (p_high),
/// BKS blocks (p_high). Slack is the margin to each identity's pinned
/// tolerance, minimized over the suite; violations mean slack < 0.
ProbeReport verify_identities(int trials, Eigen::Index dim,
                              const TensorSpace& ga_space, double p_low,
                              double p_high, std::uint64_t seed,
                              int threads = 1);

// -- Classical (diagonal) oracle -----------------------------------------

/// Nonnegative tensor on X x Y x Z, the commutative counterpart of a
/// diagonal operator on the three-factor space.
struct Tensor3 {
  Eigen::Index nx = 0, ny = 0, nz = 0;
  std::vector<double> values;  // row-major (x slow, z fast)

  Tensor3(Eigen::Index x, Eigen::Index y, Eigen::Index z)
      : nx(x), ny(y), nz(z),
        values(static_cast<std::size_t>(x * y * z), 0.0) {}
  double& at(Eigen::Index x, Eigen::Index y, Eigen::Index z) {
    return values[static_cast<std::size_t>((x * ny + y) * nz + z)];
  }
  double at(Eigen::Index x, Eigen::Index y, Eigen::Index z) const {
    return values[static_cast<std::size_t>((x * ny + y) * nz + z)];
  }
  double sum() const;
  /// Diagonal embedding on the space [nx, ny, nz].
  Matrix embed_diagonal() const;
};

/// Scalar three-variable Minkowski sides by direct summation, factor
/// roles matching minkowski3_sides on the diagonal embedding.
Sides classical_minkowski3_sides(const Tensor3& f, double p);

/// Four-entropy combination of the normalized tensor's marginals,
/// matching ssa_deficit on the diagonal embedding.
double classical_ssa_deficit(const Tensor3& f);

/// Campaign: random nonnegative tensors; checks the scalar inequality,
/// the scalar entropy combination, and cross-path equality against the
/// matrix functionals on the diagonal embedding. Slack is the margin to
/// the cross-path tolerance, minimized with the scalar inequality slacks.
ProbeReport verify_classical_oracle(int trials,
                                    const std::vector<Eigen::Index>& shape,
                                    double p, std::uint64_t seed,
                                    double cross_tol = 1e-10,
                                    int threads = 1);

}  // namespace trineq::probes
