#include "trineq/probes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "trineq/io.hpp"

namespace trineq::probes {

namespace {

double rel_residual(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

// Tr(M^{1/p}) of a numerically-PSD Hermitian matrix, 0^{1/p} = 0.
double trace_root_p(const Matrix& m, double p) {
  const PsdMatrix psd{HermitianMatrix(m)};
  const RealVector& lam = psd.spectrum().eigenvalues;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam[i] > 0.0) acc += std::pow(lam[i], 1.0 / p);
  return acc;
}

// Seeded trial function: returns the trial slack; when asked for a
// witness it also fills the json (only called again for the worst trial).
using TrialFn = std::function<double(std::uint64_t trial_seed,
                                     nlohmann::json* witness)>;

ProbeReport run_campaign(std::string name, int trials, std::uint64_t seed,
                         double tol, int threads, const TrialFn& trial) {
  if (trials < 1) throw InvalidArgument("campaign needs trials >= 1");
  ProbeReport rep;
  rep.name = std::move(name);
  rep.trials = trials;
  rep.seed = seed;
  rep.tol = tol;
  rep.slacks.assign(static_cast<std::size_t>(trials), 0.0);

  threads = std::clamp(threads, 1, 64);
  if (threads == 1) {
    for (int i = 0; i < trials; ++i)
      rep.slacks[static_cast<std::size_t>(i)] =
          trial(seed + static_cast<std::uint64_t>(i), nullptr);
  } else {
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::string error_message;
    auto worker = [&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= trials || failed.load()) break;
        try {
          rep.slacks[static_cast<std::size_t>(i)] =
              trial(seed + static_cast<std::uint64_t>(i), nullptr);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          failed.store(true);
          if (error_message.empty()) error_message = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failed.load()) throw Error("campaign trial failed: " + error_message);
  }

  // Sequential reduction keeps the report independent of thread count.
  double worst = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  int worst_trial = -1;
  int violations = 0;
  for (int i = 0; i < trials; ++i) {
    const double s = rep.slacks[static_cast<std::size_t>(i)];
    sum += s;
    if (s < worst) {
      worst = s;
      worst_trial = i;
    }
    if (s < -tol) ++violations;
  }
  rep.worst_slack = worst;
  rep.mean_slack = sum / trials;
  rep.worst_trial = worst_trial;
  rep.violations = violations;

  if (violations > 0 && worst_trial >= 0) {
    nlohmann::json w;
    trial(seed + static_cast<std::uint64_t>(worst_trial), &w);
    if (!w.is_null()) rep.witness = std::move(w);
  }
  return rep;
}

}  // namespace

nlohmann::json ProbeReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["trials"] = trials;
  j["seed"] = seed;
  j["p"] = p;
  j["dims"] = dims;
  j["tol"] = tol;
  j["contract"] = contract;
  j["violations"] = violations;
  j["worst_slack"] = worst_slack;
  j["mean_slack"] = mean_slack;
  j["worst_trial"] = worst_trial;
  j["slacks"] = slacks;
  j["witness"] = witness.has_value() ? *witness : nlohmann::json();
  j["extras"] = extras;
  j["passed"] = passed();
  return j;
}

std::string ProbeReport::to_csv() const {
  std::ostringstream out;
  out << "trial,seed,slack\n";
  out.precision(17);
  for (std::size_t i = 0; i < slacks.size(); ++i)
    out << i << "," << (seed + i) << "," << slacks[i] << "\n";
  return out.str();
}

// -- Convexity probing ------------------------------------------------------

double midpoint_slack(PRegime regime, double raw_gap) {
  switch (regime) {
    case PRegime::Concave:
    case PRegime::Boundary:
      return raw_gap;   // concavity: the midpoint value dominates
    case PRegime::ConvexKnown:
      return -raw_gap;  // convexity: the midpoint value is dominated
    case PRegime::Conjecture:
    case PRegime::Failure:
      return raw_gap;   // recorded, never asserted
  }
  return raw_gap;
}

bool midpoint_contract(PRegime regime) {
  return regime == PRegime::Concave || regime == PRegime::Boundary ||
         regime == PRegime::ConvexKnown;
}

ProbeReport midpoint_probe(const PExponent& p, int n, Eigen::Index dim,
                           int trials, std::uint64_t seed, double tol,
                           int threads) {
  if (n < 1) throw InvalidArgument("midpoint_probe needs n >= 1");
  if (dim < 1) throw ShapeError("midpoint_probe needs dim >= 1");

  auto trial = [&p, n, dim](std::uint64_t ts, nlohmann::json* witness) {
    std::mt19937_64 rng(ts);
    std::vector<PsdMatrix> xs, ys, mid;
    xs.reserve(static_cast<std::size_t>(n));
    ys.reserve(static_cast<std::size_t>(n));
    mid.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) xs.push_back(random_psd(dim, 1.0, rng));
    for (int j = 0; j < n; ++j) ys.push_back(random_psd(dim, 1.0, rng));
    for (int j = 0; j < n; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      mid.push_back(
          PsdMatrix{HermitianMatrix(0.5 * (xs[sj].matrix() + ys[sj].matrix()))});
    }
    const double d = phi_p(mid, p) - 0.5 * phi_p(xs, p) - 0.5 * phi_p(ys, p);
    if (witness) {
      nlohmann::json jx = nlohmann::json::array();
      nlohmann::json jy = nlohmann::json::array();
      for (const auto& m : xs) jx.push_back(io::matrix_to_json(m.matrix()));
      for (const auto& m : ys) jy.push_back(io::matrix_to_json(m.matrix()));
      (*witness)["first_tuple"] = std::move(jx);
      (*witness)["second_tuple"] = std::move(jy);
      (*witness)["raw_gap"] = d;
    }
    return midpoint_slack(p.regime(), d);
  };

  ProbeReport rep = run_campaign("midpoint", trials, seed, tol, threads, trial);
  rep.p = p.value();
  rep.dims = {dim};
  rep.contract = midpoint_contract(p.regime());
  rep.extras["n"] = n;
  rep.extras["regime"] = regime_name(p.regime());
  return rep;
}

OperatorConvexityWitness operator_convexity_witness(double p,
                                                    Eigen::Index dim,
                                                    std::uint64_t seed,
                                                    int max_attempts,
                                                    double tol_gap) {
  if (dim < 2) throw ShapeError("operator_convexity_witness needs dim >= 2");
  if (max_attempts < 1)
    throw InvalidArgument("operator_convexity_witness needs attempts >= 1");

  double best_gap = -std::numeric_limits<double>::infinity();
  std::optional<OperatorConvexityWitness> best;

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    PsdMatrix a1 = random_psd(dim, 1.0, rng);
    PsdMatrix a2 = random_psd(dim, 1.0, rng);
    const PsdMatrix mid{HermitianMatrix(0.5 * (a1.matrix() + a2.matrix()))};
    // The best vector for this pair is the top eigenvector of the
    // midpoint-power excess.
    const Matrix gap_op =
        psd_power_matrix(mid, p) -
        0.5 * (psd_power_matrix(a1, p) + psd_power_matrix(a2, p));
    const Spectrum s = eig_hermitian(HermitianMatrix(gap_op));
    const Eigen::Index top = s.dim() - 1;
    const double gap = s.eigenvalues[top];
    if (gap > best_gap) {
      best_gap = gap;
      best = OperatorConvexityWitness{std::move(a1), std::move(a2),
                                      s.eigenvectors.col(top), gap,
                                      attempt + 1};
    }
    if (best_gap > tol_gap) return *best;
  }
  std::ostringstream msg;
  msg << "no operator-convexity violation found for p = " << p << " in "
      << max_attempts << " attempts (best gap " << best_gap << ")";
  throw SearchFailureError(msg.str(), best_gap);
}

namespace {

// Unitary whose first column is v (Householder reflection).
Matrix complete_to_unitary(const ComplexVector& v) {
  const Eigen::Index d = v.size();
  ComplexVector u = v / v.norm();
  if (std::abs(u[0]) > 0.0) u *= std::conj(u[0]) / std::abs(u[0]);
  ComplexVector w = u;
  w[0] -= 1.0;
  const double n = w.norm();
  if (n < 1e-12) return Matrix::Identity(d, d);
  w /= n;
  return Matrix::Identity(d, d) - 2.0 * (w * w.adjoint());
}

PsdMatrix rotated_psd(const PsdMatrix& a, const Matrix& u) {
  return PsdMatrix{HermitianMatrix(u.adjoint() * a.matrix() * u)};
}

}  // namespace

double counterexample_margin(const PsdMatrix& a1, const PsdMatrix& a2,
                             const ComplexVector& v, double lambda, double t,
                             double p) {
  if (a1.dim() != a2.dim() || v.size() != a1.dim())
    throw ShapeError("counterexample_margin arguments must share one dimension");
  const PExponent pe(p);
  const Eigen::Index d = a1.dim();
  const Matrix u = complete_to_unitary(v);
  const PsdMatrix a1r = rotated_psd(a1, u);
  const PsdMatrix a2r = rotated_psd(a2, u);
  const PsdMatrix midr{HermitianMatrix(0.5 * (a1r.matrix() + a2r.matrix()))};

  Spectrum bs;
  bs.eigenvalues = RealVector::Constant(d, lambda);
  bs.eigenvalues[0] = 1.0;
  bs.eigenvectors = Matrix::Identity(d, d);
  const PsdMatrix b = PsdMatrix::from_spectrum(std::move(bs));

  return phi_p({scale(midr, t), b}, pe) -
         0.5 * phi_p({scale(a1r, t), b}, pe) -
         0.5 * phi_p({scale(a2r, t), b}, pe);
}

ConvexityWitness convexity_counterexample(double p, Eigen::Index dim,
                                          std::uint64_t seed,
                                          int max_attempts) {
  if (!(p > 2.0))
    throw InvalidArgument("convexity_counterexample requires p > 2");
  const OperatorConvexityWitness w =
      operator_convexity_witness(p, dim, seed, max_attempts);

  ConvexityWitness best{w.a1, w.a2, w.a1, w.v, 0.0, 0.0,
                        -std::numeric_limits<double>::infinity(), w.gap};
  nlohmann::json scan = nlohmann::json::array();

  for (double lambda = 1e1; lambda < 1e6 * 1.5; lambda *= 10.0) {
    for (double t = 1e-1; t > 1e-4 * 0.5; t /= 10.0) {
      const double margin = counterexample_margin(w.a1, w.a2, w.v, lambda, t, p);
      scan.push_back({{"lambda", lambda}, {"t", t}, {"margin", margin}});
      if (margin > best.margin) {
        best.lambda = lambda;
        best.t = t;
        best.margin = margin;
      }
    }
  }
  if (!(best.margin > 0.0)) {
    throw ConstructiveFailureError(
        "no positive midpoint-convexity margin on the (lambda, t) grid",
        scan.dump());
  }
  // Witness operator in the original basis, spectrum pinned exactly.
  const Matrix u = complete_to_unitary(w.v);
  Spectrum bs;
  bs.eigenvalues = RealVector::Constant(dim, best.lambda);
  bs.eigenvalues[0] = 1.0;
  bs.eigenvectors = u;
  best.b = PsdMatrix::from_spectrum(std::move(bs));
  return best;
}

ProbeReport counterexample_report(double p, Eigen::Index dim,
                                  std::uint64_t seed, int max_attempts) {
  const ConvexityWitness w =
      convexity_counterexample(p, dim, seed, max_attempts);
  ProbeReport rep;
  rep.name = "counterexample";
  rep.trials = 1;
  rep.seed = seed;
  rep.p = p;
  rep.dims = {dim};
  rep.tol = 0.0;
  rep.contract = true;
  rep.slacks = {w.margin};
  rep.worst_slack = w.margin;
  rep.mean_slack = w.margin;
  rep.worst_trial = 0;
  rep.violations = (w.margin > 0.0) ? 0 : 1;
  nlohmann::json jw;
  jw["a1"] = io::matrix_to_json(w.a1.matrix());
  jw["a2"] = io::matrix_to_json(w.a2.matrix());
  jw["b"] = io::matrix_to_json(w.b.matrix());
  jw["v"] = io::matrix_to_json(Matrix(w.v));
  jw["lambda"] = w.lambda;
  jw["t"] = w.t;
  jw["margin"] = w.margin;
  jw["vector_gap"] = w.vector_gap;
  rep.witness = std::move(jw);
  rep.extras["lambda"] = w.lambda;
  rep.extras["t"] = w.t;
  rep.extras["vector_gap"] = w.vector_gap;
  return rep;
}

ExpansionReport small_t_expansion(const PsdMatrix& a, const PsdMatrix& b,
                                  double p, std::vector<double> t_grid) {
  if (!(p > 1.0)) throw InvalidArgument("small_t_expansion requires p > 1");
  if (a.dim() != b.dim())
    throw ShapeError("small_t_expansion arguments must share one dimension");
  const PExponent pe(p);

  // psd_power_matrix throws SingularityError when B is singular.
  const Matrix b1mp = psd_power_matrix(b, 1.0 - p);
  const Matrix ap = psd_power_matrix(a, p);
  const double base = b.trace();
  const double lin = (b1mp * ap).trace().real() / p;

  ExpansionReport rep;
  rep.t_grid = std::move(t_grid);
  rep.residuals.reserve(rep.t_grid.size());
  // Points below the double-precision noise floor of the cancellation
  // would corrupt the log-log fit; they are reported but not fitted.
  const double floor = 1e-13 * std::max(1.0, base);

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const double t : rep.t_grid) {
    if (!(t > 0.0)) throw InvalidArgument("t grid must be positive");
    const double phi = phi_p({scale(a, t), b}, pe);
    const double r = phi - base - std::pow(t, p) * lin;
    rep.residuals.push_back(r);
    if (std::abs(r) > floor) {
      const double x = std::log(t);
      const double y = std::log(std::abs(r));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++rep.points_used;
    }
  }
  if (rep.points_used >= 2) {
    const double denom = rep.points_used * sxx - sx * sx;
    rep.fitted_exponent = (rep.points_used * sxy - sx * sy) / denom;
  } else {
    rep.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    rep.degenerate = true;
  }
  return rep;
}

// -- Identity checks ----------------------------------------------------------

double swap_split_residual(const PsdMatrix& a1, const PsdMatrix& a2,
                           double p) {
  if (a1.dim() != a2.dim())
    throw ShapeError("swap_split_residual arguments must share one dimension");
  if (!(p > 0.0 && p < 1.0))
    throw InvalidArgument("swap_split_residual requires 0 < p < 1");
  const Eigen::Index d = a1.dim();

  const Matrix p1 = psd_power_matrix(a1, p);
  const Matrix p2 = psd_power_matrix(a2, p);
  const double lhs = 2.0 * trace_root_p(p1 + p2, p);

  // Doubled space: Ap = diag(A1^p, A2^p), sigma the block swap.
  Matrix apow = Matrix::Zero(2 * d, 2 * d);
  apow.topLeftCorner(d, d) = p1;
  apow.bottomRightCorner(d, d) = p2;
  Matrix sigma = Matrix::Zero(2 * d, 2 * d);
  sigma.topRightCorner(d, d) = Matrix::Identity(d, d);
  sigma.bottomLeftCorner(d, d) = Matrix::Identity(d, d);
  const Matrix eye = Matrix::Identity(2 * d, 2 * d);
  const Matrix proj_plus = 0.5 * (eye + sigma);
  const Matrix proj_minus = 0.5 * (eye - sigma);

  // Compression on the range of the projection: the zero modes of
  // Pi Ap Pi carry eigenvalue 0 and contribute 0 under 0^{1/p} = 0.
  const double plus = trace_root_p(proj_plus * apow * proj_plus, p);
  const double minus = trace_root_p(proj_minus * apow * proj_minus, p);
  const double rhs = std::pow(2.0, 1.0 / p) * (plus + minus);
  return rel_residual(lhs, rhs);
}

double phi2_trace_norm_residual(const std::vector<PsdMatrix>& as) {
  if (as.empty())
    throw InvalidArgument("phi2_trace_norm_residual needs at least one matrix");
  const Eigen::Index d = as.front().dim();
  Matrix stack(static_cast<Eigen::Index>(as.size()) * d, d);
  for (std::size_t j = 0; j < as.size(); ++j) {
    if (as[j].dim() != d)
      throw ShapeError("phi2_trace_norm_residual needs equal dimensions");
    stack.middleRows(static_cast<Eigen::Index>(j) * d, d) = as[j].matrix();
  }
  const double lhs = phi_p(as, PExponent(2.0));
  const double rhs = trace_norm(stack);
  return rel_residual(lhs, rhs);
}

DualWitness holder_dual_witness(const PsdMatrix& a, const TensorSpace& space,
                                double p) {
  if (space.factors() != 2)
    throw ShapeError("holder_dual_witness expects a two-factor space");
  if (a.dim() != space.total_dim())
    throw ShapeError("holder_dual_witness: operator does not live on the space");
  if (!(p > 1.0)) throw InvalidArgument("holder_dual_witness requires p > 1");
  const double q = PExponent(p).conjugate();

  const Matrix t1 = partial_trace(a.matrix(), space, 1);
  const PsdMatrix marginal{HermitianMatrix(t1)};
  const RealVector& lam = marginal.spectrum().eigenvalues;
  double trace_tp = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam[i] > 0.0) trace_tp += std::pow(lam[i], p);
  if (!(trace_tp > 0.0))
    throw InvalidArgument("holder_dual_witness: zero marginal");

  const double c = std::pow(trace_tp, -1.0 / q);
  DualWitness w;
  w.b = c * psd_power_matrix(marginal, p - 1.0);
  w.attained = (w.b * t1).trace().real();
  w.lhs = std::pow(trace_tp, 1.0 / p);
  // Tr(B^q) = c^q Tr(T^{(p-1)q}) = c^q Tr(T^p), should be 1.
  w.bq_trace = std::pow(c, q) * trace_tp;
  return w;
}

double dual_witness_residual(const PsdMatrix& a, const TensorSpace& space,
                             double p) {
  const DualWitness w = holder_dual_witness(a, space, p);
  return rel_residual(w.attained, w.lhs);
}

double group_average_residual(const HermitianMatrix& a,
                              const TensorSpace& space,
                              std::size_t averaged_factor) {
  const HermitianMatrix avg = group_average(a, space, averaged_factor);
  const Eigen::Index n = space.dim(averaged_factor);
  const Matrix traced = partial_trace(a.matrix(), space, averaged_factor);
  const Matrix eye = Matrix::Identity(n, n);
  const Matrix expected =
      (averaged_factor == 1 ? kron(eye, traced) : kron(traced, eye)) /
      static_cast<double>(n);
  return (avg.matrix() - expected).cwiseAbs().maxCoeff();
}

double block_diag_residual(const std::vector<PsdMatrix>& as,
                           const PExponent& p) {
  if (as.empty())
    throw InvalidArgument("block_diag_residual needs at least one block");
  const Eigen::Index d = as.front().dim();
  const auto n = static_cast<Eigen::Index>(as.size());
  // Blocks are carried on the second (fast) factor so that the inner
  // partial trace of psi_p sums them.
  const TensorSpace space({d, n});
  Matrix big = Matrix::Zero(d * n, d * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& block = as[static_cast<std::size_t>(j)];
    if (block.dim() != d)
      throw ShapeError("block_diag_residual blocks must share one dimension");
    Matrix e = Matrix::Zero(n, n);
    e(j, j) = 1.0;
    big += kron(block.matrix(), e);
  }
  const double psi = psi_p(PsdMatrix{HermitianMatrix(big)}, space, p);
  const double phi = phi_p(as, p);
  return rel_residual(psi, phi);
}

BksBlockReport bks_block_report(const PsdMatrix& a, const PsdMatrix& c,
                                double p) {
  if (a.dim() != c.dim())
    throw ShapeError("bks_block_report arguments must share one dimension");
  if (!(p > 1.0)) throw InvalidArgument("bks_block_report requires p > 1");
  const Eigen::Index d = a.dim();
  const Matrix ap2 = psd_power_matrix(a, p / 2.0);
  const Matrix cp2 = psd_power_matrix(c, p / 2.0);
  const double reference = phi_p({a, c}, PExponent(p));

  BksBlockReport rep;
  Matrix gram_sum = Matrix::Zero(2 * d, 2 * d);
  for (const double sign : {1.0, -1.0}) {
    Matrix m = Matrix::Zero(2 * d, 2 * d);
    m.topLeftCorner(d, d) = ap2;
    m.bottomLeftCorner(d, d) = sign * cp2;

    const Spectrum left = eig_hermitian(HermitianMatrix(m.adjoint() * m));
    const Spectrum right = eig_hermitian(HermitianMatrix(m * m.adjoint()));
    const double scale = std::max(
        {left.eigenvalues.cwiseAbs().maxCoeff(),
         right.eigenvalues.cwiseAbs().maxCoeff(), 1.0});
    double spec_residual = 0.0;
    for (Eigen::Index i = 0; i < 2 * d; ++i)
      spec_residual = std::max(
          spec_residual,
          std::abs(left.eigenvalues[i] - right.eigenvalues[i]) / scale);

    const double tr_left = trace_root_p(m.adjoint() * m, p);
    const double tr_residual = rel_residual(tr_left, reference);
    if (sign > 0.0) {
      rep.spectrum_residual_plus = spec_residual;
      rep.trace_residual_plus = tr_residual;
    } else {
      rep.spectrum_residual_minus = spec_residual;
      rep.trace_residual_minus = tr_residual;
    }
    gram_sum += m * m.adjoint();
  }
  rep.concavity_slack = trace_root_p(0.5 * gram_sum, p) - reference;
  return rep;
}

// -- Inequality campaigns ------------------------------------------------------

double minkowski_slack(double p, const Sides& sides) {
  return (p >= 1.0) ? (sides.rhs - sides.lhs) : (sides.lhs - sides.rhs);
}

bool minkowski3_contract(double p) {
  return (p > 0.0 && p <= 1.0) || p == 2.0;
}

namespace {

ProbeReport minkowski_campaign(const char* name, int trials,
                               const TensorSpace& space, const PExponent& p,
                               std::uint64_t seed, double tol, int threads,
                               bool contract) {
  const bool three = space.factors() == 3;
  auto trial = [&space, &p, three](std::uint64_t ts, nlohmann::json* witness) {
    std::mt19937_64 rng(ts);
    const PsdMatrix a = random_psd(space.total_dim(), 1.0, rng);
    const Sides sides = three ? minkowski3_sides(a, space, p)
                              : minkowski2_sides(a, space, p);
    if (witness) {
      (*witness)["a"] = io::matrix_to_json(a.matrix());
      (*witness)["lhs"] = sides.lhs;
      (*witness)["rhs"] = sides.rhs;
    }
    return minkowski_slack(p.value(), sides);
  };
  ProbeReport rep = run_campaign(name, trials, seed, tol, threads, trial);
  rep.p = p.value();
  rep.dims = space.dims();
  rep.contract = contract;
  return rep;
}

}  // namespace

ProbeReport verify_minkowski2(int trials, const TensorSpace& space,
                              const PExponent& p, std::uint64_t seed,
                              double tol, int threads, bool exploratory) {
  if (space.factors() != 2)
    throw ShapeError("verify_minkowski2 expects a two-factor space");
  return minkowski_campaign("minkowski2", trials, space, p, seed, tol,
                            threads, !exploratory);
}

ProbeReport verify_minkowski3(int trials, const TensorSpace& space,
                              const PExponent& p, std::uint64_t seed,
                              double tol, int threads, bool exploratory) {
  if (space.factors() != 3)
    throw ShapeError("verify_minkowski3 expects a three-factor space");
  const bool contract = !exploratory && minkowski3_contract(p.value());
  return minkowski_campaign("minkowski3", trials, space, p, seed, tol,
                            threads, contract);
}

SsaLimit ssa_from_limit(const DensityMatrix& a, const TensorSpace& space,
                        double h) {
  if (!(h > 0.0 && h <= 0.1))
    throw InvalidArgument("ssa_from_limit requires h in (0, 0.1]");
  const Sides at_one = minkowski3_sides(a.state(), space, PExponent(1.0));
  const Sides at_below = minkowski3_sides(a.state(), space, PExponent(1.0 - h));
  const double gap_one = at_one.rhs - at_one.lhs;
  const double gap_below = at_below.rhs - at_below.lhs;
  SsaLimit out;
  out.fd_derivative = (gap_one - gap_below) / h;
  out.deficit = ssa_deficit(a, space);
  out.discrepancy = std::abs(out.fd_derivative - out.deficit);
  return out;
}

double ssa_limit_richardson(const DensityMatrix& a, const TensorSpace& space,
                            const std::vector<double>& hs) {
  if (hs.size() < 2)
    throw InvalidArgument("ssa_limit_richardson needs at least two step sizes");
  // First-order one-sided differences: successive elimination of the
  // O(h) term, assuming a constant ratio between steps.
  std::vector<double> table;
  table.reserve(hs.size());
  for (const double h : hs)
    table.push_back(ssa_from_limit(a, space, h).fd_derivative);
  std::vector<double> ratio;
  for (std::size_t i = 0; i + 1 < hs.size(); ++i)
    ratio.push_back(hs[i] / hs[i + 1]);
  for (std::size_t level = 1; level < table.size(); ++level) {
    for (std::size_t i = table.size() - 1; i >= level; --i) {
      const double r = std::pow(ratio[i - 1], static_cast<double>(level));
      table[i] = (r * table[i] - table[i - 1]) / (r - 1.0);
      if (i == level) break;
    }
  }
  return table.back();
}

ProbeReport verify_ssa(int trials, const TensorSpace& space,
                       std::uint64_t seed, double tol, int threads) {
  if (space.factors() != 3)
    throw ShapeError("verify_ssa expects a three-factor space");
  auto trial = [&space](std::uint64_t ts, nlohmann::json* witness) {
    std::mt19937_64 rng(ts);
    const PsdMatrix w = random_psd(space.total_dim(), 1.0, rng);
    const DensityMatrix rho(w);
    const double deficit = ssa_deficit(rho, space);
    if (witness) {
      (*witness)["rho"] = io::matrix_to_json(rho.matrix());
      (*witness)["deficit"] = deficit;
    }
    return deficit;
  };
  ProbeReport rep = run_campaign("ssa", trials, seed, tol, threads, trial);
  rep.p = 1.0;
  rep.dims = space.dims();
  return rep;
}

ProbeReport verify_ssa_limit(int trials, const TensorSpace& space, double h,
                             std::uint64_t seed, double tol, int threads) {
  if (space.factors() != 3)
    throw ShapeError("verify_ssa_limit expects a three-factor space");
  // The per-trial discrepancy |fd - deficit| is recorded alongside the
  // asserted slack (the derivative itself).
  std::vector<double> discrepancies(static_cast<std::size_t>(trials), 0.0);
  auto trial = [&space, h, seed, &discrepancies](std::uint64_t ts,
                                                 nlohmann::json* witness) {
    std::mt19937_64 rng(ts);
    const PsdMatrix w = random_psd(space.total_dim(), 1.0, rng);
    const DensityMatrix rho(w);
    const SsaLimit lim = ssa_from_limit(rho, space, h);
    const std::uint64_t index = ts - seed;
    if (index < discrepancies.size()) discrepancies[index] = lim.discrepancy;
    if (witness) {
      (*witness)["rho"] = io::matrix_to_json(rho.matrix());
      (*witness)["fd_derivative"] = lim.fd_derivative;
      (*witness)["deficit"] = lim.deficit;
    }
    return lim.fd_derivative;
  };
  ProbeReport rep =
      run_campaign("ssa_limit", trials, seed, tol, threads, trial);
  rep.p = 1.0;
  rep.dims = space.dims();
  rep.extras["h"] = h;
  double worst_disc = 0.0, sum_disc = 0.0;
  for (const double d : discrepancies) {
    worst_disc = std::max(worst_disc, d);
    sum_disc += d;
  }
  rep.extras["worst_discrepancy"] = worst_disc;
  rep.extras["mean_discrepancy"] = sum_disc / trials;
  return rep;
}

ProbeReport verify_bks(int trials, Eigen::Index dim, double p,
                       std::uint64_t seed, double tol, int threads) {
  if (!(p > 1.0)) throw InvalidArgument("verify_bks requires p > 1");
  auto trial = [dim, p](std::uint64_t ts, nlohmann::json* witness) {
    std::mt19937_64 rng(ts);
    const PsdMatrix a = random_psd(dim, 1.0, rng);
    const PsdMatrix b = random_psd(dim, 1.0, rng);
    const Sides difference = bks_sides(a, b, p);
    const PsdMatrix a2 = random_psd(dim, 1.0, rng);
    const PsdMatrix c = random_psd(dim, 1.0, rng);
    const Sides subadd = bks_subadditivity_sides(a2, c, p);
    const double s1 = difference.lhs - difference.rhs;
    const double s2 = subadd.lhs - subadd.rhs;
    if (witness) {
      (*witness)["a"] = io::matrix_to_json(a.matrix());
      (*witness)["b"] = io::matrix_to_json(b.matrix());
      (*witness)["difference_slack"] = s1;
      (*witness)["subadditivity_slack"] = s2;
    }
    return std::min(s1, s2);
  };
  ProbeReport rep = run_campaign("bks", trials, seed, tol, threads, trial);
  rep.p = p;
  rep.dims = {dim};
  return rep;
}

ProbeReport verify_identities(int trials, Eigen::Index dim,
                              const TensorSpace& ga_space, double p_low,
                              double p_high, std::uint64_t seed,
                              int threads) {
  if (ga_space.factors() != 2)
    throw ShapeError("verify_identities expects a two-factor space");
  if (!(p_low > 0.0 && p_low < 1.0))
    throw InvalidArgument("verify_identities requires 0 < p_low < 1");
  if (!(p_high > 1.0))
    throw InvalidArgument("verify_identities requires p_high > 1");

  constexpr double kResidualTol = 1e-9;
  constexpr double kGroupAverageTol = 1e-12;  // exact identity

  auto trial = [dim, &ga_space, p_low, p_high](std::uint64_t ts,
                                               nlohmann::json* witness) {
    std::mt19937_64 rng(ts);
    const PsdMatrix a1 = random_psd(dim, 1.0, rng);
    const PsdMatrix a2 = random_psd(dim, 1.0, rng);
    const PsdMatrix a3 = random_psd(dim, 1.0, rng);
    const HermitianMatrix h = random_hermitian(ga_space.total_dim(), 1.0, rng);
    const PsdMatrix on_space = random_psd(ga_space.total_dim(), 1.0, rng);

    const double swap_split = swap_split_residual(a1, a2, p_low);
    const double stacked = phi2_trace_norm_residual({a1, a2, a3});
    const double averaged = group_average_residual(h, ga_space, 2);
    const double blockdiag = block_diag_residual({a1, a2}, PExponent(p_low));
    const double dual = dual_witness_residual(on_space, ga_space, p_high);
    const BksBlockReport blocks = bks_block_report(a1, a2, p_high);
    const double block_residual = std::max(
        {blocks.spectrum_residual_plus, blocks.spectrum_residual_minus,
         blocks.trace_residual_plus, blocks.trace_residual_minus});

    // Margin to each identity's pinned tolerance; a violation is a
    // negative margin.
    const double slack = std::min({kResidualTol - swap_split,
                                   kResidualTol - stacked,
                                   kGroupAverageTol - averaged,
                                   kResidualTol - blockdiag,
                                   kResidualTol - dual,
                                   kResidualTol - block_residual,
                                   blocks.concavity_slack + kResidualTol});
    if (witness) {
      (*witness)["swap_split_residual"] = swap_split;
      (*witness)["stacked_trace_norm_residual"] = stacked;
      (*witness)["group_average_residual"] = averaged;
      (*witness)["block_diag_residual"] = blockdiag;
      (*witness)["dual_witness_residual"] = dual;
      (*witness)["bks_block_residual"] = block_residual;
      (*witness)["bks_block_concavity_slack"] = blocks.concavity_slack;
    }
    return slack;
  };

  ProbeReport rep =
      run_campaign("identities", trials, seed, 0.0, threads, trial);
  rep.p = p_low;
  rep.dims = ga_space.dims();
  rep.extras["p_low"] = p_low;
  rep.extras["p_high"] = p_high;
  rep.extras["matrix_dim"] = dim;
  rep.extras["residual_tol"] = kResidualTol;
  rep.extras["group_average_tol"] = kGroupAverageTol;
  return rep;
}

// -- Classical (diagonal) oracle -----------------------------------------------

double Tensor3::sum() const {
  double acc = 0.0;
  for (const double v : values) acc += v;
  return acc;
}

Matrix Tensor3::embed_diagonal() const {
  const auto total = static_cast<Eigen::Index>(values.size());
  Matrix m = Matrix::Zero(total, total);
  for (Eigen::Index i = 0; i < total; ++i)
    m(i, i) = values[static_cast<std::size_t>(i)];
  return m;
}

Sides classical_minkowski3_sides(const Tensor3& f, double p) {
  Sides out;
  // lhs: marginalize x, p-sum over y, then sum over z.
  for (Eigen::Index z = 0; z < f.nz; ++z) {
    double inner = 0.0;
    for (Eigen::Index y = 0; y < f.ny; ++y) {
      double m = 0.0;
      for (Eigen::Index x = 0; x < f.nx; ++x) m += f.at(x, y, z);
      if (m > 0.0) inner += std::pow(m, p);
    }
    if (inner > 0.0) out.lhs += std::pow(inner, 1.0 / p);
  }
  // rhs: p-marginalize y, then sum over x and z.
  for (Eigen::Index x = 0; x < f.nx; ++x) {
    for (Eigen::Index z = 0; z < f.nz; ++z) {
      double m = 0.0;
      for (Eigen::Index y = 0; y < f.ny; ++y) {
        const double v = f.at(x, y, z);
        if (v > 0.0) m += std::pow(v, p);
      }
      if (m > 0.0) out.rhs += std::pow(m, 1.0 / p);
    }
  }
  return out;
}

namespace {

double scalar_entropy(const std::vector<double>& probs) {
  double s = 0.0;
  for (const double q : probs)
    if (q > kEntropyFloor) s -= q * std::log(q);
  return s;
}

}  // namespace

double classical_ssa_deficit(const Tensor3& f) {
  const double total = f.sum();
  if (!(total > 0.0))
    throw InvalidArgument("classical_ssa_deficit needs a positive mass");

  std::vector<double> p123, p13, p23, p3;
  p123.reserve(f.values.size());
  for (const double v : f.values) p123.push_back(v / total);
  p13.assign(static_cast<std::size_t>(f.nx * f.nz), 0.0);
  p23.assign(static_cast<std::size_t>(f.ny * f.nz), 0.0);
  p3.assign(static_cast<std::size_t>(f.nz), 0.0);
  for (Eigen::Index x = 0; x < f.nx; ++x) {
    for (Eigen::Index y = 0; y < f.ny; ++y) {
      for (Eigen::Index z = 0; z < f.nz; ++z) {
        const double q = f.at(x, y, z) / total;
        p13[static_cast<std::size_t>(x * f.nz + z)] += q;
        p23[static_cast<std::size_t>(y * f.nz + z)] += q;
        p3[static_cast<std::size_t>(z)] += q;
      }
    }
  }
  return scalar_entropy(p13) + scalar_entropy(p23) - scalar_entropy(p123) -
         scalar_entropy(p3);
}

ProbeReport verify_classical_oracle(int trials,
                                    const std::vector<Eigen::Index>& shape,
                                    double p, std::uint64_t seed,
                                    double cross_tol, int threads) {
  if (shape.size() != 3)
    throw ShapeError("verify_classical_oracle expects three dimensions");
  const TensorSpace space(shape);
  const PExponent pe(p);

  auto trial = [&shape, &space, &pe, p, cross_tol](std::uint64_t ts,
                                                   nlohmann::json* witness) {
    std::mt19937_64 rng(ts);
    Tensor3 f(shape[0], shape[1], shape[2]);
    for (double& v : f.values) v = uniform01(rng);

    const Sides scalar = classical_minkowski3_sides(f, p);
    const double scalar_deficit = classical_ssa_deficit(f);

    const PsdMatrix diag{HermitianMatrix(f.embed_diagonal())};
    const Sides matrix_sides = minkowski3_sides(diag, space, pe);
    const double matrix_deficit = ssa_deficit(DensityMatrix(diag), space);

    const double cross_lhs = rel_residual(scalar.lhs, matrix_sides.lhs);
    const double cross_rhs = rel_residual(scalar.rhs, matrix_sides.rhs);
    const double cross_ssa = std::abs(scalar_deficit - matrix_deficit);
    const double ineq_slack = minkowski_slack(p, scalar);

    const double slack =
        std::min({cross_tol - cross_lhs, cross_tol - cross_rhs,
                  cross_tol - cross_ssa, ineq_slack, scalar_deficit});
    if (witness) {
      (*witness)["tensor"] = f.values;
      (*witness)["scalar_lhs"] = scalar.lhs;
      (*witness)["scalar_rhs"] = scalar.rhs;
      (*witness)["matrix_lhs"] = matrix_sides.lhs;
      (*witness)["matrix_rhs"] = matrix_sides.rhs;
      (*witness)["scalar_deficit"] = scalar_deficit;
      (*witness)["matrix_deficit"] = matrix_deficit;
    }
    return slack;
  };

  ProbeReport rep = run_campaign("oracle", trials, seed, 0.0, threads, trial);
  rep.p = p;
  rep.dims = shape;
  rep.extras["cross_tol"] = cross_tol;
  return rep;
}

}  // namespace trineq::probes
