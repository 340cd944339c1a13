#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "json.hpp"

#include "trineq/errors.hpp"
#include "trineq/functionals.hpp"
#include "trineq/io.hpp"
#include "trineq/matrix.hpp"
#include "trineq/probes.hpp"
#include "trineq/tensor.hpp"

namespace py = pybind11;
using namespace trineq;
namespace probes = trineq::probes;

namespace {

PsdMatrix as_psd(const Matrix& m) { return PsdMatrix{HermitianMatrix(m)}; }

std::vector<PsdMatrix> as_psd_list(const std::vector<Matrix>& ms) {
  std::vector<PsdMatrix> out;
  out.reserve(ms.size());
  for (const auto& m : ms) out.push_back(as_psd(m));
  return out;
}

TensorSpace as_space(const std::vector<Eigen::Index>& dims) {
  return TensorSpace(dims);
}

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict report_to_py(const probes::ProbeReport& rep) {
  return json_to_py(rep.to_json());
}

probes::Tensor3 as_tensor3(const py::array_t<double>& arr) {
  const auto buf = arr.unchecked<3>();
  probes::Tensor3 f(buf.shape(0), buf.shape(1), buf.shape(2));
  for (py::ssize_t x = 0; x < buf.shape(0); ++x)
    for (py::ssize_t y = 0; y < buf.shape(1); ++y)
      for (py::ssize_t z = 0; z < buf.shape(2); ++z)
        f.at(x, y, z) = buf(x, y, z);
  return f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Trace-functional toolkit: Hermitian functional calculus, partial "
      "traces, entropy quantities, and seeded verification campaigns for "
      "the associated convexity and Minkowski-type inequalities.";

  py::register_exception<Error>(m, "TrineqError", PyExc_RuntimeError);

  // -- matcore --------------------------------------------------------------
  m.def(
      "eig_hermitian",
      [](const Matrix& h) {
        const Spectrum s = eig_hermitian(HermitianMatrix(h));
        return py::make_tuple(s.eigenvalues, s.eigenvectors);
      },
      py::arg("h"),
      "Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.");
  m.def(
      "apply_fn",
      [](const Matrix& h, const std::function<double(double)>& f) {
        return apply_fn(HermitianMatrix(h), f).matrix();
      },
      py::arg("h"), py::arg("f"),
      "Spectral functional calculus U diag(f(lambda)) U*.");
  m.def(
      "mat_power",
      [](const Matrix& a, double p) { return mat_power(as_psd(a), p).matrix(); },
      py::arg("a"), py::arg("p"),
      "Spectral power of a PSD matrix, 0^p = 0 for p > 0.");
  m.def(
      "positive_part",
      [](const Matrix& x) { return positive_part(HermitianMatrix(x)).matrix(); },
      py::arg("x"), "Spectral positive part (X + |X|)/2.");
  m.def("trace_norm", &trace_norm, py::arg("x"),
        "Sum of singular values; x may be rectangular.");
  m.def(
      "random_psd",
      [](Eigen::Index dim, double scale, std::uint64_t seed) {
        return random_psd(dim, scale, seed).matrix();
      },
      py::arg("dim"), py::arg("scale") = 1.0, py::arg("seed") = 0,
      "Seeded Wishart-type PSD matrix G G*.");
  m.def(
      "random_hermitian",
      [](Eigen::Index dim, double scale, std::uint64_t seed) {
        return random_hermitian(dim, scale, seed).matrix();
      },
      py::arg("dim"), py::arg("scale") = 1.0, py::arg("seed") = 0);

  // -- tensor ----------------------------------------------------------------
  m.def(
      "kron", [](const Matrix& a, const Matrix& b) { return kron(a, b); },
      py::arg("a"), py::arg("b"),
      "Kronecker product, first factor on the slow index.");
  m.def(
      "partial_trace",
      [](const Matrix& a, const std::vector<Eigen::Index>& dims,
         std::size_t factor) {
        return partial_trace(a, as_space(dims), factor);
      },
      py::arg("a"), py::arg("dims"), py::arg("factor"),
      "Partial trace over the given factor (numbered from 1).");
  m.def(
      "embed_factor",
      [](const Matrix& b, const std::vector<Eigen::Index>& dims,
         std::size_t factor) {
        return embed_factor(b, as_space(dims), factor);
      },
      py::arg("b"), py::arg("dims"), py::arg("factor"),
      "Identity on every factor except the given one.");
  m.def(
      "signed_permutation_group",
      [](std::size_t n) {
        std::vector<Matrix> out;
        for (const auto& w : signed_permutation_group(n))
          out.push_back(w.matrix());
        return out;
      },
      py::arg("n"), "All 2^n n! signed permutation matrices.");
  m.def(
      "group_average",
      [](const Matrix& a, const std::vector<Eigen::Index>& dims,
         std::size_t factor) {
        return group_average(HermitianMatrix(a), as_space(dims), factor)
            .matrix();
      },
      py::arg("a"), py::arg("dims"), py::arg("factor") = 2,
      "Exact signed-permutation group average over one factor.");

  // -- functionals -------------------------------------------------------------
  m.def(
      "phi_p",
      [](const std::vector<Matrix>& as, double p) {
        return phi_p(as_psd_list(as), PExponent(p));
      },
      py::arg("as_"), py::arg("p"),
      "Tr((sum_j A_j^p)^{1/p}) on a tuple of PSD matrices.");
  m.def(
      "psi_p",
      [](const Matrix& a, const std::vector<Eigen::Index>& dims, double p) {
        return psi_p(as_psd(a), as_space(dims), PExponent(p));
      },
      py::arg("a"), py::arg("dims"), py::arg("p"),
      "Tr_1((Tr_2 A^p)^{1/p}) on a two-factor space.");
  m.def(
      "entropy",
      [](const Matrix& rho) { return entropy(DensityMatrix(as_psd(rho))); },
      py::arg("rho"),
      "-Tr(rho ln rho); the input is normalized to unit trace first.");
  m.def(
      "ssa_deficit",
      [](const Matrix& rho, const std::vector<Eigen::Index>& dims) {
        return ssa_deficit(DensityMatrix(as_psd(rho)), as_space(dims));
      },
      py::arg("rho"), py::arg("dims"),
      "S(A13) + S(A23) - S(A123) - S(A3) on a three-factor space.");
  m.def(
      "minkowski2_sides",
      [](const Matrix& a, const std::vector<Eigen::Index>& dims, double p) {
        const Sides s = minkowski2_sides(as_psd(a), as_space(dims), PExponent(p));
        return py::make_tuple(s.lhs, s.rhs);
      },
      py::arg("a"), py::arg("dims"), py::arg("p"));
  m.def(
      "minkowski3_sides",
      [](const Matrix& a, const std::vector<Eigen::Index>& dims, double p) {
        const Sides s = minkowski3_sides(as_psd(a), as_space(dims), PExponent(p));
        return py::make_tuple(s.lhs, s.rhs);
      },
      py::arg("a"), py::arg("dims"), py::arg("p"));
  m.def(
      "bks_sides",
      [](const Matrix& a, const Matrix& b, double p) {
        const Sides s = bks_sides(as_psd(a), as_psd(b), p);
        return py::make_tuple(s.lhs, s.rhs);
      },
      py::arg("a"), py::arg("b"), py::arg("p"),
      "(Tr((B^p - A^p)_+^{1/p}), Tr((B - A)_+)) for p > 1.");
  m.def(
      "bks_subadditivity_sides",
      [](const Matrix& a, const Matrix& c, double p) {
        const Sides s = bks_subadditivity_sides(as_psd(a), as_psd(c), p);
        return py::make_tuple(s.lhs, s.rhs);
      },
      py::arg("a"), py::arg("c"), py::arg("p"));

  // -- probes ---------------------------------------------------------------
  m.def(
      "midpoint_probe",
      [](double p, int n, Eigen::Index dim, int trials, std::uint64_t seed,
         double tol, int threads) {
        return report_to_py(probes::midpoint_probe(PExponent(p), n, dim,
                                                   trials, seed, tol, threads));
      },
      py::arg("p"), py::arg("n") = 2, py::arg("dim") = 3,
      py::arg("trials") = 100, py::arg("seed") = 1,
      py::arg("tol") = kDefaultTol, py::arg("threads") = 1);
  m.def(
      "counterexample",
      [](double p, Eigen::Index dim, std::uint64_t seed, int attempts) {
        return report_to_py(
            probes::counterexample_report(p, dim, seed, attempts));
      },
      py::arg("p"), py::arg("dim") = 2, py::arg("seed") = 1,
      py::arg("attempts") = 10000,
      "Constructive midpoint-convexity counterexample for p > 2.");
  m.def(
      "counterexample_margin",
      [](const Matrix& a1, const Matrix& a2, const ComplexVector& v,
         double lam, double t, double p) {
        return probes::counterexample_margin(as_psd(a1), as_psd(a2), v, lam,
                                             t, p);
      },
      py::arg("a1"), py::arg("a2"), py::arg("v"), py::arg("lam"), py::arg("t"),
      py::arg("p"));
  m.def(
      "small_t_expansion",
      [](const Matrix& a, const Matrix& b, double p,
         const std::vector<double>& t_grid) {
        const auto rep = probes::small_t_expansion(as_psd(a), as_psd(b), p,
                                                   t_grid);
        py::dict out;
        out["t_grid"] = rep.t_grid;
        out["residuals"] = rep.residuals;
        out["fitted_exponent"] = rep.fitted_exponent;
        out["points_used"] = rep.points_used;
        out["degenerate"] = rep.degenerate;
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("p"),
      py::arg("t_grid") = std::vector<double>{1e-1, 1e-2, 1e-3});
  m.def(
      "swap_split_residual",
      [](const Matrix& a1, const Matrix& a2, double p) {
        return probes::swap_split_residual(as_psd(a1), as_psd(a2), p);
      },
      py::arg("a1"), py::arg("a2"), py::arg("p"));
  m.def(
      "phi2_trace_norm_residual",
      [](const std::vector<Matrix>& as) {
        return probes::phi2_trace_norm_residual(as_psd_list(as));
      },
      py::arg("as_"));
  m.def(
      "holder_dual_witness",
      [](const Matrix& a, const std::vector<Eigen::Index>& dims, double p) {
        const auto w = probes::holder_dual_witness(as_psd(a), as_space(dims), p);
        py::dict out;
        out["b"] = w.b;
        out["attained"] = w.attained;
        out["lhs"] = w.lhs;
        out["bq_trace"] = w.bq_trace;
        return out;
      },
      py::arg("a"), py::arg("dims"), py::arg("p"));
  m.def(
      "group_average_residual",
      [](const Matrix& a, const std::vector<Eigen::Index>& dims,
         std::size_t factor) {
        return probes::group_average_residual(HermitianMatrix(a),
                                              as_space(dims), factor);
      },
      py::arg("a"), py::arg("dims"), py::arg("factor") = 2);
  m.def(
      "block_diag_residual",
      [](const std::vector<Matrix>& as, double p) {
        return probes::block_diag_residual(as_psd_list(as), PExponent(p));
      },
      py::arg("as_"), py::arg("p"));
  m.def(
      "bks_block_report",
      [](const Matrix& a, const Matrix& c, double p) {
        const auto rep = probes::bks_block_report(as_psd(a), as_psd(c), p);
        py::dict out;
        out["spectrum_residual_plus"] = rep.spectrum_residual_plus;
        out["spectrum_residual_minus"] = rep.spectrum_residual_minus;
        out["trace_residual_plus"] = rep.trace_residual_plus;
        out["trace_residual_minus"] = rep.trace_residual_minus;
        out["concavity_slack"] = rep.concavity_slack;
        return out;
      },
      py::arg("a"), py::arg("c"), py::arg("p"));
  m.def(
      "ssa_from_limit",
      [](const Matrix& rho, const std::vector<Eigen::Index>& dims, double h) {
        const auto lim = probes::ssa_from_limit(DensityMatrix(as_psd(rho)),
                                                as_space(dims), h);
        return py::make_tuple(lim.fd_derivative, lim.deficit, lim.discrepancy);
      },
      py::arg("rho"), py::arg("dims"), py::arg("h") = 1e-3,
      "(finite-difference derivative, deficit, discrepancy).");
  m.def(
      "verify_minkowski2",
      [](int trials, const std::vector<Eigen::Index>& dims, double p,
         std::uint64_t seed, double tol, int threads, bool exploratory) {
        return report_to_py(probes::verify_minkowski2(
            trials, as_space(dims), PExponent(p), seed, tol, threads,
            exploratory));
      },
      py::arg("trials"), py::arg("dims"), py::arg("p"), py::arg("seed") = 1,
      py::arg("tol") = kDefaultTol, py::arg("threads") = 1,
      py::arg("exploratory") = false);
  m.def(
      "verify_minkowski3",
      [](int trials, const std::vector<Eigen::Index>& dims, double p,
         std::uint64_t seed, double tol, int threads, bool exploratory) {
        return report_to_py(probes::verify_minkowski3(
            trials, as_space(dims), PExponent(p), seed, tol, threads,
            exploratory));
      },
      py::arg("trials"), py::arg("dims"), py::arg("p"), py::arg("seed") = 1,
      py::arg("tol") = kDefaultTol, py::arg("threads") = 1,
      py::arg("exploratory") = false);
  m.def(
      "verify_ssa",
      [](int trials, const std::vector<Eigen::Index>& dims,
         std::uint64_t seed, double tol, int threads) {
        return report_to_py(
            probes::verify_ssa(trials, as_space(dims), seed, tol, threads));
      },
      py::arg("trials"), py::arg("dims"), py::arg("seed") = 1,
      py::arg("tol") = kDefaultTol, py::arg("threads") = 1);
  m.def(
      "verify_ssa_limit",
      [](int trials, const std::vector<Eigen::Index>& dims, double h,
         std::uint64_t seed, double tol, int threads) {
        return report_to_py(probes::verify_ssa_limit(trials, as_space(dims),
                                                     h, seed, tol, threads));
      },
      py::arg("trials"), py::arg("dims"), py::arg("h") = 1e-3,
      py::arg("seed") = 1, py::arg("tol") = 1e-6, py::arg("threads") = 1);
  m.def(
      "verify_bks",
      [](int trials, Eigen::Index dim, double p, std::uint64_t seed,
         double tol, int threads) {
        return report_to_py(
            probes::verify_bks(trials, dim, p, seed, tol, threads));
      },
      py::arg("trials"), py::arg("dim"), py::arg("p"), py::arg("seed") = 1,
      py::arg("tol") = kDefaultTol, py::arg("threads") = 1);
  m.def(
      "verify_identities",
      [](int trials, Eigen::Index dim, const std::vector<Eigen::Index>& dims,
         double p_low, double p_high, std::uint64_t seed, int threads) {
        return report_to_py(probes::verify_identities(
            trials, dim, as_space(dims), p_low, p_high, seed, threads));
      },
      py::arg("trials") = 100, py::arg("dim") = 3,
      py::arg("dims") = std::vector<Eigen::Index>{2, 2},
      py::arg("p_low") = 0.5, py::arg("p_high") = 2.5, py::arg("seed") = 1,
      py::arg("threads") = 1);
  m.def(
      "verify_classical_oracle",
      [](int trials, const std::vector<Eigen::Index>& shape, double p,
         std::uint64_t seed, double cross_tol, int threads) {
        return report_to_py(probes::verify_classical_oracle(
            trials, shape, p, seed, cross_tol, threads));
      },
      py::arg("trials") = 100, py::arg("shape") = std::vector<Eigen::Index>{2, 2, 2},
      py::arg("p") = 2.0, py::arg("seed") = 1, py::arg("cross_tol") = 1e-10,
      py::arg("threads") = 1);
  m.def(
      "classical_minkowski3_sides",
      [](const py::array_t<double>& f, double p) {
        const Sides s = probes::classical_minkowski3_sides(as_tensor3(f), p);
        return py::make_tuple(s.lhs, s.rhs);
      },
      py::arg("f"), py::arg("p"),
      "Scalar three-variable sides of the inequality on a nonnegative "
      "tensor.");
  m.def(
      "classical_ssa_deficit",
      [](const py::array_t<double>& f) {
        return probes::classical_ssa_deficit(as_tensor3(f));
      },
      py::arg("f"));

  // -- io ----------------------------------------------------------------------
  m.def(
      "matrix_to_json",
      [](const Matrix& m) { return io::matrix_to_json(m).dump(); },
      py::arg("m"), "Interchange JSON {dim, re, im} as a string.");
  m.def(
      "matrix_from_json",
      [](const std::string& text) {
        return io::matrix_from_json(nlohmann::json::parse(text));
      },
      py::arg("text"));

  m.attr("__version__") = "0.1.0";
}
