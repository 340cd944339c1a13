#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"

#include "trineq/functionals.hpp"
#include "trineq/tensor.hpp"

using namespace trineq;
using namespace trineq::testing;

namespace {

// Scalar oracle for simultaneously diagonal tuples:
// sum_i (sum_j a_j(i)^p)^{1/p}.
double phi_scalar(const std::vector<std::vector<double>>& diags, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < diags.front().size(); ++i) {
    double inner = 0.0;
    for (const auto& d : diags)
      if (d[i] > 0.0) inner += std::pow(d[i], p);
    if (inner > 0.0) acc += std::pow(inner, 1.0 / p);
  }
  return acc;
}

double entropy_scalar(const std::vector<double>& probs) {
  double s = 0.0;
  for (const double q : probs)
    if (q > 0.0) s -= q * std::log(q);
  return s;
}

}  // namespace

TEST_CASE("exponent regimes") {
  CHECK(PExponent(0.5).regime() == PRegime::Concave);
  CHECK(PExponent(1.0).regime() == PRegime::Boundary);
  CHECK(PExponent(1.5).regime() == PRegime::Conjecture);
  CHECK(PExponent(2.0).regime() == PRegime::ConvexKnown);
  CHECK(PExponent(3.0).regime() == PRegime::Failure);
  CHECK_THROWS_AS(PExponent(0.0), InvalidArgument);
  CHECK_THROWS_AS(PExponent(-1.0), InvalidArgument);

  CHECK(PExponent(2.0).conjugate() == doctest::Approx(2.0));
  CHECK(PExponent(1.5).conjugate() == doctest::Approx(3.0));
  CHECK(1.0 / PExponent(5.0).conjugate() + 1.0 / 5.0 ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(PExponent(0.5).conjugate(), InvalidArgument);
}

TEST_CASE("density matrices normalize and remember their trace") {
  std::mt19937_64 rng(2);
  const PsdMatrix a = random_psd(4, 1.0, rng);
  const DensityMatrix rho(a);
  CHECK(rho.state().trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rho.original_trace() == doctest::Approx(a.trace()));
  CHECK_THROWS_AS(DensityMatrix(diag_psd({0.0, 0.0})), InvalidArgument);
}

TEST_CASE("phi_p on a single matrix is the trace") {
  std::mt19937_64 rng(4);
  const PsdMatrix a = random_psd(3, 1.0, rng);
  for (const double p : {0.3, 1.0, 2.0, 3.7})
    CHECK(phi_p({a}, PExponent(p)) == doctest::Approx(a.trace()).epsilon(1e-11));
}

TEST_CASE("phi_p on identical identities") {
  const PsdMatrix eye{HermitianMatrix::identity(3)};
  for (const double p : {0.5, 2.0})
    CHECK(phi_p({eye, eye}, PExponent(p)) ==
          doctest::Approx(3.0 * std::pow(2.0, 1.0 / p)).epsilon(1e-13));
}

TEST_CASE("phi_p at p = 1 is the trace of the sum") {
  std::mt19937_64 rng(6);
  const PsdMatrix a = random_psd(4, 1.0, rng);
  const PsdMatrix b = random_psd(4, 1.0, rng);
  const PsdMatrix c = random_psd(4, 1.0, rng);
  CHECK(phi_p({a, b, c}, PExponent(1.0)) ==
        doctest::Approx(a.trace() + b.trace() + c.trace()).epsilon(1e-12));
}

TEST_CASE("phi_p matches the scalar oracle on diagonal tuples") {
  std::mt19937_64 rng(8);
  for (const double p : {0.4, 1.0, 2.0, 3.0}) {
    const auto d1 = random_positive_entries(4, 0.0, 2.0, rng);
    const auto d2 = random_positive_entries(4, 0.0, 2.0, rng);
    const double lhs = phi_p({diag_psd(d1), diag_psd(d2)}, PExponent(p));
    CHECK(rel_dist(lhs, phi_scalar({d1, d2}, p)) <= 1e-11);
  }
}

TEST_CASE("phi_p is positively homogeneous and permutation symmetric") {
  std::mt19937_64 rng(10);
  const PsdMatrix a = random_psd(3, 1.0, rng);
  const PsdMatrix b = random_psd(3, 1.0, rng);
  const PExponent p(0.7);
  const double base = phi_p({a, b}, p);
  for (const double t : {0.1, 1.0, 7.0})
    CHECK(rel_dist(phi_p({scale(a, t), scale(b, t)}, p), t * base) <= 1e-10);
  CHECK(rel_dist(phi_p({b, a}, p), base) <= 1e-12);
}

TEST_CASE("phi_p is unitarily invariant") {
  std::mt19937_64 rng(12);
  const PsdMatrix a = random_psd(3, 1.0, rng);
  const PsdMatrix b = random_psd(3, 1.0, rng);
  const Matrix u = random_unitary(3, rng);
  const PExponent p(2.0);
  const PsdMatrix ua{HermitianMatrix(u * a.matrix() * u.adjoint())};
  const PsdMatrix ub{HermitianMatrix(u * b.matrix() * u.adjoint())};
  CHECK(rel_dist(phi_p({ua, ub}, p), phi_p({a, b}, p)) <= 1e-10);
}

TEST_CASE("phi_p argument validation") {
  CHECK_THROWS_AS(phi_p({}, PExponent(1.0)), InvalidArgument);
  std::mt19937_64 rng(14);
  CHECK_THROWS_AS(
      phi_p({random_psd(2, 1.0, rng), random_psd(3, 1.0, rng)}, PExponent(1.0)),
      ShapeError);
}

TEST_CASE("psi_p pulls scalar factors out of the identity leg") {
  std::mt19937_64 rng(16);
  const PsdMatrix b = random_psd(3, 1.0, rng);
  const Eigen::Index d2 = 4;
  const TensorSpace space({3, d2});
  const PsdMatrix lifted{
      HermitianMatrix(kron(b.matrix(), Matrix::Identity(d2, d2)))};
  for (const double p : {0.5, 2.0}) {
    CHECK(rel_dist(psi_p(lifted, space, PExponent(p)),
                   std::pow(static_cast<double>(d2), 1.0 / p) * b.trace()) <=
          1e-11);
  }
}

TEST_CASE("psi_p at p = 1 is the trace") {
  std::mt19937_64 rng(18);
  const TensorSpace space({2, 3});
  const PsdMatrix a = random_psd(6, 1.0, rng);
  CHECK(psi_p(a, space, PExponent(1.0)) ==
        doctest::Approx(a.trace()).epsilon(1e-12));
}

TEST_CASE("psi_p of a block carrier matches phi_p of the blocks") {
  std::mt19937_64 rng(20);
  const PsdMatrix a1 = random_psd(3, 1.0, rng);
  const PsdMatrix a2 = random_psd(3, 1.0, rng);
  // Blocks on the second factor, where the inner partial trace sums them.
  const TensorSpace space({3, 2});
  Matrix big = Matrix::Zero(6, 6);
  Matrix e00 = Matrix::Zero(2, 2), e11 = Matrix::Zero(2, 2);
  e00(0, 0) = 1.0;
  e11(1, 1) = 1.0;
  big += kron(a1.matrix(), e00) + kron(a2.matrix(), e11);
  const PExponent p(0.5);
  CHECK(rel_dist(psi_p(PsdMatrix{HermitianMatrix(big)}, space, p),
                 phi_p({a1, a2}, p)) <= 1e-10);
}

TEST_CASE("entropy of pure, maximally mixed, and classical states") {
  Matrix pure = Matrix::Zero(3, 3);
  pure(0, 0) = 1.0;
  CHECK(std::abs(entropy(DensityMatrix(PsdMatrix{HermitianMatrix(pure)}))) <=
        1e-13);

  const DensityMatrix mixed(diag_psd({0.25, 0.25, 0.25, 0.25}));
  CHECK(entropy(mixed) == doctest::Approx(std::log(4.0)).epsilon(1e-13));

  const std::vector<double> probs{0.5, 1.0 / 3.0, 1.0 / 6.0};
  const DensityMatrix classical(diag_psd(probs));
  CHECK(entropy(classical) ==
        doctest::Approx(entropy_scalar(probs)).epsilon(1e-13));

  // Sanity: entropy is within [0, ln d] on random densities.
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho(random_psd(4, 1.0, rng));
    const double s = entropy(rho);
    CHECK(s >= -1e-12);
    CHECK(s <= std::log(4.0) + 1e-12);
  }
}

TEST_CASE("ssa deficit vanishes on product and maximally mixed states") {
  std::mt19937_64 rng(24);
  const TensorSpace space({2, 2, 2});
  const DensityMatrix r1(random_psd(2, 1.0, rng));
  const DensityMatrix r2(random_psd(2, 1.0, rng));
  const DensityMatrix r3(random_psd(2, 1.0, rng));
  const PsdMatrix prod{HermitianMatrix(
      kron(kron(r1.matrix(), r2.matrix()), r3.matrix()))};
  CHECK(std::abs(ssa_deficit(DensityMatrix(prod), space)) <= 1e-11);

  const DensityMatrix mixed(
      PsdMatrix{HermitianMatrix(Matrix::Identity(8, 8))});
  CHECK(std::abs(ssa_deficit(mixed, space)) <= 1e-12);
}

TEST_CASE("ssa deficit of a bipartite product is the mutual information") {
  std::mt19937_64 rng(26);
  const TensorSpace space({2, 2, 2});
  const DensityMatrix r12(random_psd(4, 1.0, rng));
  const DensityMatrix r3(random_psd(2, 1.0, rng));
  const PsdMatrix joint{HermitianMatrix(kron(r12.matrix(), r3.matrix()))};

  const TensorSpace pair({2, 2});
  const double s1 = entropy_of_psd(
      PsdMatrix{HermitianMatrix(partial_trace(r12.matrix(), pair, 2))});
  const double s2 = entropy_of_psd(
      PsdMatrix{HermitianMatrix(partial_trace(r12.matrix(), pair, 1))});
  const double mutual = s1 + s2 - entropy(r12);

  CHECK(ssa_deficit(DensityMatrix(joint), space) ==
        doctest::Approx(mutual).epsilon(1e-10));
  CHECK(mutual >= -1e-11);
}

TEST_CASE("ssa deficit is nonnegative on random densities") {
  std::mt19937_64 rng(28);
  const TensorSpace space({2, 2, 2});
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix rho(random_psd(8, 1.0, rng));
    CHECK(ssa_deficit(rho, space) >= -1e-9);
  }
}

TEST_CASE("minkowski2 sides coincide at p = 1 and on products") {
  std::mt19937_64 rng(30);
  const TensorSpace space({3, 3});
  const PsdMatrix a = random_psd(9, 1.0, rng);
  const Sides one = minkowski2_sides(a, space, PExponent(1.0));
  CHECK(rel_dist(one.lhs, one.rhs) <= 1e-10);
  CHECK(one.lhs == doctest::Approx(a.trace()).epsilon(1e-11));

  const PsdMatrix a1 = random_psd(3, 1.0, rng);
  const PsdMatrix a2 = random_psd(3, 1.0, rng);
  const PsdMatrix prod{HermitianMatrix(kron(a1.matrix(), a2.matrix()))};
  const Sides s = minkowski2_sides(prod, space, PExponent(2.0));
  CHECK(rel_dist(s.lhs, s.rhs) <= 1e-10);
}

TEST_CASE("minkowski2 inequality holds on random draws at p = 2") {
  std::mt19937_64 rng(32);
  const TensorSpace space({3, 3});
  for (int trial = 0; trial < 25; ++trial) {
    const PsdMatrix a = random_psd(9, 1.0, rng);
    const Sides s = minkowski2_sides(a, space, PExponent(2.0));
    CHECK(s.rhs - s.lhs >= -1e-9);
  }
}

TEST_CASE("minkowski3 sides coincide at p = 1") {
  std::mt19937_64 rng(34);
  const TensorSpace space({2, 2, 2});
  const PsdMatrix a = random_psd(8, 1.0, rng);
  const Sides one = minkowski3_sides(a, space, PExponent(1.0));
  CHECK(rel_dist(one.lhs, one.rhs) <= 1e-10);
  CHECK(one.lhs == doctest::Approx(a.trace()).epsilon(1e-11));
}

TEST_CASE("minkowski3 degenerates to minkowski2 when the third factor is trivial") {
  std::mt19937_64 rng(36);
  const TensorSpace space3({2, 3, 1});
  const TensorSpace space2({2, 3});
  const PsdMatrix a = random_psd(6, 1.0, rng);
  for (const double p : {0.5, 2.0}) {
    const Sides s3 = minkowski3_sides(a, space3, PExponent(p));
    const Sides s2 = minkowski2_sides(a, space2, PExponent(p));
    CHECK(rel_dist(s3.lhs, s2.lhs) <= 1e-11);
    CHECK(rel_dist(s3.rhs, s2.rhs) <= 1e-11);
  }
}

TEST_CASE("minkowski3 inequality holds on random draws at p = 2") {
  std::mt19937_64 rng(38);
  const TensorSpace space({2, 2, 2});
  for (int trial = 0; trial < 25; ++trial) {
    const PsdMatrix a = random_psd(8, 1.0, rng);
    const Sides s = minkowski3_sides(a, space, PExponent(2.0));
    CHECK(s.rhs - s.lhs >= -1e-9);
  }
}

TEST_CASE("bks sides on degenerate pairs") {
  std::mt19937_64 rng(40);
  const PsdMatrix b = random_psd(4, 1.0, rng);
  const PsdMatrix zero = diag_psd({0.0, 0.0, 0.0, 0.0});
  const Sides s = bks_sides(zero, b, 1.5);
  CHECK(s.lhs == doctest::Approx(b.trace()).epsilon(1e-11));
  CHECK(s.rhs == doctest::Approx(b.trace()).epsilon(1e-11));

  const Sides same = bks_sides(b, b, 2.0);
  CHECK(std::abs(same.lhs) <= 1e-10);
  CHECK(std::abs(same.rhs) <= 1e-10);
}

TEST_CASE("bks sides match the scalar oracle on commuting inputs") {
  std::mt19937_64 rng(42);
  for (const double p : {1.5, 3.0}) {
    const auto da = random_positive_entries(4, 0.0, 2.0, rng);
    const auto db = random_positive_entries(4, 0.0, 2.0, rng);
    const Sides s = bks_sides(diag_psd(da), diag_psd(db), p);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < da.size(); ++i) {
      const double dp = std::pow(db[i], p) - std::pow(da[i], p);
      if (dp > 0.0) lhs += std::pow(dp, 1.0 / p);
      rhs += std::max(db[i] - da[i], 0.0);
    }
    CHECK(rel_dist(s.lhs, lhs) <= 1e-11);
    CHECK(rel_dist(s.rhs, rhs) <= 1e-11);
    CHECK(s.lhs - s.rhs >= -1e-11);
  }
}

TEST_CASE("bks subadditivity sides") {
  std::mt19937_64 rng(44);
  const PsdMatrix a = random_psd(4, 1.0, rng);
  const PsdMatrix zero = diag_psd({0.0, 0.0, 0.0, 0.0});
  const Sides s = bks_subadditivity_sides(a, zero, 3.0);
  CHECK(s.lhs == doctest::Approx(a.trace()).epsilon(1e-12));
  CHECK(s.rhs == doctest::Approx(a.trace()).epsilon(1e-11));

  for (int trial = 0; trial < 20; ++trial) {
    const PsdMatrix x = random_psd(4, 1.0, rng);
    const PsdMatrix c = random_psd(4, 1.0, rng);
    const Sides r = bks_subadditivity_sides(x, c, 3.0);
    CHECK(r.lhs - r.rhs >= -1e-9);
  }
}
