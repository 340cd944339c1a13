#pragma once

#include <cstddef>

namespace trineq {

// Relative spectral tolerances. "Relative" means scaled by the spectral
// radius (or Frobenius norm) of the operand.
inline constexpr double kEpsPsd = 1e-10;
inline constexpr double kEpsEig = 1e-10;

// Cyclic Jacobi: converged once the off-diagonal Frobenius mass drops
// below kJacobiOffTol times the Frobenius norm of the input.
inline constexpr double kJacobiOffTol = 1e-13;
inline constexpr int kJacobiMaxSweeps = 100;

// Largest factor dimension for exact signed-permutation group averaging;
// the group has 2^N * N! elements (384 at N = 4).
inline constexpr std::size_t kGroupDimMax = 4;

// Eigenvalues at or below this floor contribute 0 to -Tr(rho ln rho).
inline constexpr double kEntropyFloor = 1e-15;

// Default slack tolerance for verification campaigns.
inline constexpr double kDefaultTol = 1e-9;

}  // namespace trineq
