#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "trineq/matrix.hpp"

namespace trineq {

/// Ordered factor dimensions [d1, ..., dk], k in {1,2,3}, of a tensor
/// product space. Factor 1 is the slow (leftmost) Kronecker index;
/// factors are numbered from 1 throughout.
class TensorSpace {
 public:
  explicit TensorSpace(std::vector<Eigen::Index> dims);

  std::size_t factors() const { return dims_.size(); }
  Eigen::Index dim(std::size_t factor) const;  // 1-based
  Eigen::Index total_dim() const { return total_; }
  const std::vector<Eigen::Index>& dims() const { return dims_; }

  /// Space over the remaining factors once `factor` is traced out.
  TensorSpace without(std::size_t factor) const;

 private:
  std::vector<Eigen::Index> dims_;
  Eigen::Index total_ = 1;
};

/// Kronecker product, factor-1 index slow: C(i*rB+k, j*cB+l) = A(i,j)B(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

/// Partial trace over the given factor (1-based); the result acts on the
/// remaining factors in their original order.
Matrix partial_trace(const Matrix& a, const TensorSpace& space,
                     std::size_t factor);
HermitianMatrix partial_trace(const HermitianMatrix& a,
                              const TensorSpace& space, std::size_t factor);

/// B on the given factor, identity elsewhere.
Matrix embed_factor(const Matrix& b, const TensorSpace& space,
                    std::size_t factor);

/// Unitary acting as W e_j = (-1)^{signs[j]} e_{perm[j]}; entries are
/// exactly 0 or +-1.
struct SignedPermutationUnitary {
  std::vector<std::size_t> perm;   // j -> perm[j]
  std::vector<std::uint8_t> signs; // j -> 0 or 1

  Eigen::Index dim() const { return static_cast<Eigen::Index>(perm.size()); }
  Matrix matrix() const;
};

/// All 2^N * N! signed permutations of an N-dimensional factor, each
/// exactly once, in deterministic order. Throws CapacityError beyond
/// kGroupDimMax.
std::vector<SignedPermutationUnitary> signed_permutation_group(std::size_t n);

/// Exact group average (1/|G|) sum_W (I (x) W)* A (I (x) W) over the
/// signed-permutation group of the given factor of a two-factor space.
/// Equals kron-embedded (Tr_f A)/N on the complementary factor.
HermitianMatrix group_average(const HermitianMatrix& a,
                              const TensorSpace& space,
                              std::size_t averaged_factor);

}  // namespace trineq
