#include "trineq/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace trineq {

TensorSpace::TensorSpace(std::vector<Eigen::Index> dims)
    : dims_(std::move(dims)) {
  if (dims_.empty() || dims_.size() > 3) {
    throw ShapeError("TensorSpace supports 1 to 3 factors");
  }
  for (const Eigen::Index d : dims_) {
    if (d < 1) throw ShapeError("TensorSpace factor dimensions must be >= 1");
    total_ *= d;
  }
}

Eigen::Index TensorSpace::dim(std::size_t factor) const {
  if (factor < 1 || factor > dims_.size()) {
    std::ostringstream msg;
    msg << "factor " << factor << " out of range for a " << dims_.size()
        << "-factor space";
    throw ShapeError(msg.str());
  }
  return dims_[factor - 1];
}

TensorSpace TensorSpace::without(std::size_t factor) const {
  dim(factor);  // range check
  if (dims_.size() == 1) throw ShapeError("cannot remove the only factor");
  std::vector<Eigen::Index> rest;
  for (std::size_t i = 0; i < dims_.size(); ++i)
    if (i != factor - 1) rest.push_back(dims_[i]);
  return TensorSpace(std::move(rest));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      c.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return c;
}

namespace {

// For every flat index on the product space: the digit on the traced
// factor, and the flat index over the remaining factors (original order).
struct IndexSplit {
  std::vector<Eigen::Index> factor_digit;
  std::vector<Eigen::Index> rest_index;
};

IndexSplit split_indices(const TensorSpace& space, std::size_t factor) {
  const auto& dims = space.dims();
  const Eigen::Index total = space.total_dim();
  IndexSplit s;
  s.factor_digit.resize(static_cast<std::size_t>(total));
  s.rest_index.resize(static_cast<std::size_t>(total));
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rem = idx;
    Eigen::Index rest = 0;
    Eigen::Index digit = 0;
    // Row-major decomposition, factor 1 slow.
    for (std::size_t f = 0; f < dims.size(); ++f) {
      Eigen::Index radix = 1;
      for (std::size_t g = f + 1; g < dims.size(); ++g) radix *= dims[g];
      const Eigen::Index d = rem / radix;
      rem %= radix;
      if (f == factor - 1) {
        digit = d;
      } else {
        rest = rest * dims[f] + d;
      }
    }
    s.factor_digit[static_cast<std::size_t>(idx)] = digit;
    s.rest_index[static_cast<std::size_t>(idx)] = rest;
  }
  return s;
}

}  // namespace

Matrix partial_trace(const Matrix& a, const TensorSpace& space,
                     std::size_t factor) {
  if (a.rows() != a.cols() || a.rows() != space.total_dim()) {
    std::ostringstream msg;
    msg << "partial_trace: matrix is " << a.rows() << "x" << a.cols()
        << " but the space has total dimension " << space.total_dim();
    throw ShapeError(msg.str());
  }
  const Eigen::Index traced = space.dim(factor);
  const Eigen::Index rest = space.total_dim() / traced;
  const IndexSplit s = split_indices(space, factor);

  Matrix out = Matrix::Zero(rest, rest);
  for (Eigen::Index row = 0; row < a.rows(); ++row) {
    for (Eigen::Index col = 0; col < a.cols(); ++col) {
      if (s.factor_digit[static_cast<std::size_t>(row)] !=
          s.factor_digit[static_cast<std::size_t>(col)])
        continue;
      out(s.rest_index[static_cast<std::size_t>(row)],
          s.rest_index[static_cast<std::size_t>(col)]) += a(row, col);
    }
  }
  return out;
}

HermitianMatrix partial_trace(const HermitianMatrix& a,
                              const TensorSpace& space, std::size_t factor) {
  return HermitianMatrix(partial_trace(a.matrix(), space, factor));
}

Matrix embed_factor(const Matrix& b, const TensorSpace& space,
                    std::size_t factor) {
  if (b.rows() != b.cols() || b.rows() != space.dim(factor)) {
    std::ostringstream msg;
    msg << "embed_factor: operator is " << b.rows() << "x" << b.cols()
        << " but factor " << factor << " has dimension " << space.dim(factor);
    throw ShapeError(msg.str());
  }
  Eigen::Index before = 1, after = 1;
  for (std::size_t f = 1; f < factor; ++f) before *= space.dim(f);
  for (std::size_t f = factor + 1; f <= space.factors(); ++f)
    after *= space.dim(f);
  return kron(kron(Matrix::Identity(before, before), b),
              Matrix::Identity(after, after));
}

Matrix SignedPermutationUnitary::matrix() const {
  const Eigen::Index n = dim();
  Matrix w = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::size_t sj = static_cast<std::size_t>(j);
    w(static_cast<Eigen::Index>(perm[sj]), j) = signs[sj] ? -1.0 : 1.0;
  }
  return w;
}

std::vector<SignedPermutationUnitary> signed_permutation_group(std::size_t n) {
  if (n < 1) throw ShapeError("signed_permutation_group needs n >= 1");
  if (n > kGroupDimMax) {
    std::ostringstream msg;
    msg << "signed-permutation group of degree " << n << " has "
        << "2^n n! elements; exact enumeration is capped at n = "
        << kGroupDimMax;
    throw CapacityError(msg.str());
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  std::vector<SignedPermutationUnitary> group;
  do {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      SignedPermutationUnitary w;
      w.perm = perm;
      w.signs.resize(n);
      for (std::size_t j = 0; j < n; ++j)
        w.signs[j] = static_cast<std::uint8_t>((mask >> j) & 1u);
      group.push_back(std::move(w));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return group;
}

HermitianMatrix group_average(const HermitianMatrix& a,
                              const TensorSpace& space,
                              std::size_t averaged_factor) {
  if (space.factors() != 2)
    throw ShapeError("group_average expects a two-factor space");
  if (a.dim() != space.total_dim())
    throw ShapeError("group_average: operator does not live on the space");
  const Eigen::Index n = space.dim(averaged_factor);
  const auto group =
      signed_permutation_group(static_cast<std::size_t>(n));

  Matrix acc = Matrix::Zero(a.dim(), a.dim());
  for (const auto& w : group) {
    const Matrix we = embed_factor(w.matrix(), space, averaged_factor);
    acc += we.adjoint() * a.matrix() * we;
  }
  acc /= static_cast<double>(group.size());
  return HermitianMatrix(acc);
}

}  // namespace trineq
