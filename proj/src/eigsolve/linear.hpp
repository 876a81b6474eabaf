// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUADCURL_SRC_EIGSOLVE_LINEAR_HPP
#define QUADCURL_SRC_EIGSOLVE_LINEAR_HPP

#include <memory>
#include <string>

#include "quadcurl/assembly.hpp"

namespace quadcurl::detail
{

/// Sparse direct solver: simplicial Cholesky for SPD matrices; for indefinite
/// ones an unpivoted LDL^T with iterative refinement, or LU when the refined
/// solves stay inaccurate. No path calls BLAS.
class SparseFactor
{
public:
  SparseFactor();
  ~SparseFactor();
  SparseFactor(SparseFactor &&) noexcept;
  SparseFactor &operator=(SparseFactor &&) noexcept;

  /// Returns false when the Cholesky factorization breaks down or LU finds a
  /// singular matrix.
  bool factor(const SparseMatrix &a, bool spd);
  Vector solve(const Vector &b) const;
  std::string name() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Smallest pivot of a sparse LDL^T factorization (diagnostic).
double smallest_ldlt_pivot(const SparseMatrix &a);

/// Projection onto X = ker B, orthogonal in the M inner product:
/// P z = z - M^-1 B^T L^-1 B z with L = B M^-1 B^T.
class ConstraintProjector
{
public:
  explicit ConstraintProjector(const AssembledSystem &sys);

  Vector project(const Vector &z) const;
  /// Solves L s = B M^-1 f.
  Vector multiplier(const Vector &f) const;
  Vector apply_mass_inverse(const Vector &f) const { return minv_ * f; }
  bool active() const { return n_u_ > 0; }

private:
  const AssembledSystem *sys_;
  int n_u_ = 0;
  SparseMatrix minv_;
  SparseFactor laplacian_;
};

}  // namespace quadcurl::detail

#endif  // QUADCURL_SRC_EIGSOLVE_LINEAR_HPP
