// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include "eigsolve/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/CholmodSupport>
#include <Eigen/SparseCholesky>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

namespace quadcurl::detail
{

using ColMajor = Eigen::SparseMatrix<double>;

constexpr double kLdltAcceptance = 1e-11;  // normwise backward error
constexpr double kRefinementTarget = 1e-14;
constexpr int kMaxRefinementSteps = 30;

struct SparseFactor::Impl
{
  std::unique_ptr<Eigen::CholmodSimplicialLLT<ColMajor, Eigen::Lower>> llt;
  std::unique_ptr<Eigen::CholmodSimplicialLDLT<ColMajor, Eigen::Lower>> ldlt;
  std::unique_ptr<Eigen::SparseLU<ColMajor, Eigen::COLAMDOrdering<int>>> lu;
  ColMajor matrix;
};

SparseFactor::SparseFactor() : impl_(std::make_unique<Impl>()) {}
SparseFactor::~SparseFactor() = default;
SparseFactor::SparseFactor(SparseFactor &&) noexcept = default;
SparseFactor &SparseFactor::operator=(SparseFactor &&) noexcept = default;

bool SparseFactor::factor(const SparseMatrix &a, bool spd)
{
  impl_->llt.reset();
  impl_->ldlt.reset();
  impl_->lu.reset();
  impl_->matrix = a;
  impl_->matrix.makeCompressed();
  if (spd)
  {
    impl_->llt = std::make_unique<Eigen::CholmodSimplicialLLT<ColMajor, Eigen::Lower>>();
    impl_->llt->compute(impl_->matrix);
    return impl_->llt->info() == Eigen::Success;
  }
  // Unpivoted LDL^T first; kept only if a refined solve of a random right-hand
  // side is backward stable, |b - S x| <= tol (|S| |x| + |b|) in the infinity
  // norm. The plain relative residual is not usable: its floor grows with the
  // condition number of S, and LU does not lower it.
  impl_->ldlt = std::make_unique<Eigen::CholmodSimplicialLDLT<ColMajor, Eigen::Lower>>();
  impl_->ldlt->compute(impl_->matrix);
  if (impl_->ldlt->info() == Eigen::Success)
  {
    std::mt19937 rng(7u);
    std::normal_distribution<double> normal;
    Vector b(impl_->matrix.rows());
    for (Eigen::Index i = 0; i < b.size(); ++i)
    {
      b[i] = normal(rng);
    }
    const Vector x = solve(b);
    double norm_s = 0.0;
    const ColMajor st = impl_->matrix.transpose();
    for (Eigen::Index j = 0; j < st.outerSize(); ++j)
    {
      double row = 0.0;
      for (ColMajor::InnerIterator it(st, j); it; ++it)
      {
        row += std::abs(it.value());
      }
      norm_s = std::max(norm_s, row);
    }
    const double scale = norm_s * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
    if (x.allFinite() && (impl_->matrix * x - b).lpNorm<Eigen::Infinity>() <= kLdltAcceptance * scale)
    {
      return true;
    }
  }
  impl_->ldlt.reset();
  impl_->lu = std::make_unique<Eigen::SparseLU<ColMajor, Eigen::COLAMDOrdering<int>>>();
  impl_->lu->compute(impl_->matrix);
  return impl_->lu->info() == Eigen::Success;
}

Vector SparseFactor::solve(const Vector &b) const
{
  if (impl_->llt)
  {
    return impl_->llt->solve(b);
  }
  if (impl_->ldlt)
  {
    // Iterative refinement until the residual stops shrinking by half.
    Vector x = impl_->ldlt->solve(b);
    Vector r = b - impl_->matrix * x;
    double rnorm = r.norm();
    const double target = kRefinementTarget * b.norm();
    for (int step = 0; step < kMaxRefinementSteps && rnorm > target; ++step)
    {
      const Vector candidate = x + impl_->ldlt->solve(r);
      Vector rc = b - impl_->matrix * candidate;
      const double cnorm = rc.norm();
      if (!(cnorm < rnorm))
      {
        break;
      }
      x = candidate;
      r = std::move(rc);
      const bool slow = cnorm > 0.5 * rnorm;
      rnorm = cnorm;
      if (slow)
      {
        break;
      }
    }
    return x;
  }
  if (impl_->lu)
  {
    return impl_->lu->solve(b);
  }
  throw std::logic_error("SparseFactor: solve before factor");
}

std::string SparseFactor::name() const
{
  if (impl_->llt)
  {
    return "cholmod-llt";
  }
  if (impl_->ldlt)
  {
    return "cholmod-ldlt";
  }
  if (impl_->lu)
  {
    return "sparse-lu";
  }
  return "none";
}

double smallest_ldlt_pivot(const SparseMatrix &a)
{
  Eigen::SimplicialLDLT<ColMajor> ldlt;
  ldlt.compute(ColMajor(a));
  if (ldlt.info() != Eigen::Success)
  {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return ldlt.vectorD().minCoeff();
}

ConstraintProjector::ConstraintProjector(const AssembledSystem &sys) : sys_(&sys), n_u_(sys.n_U())
{
  const DGSpace &space = *sys.space;
  const int ncells = static_cast<int>(space.mesh().cells.size());
  std::vector<Eigen::Triplet<double>> t;
  for (int c = 0; c < ncells; ++c)
  {
    const int off = space.offset(c);
    const int n = space.local_size(c);
    const Matrix block = Matrix(sys.M.block(off, off, n, n));
    const Matrix inv = block.llt().solve(Matrix::Identity(n, n));
    for (int i = 0; i < n; ++i)
    {
      for (int j = 0; j < n; ++j)
      {
        if (inv(i, j) != 0.0)
        {
          t.emplace_back(off + i, off + j, inv(i, j));
        }
      }
    }
  }
  minv_.resize(sys.n_V(), sys.n_V());
  minv_.setFromTriplets(t.begin(), t.end());
  if (n_u_ == 0)
  {
    return;
  }
  const SparseMatrix bt = sys.B.transpose();
  SparseMatrix l = sys.B * minv_ * bt;
  l = 0.5 * (l + SparseMatrix(l.transpose()));
  if (!laplacian_.factor(l, true))
  {
    throw std::runtime_error("constraint operator B M^-1 B^T is singular: B is rank deficient");
  }
}

Vector ConstraintProjector::multiplier(const Vector &f) const
{
  if (n_u_ == 0)
  {
    return Vector();
  }
  return laplacian_.solve(sys_->B * (minv_ * f));
}

Vector ConstraintProjector::project(const Vector &z) const
{
  if (n_u_ == 0)
  {
    return z;
  }
  const Vector mz = sys_->M * z;
  return z - minv_ * (sys_->B.transpose() * multiplier(mz));
}

}  // namespace quadcurl::detail
