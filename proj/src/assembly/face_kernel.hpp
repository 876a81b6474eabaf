// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUADCURL_SRC_ASSEMBLY_FACE_KERNEL_HPP
#define QUADCURL_SRC_ASSEMBLY_FACE_KERNEL_HPP

#include <vector>

#include "quadcurl/assembly.hpp"

namespace quadcurl::detail
{

/// Quadrature weights (times scale), each repeated for the three components.
Vector repeat3(const std::vector<double> &weights, double scale = 1.0);

/// Column-wise X x n for matrices laid out as 3 columns per point.
Matrix cross_columns(const Matrix &x, const Vec3 &n);

/// Traces of one cell's basis on a face: jumps and averages as they enter the
/// face integrals (rows: local functions, 3 columns per quadrature point).
struct FaceSide
{
  int cell = -1;
  Matrix value;
  Matrix curl2;
  Matrix curl3;
  Matrix jump;       // value x n_side
  Matrix jump_curl;  // curl x n_side
  Matrix avg_curl3;  // weight * curl^3
  Matrix avg_curl2;  // weight * curl^2
};

class FaceKernel
{
public:
  /// degree < 0 selects 2 * max adjacent degree.
  FaceKernel(const DGSpace &space, const Face &face, int degree = -1);

  int sides() const { return static_cast<int>(sides_.size()); }
  const FaceSide &side(int s) const { return sides_[s]; }
  const Vector &weights3() const { return weights3_; }
  const FaceQuadrature &quadrature() const { return quad_; }

private:
  FaceQuadrature quad_;
  Vector weights3_;
  std::vector<FaceSide> sides_;
};

}  // namespace quadcurl::detail

#endif  // QUADCURL_SRC_ASSEMBLY_FACE_KERNEL_HPP
