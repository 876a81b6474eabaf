// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUADCURL_QUADRATURE_HPP
#define QUADCURL_QUADRATURE_HPP

#include <vector>

#include "quadcurl/types.hpp"

namespace quadcurl
{

enum class RefShape
{
  Interval,       // [-1, 1]
  Triangle,       // (0,0), (1,0), (0,1)
  Quadrilateral,  // [-1, 1]^2
  Tetrahedron     // (0,0,0), (1,0,0), (0,1,0), (0,0,1)
};

RefShape ref_shape(CellKind kind);
double ref_measure(RefShape shape);

struct QuadratureRule
{
  RefShape shape;
  int degree;  // exactness degree
  std::vector<Vec3> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// Largest exactness degree the rule factory accepts.
inline constexpr int kMaxQuadratureDegree = 80;

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int npoints, std::vector<double> &nodes, std::vector<double> &weights);

/// Tensor Gauss-Legendre on intervals and quadrilaterals, collapsed (Duffy)
/// Gauss-Legendre products on simplices. Throws std::invalid_argument when
/// degree is negative or exceeds kMaxQuadratureDegree.
QuadratureRule quadrature_rule(RefShape shape, int degree);

}  // namespace quadcurl

#endif  // QUADCURL_QUADRATURE_HPP
