// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUADCURL_HCURL_RECT_HPP
#define QUADCURL_HCURL_RECT_HPP

#include <functional>
#include <string>
#include <vector>

#include "quadcurl/types.hpp"

namespace quadcurl
{

/// Families of the hierarchical H(curl) basis on [-1,1]^2. Gradient-type
/// functions use (phi_i(x1) phi_j(x2)); the axis types are phi_j(x2) e1 or
/// phi_i(x1) e2.
enum class HcurlFamily
{
  CellMinus,       // grad(phi_i) phi_j - phi_i grad(phi_j), 2 <= i,j <= p
  CellPlus,        // grad(phi_i phi_j), 2 <= i,j <= p
  CellAxis,        // phi_j(x2) e1 / phi_i(x1) e2, index >= 2
  EdgePlusVertical,    // grad(phi_i phi_j), i in {0,1}, j >= 2
  EdgePlusHorizontal,  // grad(phi_i phi_j), j in {0,1}, i >= 2
  EdgeLowest       // phi_j(x2) e1 / phi_i(x1) e2, index in {0,1}
};

struct HcurlFunction
{
  HcurlFamily family;
  int i = -1;  // x1 index, -1 when the function is phi_j(x2) e1
  int j = -1;  // x2 index, -1 when the function is phi_i(x1) e2
  std::string tag;

  bool cell_based() const
  {
    return family == HcurlFamily::CellMinus || family == HcurlFamily::CellPlus ||
           family == HcurlFamily::CellAxis;
  }
};

class HcurlRectBasis
{
public:
  explicit HcurlRectBasis(int p);

  int degree() const { return p_; }
  int size() const { return static_cast<int>(functions_.size()); }
  const std::vector<HcurlFunction> &functions() const { return functions_; }
  int count(HcurlFamily family) const;
  int cell_count() const;
  int edge_count() const;

  Vec3 value(int k, const Vec3 &x) const;
  double curl(int k, const Vec3 &x) const;

private:
  int p_;
  std::vector<HcurlFunction> functions_;
};

/// Throws for p < 1.
HcurlRectBasis hcurl_rect_basis(int p);

/// Edge-mean interpolant: the tangential means of v on the four edges of
/// [-1,1]^2, extended linearly in the transverse variable.
struct PiProjection
{
  double bottom = 0.0;  // (1/2) int v1(x1, -1) dx1
  double top = 0.0;     // (1/2) int v1(x1, +1) dx1
  double left = 0.0;    // (1/2) int v2(-1, x2) dx2
  double right = 0.0;   // (1/2) int v2(+1, x2) dx2

  Vec3 operator()(const Vec3 &x) const;
};

/// Edge integrals by Gauss-Legendre exact for polynomials of the given degree.
PiProjection pi_projector(const std::function<Vec3(const Vec3 &)> &v, int degree);

/// Weighted-norm bound for the edge-type gradient components r (i in {0,1})
/// of the decomposition v = r + t + Pi(v).
struct ProjectorBound
{
  int p = 0;
  double sampled_max = 0.0;  // max over random coefficient sets of lhs / rhs
  double supremum = 0.0;     // largest generalized eigenvalue of lhs vs rhs
};

/// lhs(C) = int r1^2 / (1 - x2^2) + r2^2, rhs(C) = sum C^2 ((j^2 - j)^-1 + 1),
/// with r = sum_{i in {0,1}, 2 <= j <= p} C_ij grad(phi_i(x1) phi_j(x2)).
/// The t family is the same bound with the coordinates swapped.
ProjectorBound projector_bound(int p, int samples, unsigned seed);

}  // namespace quadcurl

#endif  // QUADCURL_HCURL_RECT_HPP
