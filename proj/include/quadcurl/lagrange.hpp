// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUADCURL_LAGRANGE_HPP
#define QUADCURL_LAGRANGE_HPP

#include <utility>
#include <vector>

#include "quadcurl/basis.hpp"
#include "quadcurl/mesh.hpp"

namespace quadcurl
{

/// Continuous nodal space on an equispaced lattice with homogeneous boundary
/// values. Boundary nodes are dropped; a node in the interior of a hanging
/// sub-face is an affine combination of the coarse neighbor's nodes.
class LagrangeSpace
{
public:
  /// On quadrilaterals the space is Tensor (Q_degree) or Trimmed (P_degree
  /// without x^degree and y^degree, whose traces have degree - 1); Total is
  /// rejected there.
  LagrangeSpace(const Mesh &mesh, int degree, PolySpace space);

  int degree() const { return degree_; }
  int size() const { return num_free_; }
  int nodes_per_cell() const { return static_cast<int>(ref_nodes_.size()); }
  const std::vector<Vec3> &reference_nodes() const { return ref_nodes_; }

  /// Local node k of cell c as a combination of free global unknowns (empty
  /// on the boundary).
  const std::vector<std::pair<int, double>> &local_dofs(int c, int k) const
  {
    return cell_dofs_[c][k];
  }

  /// Local nodal function values and physical gradients (rows: local nodes).
  void evaluate(const Vec3 &xi, const AffineMap &map, Vector &values, Matrix &grads) const;
  void evaluate_values(const Vec3 &xi, Vector &values) const;

  /// Value and gradient of the member with free coefficients u at a point of
  /// cell c.
  std::pair<double, Vec3> member(const Vector &u, int c, const Vec3 &xi, const AffineMap &map) const;

  int num_slaves() const { return num_slaves_; }

private:
  int degree_;
  ScalarModalBasis modal_;
  std::vector<Vec3> ref_nodes_;
  Matrix nodal_;  // nodal function i = sum_j nodal_(i, j) modal_j
  int num_free_ = 0;
  int num_slaves_ = 0;
  std::vector<std::vector<std::vector<std::pair<int, double>>>> cell_dofs_;
};

/// U_h for degree-p DG fields, chosen so that gradients of U_h lie in the DG
/// space: continuous P_{p+1} on simplices. On parallelogram meshes with zero
/// boundary values, continuous piecewise P_{p+1} equals the trimmed space of
/// degree p + 1 (the pure top powers cancel along every grid line); with
/// tensor DG fields the multipliers are continuous Q_p.
LagrangeSpace lagrange_multiplier_space(const Mesh &mesh, int p, bool tensor = false);

}  // namespace quadcurl

#endif  // QUADCURL_LAGRANGE_HPP
