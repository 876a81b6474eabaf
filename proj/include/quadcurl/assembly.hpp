// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUADCURL_ASSEMBLY_HPP
#define QUADCURL_ASSEMBLY_HPP

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <vector>

#include "quadcurl/basis.hpp"
#include "quadcurl/lagrange.hpp"
#include "quadcurl/mesh.hpp"
#include "quadcurl/quadrature.hpp"

namespace quadcurl
{

/// Discontinuous vector space over a mesh: one ElementBasis per cell degree and
/// contiguous per-cell index ranges.
class DGSpace
{
public:
  /// tensor selects (Q_p)^2 on quadrilaterals instead of (P_p)^2.
  explicit DGSpace(const Mesh &mesh, bool tensor = false);

  const Mesh &mesh() const { return *mesh_; }
  int size() const { return offsets_.back(); }
  int offset(int c) const { return offsets_[c]; }
  int local_size(int c) const { return offsets_[c + 1] - offsets_[c]; }
  const ElementBasis &basis(int c) const { return *bases_.at(mesh_->cells[c].p); }
  bool tensor() const { return tensor_; }

private:
  const Mesh *mesh_;
  bool tensor_;
  std::vector<int> offsets_;
  std::map<int, std::shared_ptr<const ElementBasis>> bases_;
};

/// Quadrature on a face: physical points, weights including the surface
/// measure, and reference coordinates of the points in each adjacent cell.
struct FaceQuadrature
{
  std::vector<Vec3> points;
  std::vector<double> weights;
  std::vector<Vec3> plus_ref;
  std::vector<Vec3> minus_ref;
};

FaceQuadrature face_quadrature(const Mesh &mesh, const Face &face, int degree);

struct PenaltyParameters
{
  double eta1 = 2.5;  // weight of the curl-jump penalty, scaled by p^2 / h
  double eta2 = 1.6;  // weight of the tangential-jump penalty, scaled by p^6 / h^3
};

/// Published penalty values: (2.5, 1.6) in 2D, (15.6, 1.35) in 3D.
PenaltyParameters default_penalties(int dim);

struct AssembledSystem
{
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const DGSpace> space;
  std::shared_ptr<const LagrangeSpace> multipliers;
  SparseMatrix A;       // penalized form, including the mass term
  SparseMatrix M;       // L2 mass
  SparseMatrix Atilde;  // A - M
  SparseMatrix B;       // n_U x n_V, rows (grad q, v)
  PenaltyParameters eta;
  int p = 2;

  int n_V() const { return static_cast<int>(A.rows()); }
  int n_U() const { return static_cast<int>(B.rows()); }
};

/// Sets every cell to degree p (copying the mesh) and assembles A, M, A - M and
/// B. tensor_quads switches quadrilateral cells to (Q_p)^2 with continuous Q_p
/// multipliers. Throws for p < 2, non-positive penalties or degenerate cells.
AssembledSystem assemble_system(const Mesh &mesh, int p, PenaltyParameters eta,
                                bool with_constraint = true, bool tensor_quads = false);

using VectorField = std::function<Vec3(const Vec3 &)>;
using FieldJetFunction = std::function<FieldJet(const Vec3 &)>;

/// Entries (f, phi_i), with element quadrature exact to degree p + f_degree.
/// f_degree < 0 selects the default 2p + 2.
Vector assemble_load(const DGSpace &space, const VectorField &f, int f_degree = -1);

/// Vector a_h(w, phi_i) for a smooth field w given with its curls; volume
/// and face integrals are exact to degree 2p + extra_degree.
Vector form_action(const AssembledSystem &sys, const FieldJetFunction &w, int extra_degree = 12);

/// Elementwise L2 projection of a field onto the DG space.
Vector l2_projection(const DGSpace &space, const VectorField &f, int f_degree = -1);

/// Squared contributions to the DG norm.
struct DGNormParts
{
  double curl2 = 0.0;       // sum ||curl^2 v||^2
  double l2 = 0.0;          // sum ||v||^2
  double jump = 0.0;        // h^-3 p^6 ||[v]||^2
  double avg_curl3 = 0.0;   // h^3 p^-6 ||{curl^3 v}||^2
  double avg_curl2 = 0.0;   // h p^-2 ||{curl^2 v}||^2
  double jump_curl = 0.0;   // h^-1 p^2 ||[curl v]||^2
  // Interior faces only, unweighted: ||[v]||^2 and h_f^2 ||[curl v]||^2.
  double interior_jump = 0.0;
  double interior_jump_curl = 0.0;
  // Interior faces only, with the norm weights.
  double interior_weighted = 0.0;

  double norm() const;      // ||v||_h
  double seminorm() const;  // |v|_h
};

/// DG norm of a discrete field.
DGNormParts dg_norm(const DGSpace &space, const Vector &coeffs);

/// DG norm of a smooth field given with its curls.
DGNormParts dg_norm(const DGSpace &space, const FieldJetFunction &field, int extra_degree = 8);

/// DG norm of coeffs - exact, with the exact field sampled at quadrature
/// points of degree 2p + extra_degree.
DGNormParts dg_error(const DGSpace &space, const Vector &coeffs, const FieldJetFunction &exact,
                     int extra_degree = 8);

/// Matrix of the quadratic form v -> ||v||_h^2.
SparseMatrix dg_norm_matrix(const DGSpace &space);

/// Evaluates a discrete field (value and curls) at a reference point of cell c.
FieldJet evaluate_field(const DGSpace &space, const Vector &coeffs, int c, const Vec3 &xi);

/// Smooth solution on the square (-1,1)^2: w = curl(psi) with
/// psi = (1 - x^2)^m (1 - y^2)^m and source f = curl^4 w + w. For m >= 3 both
/// w x n and curl w x n vanish on the boundary; m = 1 violates the second
/// condition.
class ManufacturedSolution
{
public:
  explicit ManufacturedSolution(int m = 3);

  int exponent() const { return m_; }
  int degree() const { return 4 * m_ - 1; }  // polynomial degree of w
  FieldJet exact(const Vec3 &x) const;
  Vec3 source(const Vec3 &x) const;

private:
  int m_;
  std::vector<std::vector<double>> derivs_;  // derivs_[k]: coefficients of (1 - t^2)^m, k-th derivative
  double poly(int k, double t) const;
};

/// Sparse symmetric matrix as `%%sym n nnz` followed by lower-triangle lines
/// `i j value` (0-based, 17 significant digits); rectangular matrices use the
/// header `%%general rows cols nnz` and list every entry.
void write_matrix(std::ostream &os, const SparseMatrix &A);

}  // namespace quadcurl

#endif  // QUADCURL_ASSEMBLY_HPP
