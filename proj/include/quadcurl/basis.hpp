// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUADCURL_BASIS_HPP
#define QUADCURL_BASIS_HPP

#include <array>
#include <span>
#include <vector>

#include "quadcurl/mesh.hpp"
#include "quadcurl/types.hpp"

namespace quadcurl
{

/// Derivatives of n scalar functions at one point. Rows index functions;
/// hess columns are the row-major 3x3 entries.
struct ScalarJets
{
  Vector value;
  Matrix grad;      // n x 3
  Matrix hess;      // n x 9
  Matrix grad_lap;  // n x 3, gradient of the Laplacian
};

/// Scalar polynomial space on a reference cell.
enum class PolySpace
{
  Total,   // P_p
  Tensor,  // Q_p, quadrilaterals only
  Trimmed  // P_p without the pure powers x^p and y^p, quadrilaterals only
};

/// Modal scalar basis on a reference cell, orthonormal in L2 of the reference
/// cell. Built from collapsed-coordinate orthogonal polynomials on simplices
/// and tensor products of Legendre polynomials on quadrilaterals, then
/// orthonormalized against the exact Gram matrix.
class ScalarModalBasis
{
public:
  /// Tensor and Trimmed fall back to Total on simplices.
  ScalarModalBasis(CellKind kind, int p, PolySpace space = PolySpace::Total);

  CellKind kind() const { return kind_; }
  int degree() const { return p_; }
  int dim() const { return cell_dim(kind_); }
  int size() const { return static_cast<int>(exponents_.size()); }
  PolySpace space() const { return space_; }

  /// Jets at a reference point. With a map, derivatives are taken in physical
  /// coordinates (chain rule through the inverse Jacobian).
  void evaluate(const Vec3 &xi, const AffineMap *map, ScalarJets &out) const;

  /// Values only.
  void evaluate_values(const Vec3 &xi, Vector &out) const;

  /// Coefficients of the basis in the raw functions.
  const Matrix &coefficients() const { return coeffs_; }

private:
  CellKind kind_;
  int p_;
  PolySpace space_;
  std::vector<std::array<int, 3>> exponents_;
  Matrix coeffs_;  // lower triangular
};

/// Evaluations of a vector DG basis at a set of points, in physical
/// coordinates. Column 3*q + c holds component c at point q.
struct VectorEvaluation
{
  int npoints = 0;
  Matrix value;
  Matrix curl;   // planar: only the third component is nonzero
  Matrix curl2;
  Matrix curl3;  // planar: only the third component is nonzero
};

/// Vector basis e_c * phi_s of (P_p)^d (or (Q_p)^2); function index
/// c * n_scalar + s.
class ElementBasis
{
public:
  ElementBasis(CellKind kind, int p, bool total_degree = true);

  CellKind kind() const { return scalar_.kind(); }
  int degree() const { return scalar_.degree(); }
  int dim() const { return scalar_.dim(); }
  int size() const { return dim() * scalar_.size(); }
  const ScalarModalBasis &scalar() const { return scalar_; }

  /// Evaluates values and curls at reference points of a cell. max_curl
  /// limits the work (0: values only, ..., 3: everything).
  void evaluate(std::span<const Vec3> ref_points, const AffineMap &map, VectorEvaluation &out,
                int max_curl = 3) const;

private:
  ScalarModalBasis scalar_;
};

/// Orthonormal modal basis of (P_p)^dim on the reference simplex. Throws for
/// p < 2 or dim outside {2, 3}.
ElementBasis simplex_modal_basis(int p, int dim);

/// Value and curls of a smooth field at one point.
struct FieldJet
{
  Vec3 value{};
  Vec3 curl{};
  Vec3 curl2{};
  Vec3 curl3{};
};

}  // namespace quadcurl

#endif  // QUADCURL_BASIS_HPP
