// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUADCURL_MESH_HPP
#define QUADCURL_MESH_HPP

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "quadcurl/types.hpp"

namespace quadcurl
{

struct Cell
{
  CellKind kind;
  std::vector<int> vertices;  // counterclockwise for planar cells
  double h = 0.0;             // diameter, i.e. largest vertex distance
  int p = 2;                  // polynomial degree
  int level = 0;              // refinement depth relative to the coarse mesh
};

struct Face
{
  std::vector<int> vertices;  // segment endpoints (2D) or triangle corners (3D)
  int plus = -1;
  int minus = -1;  // -1 on the boundary
  Vec3 normal{};   // unit, pointing out of the plus cell
  double measure = 0.0;
  double h = 0.0;
  int p = 0;
  // 0 for a whole shared facet, +1/-1 when the plus/minus cell is the coarse
  // side of a hanging sub-face.
  int coarse_side = 0;

  bool boundary() const { return minus < 0; }
  bool hanging() const { return coarse_side != 0; }
};

/// Affine reference-to-physical map x = origin + jacobian * xi. The reference
/// cell is the unit simplex for triangles/tetrahedra and [-1,1]^2 for quads.
struct AffineMap
{
  int dim = 2;
  Vec3 origin{};
  Eigen::Matrix3d jacobian = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d inverse = Eigen::Matrix3d::Identity();
  double det = 1.0;  // |det J|

  Vec3 map(const Vec3 &xi) const;
  Vec3 pullback(const Vec3 &x) const;
};

/// Length h_f used in the face penalties and the DG norm.
enum class FaceSize
{
  Measure,      // edge length in 2D, square root of the face area in 3D
  CellDiameter  // largest diameter of the adjacent cells
};

class Mesh
{
public:
  int dim = 2;
  FaceSize face_size = FaceSize::Measure;
  std::vector<Vec3> vertices;
  std::vector<Cell> cells;
  std::vector<Face> faces;

  CellKind kind() const { return cells.front().kind; }
  double measure() const;
  double cell_measure(int c) const;
  AffineMap cell_map(int c) const;
  Vec3 cell_centroid(int c) const;
  double max_h() const;
  int min_degree() const;
  int max_degree() const;
  bool is_conforming() const;

  /// Sets every cell to degree p and refreshes the face parameters.
  void set_degree(int p);

  /// Switches the h_f rule and refreshes the face parameters.
  void set_face_size(FaceSize rule);

  /// Recomputes diameters and rebuilds faces (with hanging sub-faces in 2D)
  /// from the vertex and cell lists.
  void finalize();

  /// Faces incident to each cell.
  std::vector<std::vector<int>> cell_faces() const;
};

/// In 2D, n is the number of subdivisions per unit length, so the cells have
/// legs of length 1/n. The cube (-1,1)^3 is cut into n^3 subcubes, each split
/// into six tetrahedra sharing its main diagonal; n = 1 is the six-tetrahedron
/// mesh.
Mesh build_structured_mesh(Domain domain, CellKind kind, int n);

/// Red refinement of every cell of a conforming planar mesh.
Mesh refine_uniform(const Mesh &mesh);

struct HangingRefinement
{
  Mesh mesh;
  std::vector<int> closure;  // cells refined in addition to the marked ones
};

/// Refines the marked cells (and the closure needed to keep the mesh
/// 1-irregular) into four children each; neighbors keep their facets, which
/// become pairs of hanging sub-faces.
HangingRefinement build_hanging_mesh(const Mesh &mesh, std::span<const int> marked);

/// (h_f, p_f): h_f follows mesh.face_size, p_f is the minimum degree of the
/// adjacent cells.
std::pair<double, int> face_parameters(const Mesh &mesh, const Face &face);

/// Plain-text format: `dim <d>`, `vertices <N>` + N coordinate lines,
/// `cells <M> <kind>` + M lines of 0-based vertex indices; `#` starts a comment.
void write_mesh(std::ostream &os, const Mesh &mesh);
Mesh read_mesh(std::istream &is);

}  // namespace quadcurl

#endif  // QUADCURL_MESH_HPP
