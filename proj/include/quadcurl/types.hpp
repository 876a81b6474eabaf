// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUADCURL_TYPES_HPP
#define QUADCURL_TYPES_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace quadcurl
{

// Planar fields are embedded in 3D with a zero third component, so the scalar
// 2D curl lives in z and all cross products are the ordinary 3D ones.
using Vec3 = std::array<double, 3>;

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline Vec3 operator+(const Vec3 &a, const Vec3 &b)
{
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec3 operator-(const Vec3 &a, const Vec3 &b)
{
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 operator*(double s, const Vec3 &a)
{
  return {s * a[0], s * a[1], s * a[2]};
}

inline double dot(const Vec3 &a, const Vec3 &b)
{
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3 cross(const Vec3 &a, const Vec3 &b)
{
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3 &a)
{
  return std::sqrt(dot(a, a));
}

enum class CellKind
{
  Triangle,
  Quadrilateral,
  Tetrahedron
};

enum class Domain
{
  Square,      // (-1,1)^2
  UnitSquare,  // (0,1)^2
  LShape,      // (-1,1)^2 without [-1,0] x [0,1]
  Cube         // (-1,1)^3
};

inline int cell_dim(CellKind kind)
{
  return kind == CellKind::Tetrahedron ? 3 : 2;
}

inline int cell_vertex_count(CellKind kind)
{
  switch (kind)
  {
    case CellKind::Triangle:
      return 3;
    case CellKind::Quadrilateral:
      return 4;
    case CellKind::Tetrahedron:
      return 4;
  }
  return 0;
}

std::string to_string(CellKind kind);
std::string to_string(Domain domain);
CellKind parse_cell_kind(const std::string &name);
Domain parse_domain(const std::string &name);

}  // namespace quadcurl

#endif  // QUADCURL_TYPES_HPP
