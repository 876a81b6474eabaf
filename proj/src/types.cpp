// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include "quadcurl/types.hpp"

namespace quadcurl
{

std::string to_string(CellKind kind)
{
  switch (kind)
  {
    case CellKind::Triangle:
      return "tri";
    case CellKind::Quadrilateral:
      return "quad";
    case CellKind::Tetrahedron:
      return "tet";
  }
  return "unknown";
}

std::string to_string(Domain domain)
{
  switch (domain)
  {
    case Domain::Square:
      return "square";
    case Domain::UnitSquare:
      return "unit-square";
    case Domain::LShape:
      return "lshape";
    case Domain::Cube:
      return "cube";
  }
  return "unknown";
}

CellKind parse_cell_kind(const std::string &name)
{
  if (name == "tri" || name == "triangle")
  {
    return CellKind::Triangle;
  }
  if (name == "quad" || name == "quadrilateral")
  {
    return CellKind::Quadrilateral;
  }
  if (name == "tet" || name == "tetrahedron")
  {
    return CellKind::Tetrahedron;
  }
  throw std::invalid_argument("unknown cell kind '" + name + "'");
}

Domain parse_domain(const std::string &name)
{
  if (name == "square")
  {
    return Domain::Square;
  }
  if (name == "unit-square")
  {
    return Domain::UnitSquare;
  }
  if (name == "lshape")
  {
    return Domain::LShape;
  }
  if (name == "cube")
  {
    return Domain::Cube;
  }
  throw std::invalid_argument("unknown domain '" + name + "'");
}

}  // namespace quadcurl
