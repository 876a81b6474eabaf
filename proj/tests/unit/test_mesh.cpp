// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "quadcurl/mesh.hpp"

using namespace quadcurl;

namespace
{

// Edge count of a triangulated n x n grid: n(n+1) horizontal, n(n+1)
// vertical, n^2 diagonals.
int grid_triangle_edges(int n)
{
  return 2 * n * (n + 1) + n * n;
}

}  // namespace

TEST_CASE("structured meshes have the expected counts and measures")
{
  SUBCASE("unit square triangles")
  {
    for (int n : {1, 2, 5})
    {
      const Mesh m = build_structured_mesh(Domain::UnitSquare, CellKind::Triangle, n);
      CHECK(m.cells.size() == static_cast<std::size_t>(2 * n * n));
      CHECK(m.vertices.size() == static_cast<std::size_t>((n + 1) * (n + 1)));
      CHECK(m.faces.size() == static_cast<std::size_t>(grid_triangle_edges(n)));
      CHECK(m.measure() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(m.max_h() == doctest::Approx(std::sqrt(2.0) / n));
      int boundary = 0;
      for (const Face &f : m.faces)
      {
        boundary += f.boundary();
      }
      CHECK(boundary == 4 * n);
    }
  }
  SUBCASE("(-1,1)^2 uses legs of length 1/n")
  {
    const Mesh m = build_structured_mesh(Domain::Square, CellKind::Triangle, 1);
    CHECK(m.cells.size() == 8);
    CHECK(m.measure() == doctest::Approx(4.0));
  }
  SUBCASE("L-shape")
  {
    const Mesh m = build_structured_mesh(Domain::LShape, CellKind::Triangle, 2);
    CHECK(m.measure() == doctest::Approx(3.0));
    CHECK(m.cells.size() == 24);
    for (int c = 0; c < static_cast<int>(m.cells.size()); ++c)
    {
      const Vec3 x = m.cell_centroid(c);
      CHECK_FALSE((x[0] < 0.0 && x[1] > 0.0));
    }
  }
  SUBCASE("quadrilaterals")
  {
    const Mesh m = build_structured_mesh(Domain::UnitSquare, CellKind::Quadrilateral, 3);
    CHECK(m.cells.size() == 9);
    CHECK(m.faces.size() == 24);
    CHECK(m.measure() == doctest::Approx(1.0));
  }
  SUBCASE("cube")
  {
    const Mesh one = build_structured_mesh(Domain::Cube, CellKind::Tetrahedron, 1);
    CHECK(one.cells.size() == 6);
    CHECK(one.measure() == doctest::Approx(8.0));
    // 24 tetrahedron facets = 2 * interior + boundary, two triangles per side.
    int boundary = 0;
    for (const Face &f : one.faces)
    {
      boundary += f.boundary();
    }
    CHECK(boundary == 12);
    CHECK(one.faces.size() == 18);
    const Mesh two = build_structured_mesh(Domain::Cube, CellKind::Tetrahedron, 2);
    CHECK(two.cells.size() == 48);
    CHECK(two.measure() == doctest::Approx(8.0));
  }
}

TEST_CASE("face normals are unit and point out of the plus cell")
{
  for (const Mesh &m : {build_structured_mesh(Domain::LShape, CellKind::Triangle, 2),
                        build_structured_mesh(Domain::Square, CellKind::Quadrilateral, 2),
                        build_structured_mesh(Domain::Cube, CellKind::Tetrahedron, 1)})
  {
    for (const Face &f : m.faces)
    {
      CHECK(norm(f.normal) == doctest::Approx(1.0));
      Vec3 mid{};
      for (int v : f.vertices)
      {
        mid = mid + (1.0 / f.vertices.size()) * m.vertices[v];
      }
      CHECK(dot(f.normal, mid - m.cell_centroid(f.plus)) > 0.0);
      if (!f.boundary())
      {
        CHECK(dot(f.normal, m.cell_centroid(f.minus) - mid) > 0.0);
      }
    }
  }
}

TEST_CASE("uniform refinement")
{
  const Mesh coarse = build_structured_mesh(Domain::LShape, CellKind::Triangle, 1);
  const Mesh fine = refine_uniform(coarse);
  CHECK(fine.cells.size() == 4 * coarse.cells.size());
  CHECK(fine.measure() == doctest::Approx(coarse.measure()));
  CHECK(fine.max_h() == doctest::Approx(coarse.max_h() / 2));
  CHECK(fine.is_conforming());
  // Same as the structured mesh with doubled n, up to cell order.
  const Mesh direct = build_structured_mesh(Domain::LShape, CellKind::Triangle, 2);
  CHECK(fine.faces.size() == direct.faces.size());
}

TEST_CASE("hanging-node refinement")
{
  const Mesh base = build_structured_mesh(Domain::UnitSquare, CellKind::Triangle, 2);
  const std::vector<int> marked = {0};
  const HangingRefinement r = build_hanging_mesh(base, marked);
  CHECK_FALSE(r.mesh.is_conforming());
  CHECK(r.mesh.cells.size() == base.cells.size() + 3 * (1 + r.closure.size()));
  CHECK(r.mesh.measure() == doctest::Approx(1.0));
  double boundary_length = 0.0;
  int hanging = 0;
  for (const Face &f : r.mesh.faces)
  {
    if (f.boundary())
    {
      boundary_length += f.measure;
    }
    hanging += f.hanging();
  }
  CHECK(boundary_length == doctest::Approx(4.0));
  CHECK(hanging > 0);
  CHECK(hanging % 2 == 0);
  for (const Cell &c : r.mesh.cells)
  {
    CHECK(c.level <= 1);
  }
}

TEST_CASE("face parameters follow the selected rule")
{
  Mesh m = build_structured_mesh(Domain::UnitSquare, CellKind::Triangle, 2);
  m.set_degree(3);
  for (const Face &f : m.faces)
  {
    const auto [h, p] = face_parameters(m, f);
    CHECK(p == 3);
    CHECK(h == doctest::Approx(f.measure));
    const bool diagonal = std::abs(f.measure - std::sqrt(2.0) / 2) < 1e-12;
    CHECK((diagonal || std::abs(f.measure - 0.5) < 1e-12));
  }
  m.set_face_size(FaceSize::CellDiameter);
  for (const Face &f : m.faces)
  {
    CHECK(face_parameters(m, f).first == doctest::Approx(std::sqrt(2.0) / 2));
  }
  Mesh cube = build_structured_mesh(Domain::Cube, CellKind::Tetrahedron, 1);
  for (const Face &f : cube.faces)
  {
    CHECK(face_parameters(cube, f).first == doctest::Approx(std::sqrt(f.measure)));
  }
}

TEST_CASE("mixed degrees take the minimum on a face")
{
  Mesh m = build_structured_mesh(Domain::UnitSquare, CellKind::Triangle, 1);
  m.cells[0].p = 2;
  m.cells[1].p = 4;
  m.finalize();
  for (const Face &f : m.faces)
  {
    const int expected = f.boundary() ? m.cells[f.plus].p : 2;
    CHECK(face_parameters(m, f).second == expected);
  }
}

TEST_CASE("mesh text format round trip")
{
  for (const Mesh &m : {build_structured_mesh(Domain::LShape, CellKind::Quadrilateral, 2),
                        build_structured_mesh(Domain::Cube, CellKind::Tetrahedron, 1)})
  {
    std::stringstream ss;
    write_mesh(ss, m);
    const Mesh back = read_mesh(ss);
    REQUIRE(back.cells.size() == m.cells.size());
    CHECK(back.vertices.size() == m.vertices.size());
    CHECK(back.faces.size() == m.faces.size());
    CHECK(back.kind() == m.kind());
    CHECK(back.measure() == doctest::Approx(m.measure()));
    for (std::size_t i = 0; i < m.vertices.size(); ++i)
    {
      CHECK(norm(back.vertices[i] - m.vertices[i]) == doctest::Approx(0.0));
    }
  }
  std::istringstream bad("dim 2\nvertices 1\n0 0\ncells 1 triangle\n0 1 2\n");
  CHECK_THROWS(read_mesh(bad));
}
