// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "quadcurl/assembly.hpp"

using namespace quadcurl;

namespace
{

// w = (y^2 + x/2, xy - 0.3 x^2): curl w = -y - 0.6x, curl^2 w = (-1, 0.6).
FieldJet planar_quadratic(const Vec3 &x)
{
  FieldJet j;
  j.value = {x[1] * x[1] + 0.5 * x[0], x[0] * x[1] - 0.3 * x[0] * x[0], 0.0};
  j.curl = {0.0, 0.0, -x[1] - 0.6 * x[0]};
  j.curl2 = {-1.0, 0.6, 0.0};
  return j;
}

// w = (y^2, zx, xy): curl w = (0, -y, z - 2y), curl^2 w = (-2, 0, 0).
FieldJet spatial_quadratic(const Vec3 &x)
{
  FieldJet j;
  j.value = {x[1] * x[1], x[2] * x[0], x[0] * x[1]};
  j.curl = {0.0, -x[1], x[2] - 2 * x[1]};
  j.curl2 = {-2.0, 0.0, 0.0};
  return j;
}

double max_abs(const SparseMatrix &m)
{
  double out = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
    {
      out = std::max(out, std::abs(it.value()));
    }
  }
  return out;
}

Vector random_vector(int n, unsigned seed)
{
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i)
  {
    v[i] = g(rng);
  }
  return v;
}

Mesh hanging_square()
{
  const Mesh base = build_structured_mesh(Domain::Square, CellKind::Triangle, 1);
  const std::vector<int> marked = {1, 4};
  return build_hanging_mesh(base, marked).mesh;
}

}  // namespace

TEST_CASE("assembled matrices are symmetric and consistent")
{
  for (const Mesh &mesh : {build_structured_mesh(Domain::Square, CellKind::Triangle, 2),
                           build_structured_mesh(Domain::LShape, CellKind::Quadrilateral, 1), hanging_square(),
                           build_structured_mesh(Domain::Cube, CellKind::Tetrahedron, 1)})
  {
    const AssembledSystem sys = assemble_system(mesh, 2, default_penalties(mesh.dim));
    CHECK(sys.A.rows() == sys.space->size());
    CHECK(sys.B.cols() == sys.n_V());
    CHECK(sys.B.rows() == sys.multipliers->size());
    const SparseMatrix at = sys.A.transpose();
    CHECK(max_abs(sys.A - at) <= 1e-12 * max_abs(sys.A));
    const SparseMatrix mt = sys.M.transpose();
    CHECK(max_abs(sys.M - mt) <= 1e-12 * max_abs(sys.M));
    CHECK(max_abs(sys.Atilde - (sys.A - sys.M)) <= 1e-12 * max_abs(sys.A));
  }
}

TEST_CASE("mass matrix is |det J| times the identity on each cell")
{
  for (const Mesh &mesh : {build_structured_mesh(Domain::UnitSquare, CellKind::Triangle, 3),
                           build_structured_mesh(Domain::Square, CellKind::Quadrilateral, 2),
                           build_structured_mesh(Domain::Cube, CellKind::Tetrahedron, 1)})
  {
    const AssembledSystem sys = assemble_system(mesh, 3, default_penalties(mesh.dim), false);
    Matrix expected = Matrix::Zero(sys.n_V(), sys.n_V());
    for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c)
    {
      const double det = mesh.cell_measure(c) / ref_measure(ref_shape(mesh.kind()));
      for (int i = 0; i < sys.space->local_size(c); ++i)
      {
        expected(sys.space->offset(c) + i, sys.space->offset(c) + i) = det;
      }
    }
    CHECK((Matrix(sys.M) - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("A applied to a global polynomial equals the smooth form action")
{
  struct Case
  {
    Mesh mesh;
    FieldJetFunction w;
  };
  for (const Case &c : {Case{build_structured_mesh(Domain::Square, CellKind::Triangle, 2), planar_quadratic},
                        Case{build_structured_mesh(Domain::LShape, CellKind::Quadrilateral, 1), planar_quadratic},
                        Case{hanging_square(), planar_quadratic},
                        Case{build_structured_mesh(Domain::Cube, CellKind::Tetrahedron, 1), spatial_quadratic}})
  {
    const AssembledSystem sys = assemble_system(c.mesh, 2, default_penalties(c.mesh.dim));
    const Vector coeffs = l2_projection(*sys.space, [&](const Vec3 &x) { return c.w(x).value; });
    const Vector direct = sys.A * coeffs;
    const Vector smooth = form_action(sys, c.w);
    CHECK((direct - smooth).cwiseAbs().maxCoeff() <= 1e-10 * direct.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("DG norm routes agree")
{
  const Mesh mesh = hanging_square();
  const AssembledSystem sys = assemble_system(mesh, 2, default_penalties(2));
  const Vector coeffs = l2_projection(*sys.space, [](const Vec3 &x) { return planar_quadratic(x).value; });
  const DGNormParts discrete = dg_norm(*sys.space, coeffs);
  const DGNormParts smooth = dg_norm(*sys.space, FieldJetFunction(planar_quadratic));
  CHECK(discrete.norm() == doctest::Approx(smooth.norm()).epsilon(1e-12));
  CHECK(discrete.curl2 == doctest::Approx(smooth.curl2).epsilon(1e-12));
  // A global polynomial has no interior jumps.
  CHECK(discrete.interior_jump < 1e-24);
  CHECK(discrete.interior_jump_curl < 1e-24);
  CHECK(dg_error(*sys.space, coeffs, planar_quadratic).norm() < 1e-10);

  const SparseMatrix N = dg_norm_matrix(*sys.space);
  const Vector v = random_vector(sys.n_V(), 3u);
  const DGNormParts parts = dg_norm(*sys.space, v);
  CHECK(v.dot(N * v) == doctest::Approx(parts.norm() * parts.norm()).epsilon(1e-11));
  CHECK(parts.seminorm() <= parts.norm());
}

TEST_CASE("gradients of multipliers are orthogonal to constant fields")
{
  // (grad q, c) = 0 for q vanishing on the boundary.
  for (const Mesh &mesh : {build_structured_mesh(Domain::LShape, CellKind::Triangle, 2),
                           build_structured_mesh(Domain::Square, CellKind::Quadrilateral, 2), hanging_square(),
                           build_structured_mesh(Domain::Cube, CellKind::Tetrahedron, 2)})
  {
    const AssembledSystem sys = assemble_system(mesh, 2, default_penalties(mesh.dim));
    const Vector c = l2_projection(*sys.space, [](const Vec3 &) { return Vec3{1.0, -2.0, 0.5}; });
    CHECK((sys.B * c).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("load vector is linear and matches the projection")
{
  const Mesh mesh = build_structured_mesh(Domain::LShape, CellKind::Triangle, 1);
  const AssembledSystem sys = assemble_system(mesh, 3, default_penalties(2), false);
  const VectorField f = [](const Vec3 &x) { return Vec3{std::sin(x[0]), x[1] * x[0], 0.0}; };
  const VectorField g = [](const Vec3 &x) { return Vec3{1.0, std::cos(x[1]), 0.0}; };
  const Vector lf = assemble_load(*sys.space, f, 10);
  const Vector lg = assemble_load(*sys.space, g, 10);
  const Vector lfg = assemble_load(*sys.space, [&](const Vec3 &x) { return f(x) + 2.0 * g(x); }, 10);
  CHECK((lfg - lf - 2 * lg).cwiseAbs().maxCoeff() < 1e-13);
  // Orthonormal reference basis: projection coefficients are load / |det J|.
  const Vector proj = l2_projection(*sys.space, f, 10);
  const Vector via_mass = Matrix(sys.M).diagonal().cwiseInverse().asDiagonal() * lf;
  CHECK((proj - via_mass).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("manufactured field curls agree with finite differences")
{
  const ManufacturedSolution ms(3);
  CHECK(ms.degree() == 11);
  const Vec3 x{0.3, -0.45, 0.0};
  const double d = 1e-5;
  const auto at = [&](double dx, double dy) { return ms.exact({x[0] + dx, x[1] + dy, 0.0}); };
  const FieldJet j = ms.exact(x);
  const double curl = (at(d, 0).value[1] - at(-d, 0).value[1]) / (2 * d) -
                      (at(0, d).value[0] - at(0, -d).value[0]) / (2 * d);
  CHECK(j.curl[2] == doctest::Approx(curl).epsilon(1e-7));
  const double c2x = (at(0, d).curl[2] - at(0, -d).curl[2]) / (2 * d);
  const double c2y = -(at(d, 0).curl[2] - at(-d, 0).curl[2]) / (2 * d);
  CHECK(j.curl2[0] == doctest::Approx(c2x).epsilon(1e-7));
  CHECK(j.curl2[1] == doctest::Approx(c2y).epsilon(1e-7));
  const double c3 = (at(d, 0).curl2[1] - at(-d, 0).curl2[1]) / (2 * d) -
                    (at(0, d).curl2[0] - at(0, -d).curl2[0]) / (2 * d);
  CHECK(j.curl3[2] == doctest::Approx(c3).epsilon(1e-6));
  // Divergence free and tangentially clamped on the boundary.
  const double div = (at(d, 0).value[0] - at(-d, 0).value[0] + at(0, d).value[1] - at(0, -d).value[1]) / (2 * d);
  CHECK(std::abs(div) < 1e-8);
  const FieldJet edge = ms.exact({1.0, 0.2, 0.0});
  CHECK(std::abs(edge.value[1]) < 1e-14);
  CHECK(std::abs(edge.curl[2]) < 1e-14);
}

TEST_CASE("assembly rejects bad input")
{
  const Mesh mesh = build_structured_mesh(Domain::Square, CellKind::Triangle, 1);
  CHECK_THROWS(assemble_system(mesh, 1, default_penalties(2)));
  CHECK_THROWS(assemble_system(mesh, 2, PenaltyParameters{-1.0, 1.0}));
  const AssembledSystem tensor =
      assemble_system(build_structured_mesh(Domain::Square, CellKind::Quadrilateral, 1), 2, default_penalties(2), true,
                      true);
  CHECK(tensor.n_V() == 4 * 18);
}

TEST_CASE("matrix text format")
{
  const AssembledSystem sys =
      assemble_system(build_structured_mesh(Domain::Square, CellKind::Triangle, 1), 2, default_penalties(2));
  std::stringstream ss;
  write_matrix(ss, sys.M);
  std::string tag;
  int n = 0, nnz = 0;
  ss >> tag >> n >> nnz;
  CHECK(tag == "%%sym");
  CHECK(n == sys.n_V());
  CHECK(nnz >= sys.n_V());
  int i = 0, j = 0, lines = 0, diagonal = 0;
  double v = 0.0, first = 0.0, off = 0.0;
  while (ss >> i >> j >> v)
  {
    CHECK(j <= i);
    if (lines++ == 0)
    {
      CHECK(i == 0);
      first = v;
    }
    if (i == j)
    {
      ++diagonal;
    }
    else
    {
      off = std::max(off, std::abs(v));
    }
  }
  CHECK(lines == nnz);
  CHECK(diagonal == sys.n_V());
  CHECK(off < 1e-12);
  CHECK(first == doctest::Approx(0.5 / ref_measure(RefShape::Triangle)));

  std::stringstream bs;
  write_matrix(bs, sys.B);
  int rows = 0, cols = 0;
  bs >> tag >> rows >> cols >> nnz;
  CHECK(tag == "%%general");
  CHECK(rows == sys.n_U());
  CHECK(cols == sys.n_V());
  CHECK(nnz == sys.B.nonZeros());
}
