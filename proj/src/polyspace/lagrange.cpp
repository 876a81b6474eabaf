// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include "quadcurl/lagrange.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>

#include <Eigen/LU>

#include "mesh/vertex_index.hpp"

namespace quadcurl
{

namespace
{

std::vector<Vec3> lattice(CellKind kind, int k, PolySpace space)
{
  std::vector<Vec3> nodes;
  if (kind == CellKind::Quadrilateral && space == PolySpace::Trimmed)
  {
    // Vertices, k - 2 points per edge (traces have degree k - 1) and a
    // triangular set of interior points for the bubbles.
    for (const auto &[x, y] : {std::pair{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}})
    {
      nodes.push_back({x, y, 0.0});
    }
    for (int i = 1; i <= k - 2; ++i)
    {
      const double t = -1.0 + 2.0 * i / (k - 1);
      nodes.push_back({t, -1.0, 0.0});
      nodes.push_back({1.0, t, 0.0});
      nodes.push_back({-t, 1.0, 0.0});
      nodes.push_back({-1.0, -t, 0.0});
    }
    for (int j = 1; j <= k - 3; ++j)
    {
      for (int i = 1; i + j <= k - 2; ++i)
      {
        nodes.push_back({-1.0 + 2.0 * i / k, -1.0 + 2.0 * j / k, 0.0});
      }
    }
    return nodes;
  }
  switch (kind)
  {
    case CellKind::Triangle:
      for (int j = 0; j <= k; ++j)
      {
        for (int i = 0; i + j <= k; ++i)
        {
          nodes.push_back({double(i) / k, double(j) / k, 0.0});
        }
      }
      break;
    case CellKind::Quadrilateral:
      for (int j = 0; j <= k; ++j)
      {
        for (int i = 0; i <= k; ++i)
        {
          nodes.push_back({-1.0 + 2.0 * i / k, -1.0 + 2.0 * j / k, 0.0});
        }
      }
      break;
    case CellKind::Tetrahedron:
      for (int l = 0; l <= k; ++l)
      {
        for (int j = 0; j + l <= k; ++j)
        {
          for (int i = 0; i + j + l <= k; ++i)
          {
            nodes.push_back({double(i) / k, double(j) / k, double(l) / k});
          }
        }
      }
      break;
  }
  return nodes;
}

// Whether x lies on the facet spanned by the face vertices (x is known to lie
// in a cell having that facet).
bool on_face(const Mesh &mesh, const Face &face, const Vec3 &x, double h)
{
  const Vec3 &a = mesh.vertices[face.vertices[0]];
  if (std::abs(dot(x - a, face.normal)) > 1e-10 * h)
  {
    return false;
  }
  if (mesh.dim == 3)
  {
    return true;
  }
  const Vec3 t = mesh.vertices[face.vertices[1]] - a;
  const double s = dot(x - a, t) / dot(t, t);
  return s > -1e-10 && s < 1.0 + 1e-10;
}

}  // namespace

LagrangeSpace::LagrangeSpace(const Mesh &mesh, int degree, PolySpace space)
    : degree_(degree), modal_(mesh.kind(), degree, space)
{
  if (degree < 1)
  {
    throw std::invalid_argument("LagrangeSpace: degree must be at least 1");
  }
  const CellKind kind = mesh.kind();
  if (kind == CellKind::Quadrilateral && modal_.space() == PolySpace::Total)
  {
    throw std::invalid_argument("LagrangeSpace: continuous P_k has no nodal basis on quadrilaterals");
  }
  ref_nodes_ = lattice(kind, degree, modal_.space());
  const int nloc = nodes_per_cell();
  Matrix vandermonde(nloc, nloc);
  Vector values;
  for (int i = 0; i < nloc; ++i)
  {
    modal_.evaluate_values(ref_nodes_[i], values);
    vandermonde.row(i) = values.transpose();
  }
  nodal_ = vandermonde.inverse().transpose();

  // Global node identification by physical coordinates.
  const int ncells = static_cast<int>(mesh.cells.size());
  std::vector<std::vector<int>> node_ids(ncells, std::vector<int>(nloc));
  std::vector<Vec3> coords;
  detail::VertexIndex index({});
  std::vector<AffineMap> maps(ncells);
  for (int c = 0; c < ncells; ++c)
  {
    maps[c] = mesh.cell_map(c);
    for (int k = 0; k < nloc; ++k)
    {
      const Vec3 x = maps[c].map(ref_nodes_[k]);
      int id = index.find(x);
      if (id < 0)
      {
        id = static_cast<int>(coords.size());
        coords.push_back(x);
        index.insert(x, id);
      }
      node_ids[c][k] = id;
    }
  }
  const int nnodes = static_cast<int>(coords.size());
  std::vector<char> boundary(nnodes, 0);
  std::map<int, std::vector<std::pair<int, double>>> slaves;
  for (const Face &face : mesh.faces)
  {
    if (face.boundary())
    {
      const double h = mesh.cells[face.plus].h;
      for (int id : node_ids[face.plus])
      {
        if (on_face(mesh, face, coords[id], h))
        {
          boundary[id] = 1;
        }
      }
      continue;
    }
    if (!face.hanging())
    {
      continue;
    }
    const int coarse = face.coarse_side > 0 ? face.plus : face.minus;
    const int fine = face.coarse_side > 0 ? face.minus : face.plus;
    const auto &coarse_ids = node_ids[coarse];
    for (int id : node_ids[fine])
    {
      if (slaves.count(id) || !on_face(mesh, face, coords[id], mesh.cells[fine].h) ||
          std::find(coarse_ids.begin(), coarse_ids.end(), id) != coarse_ids.end())
      {
        continue;
      }
      evaluate_values(maps[coarse].pullback(coords[id]), values);
      std::vector<std::pair<int, double>> masters;
      for (int k = 0; k < nloc; ++k)
      {
        if (std::abs(values[k]) > 1e-14)
        {
          masters.emplace_back(coarse_ids[k], values[k]);
        }
      }
      slaves.emplace(id, std::move(masters));
    }
  }
  num_slaves_ = static_cast<int>(slaves.size());

  std::vector<int> free_id(nnodes, -1);
  for (int c = 0; c < ncells; ++c)
  {
    for (int id : node_ids[c])
    {
      if (!boundary[id] && !slaves.count(id) && free_id[id] < 0)
      {
        free_id[id] = num_free_++;
      }
    }
  }
  std::vector<std::optional<std::vector<std::pair<int, double>>>> resolved(nnodes);
  std::function<const std::vector<std::pair<int, double>> &(int)> resolve =
      [&](int id) -> const std::vector<std::pair<int, double>> &
  {
    if (resolved[id])
    {
      return *resolved[id];
    }
    std::map<int, double> acc;
    if (auto it = slaves.find(id); it != slaves.end())
    {
      for (const auto &[master, w] : it->second)
      {
        for (const auto &[dof, wm] : resolve(master))
        {
          acc[dof] += w * wm;
        }
      }
    }
    else if (!boundary[id])
    {
      acc[free_id[id]] = 1.0;
    }
    std::vector<std::pair<int, double>> out;
    for (const auto &[dof, w] : acc)
    {
      if (std::abs(w) > 1e-14)
      {
        out.emplace_back(dof, w);
      }
    }
    resolved[id] = std::move(out);
    return *resolved[id];
  };
  cell_dofs_.resize(ncells);
  for (int c = 0; c < ncells; ++c)
  {
    cell_dofs_[c].resize(nloc);
    for (int k = 0; k < nloc; ++k)
    {
      cell_dofs_[c][k] = resolve(node_ids[c][k]);
    }
  }
}

void LagrangeSpace::evaluate_values(const Vec3 &xi, Vector &values) const
{
  Vector modal;
  modal_.evaluate_values(xi, modal);
  values.noalias() = nodal_ * modal;
}

void LagrangeSpace::evaluate(const Vec3 &xi, const AffineMap &map, Vector &values,
                             Matrix &grads) const
{
  ScalarJets jets;
  modal_.evaluate(xi, &map, jets);
  values.noalias() = nodal_ * jets.value;
  grads.noalias() = nodal_ * jets.grad;
}

std::pair<double, Vec3> LagrangeSpace::member(const Vector &u, int c, const Vec3 &xi,
                                              const AffineMap &map) const
{
  Vector values;
  Matrix grads;
  evaluate(xi, map, values, grads);
  double v = 0.0;
  Vec3 g{};
  for (int k = 0; k < nodes_per_cell(); ++k)
  {
    double coef = 0.0;
    for (const auto &[dof, w] : cell_dofs_[c][k])
    {
      coef += w * u[dof];
    }
    v += coef * values[k];
    for (int d = 0; d < 3; ++d)
    {
      g[d] += coef * grads(k, d);
    }
  }
  return {v, g};
}

LagrangeSpace lagrange_multiplier_space(const Mesh &mesh, int p, bool tensor)
{
  if (mesh.kind() == CellKind::Quadrilateral)
  {
    return tensor ? LagrangeSpace(mesh, p, PolySpace::Tensor)
                  : LagrangeSpace(mesh, p + 1, PolySpace::Trimmed);
  }
  return LagrangeSpace(mesh, p + 1, PolySpace::Total);
}

}  // namespace quadcurl
