// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include "quadcurl/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include <Eigen/Dense>

#include "mesh/vertex_index.hpp"
#include "quadcurl/quadrature.hpp"

namespace quadcurl
{

namespace
{

using FacetKey = std::array<int, 3>;

struct FacetKeyHash
{
  std::size_t operator()(const FacetKey &k) const
  {
    std::size_t h = 1469598103934665603ull;
    for (int v : k)
    {
      h = (h ^ static_cast<std::size_t>(v + 1)) * 1099511628211ull;
    }
    return h;
  }
};

FacetKey make_key(std::vector<int> ids)
{
  std::sort(ids.begin(), ids.end());
  FacetKey key{-1, -1, -1};
  std::copy(ids.begin(), ids.end(), key.begin());
  return key;
}

const std::vector<std::vector<int>> &local_facets(CellKind kind)
{
  static const std::vector<std::vector<int>> tri{{0, 1}, {1, 2}, {2, 0}};
  static const std::vector<std::vector<int>> quad{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  static const std::vector<std::vector<int>> tet{{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  switch (kind)
  {
    case CellKind::Triangle:
      return tri;
    case CellKind::Quadrilateral:
      return quad;
    case CellKind::Tetrahedron:
      return tet;
  }
  return tri;
}

std::vector<int> facet_vertices(const Cell &cell, const std::vector<int> &local)
{
  std::vector<int> ids;
  for (int l : local)
  {
    ids.push_back(cell.vertices[l]);
  }
  return ids;
}

// Builds the face list. In 2D an unmatched edge whose midpoint is a mesh vertex
// and whose two halves are edges of other cells becomes two hanging sub-faces.
class FaceBuilder
{
public:
  explicit FaceBuilder(Mesh &mesh) : mesh_(mesh), index_(mesh.vertices)
  {
    for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c)
    {
      for (const auto &local : local_facets(mesh.cells[c].kind))
      {
        owners_[make_key(facet_vertices(mesh.cells[c], local))].push_back(c);
      }
    }
  }

  void build()
  {
    mesh_.faces.clear();
    for (int c = 0; c < static_cast<int>(mesh_.cells.size()); ++c)
    {
      for (const auto &local : local_facets(mesh_.cells[c].kind))
      {
        const auto ids = facet_vertices(mesh_.cells[c], local);
        const auto key = make_key(ids);
        if (consumed_.count(key))
        {
          continue;
        }
        const auto &owners = owners_.at(key);
        if (owners.size() > 2)
        {
          throw std::runtime_error("mesh: facet shared by more than two cells (cell " +
                                   std::to_string(c) + ")");
        }
        if (owners.size() == 2)
        {
          add_face(ids, owners[0], owners[1], 0);
          consumed_.insert(key);
          continue;
        }
        if (mesh_.dim == 2 && (try_split(ids[0], ids[1], c) || try_as_half(ids[0], ids[1], c)))
        {
          continue;
        }
        add_face(ids, c, -1, 0);
        consumed_.insert(key);
      }
    }
  }

private:
  int single_owner(int a, int b) const
  {
    const auto it = owners_.find(make_key({a, b}));
    if (it == owners_.end() || it->second.size() != 1)
    {
      return -1;
    }
    return it->second.front();
  }

  // Edge (a, b) of the coarse cell is split at its midpoint into two edges of
  // finer cells.
  bool try_split(int a, int b, int coarse)
  {
    const int m = index_.find(0.5 * (mesh_.vertices[a] + mesh_.vertices[b]));
    if (m < 0)
    {
      return false;
    }
    const int f1 = single_owner(a, m);
    const int f2 = single_owner(m, b);
    if (f1 < 0 || f2 < 0 || f1 == coarse || f2 == coarse)
    {
      return false;
    }
    add_face({a, m}, coarse, f1, 1);
    add_face({m, b}, coarse, f2, 1);
    consumed_.insert(make_key({a, b}));
    consumed_.insert(make_key({a, m}));
    consumed_.insert(make_key({m, b}));
    return true;
  }

  // Edge (a, b) is one half of a coarser edge (a, 2b - a) or (2a - b, b).
  bool try_as_half(int a, int b, int fine)
  {
    const Vec3 &xa = mesh_.vertices[a];
    const Vec3 &xb = mesh_.vertices[b];
    for (const auto &[end, keep] : {std::pair{2.0 * xb - xa, a}, std::pair{2.0 * xa - xb, b}})
    {
      const int far = index_.find(end);
      if (far < 0)
      {
        continue;
      }
      const int coarse = single_owner(keep, far);
      if (coarse < 0 || coarse == fine)
      {
        continue;
      }
      if (try_split(keep, far, coarse))
      {
        return true;
      }
    }
    return false;
  }

  // coarse_is_first marks the first cell argument as the coarse side.
  void add_face(const std::vector<int> &ids, int c1, int c2, int coarse_is_first)
  {
    Face face;
    face.vertices = ids;
    int coarse_cell = coarse_is_first ? c1 : -1;
    if (c2 >= 0 && c2 < c1)
    {
      std::swap(c1, c2);
    }
    face.plus = c1;
    face.minus = c2;
    if (coarse_cell >= 0)
    {
      face.coarse_side = (coarse_cell == face.plus) ? 1 : -1;
    }
    const auto &x = mesh_.vertices;
    Vec3 n{};
    if (mesh_.dim == 2)
    {
      const Vec3 t = x[ids[1]] - x[ids[0]];
      face.measure = norm(t);
      n = {t[1] / face.measure, -t[0] / face.measure, 0.0};
    }
    else
    {
      const Vec3 c = cross(x[ids[1]] - x[ids[0]], x[ids[2]] - x[ids[0]]);
      const double len = norm(c);
      face.measure = 0.5 * len;
      n = (1.0 / len) * c;
    }
    Vec3 centroid{};
    for (int v : ids)
    {
      centroid = centroid + (1.0 / ids.size()) * x[v];
    }
    if (dot(n, centroid - mesh_.cell_centroid(face.plus)) < 0.0)
    {
      n = -1.0 * n;
    }
    face.normal = n;
    const auto [h, p] = face_parameters(mesh_, face);
    face.h = h;
    face.p = p;
    mesh_.faces.push_back(std::move(face));
  }

  Mesh &mesh_;
  detail::VertexIndex index_;
  std::unordered_map<FacetKey, std::vector<int>, FacetKeyHash> owners_;
  std::set<FacetKey> consumed_;
};

double diameter(const Mesh &mesh, const Cell &cell)
{
  double h = 0.0;
  for (std::size_t i = 0; i < cell.vertices.size(); ++i)
  {
    for (std::size_t j = i + 1; j < cell.vertices.size(); ++j)
    {
      h = std::max(h, norm(mesh.vertices[cell.vertices[i]] - mesh.vertices[cell.vertices[j]]));
    }
  }
  return h;
}

// Children of a red refinement, given the parent's corners and a midpoint
// lookup.
template <typename Midpoint>
std::vector<std::vector<int>> red_children(const Cell &cell, Midpoint &&mid,
                                           std::vector<Vec3> &vertices)
{
  const auto &v = cell.vertices;
  if (cell.kind == CellKind::Triangle)
  {
    const int m01 = mid(v[0], v[1]);
    const int m12 = mid(v[1], v[2]);
    const int m20 = mid(v[2], v[0]);
    return {{v[0], m01, m20}, {m01, v[1], m12}, {m20, m12, v[2]}, {m01, m12, m20}};
  }
  if (cell.kind == CellKind::Quadrilateral)
  {
    const int m01 = mid(v[0], v[1]);
    const int m12 = mid(v[1], v[2]);
    const int m23 = mid(v[2], v[3]);
    const int m30 = mid(v[3], v[0]);
    const int c = static_cast<int>(vertices.size());
    vertices.push_back(0.25 * (vertices[v[0]] + vertices[v[1]] + vertices[v[2]] + vertices[v[3]]));
    return {{v[0], m01, c, m30}, {m01, v[1], m12, c}, {c, m12, v[2], m23}, {m30, c, m23, v[3]}};
  }
  throw std::invalid_argument("refinement is only implemented for planar cells");
}

}  // namespace

Vec3 AffineMap::map(const Vec3 &xi) const
{
  Eigen::Vector3d r = jacobian * Eigen::Vector3d(xi[0], xi[1], xi[2]);
  return {origin[0] + r[0], origin[1] + r[1], origin[2] + r[2]};
}

Vec3 AffineMap::pullback(const Vec3 &x) const
{
  Eigen::Vector3d r = inverse * Eigen::Vector3d(x[0] - origin[0], x[1] - origin[1],
                                                x[2] - origin[2]);
  if (dim == 2)
  {
    r[2] = 0.0;
  }
  return {r[0], r[1], r[2]};
}

double Mesh::cell_measure(int c) const
{
  return cell_map(c).det * ref_measure(ref_shape(cells[c].kind));
}

double Mesh::measure() const
{
  double total = 0.0;
  for (int c = 0; c < static_cast<int>(cells.size()); ++c)
  {
    total += cell_measure(c);
  }
  return total;
}

AffineMap Mesh::cell_map(int c) const
{
  const Cell &cell = cells[c];
  const auto &v = cell.vertices;
  AffineMap m;
  m.dim = dim;
  m.jacobian.setIdentity();
  const auto column = [&](int j, const Vec3 &e)
  {
    for (int i = 0; i < 3; ++i)
    {
      m.jacobian(i, j) = e[i];
    }
  };
  switch (cell.kind)
  {
    case CellKind::Triangle:
      m.origin = vertices[v[0]];
      column(0, vertices[v[1]] - vertices[v[0]]);
      column(1, vertices[v[2]] - vertices[v[0]]);
      break;
    case CellKind::Quadrilateral:
    {
      const Vec3 skew = (vertices[v[0]] + vertices[v[2]]) - (vertices[v[1]] + vertices[v[3]]);
      if (norm(skew) > 1e-12 * (1.0 + cell.h))
      {
        throw std::runtime_error("mesh: quadrilateral cell " + std::to_string(c) +
                                 " is not a parallelogram");
      }
      m.origin = 0.5 * (vertices[v[0]] + vertices[v[2]]);
      column(0, 0.5 * (vertices[v[1]] - vertices[v[0]]));
      column(1, 0.5 * (vertices[v[3]] - vertices[v[0]]));
      break;
    }
    case CellKind::Tetrahedron:
      m.origin = vertices[v[0]];
      column(0, vertices[v[1]] - vertices[v[0]]);
      column(1, vertices[v[2]] - vertices[v[0]]);
      column(2, vertices[v[3]] - vertices[v[0]]);
      break;
  }
  if (dim == 2)
  {
    m.jacobian(2, 2) = 1.0;
  }
  m.det = std::abs(m.jacobian.determinant());
  const double scale = std::pow(std::max(cell.h, 1e-300), dim);
  if (!(m.det > 1e-14 * scale))
  {
    throw std::runtime_error("mesh: degenerate cell " + std::to_string(c));
  }
  m.inverse = m.jacobian.inverse();
  return m;
}

Vec3 Mesh::cell_centroid(int c) const
{
  Vec3 x{};
  const auto &v = cells[c].vertices;
  for (int id : v)
  {
    x = x + (1.0 / v.size()) * vertices[id];
  }
  return x;
}

double Mesh::max_h() const
{
  double h = 0.0;
  for (const auto &cell : cells)
  {
    h = std::max(h, cell.h);
  }
  return h;
}

int Mesh::min_degree() const
{
  int p = cells.front().p;
  for (const auto &cell : cells)
  {
    p = std::min(p, cell.p);
  }
  return p;
}

int Mesh::max_degree() const
{
  int p = cells.front().p;
  for (const auto &cell : cells)
  {
    p = std::max(p, cell.p);
  }
  return p;
}

bool Mesh::is_conforming() const
{
  return std::none_of(faces.begin(), faces.end(), [](const Face &f) { return f.hanging(); });
}

void Mesh::set_degree(int p)
{
  if (p < 2)
  {
    throw std::invalid_argument("polynomial degree must be at least 2");
  }
  for (auto &cell : cells)
  {
    cell.p = p;
  }
  for (auto &face : faces)
  {
    face.p = face_parameters(*this, face).second;
  }
}

void Mesh::set_face_size(FaceSize rule)
{
  face_size = rule;
  for (auto &face : faces)
  {
    face.h = face_parameters(*this, face).first;
  }
}

void Mesh::finalize()
{
  if (cells.empty())
  {
    throw std::invalid_argument("mesh: no cells");
  }
  for (auto &cell : cells)
  {
    if (static_cast<int>(cell.vertices.size()) != cell_vertex_count(cell.kind) ||
        cell_dim(cell.kind) != dim)
    {
      throw std::invalid_argument("mesh: cell kind does not match its vertex list or dimension");
    }
    cell.h = diameter(*this, cell);
  }
  FaceBuilder(*this).build();
}

std::vector<std::vector<int>> Mesh::cell_faces() const
{
  std::vector<std::vector<int>> out(cells.size());
  for (int f = 0; f < static_cast<int>(faces.size()); ++f)
  {
    out[faces[f].plus].push_back(f);
    if (faces[f].minus >= 0)
    {
      out[faces[f].minus].push_back(f);
    }
  }
  return out;
}

Mesh build_structured_mesh(Domain domain, CellKind kind, int n)
{
  if (n < 1)
  {
    throw std::invalid_argument("build_structured_mesh: n must be at least 1");
  }
  Mesh mesh;
  if (domain == Domain::Cube)
  {
    if (kind != CellKind::Tetrahedron)
    {
      throw std::invalid_argument("build_structured_mesh: the cube is only meshed with tetrahedra");
    }
    mesh.dim = 3;
    const int m = n;
    const auto id = [m](int i, int j, int k) { return (k * (m + 1) + j) * (m + 1) + i; };
    for (int k = 0; k <= m; ++k)
    {
      for (int j = 0; j <= m; ++j)
      {
        for (int i = 0; i <= m; ++i)
        {
          mesh.vertices.push_back({-1.0 + 2.0 * i / m, -1.0 + 2.0 * j / m, -1.0 + 2.0 * k / m});
        }
      }
    }
    // Kuhn split: one tetrahedron per monotone lattice path along the diagonal.
    const std::array<std::array<int, 3>, 6> perms{
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    for (int k = 0; k < m; ++k)
    {
      for (int j = 0; j < m; ++j)
      {
        for (int i = 0; i < m; ++i)
        {
          for (const auto &perm : perms)
          {
            std::array<int, 3> pos{i, j, k};
            std::vector<int> verts{id(pos[0], pos[1], pos[2])};
            for (int axis : perm)
            {
              ++pos[axis];
              verts.push_back(id(pos[0], pos[1], pos[2]));
            }
            Cell cell{CellKind::Tetrahedron, verts};
            const Vec3 &x0 = mesh.vertices[verts[0]];
            const double vol = dot(cross(mesh.vertices[verts[1]] - x0, mesh.vertices[verts[2]] - x0),
                                   mesh.vertices[verts[3]] - x0);
            if (vol < 0.0)
            {
              std::swap(cell.vertices[1], cell.vertices[2]);
            }
            mesh.cells.push_back(std::move(cell));
          }
        }
      }
    }
    mesh.finalize();
    return mesh;
  }

  if (kind == CellKind::Tetrahedron)
  {
    throw std::invalid_argument("build_structured_mesh: tetrahedra require the cube domain");
  }
  mesh.dim = 2;
  const bool unit = domain == Domain::UnitSquare;
  const int m = unit ? n : 2 * n;
  const double origin = unit ? 0.0 : -1.0;
  std::vector<int> remap((m + 1) * (m + 1), -1);
  const auto vertex = [&](int i, int j)
  {
    int &slot = remap[j * (m + 1) + i];
    if (slot < 0)
    {
      slot = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back({origin + double(i) / n, origin + double(j) / n, 0.0});
    }
    return slot;
  };
  for (int j = 0; j < m; ++j)
  {
    for (int i = 0; i < m; ++i)
    {
      // The L-shape removes the quadrant (-1,0] x [0,1).
      if (domain == Domain::LShape && i < n && j >= n)
      {
        continue;
      }
      const int a = vertex(i, j), b = vertex(i + 1, j), c = vertex(i + 1, j + 1),
                d = vertex(i, j + 1);
      if (kind == CellKind::Triangle)
      {
        mesh.cells.push_back({CellKind::Triangle, {a, b, c}});
        mesh.cells.push_back({CellKind::Triangle, {a, c, d}});
      }
      else
      {
        mesh.cells.push_back({CellKind::Quadrilateral, {a, b, c, d}});
      }
    }
  }
  mesh.finalize();
  return mesh;
}

Mesh refine_uniform(const Mesh &mesh)
{
  if (!mesh.is_conforming())
  {
    throw std::invalid_argument("refine_uniform: input mesh has hanging nodes");
  }
  if (mesh.dim != 2)
  {
    throw std::invalid_argument("refine_uniform: only planar meshes are refined");
  }
  Mesh out;
  out.dim = mesh.dim;
  out.face_size = mesh.face_size;
  out.vertices = mesh.vertices;
  std::map<std::pair<int, int>, int> midpoints;
  const auto mid = [&](int a, int b)
  {
    const auto key = std::minmax(a, b);
    auto it = midpoints.find(key);
    if (it != midpoints.end())
    {
      return it->second;
    }
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(0.5 * (out.vertices[a] + out.vertices[b]));
    midpoints.emplace(key, id);
    return id;
  };
  for (const auto &cell : mesh.cells)
  {
    for (auto &verts : red_children(cell, mid, out.vertices))
    {
      out.cells.push_back({cell.kind, std::move(verts), 0.0, cell.p, cell.level + 1});
    }
  }
  out.finalize();
  return out;
}

HangingRefinement build_hanging_mesh(const Mesh &mesh, std::span<const int> marked)
{
  if (mesh.dim != 2)
  {
    throw std::invalid_argument("build_hanging_mesh: only planar meshes are refined");
  }
  const int ncells = static_cast<int>(mesh.cells.size());
  std::vector<char> refine(ncells, 0);
  for (int c : marked)
  {
    if (c < 0 || c >= ncells)
    {
      throw std::out_of_range("build_hanging_mesh: marked cell " + std::to_string(c) +
                              " does not exist");
    }
    refine[c] = 1;
  }
  // Closure: a refined cell may not be the fine side of a hanging sub-face,
  // otherwise its children would be two levels finer than that neighbor.
  const auto faces_of = mesh.cell_faces();
  std::vector<int> closure;
  for (bool changed = true; changed;)
  {
    changed = false;
    for (int c = 0; c < ncells; ++c)
    {
      if (!refine[c])
      {
        continue;
      }
      for (int f : faces_of[c])
      {
        const Face &face = mesh.faces[f];
        if (!face.hanging())
        {
          continue;
        }
        const int coarse = face.coarse_side > 0 ? face.plus : face.minus;
        if (coarse != c && !refine[coarse])
        {
          refine[coarse] = 1;
          closure.push_back(coarse);
          changed = true;
        }
      }
    }
  }
  std::sort(closure.begin(), closure.end());

  HangingRefinement result;
  Mesh &out = result.mesh;
  out.dim = mesh.dim;
  out.face_size = mesh.face_size;
  out.vertices = mesh.vertices;
  detail::VertexIndex index(out.vertices);
  const auto mid = [&](int a, int b)
  {
    const Vec3 x = 0.5 * (out.vertices[a] + out.vertices[b]);
    int id = index.find(x);
    if (id < 0)
    {
      id = static_cast<int>(out.vertices.size());
      out.vertices.push_back(x);
      index.insert(x, id);
    }
    return id;
  };
  for (int c = 0; c < ncells; ++c)
  {
    const Cell &cell = mesh.cells[c];
    if (!refine[c])
    {
      out.cells.push_back(cell);
      continue;
    }
    for (auto &verts : red_children(cell, mid, out.vertices))
    {
      out.cells.push_back({cell.kind, std::move(verts), 0.0, cell.p, cell.level + 1});
    }
    if (cell.kind == CellKind::Quadrilateral)
    {
      index.insert(out.vertices.back(), static_cast<int>(out.vertices.size()) - 1);
    }
  }
  out.finalize();
  result.closure = std::move(closure);
  return result;
}

std::pair<double, int> face_parameters(const Mesh &mesh, const Face &face)
{
  if (face.plus < 0 || face.plus >= static_cast<int>(mesh.cells.size()))
  {
    throw std::logic_error("face_parameters: face has no adjacent cell");
  }
  const Cell &plus = mesh.cells[face.plus];
  const int p = face.minus < 0 ? plus.p : std::min(plus.p, mesh.cells[face.minus].p);
  if (mesh.face_size == FaceSize::Measure)
  {
    return {mesh.dim == 2 ? face.measure : std::sqrt(face.measure), p};
  }
  if (face.minus < 0)
  {
    return {plus.h, p};
  }
  return {std::max(plus.h, mesh.cells[face.minus].h), p};
}

}  // namespace quadcurl
