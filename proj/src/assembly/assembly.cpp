// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include "quadcurl/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "assembly/face_kernel.hpp"

namespace quadcurl
{

DGSpace::DGSpace(const Mesh &mesh, bool tensor) : mesh_(&mesh), tensor_(tensor)
{
  offsets_.assign(1, 0);
  for (const Cell &cell : mesh.cells)
  {
    auto it = bases_.find(cell.p);
    if (it == bases_.end())
    {
      it = bases_.emplace(cell.p, std::make_shared<ElementBasis>(cell.kind, cell.p, !tensor)).first;
    }
    offsets_.push_back(offsets_.back() + it->second->size());
  }
}

FaceQuadrature face_quadrature(const Mesh &mesh, const Face &face, int degree)
{
  FaceQuadrature fq;
  const auto &x = mesh.vertices;
  const auto &v = face.vertices;
  if (mesh.dim == 2)
  {
    const QuadratureRule rule = quadrature_rule(RefShape::Interval, degree);
    const Vec3 mid = 0.5 * (x[v[0]] + x[v[1]]);
    const Vec3 half = 0.5 * (x[v[1]] - x[v[0]]);
    const double jac = norm(half);
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      fq.points.push_back(mid + rule.points[q][0] * half);
      fq.weights.push_back(rule.weights[q] * jac);
    }
  }
  else
  {
    const QuadratureRule rule = quadrature_rule(RefShape::Triangle, degree);
    const Vec3 e1 = x[v[1]] - x[v[0]];
    const Vec3 e2 = x[v[2]] - x[v[0]];
    const double jac = 2.0 * face.measure;
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      fq.points.push_back(x[v[0]] + rule.points[q][0] * e1 + rule.points[q][1] * e2);
      fq.weights.push_back(rule.weights[q] * jac);
    }
  }
  const AffineMap plus = mesh.cell_map(face.plus);
  for (const Vec3 &p : fq.points)
  {
    fq.plus_ref.push_back(plus.pullback(p));
  }
  if (face.minus >= 0)
  {
    const AffineMap minus = mesh.cell_map(face.minus);
    for (const Vec3 &p : fq.points)
    {
      fq.minus_ref.push_back(minus.pullback(p));
    }
  }
  return fq;
}

PenaltyParameters default_penalties(int dim)
{
  if (dim == 3)
  {
    return {15.6, 1.35};
  }
  return {2.5, 1.6};
}

namespace
{

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_block(Triplets &t, int row0, int col0, const Matrix &block)
{
  for (int i = 0; i < block.rows(); ++i)
  {
    for (int j = 0; j < block.cols(); ++j)
    {
      if (block(i, j) != 0.0)
      {
        t.emplace_back(row0 + i, col0 + j, block(i, j));
      }
    }
  }
}

SparseMatrix from_triplets(int rows, int cols, const Triplets &t)
{
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

AssembledSystem assemble_system(const Mesh &mesh_in, int p, PenaltyParameters eta,
                                bool with_constraint, bool tensor_quads)
{
  if (p < 2)
  {
    throw std::invalid_argument("assemble_system: degree must be at least 2");
  }
  if (!(eta.eta1 > 0.0) || !(eta.eta2 > 0.0))
  {
    throw std::invalid_argument("assemble_system: penalties must be positive");
  }
  AssembledSystem sys;
  auto mesh = std::make_shared<Mesh>(mesh_in);
  mesh->set_degree(p);
  sys.mesh = mesh;
  sys.space = std::make_shared<DGSpace>(*mesh, tensor_quads);
  sys.eta = eta;
  sys.p = p;
  const DGSpace &space = *sys.space;
  const int n = space.size();

  Triplets ta, tm;
  VectorEvaluation ev;
  for (int c = 0; c < static_cast<int>(mesh->cells.size()); ++c)
  {
    const AffineMap map = mesh->cell_map(c);
    const ElementBasis &basis = space.basis(c);
    const QuadratureRule rule = quadrature_rule(ref_shape(basis.kind()), 2 * mesh->cells[c].p);
    basis.evaluate(rule.points, map, ev, 2);
    const Vector w3 = detail::repeat3(rule.weights, map.det);
    const Matrix mass = ev.value * w3.asDiagonal() * ev.value.transpose();
    const Matrix stiff = ev.curl2 * w3.asDiagonal() * ev.curl2.transpose();
    const int off = space.offset(c);
    add_block(tm, off, off, mass);
    add_block(ta, off, off, stiff + mass);
  }
  for (const Face &face : mesh->faces)
  {
    const detail::FaceKernel kernel(space, face);
    const double a1 = eta.eta1 * face.p * face.p / face.h;
    const double a2 = eta.eta2 * std::pow(face.p, 6) / std::pow(face.h, 3);
    for (int s = 0; s < kernel.sides(); ++s)
    {
      for (int t = 0; t < kernel.sides(); ++t)
      {
        const auto &S = kernel.side(s);
        const auto &T = kernel.side(t);
        const Vector &w = kernel.weights3();
        const Matrix block = S.jump * w.asDiagonal() * T.avg_curl3.transpose() +
                             S.jump_curl * w.asDiagonal() * T.avg_curl2.transpose() +
                             S.avg_curl3 * w.asDiagonal() * T.jump.transpose() +
                             S.avg_curl2 * w.asDiagonal() * T.jump_curl.transpose() +
                             a1 * S.jump_curl * w.asDiagonal() * T.jump_curl.transpose() +
                             a2 * S.jump * w.asDiagonal() * T.jump.transpose();
        add_block(ta, space.offset(S.cell), space.offset(T.cell), block);
      }
    }
  }
  sys.A = from_triplets(n, n, ta);
  sys.M = from_triplets(n, n, tm);
  sys.Atilde = sys.A - sys.M;
  sys.Atilde.makeCompressed();

  if (with_constraint)
  {
    auto lagrange = std::make_shared<LagrangeSpace>(lagrange_multiplier_space(*mesh, p, tensor_quads));
    sys.multipliers = lagrange;
    Triplets tb;
    Vector values;
    Matrix grads;
    for (int c = 0; c < static_cast<int>(mesh->cells.size()); ++c)
    {
      const AffineMap map = mesh->cell_map(c);
      const ElementBasis &basis = space.basis(c);
      const int degree = std::max(2 * mesh->cells[c].p, mesh->cells[c].p + lagrange->degree());
      const QuadratureRule rule = quadrature_rule(ref_shape(basis.kind()), degree);
      basis.evaluate(rule.points, map, ev, 0);
      Matrix g(lagrange->nodes_per_cell(), 3 * rule.size());
      for (std::size_t q = 0; q < rule.size(); ++q)
      {
        lagrange->evaluate(rule.points[q], map, values, grads);
        g.middleCols(3 * q, 3) = grads * (rule.weights[q] * map.det);
      }
      const Matrix local = g * ev.value.transpose();
      const int off = space.offset(c);
      for (int k = 0; k < lagrange->nodes_per_cell(); ++k)
      {
        for (const auto &[dof, weight] : lagrange->local_dofs(c, k))
        {
          for (int i = 0; i < local.cols(); ++i)
          {
            if (local(k, i) != 0.0)
            {
              tb.emplace_back(dof, off + i, weight * local(k, i));
            }
          }
        }
      }
    }
    sys.B = from_triplets(lagrange->size(), n, tb);
  }
  else
  {
    sys.B.resize(0, n);
  }
  return sys;
}

Vector assemble_load(const DGSpace &space, const VectorField &f, int f_degree)
{
  const Mesh &mesh = space.mesh();
  Vector load = Vector::Zero(space.size());
  VectorEvaluation ev;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c)
  {
    const int p = mesh.cells[c].p;
    const int qf = f_degree < 0 ? 2 * p + 2 : f_degree;
    const AffineMap map = mesh.cell_map(c);
    const ElementBasis &basis = space.basis(c);
    const QuadratureRule rule = quadrature_rule(ref_shape(basis.kind()), p + qf);
    basis.evaluate(rule.points, map, ev, 0);
    Vector fv(3 * rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      const Vec3 val = f(map.map(rule.points[q]));
      for (int d = 0; d < 3; ++d)
      {
        fv[3 * q + d] = val[d] * rule.weights[q] * map.det;
      }
    }
    load.segment(space.offset(c), basis.size()) = ev.value * fv;
  }
  return load;
}

Vector l2_projection(const DGSpace &space, const VectorField &f, int f_degree)
{
  const Mesh &mesh = space.mesh();
  Vector load = assemble_load(space, f, f_degree);
  VectorEvaluation ev;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c)
  {
    const AffineMap map = mesh.cell_map(c);
    const ElementBasis &basis = space.basis(c);
    const QuadratureRule rule = quadrature_rule(ref_shape(basis.kind()), 2 * mesh.cells[c].p);
    basis.evaluate(rule.points, map, ev, 0);
    const Vector w3 = detail::repeat3(rule.weights, map.det);
    const Matrix mass = ev.value * w3.asDiagonal() * ev.value.transpose();
    auto seg = load.segment(space.offset(c), basis.size());
    seg = mass.llt().solve(Vector(seg));
  }
  return load;
}

double DGNormParts::norm() const
{
  return std::sqrt(curl2 + l2 + jump + avg_curl3 + avg_curl2 + jump_curl);
}

double DGNormParts::seminorm() const
{
  return std::sqrt(curl2 + jump + avg_curl3 + avg_curl2 + jump_curl);
}

SparseMatrix dg_norm_matrix(const DGSpace &space)
{
  const Mesh &mesh = space.mesh();
  Triplets t;
  VectorEvaluation ev;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c)
  {
    const AffineMap map = mesh.cell_map(c);
    const ElementBasis &basis = space.basis(c);
    const QuadratureRule rule = quadrature_rule(ref_shape(basis.kind()), 2 * mesh.cells[c].p);
    basis.evaluate(rule.points, map, ev, 2);
    const Vector w3 = detail::repeat3(rule.weights, map.det);
    const int off = space.offset(c);
    add_block(t, off, off,
              ev.value * w3.asDiagonal() * ev.value.transpose() +
                  ev.curl2 * w3.asDiagonal() * ev.curl2.transpose());
  }
  for (const Face &face : mesh.faces)
  {
    const detail::FaceKernel kernel(space, face);
    const double h = face.h;
    const double p = face.p;
    const double bj = std::pow(p, 6) / std::pow(h, 3);
    const double b3 = std::pow(h, 3) / std::pow(p, 6);
    const double b2 = h / (p * p);
    const double bc = p * p / h;
    const Vector &w = kernel.weights3();
    for (int s = 0; s < kernel.sides(); ++s)
    {
      for (int r = 0; r < kernel.sides(); ++r)
      {
        const auto &S = kernel.side(s);
        const auto &T = kernel.side(r);
        add_block(t, space.offset(S.cell), space.offset(T.cell),
                  bj * S.jump * w.asDiagonal() * T.jump.transpose() +
                      b3 * S.avg_curl3 * w.asDiagonal() * T.avg_curl3.transpose() +
                      b2 * S.avg_curl2 * w.asDiagonal() * T.avg_curl2.transpose() +
                      bc * S.jump_curl * w.asDiagonal() * T.jump_curl.transpose());
      }
    }
  }
  return from_triplets(space.size(), space.size(), t);
}

FieldJet evaluate_field(const DGSpace &space, const Vector &coeffs, int c, const Vec3 &xi)
{
  const AffineMap map = space.mesh().cell_map(c);
  VectorEvaluation ev;
  const Vec3 pts[1] = {xi};
  space.basis(c).evaluate(pts, map, ev, 3);
  const auto u = coeffs.segment(space.offset(c), space.local_size(c));
  FieldJet jet;
  for (int d = 0; d < 3; ++d)
  {
    jet.value[d] = u.dot(ev.value.col(d));
    jet.curl[d] = u.dot(ev.curl.col(d));
    jet.curl2[d] = u.dot(ev.curl2.col(d));
    jet.curl3[d] = u.dot(ev.curl3.col(d));
  }
  return jet;
}

namespace
{

// Samples a (possibly piecewise) field at points of cell c given both in
// reference and physical coordinates.
using Sampler = std::function<void(int c, const std::vector<Vec3> &ref,
                                   const std::vector<Vec3> &phys, const AffineMap &map,
                                   std::vector<FieldJet> &out)>;

double sq(const Vec3 &a)
{
  return dot(a, a);
}

DGNormParts sampled_norm(const DGSpace &space, const Sampler &sample, int extra_degree)
{
  const Mesh &mesh = space.mesh();
  DGNormParts parts;
  std::vector<FieldJet> jets, other;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c)
  {
    const AffineMap map = mesh.cell_map(c);
    const QuadratureRule rule =
        quadrature_rule(ref_shape(mesh.cells[c].kind), 2 * mesh.cells[c].p + extra_degree);
    std::vector<Vec3> phys;
    for (const Vec3 &xi : rule.points)
    {
      phys.push_back(map.map(xi));
    }
    sample(c, rule.points, phys, map, jets);
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      const double w = rule.weights[q] * map.det;
      parts.curl2 += w * sq(jets[q].curl2);
      parts.l2 += w * sq(jets[q].value);
    }
  }
  for (const Face &face : mesh.faces)
  {
    const FaceQuadrature fq = face_quadrature(mesh, face, 2 * face.p + extra_degree);
    sample(face.plus, fq.plus_ref, fq.points, mesh.cell_map(face.plus), jets);
    const bool interior = face.minus >= 0;
    if (interior)
    {
      sample(face.minus, fq.minus_ref, fq.points, mesh.cell_map(face.minus), other);
    }
    const Vec3 n = face.normal;
    const double h = face.h;
    const double p = face.p;
    double jump = 0.0, jump_curl = 0.0, avg3 = 0.0, avg2 = 0.0;
    for (std::size_t q = 0; q < fq.points.size(); ++q)
    {
      Vec3 jv = cross(jets[q].value, n);
      Vec3 jc = cross(jets[q].curl, n);
      Vec3 a3 = jets[q].curl3;
      Vec3 a2 = jets[q].curl2;
      if (interior)
      {
        jv = jv - cross(other[q].value, n);
        jc = jc - cross(other[q].curl, n);
        a3 = 0.5 * (a3 + other[q].curl3);
        a2 = 0.5 * (a2 + other[q].curl2);
      }
      const double w = fq.weights[q];
      jump += w * sq(jv);
      jump_curl += w * sq(jc);
      avg3 += w * sq(a3);
      avg2 += w * sq(a2);
    }
    parts.jump += std::pow(p, 6) / std::pow(h, 3) * jump;
    parts.avg_curl3 += std::pow(h, 3) / std::pow(p, 6) * avg3;
    parts.avg_curl2 += h / (p * p) * avg2;
    parts.jump_curl += p * p / h * jump_curl;
    if (interior)
    {
      parts.interior_jump += jump;
      parts.interior_jump_curl += h * h * jump_curl;
      parts.interior_weighted += std::pow(p, 6) / std::pow(h, 3) * jump + p * p / h * jump_curl;
    }
  }
  return parts;
}

Sampler discrete_sampler(const DGSpace &space, const Vector &coeffs)
{
  return [&space, &coeffs](int c, const std::vector<Vec3> &ref, const std::vector<Vec3> &,
                           const AffineMap &map, std::vector<FieldJet> &out)
  {
    VectorEvaluation ev;
    space.basis(c).evaluate(ref, map, ev, 3);
    const Vector u = coeffs.segment(space.offset(c), space.local_size(c));
    const Vector v = ev.value.transpose() * u;
    const Vector c1 = ev.curl.transpose() * u;
    const Vector c2 = ev.curl2.transpose() * u;
    const Vector c3 = ev.curl3.transpose() * u;
    out.resize(ref.size());
    for (std::size_t q = 0; q < ref.size(); ++q)
    {
      for (int d = 0; d < 3; ++d)
      {
        out[q].value[d] = v[3 * q + d];
        out[q].curl[d] = c1[3 * q + d];
        out[q].curl2[d] = c2[3 * q + d];
        out[q].curl3[d] = c3[3 * q + d];
      }
    }
  };
}

}  // namespace

DGNormParts dg_norm(const DGSpace &space, const Vector &coeffs)
{
  return sampled_norm(space, discrete_sampler(space, coeffs), 0);
}

DGNormParts dg_norm(const DGSpace &space, const FieldJetFunction &field, int extra_degree)
{
  return sampled_norm(
      space,
      [&field](int, const std::vector<Vec3> &, const std::vector<Vec3> &phys, const AffineMap &,
               std::vector<FieldJet> &out)
      {
        out.resize(phys.size());
        for (std::size_t q = 0; q < phys.size(); ++q)
        {
          out[q] = field(phys[q]);
        }
      },
      extra_degree);
}

DGNormParts dg_error(const DGSpace &space, const Vector &coeffs, const FieldJetFunction &exact,
                     int extra_degree)
{
  const Sampler discrete = discrete_sampler(space, coeffs);
  return sampled_norm(
      space,
      [&](int c, const std::vector<Vec3> &ref, const std::vector<Vec3> &phys, const AffineMap &map,
          std::vector<FieldJet> &out)
      {
        discrete(c, ref, phys, map, out);
        for (std::size_t q = 0; q < phys.size(); ++q)
        {
          const FieldJet e = exact(phys[q]);
          out[q].value = out[q].value - e.value;
          out[q].curl = out[q].curl - e.curl;
          out[q].curl2 = out[q].curl2 - e.curl2;
          out[q].curl3 = out[q].curl3 - e.curl3;
        }
      },
      extra_degree);
}

}  // namespace quadcurl

namespace quadcurl
{

Vector form_action(const AssembledSystem &sys, const FieldJetFunction &w, int extra_degree)
{
  const DGSpace &space = *sys.space;
  const Mesh &mesh = space.mesh();
  Vector out = Vector::Zero(space.size());
  VectorEvaluation ev;
  const auto stack = [](const std::vector<FieldJet> &jets, Vec3 FieldJet::*member)
  {
    Vector v(3 * jets.size());
    for (std::size_t q = 0; q < jets.size(); ++q)
    {
      for (int d = 0; d < 3; ++d)
      {
        v[3 * q + d] = (jets[q].*member)[d];
      }
    }
    return v;
  };
  std::vector<FieldJet> jets;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c)
  {
    const AffineMap map = mesh.cell_map(c);
    const ElementBasis &basis = space.basis(c);
    const QuadratureRule rule =
        quadrature_rule(ref_shape(basis.kind()), 2 * mesh.cells[c].p + extra_degree);
    basis.evaluate(rule.points, map, ev, 2);
    jets.clear();
    for (const Vec3 &xi : rule.points)
    {
      jets.push_back(w(map.map(xi)));
    }
    const Vector w3 = detail::repeat3(rule.weights, map.det);
    out.segment(space.offset(c), basis.size()) =
        ev.curl2 * w3.cwiseProduct(stack(jets, &FieldJet::curl2)) +
        ev.value * w3.cwiseProduct(stack(jets, &FieldJet::value));
  }
  for (const Face &face : mesh.faces)
  {
    const detail::FaceKernel kernel(space, face, 2 * face.p + extra_degree);
    const FaceQuadrature &fq = kernel.quadrature();
    const double a1 = sys.eta.eta1 * face.p * face.p / face.h;
    const double a2 = sys.eta.eta2 * std::pow(face.p, 6) / std::pow(face.h, 3);
    const double avg = face.boundary() ? 1.0 : 0.5;
    // Jumps and averages of w, sampled on each side.
    const int nq = static_cast<int>(fq.points.size());
    Vector jw = Vector::Zero(3 * nq), jcw = Vector::Zero(3 * nq);
    Vector a3w = Vector::Zero(3 * nq), a2w = Vector::Zero(3 * nq);
    for (int q = 0; q < nq; ++q)
    {
      // The field is smooth, so both one-sided traces are the same sample.
      const FieldJet j = w(fq.points[q]);
      for (int s = 0; s < kernel.sides(); ++s)
      {
        const Vec3 n = (s == 0 ? 1.0 : -1.0) * face.normal;
        const Vec3 vn = cross(j.value, n);
        const Vec3 cn = cross(j.curl, n);
        for (int d = 0; d < 3; ++d)
        {
          jw[3 * q + d] += vn[d];
          jcw[3 * q + d] += cn[d];
          a3w[3 * q + d] += avg * j.curl3[d];
          a2w[3 * q + d] += avg * j.curl2[d];
        }
      }
    }
    const Vector &wt = kernel.weights3();
    for (int s = 0; s < kernel.sides(); ++s)
    {
      const auto &S = kernel.side(s);
      out.segment(space.offset(S.cell), S.jump.rows()) +=
          S.jump * wt.cwiseProduct(a3w + a2 * jw) + S.jump_curl * wt.cwiseProduct(a2w + a1 * jcw) +
          S.avg_curl3 * wt.cwiseProduct(jw) + S.avg_curl2 * wt.cwiseProduct(jcw);
    }
  }
  return out;
}

}  // namespace quadcurl
