// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include "quadcurl/basis.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "quadcurl/legendre.hpp"
#include "quadcurl/quadrature.hpp"

namespace quadcurl
{

namespace
{

std::vector<std::array<int, 3>> enumerate_exponents(int dim, int p, PolySpace space)
{
  std::vector<std::array<int, 3>> out;
  if (dim == 2 && space == PolySpace::Tensor)
  {
    for (int m = 0; m <= p; ++m)
    {
      for (int a = m; a >= 0; --a)
      {
        for (int b = m; b >= 0; --b)
        {
          if (std::max(a, b) == m)
          {
            out.push_back({a, b, 0});
          }
        }
      }
    }
    return out;
  }
  for (int deg = 0; deg <= p; ++deg)
  {
    for (int a = deg; a >= 0; --a)
    {
      if (dim == 2)
      {
        if (space != PolySpace::Trimmed || deg < p || (a > 0 && a < p))
        {
          out.push_back({a, deg - a, 0});
        }
        continue;
      }
      for (int b = deg - a; b >= 0; --b)
      {
        out.push_back({a, b, deg - a - b});
      }
    }
  }
  return out;
}

// Raw functions and their reference derivatives up to third
// order; third derivatives are stored as a full 27-entry tensor.
struct RawJets
{
  Vector value;
  Matrix grad;   // n x 3
  Matrix hess;   // n x 9
  Matrix third;  // n x 27
};

// Value and reference derivatives up to third order of one function.
struct Jet
{
  double v = 0.0;
  std::array<double, 3> g{};
  std::array<double, 9> h{};
  std::array<double, 27> t{};
};

// Affine function c + a . (x, y, z) of the coordinates x = 2 xi - 1 of the
// biunit simplex; its gradient in xi is 2a.
struct Affine
{
  double c = 0.0;
  std::array<double, 3> a{};

  double operator()(const Vec3 &x) const { return c + a[0] * x[0] + a[1] * x[1] + a[2] * x[2]; }
};

// s * (l j) with l affine: Leibniz with vanishing second derivatives of l.
Jet times(double s, const Affine &l, const Vec3 &x, const Jet &j)
{
  const double lv = l(x);
  const std::array<double, 3> lg{2.0 * l.a[0], 2.0 * l.a[1], 2.0 * l.a[2]};
  Jet out;
  out.v = s * lv * j.v;
  for (int i = 0; i < 3; ++i)
  {
    out.g[i] = s * (lv * j.g[i] + lg[i] * j.v);
    for (int k = 0; k < 3; ++k)
    {
      out.h[3 * i + k] = s * (lv * j.h[3 * i + k] + lg[i] * j.g[k] + lg[k] * j.g[i]);
      for (int m = 0; m < 3; ++m)
      {
        out.t[9 * i + 3 * k + m] = s * (lv * j.t[9 * i + 3 * k + m] + lg[i] * j.h[3 * k + m] +
                                        lg[k] * j.h[3 * i + m] + lg[m] * j.h[3 * i + k]);
      }
    }
  }
  return out;
}

void axpy(double s, const Jet &x, Jet &y)
{
  y.v += s * x.v;
  for (int i = 0; i < 3; ++i)
  {
    y.g[i] += s * x.g[i];
  }
  for (int i = 0; i < 9; ++i)
  {
    y.h[i] += s * x.h[i];
  }
  for (int i = 0; i < 27; ++i)
  {
    y.t[i] += s * x.t[i];
  }
}

// Three-term recurrence P_{n+1} = (a x + b) P_n - c P_{n-1} of the Jacobi
// polynomials P^(alpha, 0).
std::array<double, 3> jacobi_recurrence(double alpha, int n)
{
  const double s = 2.0 * n + alpha;
  const double a = (s + 1.0) * (s + 2.0) / (2.0 * (n + 1) * (n + 1 + alpha));
  const double b = alpha * alpha * (s + 1.0) / (2.0 * (n + 1) * s * (n + 1 + alpha));
  const double c = (n + alpha) * n * (s + 2.0) / ((n + 1) * (n + 1 + alpha) * s);
  return {a, b, c};
}

// Collapsed-coordinate orthogonal polynomials on the simplex, written as
// polynomial recurrences in x so that no division by the collapsed
// coordinate occurs. Ordered by total degree like enumerate_exponents.
std::vector<Jet> simplex_jets(int dim, int p, const Vec3 &xi)
{
  const Vec3 x{2.0 * xi[0] - 1.0, 2.0 * xi[1] - 1.0, dim == 3 ? 2.0 * xi[2] - 1.0 : 0.0};
  Jet one;
  one.v = 1.0;
  const auto key = [p](int a, int b, int c) { return (a * (p + 1) + b) * (p + 1) + c; };
  std::vector<Jet> psi((p + 1) * (p + 1) * (p + 1));
  psi[key(0, 0, 0)] = one;
  if (dim == 2)
  {
    const Affine f1{0.5, {1.0, 0.5, 0.0}};    // (1 + 2x + y) / 2
    const Affine half{0.5, {0.0, -0.5, 0.0}}; // (1 - y) / 2
    for (int a = 0; a < p; ++a)
    {
      Jet next = times((2.0 * a + 1) / (a + 1), f1, x, psi[key(a, 0, 0)]);
      if (a > 0)
      {
        axpy(-static_cast<double>(a) / (a + 1), times(1.0, half, x, times(1.0, half, x, psi[key(a - 1, 0, 0)])),
             next);
      }
      psi[key(a + 1, 0, 0)] = next;
    }
    for (int a = 0; a < p; ++a)
    {
      psi[key(a, 1, 0)] = times(1.0, Affine{0.5 * (1 + 2 * a), {0.0, 0.5 * (3 + 2 * a), 0.0}}, x, psi[key(a, 0, 0)]);
      for (int b = 1; a + b < p; ++b)
      {
        const auto [ra, rb, rc] = jacobi_recurrence(2 * a + 1, b);
        Jet next = times(1.0, Affine{rb, {0.0, ra, 0.0}}, x, psi[key(a, b, 0)]);
        axpy(-rc, psi[key(a, b - 1, 0)], next);
        psi[key(a, b + 1, 0)] = next;
      }
    }
  }
  else
  {
    const Affine f1{1.0, {1.0, 0.5, 0.5}};     // (2 + 2x + y + z) / 2
    const Affine f2{0.0, {0.0, 0.5, 0.5}};     // (y + z) / 2, squared
    const Affine f3{0.5, {0.0, 1.0, 0.5}};     // (1 + 2y + z) / 2
    const Affine f4{0.5, {0.0, 0.0, -0.5}};    // (1 - z) / 2, squared for f5
    for (int a = 0; a < p; ++a)
    {
      Jet next = times((2.0 * a + 1) / (a + 1), f1, x, psi[key(a, 0, 0)]);
      if (a > 0)
      {
        axpy(-static_cast<double>(a) / (a + 1), times(1.0, f2, x, times(1.0, f2, x, psi[key(a - 1, 0, 0)])), next);
      }
      psi[key(a + 1, 0, 0)] = next;
    }
    for (int a = 0; a < p; ++a)
    {
      // a (1 + y) + (2 + 3y + z) / 2
      psi[key(a, 1, 0)] = times(1.0, Affine{a + 1.0, {0.0, a + 1.5, 0.5}}, x, psi[key(a, 0, 0)]);
      for (int b = 1; a + b < p; ++b)
      {
        const auto [ra, rb, rc] = jacobi_recurrence(2 * a + 1, b);
        const Affine lin{ra * f3.c + rb * f4.c, {0.0, ra * f3.a[1], ra * f3.a[2] + rb * f4.a[2]}};
        Jet next = times(1.0, lin, x, psi[key(a, b, 0)]);
        axpy(-rc, times(1.0, f4, x, times(1.0, f4, x, psi[key(a, b - 1, 0)])), next);
        psi[key(a, b + 1, 0)] = next;
      }
    }
    for (int a = 0; a < p; ++a)
    {
      for (int b = 0; a + b < p; ++b)
      {
        psi[key(a, b, 1)] =
            times(1.0, Affine{1.0 + a + b, {0.0, 0.0, 2.0 + a + b}}, x, psi[key(a, b, 0)]);
        for (int c = 1; a + b + c < p; ++c)
        {
          const auto [ra, rb, rc] = jacobi_recurrence(2 * a + 2 * b + 2, c);
          Jet next = times(1.0, Affine{rb, {0.0, 0.0, ra}}, x, psi[key(a, b, c)]);
          axpy(-rc, psi[key(a, b, c - 1)], next);
          psi[key(a, b, c + 1)] = next;
        }
      }
    }
  }
  std::vector<Jet> out;
  for (int deg = 0; deg <= p; ++deg)
  {
    for (int a = deg; a >= 0; --a)
    {
      if (dim == 2)
      {
        out.push_back(psi[key(a, deg - a, 0)]);
        continue;
      }
      for (int b = deg - a; b >= 0; --b)
      {
        out.push_back(psi[key(a, b, deg - a - b)]);
      }
    }
  }
  return out;
}

void tensor_jets(CellKind kind, int p, const std::vector<std::array<int, 3>> &exps, const Vec3 &xi,
              int max_order, RawJets &out)
{
  const int dim = cell_dim(kind);
  const bool simplex = kind != CellKind::Quadrilateral;
  const double scale = simplex ? 2.0 : 1.0;
  const double shift = simplex ? -1.0 : 0.0;
  // table[d][k][a]: k-th derivative of the 1D factor of degree a on axis d.
  std::array<std::vector<std::vector<double>>, 3> table;
  for (int d = 0; d < 3; ++d)
  {
    if (d < dim)
    {
      legendre_table(p, max_order, scale * xi[d] + shift, table[d]);
      double factor = 1.0;
      for (int k = 1; k <= max_order; ++k)
      {
        factor *= scale;
        for (double &v : table[d][k])
        {
          v *= factor;
        }
      }
    }
    else
    {
      table[d].assign(max_order + 1, std::vector<double>(p + 1, 0.0));
      table[d][0].assign(p + 1, 1.0);
    }
  }
  const int n = static_cast<int>(exps.size());
  out.value.resize(n);
  if (max_order >= 1)
  {
    out.grad.setZero(n, 3);
  }
  if (max_order >= 2)
  {
    out.hess.setZero(n, 9);
  }
  if (max_order >= 3)
  {
    out.third.setZero(n, 27);
  }
  for (int j = 0; j < n; ++j)
  {
    const auto &e = exps[j];
    // Product of the 1D factors with derivative orders k[d].
    const auto partial = [&](int k0, int k1, int k2)
    {
      return table[0][k0][e[0]] * table[1][k1][e[1]] * table[2][k2][e[2]];
    };
    out.value[j] = partial(0, 0, 0);
    if (max_order < 1)
    {
      continue;
    }
    for (int a = 0; a < dim; ++a)
    {
      std::array<int, 3> k{0, 0, 0};
      ++k[a];
      out.grad(j, a) = partial(k[0], k[1], k[2]);
      if (max_order < 2)
      {
        continue;
      }
      for (int b = 0; b < dim; ++b)
      {
        std::array<int, 3> kb = k;
        ++kb[b];
        out.hess(j, 3 * a + b) = partial(kb[0], kb[1], kb[2]);
        if (max_order < 3)
        {
          continue;
        }
        for (int c = 0; c < dim; ++c)
        {
          std::array<int, 3> kc = kb;
          ++kc[c];
          out.third(j, 9 * a + 3 * b + c) = partial(kc[0], kc[1], kc[2]);
        }
      }
    }
  }
}

// Raw functions: collapsed-coordinate orthogonal polynomials on simplices,
// tensor Legendre products on the quadrilateral.
void raw_jets(CellKind kind, int p, const std::vector<std::array<int, 3>> &exps, const Vec3 &xi,
              int max_order, RawJets &out)
{
  if (kind == CellKind::Quadrilateral)
  {
    tensor_jets(kind, p, exps, xi, max_order, out);
    return;
  }
  const std::vector<Jet> jets = simplex_jets(cell_dim(kind), p, xi);
  const int n = static_cast<int>(jets.size());
  out.value.resize(n);
  if (max_order >= 1)
  {
    out.grad.resize(n, 3);
  }
  if (max_order >= 2)
  {
    out.hess.resize(n, 9);
  }
  if (max_order >= 3)
  {
    out.third.resize(n, 27);
  }
  for (int j = 0; j < n; ++j)
  {
    out.value[j] = jets[j].v;
    for (int i = 0; max_order >= 1 && i < 3; ++i)
    {
      out.grad(j, i) = jets[j].g[i];
    }
    for (int i = 0; max_order >= 2 && i < 9; ++i)
    {
      out.hess(j, i) = jets[j].h[i];
    }
    for (int i = 0; max_order >= 3 && i < 27; ++i)
    {
      out.third(j, i) = jets[j].t[i];
    }
  }
}

}  // namespace

ScalarModalBasis::ScalarModalBasis(CellKind kind, int p, PolySpace space)
    : kind_(kind), p_(p), space_(kind == CellKind::Quadrilateral ? space : PolySpace::Total)
{
  if (p < 0)
  {
    throw std::invalid_argument("ScalarModalBasis: negative degree");
  }
  exponents_ = enumerate_exponents(dim(), p, space_);
  const int n = size();
  const QuadratureRule rule = quadrature_rule(ref_shape(kind), 2 * p);
  Matrix values(n, rule.size());
  RawJets jets;
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    raw_jets(kind, p, exponents_, rule.points[q], 0, jets);
    values.col(q) = jets.value * std::sqrt(rule.weights[q]);
  }
  const Matrix gram = values * values.transpose();
  // Two Cholesky passes: the second removes the loss of orthogonality left by
  // the conditioning of the first.
  coeffs_ = Matrix::Identity(n, n);
  Matrix g = gram;
  for (int pass = 0; pass < 2; ++pass)
  {
    Eigen::LLT<Matrix> llt(g);
    if (llt.info() != Eigen::Success)
    {
      throw std::runtime_error("ScalarModalBasis: Gram matrix is not positive definite");
    }
    const Matrix l = llt.matrixL();
    coeffs_ = l.triangularView<Eigen::Lower>().solve(coeffs_);
    g = coeffs_ * gram * coeffs_.transpose();
  }
}

void ScalarModalBasis::evaluate_values(const Vec3 &xi, Vector &out) const
{
  RawJets raw;
  raw_jets(kind_, p_, exponents_, xi, 0, raw);
  out.noalias() = coeffs_.triangularView<Eigen::Lower>() * raw.value;
}

void ScalarModalBasis::evaluate(const Vec3 &xi, const AffineMap *map, ScalarJets &out) const
{
  RawJets raw;
  raw_jets(kind_, p_, exponents_, xi, 3, raw);
  const auto c = coeffs_.triangularView<Eigen::Lower>();
  out.value.noalias() = c * raw.value;
  const Matrix grad = c * raw.grad;
  const Matrix hess = c * raw.hess;
  const Matrix third = c * raw.third;
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  if (map)
  {
    r = map->inverse;
    if (map->dim == 2)
    {
      r(2, 2) = 0.0;
    }
  }
  else if (dim() == 2)
  {
    r(2, 2) = 0.0;
  }
  // d/dx_i = sum_a R_ai d/dxi_a.
  out.grad.noalias() = grad * r;
  const int n = size();
  out.hess.resize(n, 9);
  for (int j = 0; j < n; ++j)
  {
    Eigen::Matrix<double, 3, 3, Eigen::RowMajor> h;
    for (int k = 0; k < 9; ++k)
    {
      h.data()[k] = hess(j, k);
    }
    const Eigen::Matrix<double, 3, 3, Eigen::RowMajor> ph = r.transpose() * h * r;
    for (int k = 0; k < 9; ++k)
    {
      out.hess(j, k) = ph.data()[k];
    }
  }
  // grad(lap)_i = sum_a R_ai sum_bc T_abc G_bc with G = R R^T.
  const Eigen::Matrix3d g = r * r.transpose();
  Matrix contract = Matrix::Zero(27, 3);
  for (int a = 0; a < 3; ++a)
  {
    for (int b = 0; b < 3; ++b)
    {
      for (int cc = 0; cc < 3; ++cc)
      {
        contract(9 * a + 3 * b + cc, a) = g(b, cc);
      }
    }
  }
  out.grad_lap.noalias() = third * contract * r;
}

ElementBasis::ElementBasis(CellKind kind, int p, bool total_degree)
    : scalar_(kind, p, total_degree ? PolySpace::Total : PolySpace::Tensor)
{
  if (p < 2)
  {
    throw std::invalid_argument("ElementBasis: degree must be at least 2, got " +
                                std::to_string(p));
  }
}

void ElementBasis::evaluate(std::span<const Vec3> ref_points, const AffineMap &map,
                            VectorEvaluation &out, int max_curl) const
{
  const int ns = scalar_.size();
  const int d = dim();
  const int n = d * ns;
  const int np = static_cast<int>(ref_points.size());
  out.npoints = np;
  out.value.setZero(n, 3 * np);
  if (max_curl >= 1)
  {
    out.curl.setZero(n, 3 * np);
  }
  if (max_curl >= 2)
  {
    out.curl2.setZero(n, 3 * np);
  }
  if (max_curl >= 3)
  {
    out.curl3.setZero(n, 3 * np);
  }
  ScalarJets jets;
  Vector values;
  for (int q = 0; q < np; ++q)
  {
    if (max_curl == 0)
    {
      scalar_.evaluate_values(ref_points[q], values);
      for (int c = 0; c < d; ++c)
      {
        out.value.block(c * ns, 3 * q + c, ns, 1) = values;
      }
      continue;
    }
    scalar_.evaluate(ref_points[q], &map, jets);
    for (int c = 0; c < d; ++c)
    {
      const int row = c * ns;
      const int col = 3 * q;
      out.value.block(row, col + c, ns, 1) = jets.value;
      // e_c phi: curl = grad(phi) x e_c.
      const int c1 = (c + 1) % 3, c2 = (c + 2) % 3;
      out.curl.block(row, col + c1, ns, 1) = jets.grad.col(c2);
      out.curl.block(row, col + c2, ns, 1) = -jets.grad.col(c1);
      if (max_curl < 2)
      {
        continue;
      }
      // curl^2 = grad(d_c phi) - lap(phi) e_c.
      for (int i = 0; i < 3; ++i)
      {
        out.curl2.block(row, col + i, ns, 1) = jets.hess.col(3 * i + c);
      }
      out.curl2.block(row, col + c, ns, 1) -=
          jets.hess.col(0) + jets.hess.col(4) + jets.hess.col(8);
      if (max_curl < 3)
      {
        continue;
      }
      // curl^3 = -grad(lap phi) x e_c.
      out.curl3.block(row, col + c1, ns, 1) = -jets.grad_lap.col(c2);
      out.curl3.block(row, col + c2, ns, 1) = jets.grad_lap.col(c1);
    }
  }
}

ElementBasis simplex_modal_basis(int p, int dim)
{
  if (dim != 2 && dim != 3)
  {
    throw std::invalid_argument("simplex_modal_basis: dim must be 2 or 3");
  }
  return ElementBasis(dim == 2 ? CellKind::Triangle : CellKind::Tetrahedron, p);
}

}  // namespace quadcurl
