// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include "quadcurl/hcurl_rect.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "quadcurl/legendre.hpp"
#include "quadcurl/quadrature.hpp"

namespace quadcurl
{

HcurlRectBasis::HcurlRectBasis(int p) : p_(p)
{
  if (p < 1)
  {
    throw std::invalid_argument("hcurl_rect_basis: degree must be at least 1");
  }
  const auto add = [this](HcurlFamily family, int i, int j, const char *prefix)
  {
    functions_.push_back({family, i, j,
                          std::string(prefix) + "(" + std::to_string(i) + "," + std::to_string(j) +
                              ")"});
  };
  for (int i = 2; i <= p; ++i)
  {
    for (int j = 2; j <= p; ++j)
    {
      add(HcurlFamily::CellMinus, i, j, "A.I");
    }
  }
  for (int i = 2; i <= p; ++i)
  {
    for (int j = 2; j <= p; ++j)
    {
      add(HcurlFamily::CellPlus, i, j, "A.II");
    }
  }
  for (int j = 2; j <= p; ++j)
  {
    add(HcurlFamily::CellAxis, -1, j, "A.III");
  }
  for (int i = 2; i <= p; ++i)
  {
    add(HcurlFamily::CellAxis, i, -1, "A.III");
  }
  for (int i = 0; i <= 1; ++i)
  {
    for (int j = 2; j <= p; ++j)
    {
      add(HcurlFamily::EdgePlusVertical, i, j, "B.I");
    }
  }
  for (int j = 0; j <= 1; ++j)
  {
    for (int i = 2; i <= p; ++i)
    {
      add(HcurlFamily::EdgePlusHorizontal, i, j, "B.II");
    }
  }
  for (int j = 0; j <= 1; ++j)
  {
    add(HcurlFamily::EdgeLowest, -1, j, "B.III");
  }
  for (int i = 0; i <= 1; ++i)
  {
    add(HcurlFamily::EdgeLowest, i, -1, "B.III");
  }
}

int HcurlRectBasis::count(HcurlFamily family) const
{
  return static_cast<int>(std::count_if(functions_.begin(), functions_.end(),
                                         [family](const auto &f) { return f.family == family; }));
}

int HcurlRectBasis::cell_count() const
{
  return static_cast<int>(std::count_if(functions_.begin(), functions_.end(),
                                         [](const auto &f) { return f.cell_based(); }));
}

int HcurlRectBasis::edge_count() const
{
  return size() - cell_count();
}

Vec3 HcurlRectBasis::value(int k, const Vec3 &x) const
{
  const HcurlFunction &f = functions_.at(k);
  switch (f.family)
  {
    case HcurlFamily::CellMinus:
      return {legendre_phi_derivative(f.i, x[0]) * legendre_phi(f.j, x[1]),
              -legendre_phi(f.i, x[0]) * legendre_phi_derivative(f.j, x[1]), 0.0};
    case HcurlFamily::CellPlus:
    case HcurlFamily::EdgePlusVertical:
    case HcurlFamily::EdgePlusHorizontal:
      return {legendre_phi_derivative(f.i, x[0]) * legendre_phi(f.j, x[1]),
              legendre_phi(f.i, x[0]) * legendre_phi_derivative(f.j, x[1]), 0.0};
    case HcurlFamily::CellAxis:
    case HcurlFamily::EdgeLowest:
      if (f.i < 0)
      {
        return {legendre_phi(f.j, x[1]), 0.0, 0.0};
      }
      return {0.0, legendre_phi(f.i, x[0]), 0.0};
  }
  return {};
}

double HcurlRectBasis::curl(int k, const Vec3 &x) const
{
  const HcurlFunction &f = functions_.at(k);
  switch (f.family)
  {
    case HcurlFamily::CellMinus:
      return -2.0 * legendre_phi_derivative(f.i, x[0]) * legendre_phi_derivative(f.j, x[1]);
    case HcurlFamily::CellPlus:
    case HcurlFamily::EdgePlusVertical:
    case HcurlFamily::EdgePlusHorizontal:
      return 0.0;
    case HcurlFamily::CellAxis:
    case HcurlFamily::EdgeLowest:
      if (f.i < 0)
      {
        return -legendre_phi_derivative(f.j, x[1]);
      }
      return legendre_phi_derivative(f.i, x[0]);
  }
  return 0.0;
}

HcurlRectBasis hcurl_rect_basis(int p)
{
  return HcurlRectBasis(p);
}

Vec3 PiProjection::operator()(const Vec3 &x) const
{
  return {bottom * legendre_phi(0, x[1]) + top * legendre_phi(1, x[1]),
          left * legendre_phi(0, x[0]) + right * legendre_phi(1, x[0]), 0.0};
}

PiProjection pi_projector(const std::function<Vec3(const Vec3 &)> &v, int degree)
{
  const QuadratureRule rule = quadrature_rule(RefShape::Interval, degree);
  PiProjection pi;
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    const double s = rule.points[q][0];
    const double w = 0.5 * rule.weights[q];
    pi.bottom += w * v({s, -1.0, 0.0})[0];
    pi.top += w * v({s, 1.0, 0.0})[0];
    pi.left += w * v({-1.0, s, 0.0})[1];
    pi.right += w * v({1.0, s, 0.0})[1];
  }
  return pi;
}

ProjectorBound projector_bound(int p, int samples, unsigned seed)
{
  if (p < 2)
  {
    throw std::invalid_argument("projector_bound: degree must be at least 2");
  }
  const int m = p - 1;
  const int n = 2 * m;  // unknown (i, j) -> i * m + (j - 2)
  std::vector<double> x, w;
  gauss_legendre(p + 4, x, w);
  Matrix lhs = Matrix::Zero(n, n);
  for (std::size_t a = 0; a < x.size(); ++a)
  {
    for (std::size_t b = 0; b < x.size(); ++b)
    {
      const double x1 = x[a], x2 = x[b];
      const double weight = w[a] * w[b];
      Vector r1(n), r2(n);
      for (int i = 0; i <= 1; ++i)
      {
        for (int j = 2; j <= p; ++j)
        {
          const int k = i * m + (j - 2);
          r1[k] = legendre_phi_derivative(i, x1) * legendre_phi(j, x2);
          r2[k] = legendre_phi(i, x1) * legendre_phi_derivative(j, x2);
        }
      }
      lhs += weight * (r1 * r1.transpose() / (1.0 - x2 * x2) + r2 * r2.transpose());
    }
  }
  Vector rhs(n);
  for (int i = 0; i <= 1; ++i)
  {
    for (int j = 2; j <= p; ++j)
    {
      rhs[i * m + (j - 2)] = 1.0 / (j * j - j) + 1.0;
    }
  }
  ProjectorBound out;
  out.p = p;
  const Vector scale = rhs.cwiseSqrt().cwiseInverse();
  const Matrix scaled = scale.asDiagonal() * lhs * scale.asDiagonal();
  out.supremum = Eigen::SelfAdjointEigenSolver<Matrix>(scaled).eigenvalues().maxCoeff();
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  for (int s = 0; s < samples; ++s)
  {
    Vector c(n);
    for (int k = 0; k < n; ++k)
    {
      c[k] = normal(rng);
    }
    const double ratio = c.dot(lhs * c) / c.dot(rhs.asDiagonal() * c);
    out.sampled_max = std::max(out.sampled_max, ratio);
  }
  return out;
}

}  // namespace quadcurl
