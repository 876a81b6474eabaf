// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include "quadcurl/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace quadcurl
{

RefShape ref_shape(CellKind kind)
{
  switch (kind)
  {
    case CellKind::Triangle:
      return RefShape::Triangle;
    case CellKind::Quadrilateral:
      return RefShape::Quadrilateral;
    case CellKind::Tetrahedron:
      return RefShape::Tetrahedron;
  }
  throw std::invalid_argument("ref_shape: bad cell kind");
}

double ref_measure(RefShape shape)
{
  switch (shape)
  {
    case RefShape::Interval:
      return 2.0;
    case RefShape::Triangle:
      return 0.5;
    case RefShape::Quadrilateral:
      return 4.0;
    case RefShape::Tetrahedron:
      return 1.0 / 6.0;
  }
  return 0.0;
}

void gauss_legendre(int npoints, std::vector<double> &nodes, std::vector<double> &weights)
{
  nodes.assign(npoints, 0.0);
  weights.assign(npoints, 0.0);
  // Returns (L_n(x), L_n'(x)).
  const auto eval = [npoints](double x)
  {
    double p0 = 1.0, p1 = x;
    for (int m = 1; m < npoints; ++m)
    {
      const double p2 = ((2 * m + 1) * x * p1 - m * p0) / (m + 1);
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, npoints * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (int i = 0; i < (npoints + 1) / 2; ++i)
  {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (npoints + 0.5));
    for (int it = 0; it < 100; ++it)
    {
      const auto [p, dp] = eval(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
      {
        break;
      }
    }
    const double dp = eval(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[npoints - 1 - i] = x;
    weights[i] = w;
    weights[npoints - 1 - i] = w;
  }
  if (npoints % 2 == 1)
  {
    nodes[npoints / 2] = 0.0;
  }
}

QuadratureRule quadrature_rule(RefShape shape, int degree)
{
  if (degree < 0)
  {
    throw std::invalid_argument("quadrature_rule: negative exactness degree");
  }
  if (degree > kMaxQuadratureDegree)
  {
    throw std::invalid_argument("quadrature_rule: exactness degree " + std::to_string(degree) +
                                " exceeds the implemented maximum " +
                                std::to_string(kMaxQuadratureDegree));
  }
  QuadratureRule rule{shape, degree, {}, {}};
  std::vector<double> x, w;
  switch (shape)
  {
    case RefShape::Interval:
    {
      gauss_legendre(degree / 2 + 1, x, w);
      for (std::size_t i = 0; i < x.size(); ++i)
      {
        rule.points.push_back({x[i], 0.0, 0.0});
        rule.weights.push_back(w[i]);
      }
      break;
    }
    case RefShape::Quadrilateral:
    {
      gauss_legendre(degree / 2 + 1, x, w);
      for (std::size_t j = 0; j < x.size(); ++j)
      {
        for (std::size_t i = 0; i < x.size(); ++i)
        {
          rule.points.push_back({x[i], x[j], 0.0});
          rule.weights.push_back(w[i] * w[j]);
        }
      }
      break;
    }
    case RefShape::Triangle:
    {
      // (u, v) in [0,1]^2 -> (u, v (1 - u)), Jacobian (1 - u).
      gauss_legendre((degree + 1) / 2 + 1, x, w);
      for (std::size_t i = 0; i < x.size(); ++i)
      {
        const double u = 0.5 * (x[i] + 1.0);
        for (std::size_t j = 0; j < x.size(); ++j)
        {
          const double v = 0.5 * (x[j] + 1.0);
          rule.points.push_back({u, v * (1.0 - u), 0.0});
          rule.weights.push_back(0.25 * w[i] * w[j] * (1.0 - u));
        }
      }
      break;
    }
    case RefShape::Tetrahedron:
    {
      // (u, v, s) -> (u, v (1-u), s (1-u)(1-v)), Jacobian (1-u)^2 (1-v).
      gauss_legendre((degree + 2) / 2 + 1, x, w);
      for (std::size_t i = 0; i < x.size(); ++i)
      {
        const double u = 0.5 * (x[i] + 1.0);
        for (std::size_t j = 0; j < x.size(); ++j)
        {
          const double v = 0.5 * (x[j] + 1.0);
          for (std::size_t k = 0; k < x.size(); ++k)
          {
            const double s = 0.5 * (x[k] + 1.0);
            rule.points.push_back({u, v * (1.0 - u), s * (1.0 - u) * (1.0 - v)});
            rule.weights.push_back(0.125 * w[i] * w[j] * w[k] * (1.0 - u) * (1.0 - u) *
                                   (1.0 - v));
          }
        }
      }
      break;
    }
  }
  return rule;
}

}  // namespace quadcurl
