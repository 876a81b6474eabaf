// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include <stdexcept>

#include "quadcurl/assembly.hpp"

namespace quadcurl
{

// psi(x, y) = P(x) P(y) with P(t) = (1 - t^2)^m. With w = curl psi:
//   curl w   = -lap psi
//   curl^2 w = (-d_y lap psi, d_x lap psi)
//   curl^3 w = lap^2 psi
//   f        = (d_y g, -d_x g), g = lap^2 psi + psi.
ManufacturedSolution::ManufacturedSolution(int m) : m_(m)
{
  if (m < 1)
  {
    throw std::invalid_argument("ManufacturedSolution: exponent must be positive");
  }
  std::vector<double> coeffs(2 * m + 1, 0.0);
  double binom = 1.0;
  for (int k = 0; k <= m; ++k)
  {
    coeffs[2 * k] = (k % 2 ? -1.0 : 1.0) * binom;
    binom = binom * (m - k) / (k + 1);
  }
  derivs_.push_back(coeffs);
  for (int k = 1; k <= 5; ++k)
  {
    const auto &prev = derivs_.back();
    std::vector<double> next(prev.size() > 1 ? prev.size() - 1 : 1, 0.0);
    for (std::size_t i = 1; i < prev.size(); ++i)
    {
      next[i - 1] = prev[i] * static_cast<double>(i);
    }
    derivs_.push_back(next);
  }
}

double ManufacturedSolution::poly(int k, double t) const
{
  const auto &c = derivs_[k];
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it)
  {
    v = v * t + *it;
  }
  return v;
}

FieldJet ManufacturedSolution::exact(const Vec3 &x) const
{
  double px[6], py[6];
  for (int k = 0; k <= 5; ++k)
  {
    px[k] = poly(k, x[0]);
    py[k] = poly(k, x[1]);
  }
  const auto d = [&](int a, int b) { return px[a] * py[b]; };
  FieldJet j;
  j.value = {d(0, 1), -d(1, 0), 0.0};
  j.curl = {0.0, 0.0, -(d(2, 0) + d(0, 2))};
  j.curl2 = {-(d(2, 1) + d(0, 3)), d(3, 0) + d(1, 2), 0.0};
  j.curl3 = {0.0, 0.0, d(4, 0) + 2.0 * d(2, 2) + d(0, 4)};
  return j;
}

Vec3 ManufacturedSolution::source(const Vec3 &x) const
{
  double px[6], py[6];
  for (int k = 0; k <= 5; ++k)
  {
    px[k] = poly(k, x[0]);
    py[k] = poly(k, x[1]);
  }
  const auto d = [&](int a, int b) { return px[a] * py[b]; };
  return {d(4, 1) + 2.0 * d(2, 3) + d(0, 5) + d(0, 1),
          -(d(5, 0) + 2.0 * d(3, 2) + d(1, 4) + d(1, 0)), 0.0};
}

}  // namespace quadcurl
