// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include "quadcurl/legendre.hpp"

#include <cmath>
#include <stdexcept>

namespace quadcurl
{

void legendre_table(int degree, int max_derivative, double x,
                    std::vector<std::vector<double>> &out)
{
  out.assign(max_derivative + 1, std::vector<double>(degree + 1, 0.0));
  for (int k = 0; k <= max_derivative; ++k)
  {
    // (n+1) L_{n+1}^{(k)} = (2n+1) (x L_n^{(k)} + k L_n^{(k-1)}) - n L_{n-1}^{(k)}
    out[k][0] = (k == 0) ? 1.0 : 0.0;
    if (degree == 0)
    {
      continue;
    }
    out[k][1] = (k == 0) ? x : (k == 1 ? 1.0 : 0.0);
    for (int n = 1; n < degree; ++n)
    {
      const double lower = (k > 0) ? out[k - 1][n] : 0.0;
      out[k][n + 1] =
          ((2 * n + 1) * (x * out[k][n] + k * lower) - n * out[k][n - 1]) / (n + 1);
    }
  }
}

double legendre(int n, double x)
{
  if (n == 0)
  {
    return 1.0;
  }
  double prev = 1.0, cur = x;
  for (int m = 1; m < n; ++m)
  {
    const double next = ((2 * m + 1) * x * cur - m * prev) / (m + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

double legendre_phi(int i, double x)
{
  if (i < 0)
  {
    throw std::invalid_argument("legendre_phi: negative index");
  }
  if (i == 0)
  {
    return 0.5 * (1.0 - x);
  }
  if (i == 1)
  {
    return 0.5 * (1.0 + x);
  }
  return (legendre(i, x) - legendre(i - 2, x)) / std::sqrt(2.0 * (2 * i - 1));
}

double legendre_phi_derivative(int i, double x)
{
  if (i < 0)
  {
    throw std::invalid_argument("legendre_phi_derivative: negative index");
  }
  if (i == 0)
  {
    return -0.5;
  }
  if (i == 1)
  {
    return 0.5;
  }
  // L_i' - L_{i-2}' = (2i-1) L_{i-1}
  return (2 * i - 1) * legendre(i - 1, x) / std::sqrt(2.0 * (2 * i - 1));
}

}  // namespace quadcurl
