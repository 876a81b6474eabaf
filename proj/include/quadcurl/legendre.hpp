// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUADCURL_LEGENDRE_HPP
#define QUADCURL_LEGENDRE_HPP

#include <vector>

namespace quadcurl
{

/// Fills out[k][n] with the k-th derivative of the Legendre polynomial L_n at x,
/// for n = 0..degree and k = 0..max_derivative, using the differentiated
/// three-term recurrence.
void legendre_table(int degree, int max_derivative, double x,
                    std::vector<std::vector<double>> &out);

double legendre(int n, double x);

/// Hierarchical 1D shape functions on [-1,1]: the two hat functions for i = 0, 1
/// and normalized differences of Legendre polynomials for i >= 2, which vanish
/// at both endpoints.
double legendre_phi(int i, double x);
double legendre_phi_derivative(int i, double x);

}  // namespace quadcurl

#endif  // QUADCURL_LEGENDRE_HPP
