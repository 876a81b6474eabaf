// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUADCURL_EIGSOLVE_HPP
#define QUADCURL_EIGSOLVE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quadcurl/assembly.hpp"

namespace quadcurl
{

struct EigenPair
{
  double lambda = 0.0;
  Vector u;           // M-normalized
  Vector multiplier;  // U_h coefficients
  double alg_residual = 0.0;         // |K u + B^T p - lambda M u| / |lambda M u|
  double constraint_residual = 0.0;  // |B u| / |u|_M
};

struct SolveReport
{
  int iterations = 0;  // operator applications
  int restarts = 0;
  std::string factorization;
  double shift = 0.0;
  int discarded = 0;  // spurious Ritz pairs dropped by the filter
  int shift_retries = 0;
  bool converged = true;
};

struct EigenOptions
{
  /// Shift; by default half of the first eigenvalue on the coarsest mesh of
  /// the same domain and cell kind at p = 2.
  std::optional<double> shift;
  double tolerance = 1e-12;  // Ritz residual relative to |theta|
  int max_restarts = 300;
  unsigned seed = 20240607u;
  /// Use A instead of A - M as the operator (spectrum shifted by +1).
  bool use_full_form = false;
  std::optional<int> subspace;  // Krylov subspace size
};

/// Thresholds of the spurious-mode filter.
inline constexpr double kSpuriousConstraintResidual = 1e-6;
inline constexpr double kInfiniteEigenvalue = 1e12;

/// Solves A w = load by sparse Cholesky. Throws std::runtime_error with the
/// smallest LDL^T pivot when A is not positive definite.
Vector solve_source(const AssembledSystem &sys, const Vector &load);

struct ConstrainedSolution
{
  Vector u;           // T_h f
  Vector multiplier;  // S_h f
  double constraint_residual = 0.0;  // |B u| / max(|u|_M, tiny)
  double residual = 0.0;             // |A~ u + B^T s - load| / |load|
  int iterations = 0;
};

/// Solves [A~ B^T; B 0][u; s] = [load; 0]. Throws when B is rank deficient.
ConstrainedSolution solve_constrained_source(const AssembledSystem &sys, const Vector &load);

/// The k smallest eigenvalues of A~ u + B^T p = lambda M u, B u = 0, sorted
/// ascending.
std::vector<EigenPair> solve_eigs(const AssembledSystem &sys, int k, const EigenOptions &options = {},
                                  SolveReport *report = nullptr);

/// Coarse-mesh estimate of the first eigenvalue, used for the default shift.
double coarse_first_eigenvalue(Domain domain, CellKind kind, PenaltyParameters eta,
                               FaceSize face_size = FaceSize::Measure);

/// Size limit of the dense paths.
inline constexpr int kDenseLimit = 4000;

/// Orthonormal basis (Euclidean) of ker B from a column-pivoted QR of B^T.
/// Throws when n_V + n_U exceeds kDenseLimit.
struct KernelBasis
{
  Matrix Z;
  int rank = 0;  // numerical rank of B
};
KernelBasis constraint_kernel(const AssembledSystem &sys);

/// Dense reference: eigenvalues of (Z^T K Z) y = lambda (Z^T M Z) y.
std::vector<double> dense_oracle_eigs(const AssembledSystem &sys, int k, bool use_full_form = false);

enum class RateMode
{
  H,  // algebraic: log(e_i / e_j) / log(h_i / h_j)
  P   // exponential: log(e_i / e_j) / (p_j - p_i)
};

/// Rates between consecutive entries; nullopt where an error is not positive.
std::vector<std::optional<double>> convergence_rate(const std::vector<double> &errors,
                                                    const std::vector<double> &params,
                                                    RateMode mode);

/// Least-squares slope r of log e = c - r p (or log e = c + r log h).
std::optional<double> fitted_rate(const std::vector<double> &errors,
                                  const std::vector<double> &params, RateMode mode);

}  // namespace quadcurl

#endif  // QUADCURL_EIGSOLVE_HPP
