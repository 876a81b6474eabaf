// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include "quadcurl/eigsolve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <fmt/format.h>

#include "eigsolve/linear.hpp"

namespace quadcurl
{

Vector solve_source(const AssembledSystem &sys, const Vector &load)
{
  if (load.norm() == 0.0)
  {
    return Vector::Zero(sys.n_V());
  }
  detail::SparseFactor factor;
  if (!factor.factor(sys.A, true))
  {
    throw std::runtime_error(fmt::format(
        "solve_source: Cholesky factorization failed (smallest LDL^T pivot {:.6g}); the penalty "
        "parameters are too small for coercivity",
        detail::smallest_ldlt_pivot(sys.A)));
  }
  return factor.solve(load);
}

ConstrainedSolution solve_constrained_source(const AssembledSystem &sys, const Vector &load)
{
  ConstrainedSolution out;
  out.u = Vector::Zero(sys.n_V());
  out.multiplier = Vector::Zero(sys.n_U());
  const double load_norm = load.norm();
  if (load_norm == 0.0)
  {
    return out;
  }
  const detail::ConstraintProjector projector(sys);
  if (projector.active())
  {
    out.multiplier = projector.multiplier(load);
  }
  // The gradient part of the load is carried by the multiplier; the rest is
  // solved on ker B by CG on A - M preconditioned with A^-1.
  const Vector rhs = projector.active() ? Vector(load - sys.B.transpose() * out.multiplier) : load;
  detail::SparseFactor factor;
  if (!factor.factor(sys.A, true))
  {
    throw std::runtime_error("solve_constrained_source: A is not positive definite");
  }
  Vector r = rhs;
  Vector z = projector.project(factor.solve(r));
  Vector d = z;
  double rz = r.dot(z);
  for (out.iterations = 0; out.iterations < 500; ++out.iterations)
  {
    if (r.norm() <= 1e-14 * load_norm)
    {
      break;
    }
    const Vector q = sys.Atilde * d;
    const double alpha = rz / d.dot(q);
    out.u += alpha * d;
    r -= alpha * q;
    z = projector.project(factor.solve(r));
    const double rz_new = r.dot(z);
    d = z + (rz_new / rz) * d;
    rz = rz_new;
  }
  Vector full = sys.Atilde * out.u - load;
  if (sys.n_U() > 0)
  {
    full += sys.B.transpose() * out.multiplier;
  }
  out.residual = full.norm() / load_norm;
  const double unorm = std::sqrt(std::max(out.u.dot(sys.M * out.u), 1e-300));
  out.constraint_residual = sys.n_U() > 0 ? (sys.B * out.u).norm() / unorm : 0.0;
  return out;
}

namespace
{

std::optional<Domain> infer_domain(const Mesh &mesh)
{
  if (mesh.dim == 3)
  {
    return std::abs(mesh.measure() - 8.0) < 1e-9 ? std::optional(Domain::Cube) : std::nullopt;
  }
  const double area = mesh.measure();
  if (std::abs(area - 4.0) < 1e-9)
  {
    return Domain::Square;
  }
  if (std::abs(area - 1.0) < 1e-9)
  {
    return Domain::UnitSquare;
  }
  if (std::abs(area - 3.0) < 1e-9)
  {
    return Domain::LShape;
  }
  return std::nullopt;
}

struct Ritz
{
  double theta;
  Vector u;
};

// Thick-restart Lanczos for the operator T = P (K - sigma M)^-1 M on ker B,
// self-adjoint in the M inner product. Returns the k Ritz pairs of largest
// |theta|, converged or not.
std::vector<Ritz> lanczos(const AssembledSystem &sys, const SparseMatrix &K, double sigma, int k,
                          const EigenOptions &options, const detail::ConstraintProjector &projector,
                          SolveReport &report, double spd_limit)
{
  const int n = sys.n_V();
  const int dim_x = n - sys.n_U();
  if (k > dim_x)
  {
    throw std::invalid_argument("solve_eigs: more eigenvalues requested than the constrained dimension");
  }
  const int m = std::min(options.subspace.value_or(std::max(2 * k + 1, 20)), dim_x);

  detail::SparseFactor shifted;
  SparseMatrix s = K - sigma * sys.M;
  const bool spd = sigma < spd_limit;
  if (!shifted.factor(s, spd))
  {
    throw std::runtime_error(fmt::format("solve_eigs: factorization of K - sigma M failed at sigma = {}", sigma));
  }
  report.factorization = shifted.name();
  report.shift = sigma;
  const auto apply = [&](const Vector &v)
  {
    ++report.iterations;
    return projector.project(shifted.solve(sys.M * v));
  };

  std::mt19937 rng(options.seed);
  std::normal_distribution<double> normal;
  const auto random_vector = [&]()
  {
    Vector v(n);
    for (int i = 0; i < n; ++i)
    {
      v[i] = normal(rng);
    }
    return projector.project(v);
  };

  Matrix V(n, m + 1), W(n, m + 1);  // W = M V
  Matrix H = Matrix::Zero(m, m);
  {
    Vector v = random_vector();
    Vector mv = sys.M * v;
    const double nv = std::sqrt(v.dot(mv));
    V.col(0) = v / nv;
    W.col(0) = mv / nv;
  }
  int kept = 0;
  double last_beta = 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  std::vector<int> order(m);
  for (report.restarts = 0;; ++report.restarts)
  {
    for (int j = kept; j < m; ++j)
    {
      Vector w = apply(V.col(j));
      Vector h = W.leftCols(j + 1).transpose() * w;
      w -= V.leftCols(j + 1) * h;
      const Vector h2 = W.leftCols(j + 1).transpose() * w;
      w -= V.leftCols(j + 1) * h2;
      h += h2;
      H.col(j).head(j + 1) = h;
      Vector mw = sys.M * w;
      double beta = std::sqrt(std::max(w.dot(mw), 0.0));
      if (beta <= 1e-12 * std::max(h.cwiseAbs().maxCoeff(), 1e-300))
      {
        // Invariant subspace: continue with a fresh direction, uncoupled.
        beta = 0.0;
        if (j + 1 < dim_x)
        {
          w = random_vector();
          for (int pass = 0; pass < 2; ++pass)
          {
            w -= V.leftCols(j + 1) * (W.leftCols(j + 1).transpose() * w);
          }
          mw = sys.M * w;
          const double nw = std::sqrt(w.dot(mw));
          w /= nw;
          mw /= nw;
        }
      }
      else
      {
        w /= beta;
        mw /= beta;
      }
      if (j + 1 < m)
      {
        H(j + 1, j) = beta;
      }
      V.col(j + 1) = w;
      W.col(j + 1) = mw;
      last_beta = beta;
    }
    const double scale = H.cwiseAbs().maxCoeff();
    const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * scale)
    {
      throw std::runtime_error(fmt::format(
          "solve_eigs: projected matrix is not symmetric (defect {:.3g}); complex Ritz values", asym / scale));
    }
    eig.compute(0.5 * (H + H.transpose()));
    const Vector theta = eig.eigenvalues();
    const Matrix &Y = eig.eigenvectors();
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(theta[a]) > std::abs(theta[b]); });
    int converged = 0;
    for (int i = 0; i < k; ++i)
    {
      const double res = std::abs(last_beta * Y(m - 1, order[i]));
      if (res <= options.tolerance * std::abs(theta[order[i]]))
      {
        ++converged;
      }
    }
    const bool done = converged == k || m == dim_x;
    if (done || report.restarts >= options.max_restarts)
    {
      report.converged = done;
      std::vector<Ritz> out;
      for (int i = 0; i < k; ++i)
      {
        out.push_back({theta[order[i]], V.leftCols(m) * Y.col(order[i])});
      }
      return out;
    }
    // Keep the wanted Ritz vectors plus a buffer; the residual direction
    // becomes the next basis vector.
    kept = std::min(m - 1, k + (m - k) / 2);
    Matrix Ykeep(m, kept);
    for (int i = 0; i < kept; ++i)
    {
      Ykeep.col(i) = Y.col(order[i]);
    }
    const Matrix Vk = V.leftCols(m) * Ykeep;
    const Matrix Wk = W.leftCols(m) * Ykeep;
    V.col(kept) = V.col(m);
    W.col(kept) = W.col(m);
    V.leftCols(kept) = Vk;
    W.leftCols(kept) = Wk;
    H.setZero();
    for (int i = 0; i < kept; ++i)
    {
      H(i, i) = theta[order[i]];
      H(kept, i) = last_beta * Ykeep(m - 1, i);
    }
  }
}

}  // namespace

double coarse_first_eigenvalue(Domain domain, CellKind kind, PenaltyParameters eta,
                               FaceSize face_size)
{
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int, double, double>, double> cache;
  const auto key = std::make_tuple(static_cast<int>(domain), static_cast<int>(kind),
                                   static_cast<int>(face_size), eta.eta1, eta.eta2);
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end())
    {
      return it->second;
    }
  }
  Mesh mesh = build_structured_mesh(domain, kind, 1);
  mesh.set_face_size(face_size);
  const AssembledSystem sys = assemble_system(mesh, 2, eta);
  const double value = dense_oracle_eigs(sys, 1).front();
  std::lock_guard<std::mutex> lock(mutex);
  cache[key] = value;
  return value;
}

std::vector<EigenPair> solve_eigs(const AssembledSystem &sys, int k, const EigenOptions &options,
                                  SolveReport *report_out)
{
  if (k < 1)
  {
    throw std::invalid_argument("solve_eigs: k must be positive");
  }
  const SparseMatrix &K = options.use_full_form ? sys.A : sys.Atilde;
  // K - sigma M is positive definite below this shift.
  const double spd_limit = options.use_full_form ? 1.0 : 0.0;
  const double fallback = spd_limit - 1.0;
  double sigma = fallback;
  if (options.shift)
  {
    sigma = *options.shift;
  }
  else if (const auto domain = infer_domain(*sys.mesh))
  {
    sigma = 0.5 * coarse_first_eigenvalue(*domain, sys.mesh->kind(), sys.eta, sys.mesh->face_size) +
            (options.use_full_form ? 0.5 : 0.0);
  }
  const detail::ConstraintProjector projector(sys);
  SolveReport report;
  std::vector<EigenPair> pairs;
  for (int attempt = 0;; ++attempt)
  {
    std::vector<Ritz> ritz;
    try
    {
      ritz = lanczos(sys, K, sigma, k, options, projector, report, spd_limit);
    }
    catch (const std::runtime_error &)
    {
      // The shift hit the spectrum; perturb once, then fall back.
      if (attempt >= 2)
      {
        throw;
      }
      ++report.shift_retries;
      sigma = attempt == 0 ? sigma * (1.0 + 1e-3) + 1e-3 : fallback;
      continue;
    }
    pairs.clear();
    report.discarded = 0;
    for (const Ritz &r : ritz)
    {
      EigenPair pair;
      pair.lambda = sigma + 1.0 / r.theta;
      pair.u = projector.project(r.u);
      const Vector mu = sys.M * pair.u;
      const double unorm = std::sqrt(pair.u.dot(mu));
      pair.u /= unorm;
      const Vector mu1 = mu / unorm;
      const Vector residual = pair.lambda * mu1 - K * pair.u;
      pair.multiplier = projector.multiplier(residual);
      Vector full = -residual;
      if (sys.n_U() > 0)
      {
        full += sys.B.transpose() * pair.multiplier;
        pair.constraint_residual = (sys.B * pair.u).norm();
      }
      pair.alg_residual = full.norm() / (std::abs(pair.lambda) * mu1.norm());
      if (pair.constraint_residual > kSpuriousConstraintResidual ||
          std::abs(pair.lambda) > kInfiniteEigenvalue)
      {
        ++report.discarded;
        continue;
      }
      pairs.push_back(std::move(pair));
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const EigenPair &a, const EigenPair &b) { return a.lambda < b.lambda; });
    // Completeness: shift-invert returns the eigenvalues nearest sigma, which
    // are the smallest ones only if none lies below sigma and the largest
    // returned is at least 2 sigma away from zero.
    const bool complete = sigma < spd_limit ||
                          (!pairs.empty() && pairs.front().lambda > sigma &&
                           pairs.back().lambda >= 2.0 * sigma - spd_limit);
    if (complete || attempt >= 2)
    {
      break;
    }
    ++report.shift_retries;
    sigma = fallback;
  }
  if (report_out)
  {
    *report_out = report;
  }
  return pairs;
}

KernelBasis constraint_kernel(const AssembledSystem &sys)
{
  const int n = sys.n_V();
  if (n + sys.n_U() > kDenseLimit)
  {
    throw std::length_error(fmt::format("dense path refused: n_V + n_U = {} exceeds {}",
                                        n + sys.n_U(), kDenseLimit));
  }
  KernelBasis out;
  if (sys.n_U() == 0)
  {
    out.Z = Matrix::Identity(n, n);
    return out;
  }
  const Matrix bt = Matrix(sys.B.transpose());
  Eigen::ColPivHouseholderQR<Matrix> qr(bt);
  qr.setThreshold(1e-11);
  out.rank = static_cast<int>(qr.rank());
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  out.Z = q.rightCols(n - out.rank);
  return out;
}

std::vector<double> dense_oracle_eigs(const AssembledSystem &sys, int k, bool use_full_form)
{
  const KernelBasis kernel = constraint_kernel(sys);
  const SparseMatrix &K = use_full_form ? sys.A : sys.Atilde;
  Matrix kz = kernel.Z.transpose() * (K * kernel.Z);
  Matrix mz = kernel.Z.transpose() * (sys.M * kernel.Z);
  kz = 0.5 * (kz + kz.transpose()).eval();
  mz = 0.5 * (mz + mz.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> eig(kz, mz, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
  {
    throw std::runtime_error("dense_oracle_eigs: eigensolver failed");
  }
  const Vector &values = eig.eigenvalues();
  std::vector<double> out(values.data(), values.data() + std::min<Eigen::Index>(k, values.size()));
  return out;
}

std::vector<std::optional<double>> convergence_rate(const std::vector<double> &errors,
                                                    const std::vector<double> &params, RateMode mode)
{
  if (errors.size() != params.size())
  {
    throw std::invalid_argument("convergence_rate: size mismatch");
  }
  std::vector<std::optional<double>> out(errors.size());
  for (std::size_t j = 1; j < errors.size(); ++j)
  {
    const double e0 = errors[j - 1], e1 = errors[j];
    if (!(e0 > 0.0) || !(e1 > 0.0))
    {
      continue;
    }
    const double denom = mode == RateMode::H ? std::log(params[j - 1] / params[j])
                                             : params[j] - params[j - 1];
    if (denom == 0.0)
    {
      continue;
    }
    out[j] = std::log(e0 / e1) / denom;
  }
  return out;
}

std::optional<double> fitted_rate(const std::vector<double> &errors,
                                  const std::vector<double> &params, RateMode mode)
{
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < errors.size(); ++i)
  {
    if (!(errors[i] > 0.0))
    {
      return std::nullopt;
    }
    xs.push_back(mode == RateMode::H ? std::log(params[i]) : params[i]);
    ys.push_back(std::log(errors[i]));
  }
  if (xs.size() < 2)
  {
    return std::nullopt;
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
  {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0)
  {
    return std::nullopt;
  }
  const double slope = sxy / sxx;
  return mode == RateMode::H ? slope : -slope;
}

}  // namespace quadcurl
