// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include "quadcurl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "quadcurl/eigsolve.hpp"
#include "quadcurl/hcurl_rect.hpp"
#include "quadcurl/legendre.hpp"
#include "quadcurl/quadrature.hpp"

namespace quadcurl
{

namespace
{

constexpr double kConsistencyTolerance = 1e-8;
constexpr double kCoercivityFloor = 1e-3;
constexpr double kGalerkinTolerance = 1e-10;
constexpr double kOrthogonalityTolerance = 1e-12;
constexpr double kProjectorTolerance = 1e-12;
constexpr double kJumpTolerance = 1e-11;
constexpr int kExactLimit = 2000;

CheckReport make_report(std::string check, const MeshCase *mc, int p, PenaltyParameters eta)
{
  CheckReport r;
  r.check = std::move(check);
  r.mesh = mc ? mc->label : "reference";
  r.p = p;
  r.eta = eta;
  return r;
}

Vector random_vector(int n, std::mt19937 &rng)
{
  std::normal_distribution<double> normal;
  Vector v(n);
  for (int i = 0; i < n; ++i)
  {
    v[i] = normal(rng);
  }
  return v;
}

bool is_square(const Mesh &mesh)
{
  return mesh.dim == 2 && std::abs(mesh.measure() - 4.0) < 1e-9;
}

const char *family_name(HcurlFamily f)
{
  switch (f)
  {
    case HcurlFamily::CellMinus:
      return "cell-minus";
    case HcurlFamily::CellPlus:
      return "cell-plus";
    case HcurlFamily::CellAxis:
      return "cell-axis";
    case HcurlFamily::EdgePlusVertical:
      return "edge-plus-vertical";
    case HcurlFamily::EdgePlusHorizontal:
      return "edge-plus-horizontal";
    case HcurlFamily::EdgeLowest:
      return "edge-lowest";
  }
  return "unknown";
}

// Global polynomial field of total degree p (components of degree p and p-1).
Vec3 polynomial_field(const Vec3 &x, int p, int dim)
{
  const double a = x[0], b = x[1], c = dim == 3 ? x[2] : 0.0;
  const Vec3 v{std::pow(a + 0.5 * b, p) + std::pow(b, p - 1) * a - 0.3 * c,
               std::pow(a - 2.0 * b, p - 1) * b + 0.25 * std::pow(a, p),
               dim == 3 ? std::pow(b + c, p) - a * std::pow(c, p - 1) : 0.0};
  return v;
}

}  // namespace

std::string check_csv_header()
{
  return "check,mesh,p,eta1,eta2,observed,threshold,pass";
}

std::string CheckReport::csv_row() const
{
  std::string name = check;
  if (role == CheckRole::Control)
  {
    name = "control:" + name;
  }
  else if (role == CheckRole::Observation)
  {
    name = "observation:" + name;
  }
  return fmt::format("{},{},{},{},{},{:.6e},{:.6e},{}", name, mesh, p, eta.eta1, eta.eta2, observed,
                     threshold, pass ? 1 : 0);
}

MeshCase mesh_case(Domain domain, CellKind kind, int n)
{
  return {fmt::format("{}-{}-n{}", to_string(domain), to_string(kind), n),
          build_structured_mesh(domain, kind, n)};
}

CheckReport check_consistency(const MeshCase &mc, int p, int exponent)
{
  if (!is_square(mc.mesh))
  {
    throw std::invalid_argument("check_consistency: the manufactured solution lives on (-1,1)^2");
  }
  const ManufacturedSolution ms(exponent);
  const PenaltyParameters eta = default_penalties(2);
  const AssembledSystem sys = assemble_system(mc.mesh, p, eta, false);
  const Vector action = form_action(sys, [&](const Vec3 &x) { return ms.exact(x); }, ms.degree());
  // The source is a polynomial of degree 4m - 1; integrate it exactly.
  const int f_degree = std::max(2 * p + 6, ms.degree());
  const Vector load = assemble_load(*sys.space, [&](const Vec3 &x) { return ms.source(x); }, f_degree);
  CheckReport r = make_report("consistency", &mc, p, eta);
  r.samples = sys.n_V();
  r.observed = (action - load).cwiseAbs().maxCoeff();
  r.threshold = kConsistencyTolerance;
  r.pass = r.observed <= r.threshold;
  r.detail = fmt::format("exponent {}, max |load| {:.3e}", exponent, load.cwiseAbs().maxCoeff());
  if (exponent < 3)
  {
    r.role = CheckRole::Control;
  }
  return r;
}

CheckReport check_coercivity(const MeshCase &mc, int p, PenaltyParameters eta, int samples,
                             unsigned seed)
{
  const AssembledSystem sys = assemble_system(mc.mesh, p, eta, false);
  const SparseMatrix norm = dg_norm_matrix(*sys.space);
  std::mt19937 rng(seed);
  double ratio = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s)
  {
    const Vector v = random_vector(sys.n_V(), rng);
    ratio = std::min(ratio, v.dot(sys.A * v) / v.dot(norm * v));
  }
  CheckReport r = make_report("coercivity", &mc, p, eta);
  r.samples = samples;
  r.observed = ratio;
  r.threshold = kCoercivityFloor;
  r.pass = ratio > kCoercivityFloor;
  if (sys.n_V() <= kExactLimit)
  {
    const Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(Matrix(sys.A), Matrix(norm),
                                                               Eigen::EigenvaluesOnly);
    r.detail = fmt::format("infimum {:.6g}", ges.eigenvalues().minCoeff());
  }
  return r;
}

CheckReport check_galerkin(const MeshCase &mc, int p, double load_perturbation)
{
  const PenaltyParameters eta = default_penalties(mc.mesh.dim);
  const AssembledSystem sys = assemble_system(mc.mesh, p, eta, false);
  Vector load;
  if (is_square(mc.mesh))
  {
    const ManufacturedSolution ms(3);
    load = assemble_load(*sys.space, [&](const Vec3 &x) { return ms.source(x); },
                         std::max(2 * p + 6, ms.degree()));
  }
  else
  {
    load = assemble_load(*sys.space, [](const Vec3 &x)
                         { return Vec3{std::sin(x[1] + x[2]), std::cos(x[0] * x[2]), x[0] * x[1]}; });
  }
  const Vector w = solve_source(sys, load);
  Vector rhs = load;
  rhs[0] += load_perturbation * load.norm();
  CheckReport r = make_report("galerkin", &mc, p, eta);
  r.samples = sys.n_V();
  r.observed = (sys.A * w - rhs).cwiseAbs().maxCoeff() / load.norm();
  r.threshold = kGalerkinTolerance;
  r.pass = r.observed <= r.threshold;
  if (load_perturbation != 0.0)
  {
    r.role = CheckRole::Control;
  }
  return r;
}

CheckReport check_poincare(const MeshCase &mc, int p, int samples, unsigned seed)
{
  const PenaltyParameters eta = default_penalties(mc.mesh.dim);
  const AssembledSystem sys = assemble_system(mc.mesh, p, eta);
  const KernelBasis kernel = constraint_kernel(sys);
  const Matrix &z = kernel.Z;
  const Matrix nz = dg_norm_matrix(*sys.space) * z;
  const Matrix mz = sys.M * z;
  std::mt19937 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s)
  {
    const Vector c = random_vector(static_cast<int>(z.cols()), rng);
    const double full = c.dot(z.transpose() * (nz * c));
    const double l2 = c.dot(z.transpose() * (mz * c));
    worst = std::max(worst, std::sqrt(full / (full - l2)));
  }
  CheckReport r = make_report("poincare", &mc, p, eta);
  r.samples = samples;
  r.observed = worst;
  r.threshold = std::numeric_limits<double>::infinity();
  r.pass = std::isfinite(worst) && worst >= 1.0;
  // Exact supremum: 1 / (1 - mu) with mu the largest eigenvalue of
  // Z^T M Z against Z^T N Z.
  const Matrix zn = z.transpose() * nz;
  const Matrix zm = z.transpose() * mz;
  const Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(0.5 * (zm + zm.transpose()),
                                                             0.5 * (zn + zn.transpose()),
                                                             Eigen::EigenvaluesOnly);
  r.detail = fmt::format("kernel dimension {}, supremum {:.6g}", z.cols(),
                         std::sqrt(1.0 / (1.0 - ges.eigenvalues().maxCoeff())));
  return r;
}

std::vector<CheckReport> check_basis_orthogonality(int p)
{
  if (p < 1 || p > 12)
  {
    throw std::invalid_argument("check_basis_orthogonality: degree must be in [1, 12]");
  }
  const HcurlRectBasis basis = hcurl_rect_basis(p);
  const int n = basis.size();
  std::vector<double> x, w;
  gauss_legendre(p + 2, x, w);
  Matrix curl = Matrix::Zero(n, n);
  Matrix trace = Matrix::Zero(n, n);
  Vector c(n), t(n);
  for (std::size_t a = 0; a < x.size(); ++a)
  {
    for (std::size_t b = 0; b < x.size(); ++b)
    {
      for (int k = 0; k < n; ++k)
      {
        c[k] = basis.curl(k, {x[a], x[b], 0.0});
      }
      curl += w[a] * w[b] * c * c.transpose();
    }
    // Bottom/top edges have tangent e1, left/right edges e2.
    for (const Vec3 &pt : {Vec3{x[a], -1.0, 0.0}, Vec3{x[a], 1.0, 0.0}})
    {
      for (int k = 0; k < n; ++k)
      {
        t[k] = basis.value(k, pt)[0];
      }
      trace += w[a] * t * t.transpose();
    }
    for (const Vec3 &pt : {Vec3{-1.0, x[a], 0.0}, Vec3{1.0, x[a], 0.0}})
    {
      for (int k = 0; k < n; ++k)
      {
        t[k] = basis.value(k, pt)[1];
      }
      trace += w[a] * t * t.transpose();
    }
  }
  std::vector<CheckReport> out;
  for (const auto &[name, gram] : {std::pair<std::string, const Matrix *>{"orthogonality-curl", &curl},
                                  std::pair<std::string, const Matrix *>{"orthogonality-trace", &trace}})
  {
    const double scale = gram->diagonal().cwiseAbs().maxCoeff();
    double worst = 0.0;
    std::map<std::pair<std::string, std::string>, int> violations;
    for (int i = 0; i < n; ++i)
    {
      for (int j = i + 1; j < n; ++j)
      {
        const double v = std::abs((*gram)(i, j));
        worst = std::max(worst, v);
        if (v > kOrthogonalityTolerance * scale)
        {
          std::string a = family_name(basis.functions()[i].family);
          std::string b = family_name(basis.functions()[j].family);
          if (b < a)
          {
            std::swap(a, b);
          }
          ++violations[{a, b}];
        }
      }
    }
    CheckReport r = make_report(name, nullptr, p, {});
    r.samples = n * (n - 1) / 2;
    r.observed = scale > 0.0 ? worst / scale : worst;
    r.threshold = kOrthogonalityTolerance;
    r.pass = violations.empty();
    for (const auto &[pair, count] : violations)
    {
      r.detail += fmt::format("{}{}/{}: {}", r.detail.empty() ? "" : "; ", pair.first, pair.second, count);
    }
    if (!r.pass)
    {
      r.role = CheckRole::Observation;
    }
    out.push_back(std::move(r));
  }
  return out;
}

CheckReport check_basis_counts(int p)
{
  const HcurlRectBasis basis = hcurl_rect_basis(p);
  const int m = p - 1;
  const std::vector<std::pair<HcurlFamily, int>> expected = {
      {HcurlFamily::CellMinus, m * m},        {HcurlFamily::CellPlus, m * m},
      {HcurlFamily::CellAxis, 2 * m},         {HcurlFamily::EdgePlusVertical, 2 * m},
      {HcurlFamily::EdgePlusHorizontal, 2 * m}, {HcurlFamily::EdgeLowest, 4}};
  int mismatches = basis.size() == 2 * p * (p + 1) ? 0 : 1;
  for (const auto &[family, count] : expected)
  {
    if (basis.count(family) != count)
    {
      ++mismatches;
    }
  }
  CheckReport r = make_report("basis-counts", nullptr, p, {});
  r.samples = basis.size();
  r.observed = mismatches;
  r.threshold = 0.0;
  r.pass = mismatches == 0;
  return r;
}

CheckReport check_projector(int p)
{
  // Gradients of phi_i(x1) phi_j(x2) spanning grad(Q^{1,p} + Q^{p,1}).
  std::vector<std::pair<int, int>> indices;
  for (int i = 0; i <= p; ++i)
  {
    for (int j = 0; j <= p; ++j)
    {
      if (i <= 1 || j <= 1)
      {
        indices.emplace_back(i, j);
      }
    }
  }
  std::vector<double> nodes, weights;
  gauss_legendre(40, nodes, weights);
  double worst = 0.0;
  for (const auto &[i, j] : indices)
  {
    const auto v = [i = i, j = j](const Vec3 &x)
    {
      return Vec3{legendre_phi_derivative(i, x[0]) * legendre_phi(j, x[1]),
                  legendre_phi(i, x[0]) * legendre_phi_derivative(j, x[1]), 0.0};
    };
    const PiProjection pi = pi_projector(v, p);
    PiProjection ref;
    for (std::size_t q = 0; q < nodes.size(); ++q)
    {
      const double s = nodes[q], wq = 0.5 * weights[q];
      ref.bottom += wq * v({s, -1.0, 0.0})[0];
      ref.top += wq * v({s, 1.0, 0.0})[0];
      ref.left += wq * v({-1.0, s, 0.0})[1];
      ref.right += wq * v({1.0, s, 0.0})[1];
    }
    for (double s : {-1.0, -0.3, 0.4, 1.0})
    {
      for (double u : {-1.0, 0.2, 1.0})
      {
        worst = std::max(worst, norm(pi({s, u, 0.0}) - ref({s, u, 0.0})));
      }
    }
  }
  CheckReport r = make_report("projector", nullptr, p, {});
  r.samples = static_cast<int>(indices.size());
  r.observed = worst;
  r.threshold = kProjectorTolerance;
  r.pass = worst <= kProjectorTolerance;
  return r;
}

CheckReport check_jump_vanishing(const MeshCase &mc, int p, int perturb_cell)
{
  const PenaltyParameters eta = default_penalties(mc.mesh.dim);
  Mesh mesh = mc.mesh;
  mesh.set_degree(p);
  const DGSpace space(mesh);
  const int dim = mesh.dim;
  Vector coeffs = l2_projection(space, [&](const Vec3 &x) { return polynomial_field(x, p, dim); });
  if (perturb_cell >= 0)
  {
    coeffs[space.offset(perturb_cell)] += 1e-3;
  }
  const DGNormParts parts = dg_norm(space, coeffs);
  CheckReport r = make_report("jump-vanishing", &mc, p, eta);
  r.samples = static_cast<int>(mesh.faces.size());
  r.observed = std::sqrt(parts.interior_weighted) / parts.norm();
  r.threshold = kJumpTolerance;
  r.pass = r.observed <= kJumpTolerance;
  if (perturb_cell >= 0)
  {
    r.role = CheckRole::Control;
  }
  return r;
}

CheckReport check_stability(const std::string &name, const std::vector<CheckReport> &reports,
                            double factor)
{
  CheckReport r;
  r.check = name;
  r.threshold = factor;
  if (reports.empty())
  {
    r.pass = true;
    r.observed = 1.0;
    return r;
  }
  r.mesh = reports.front().mesh;
  r.p = reports.front().p;
  r.eta = reports.front().eta;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const CheckReport &c : reports)
  {
    lo = std::min(lo, c.observed);
    hi = std::max(hi, c.observed);
    r.detail += fmt::format("{}{}@p{}={:.4g}", r.detail.empty() ? "" : "; ", c.mesh, c.p, c.observed);
  }
  r.samples = static_cast<int>(reports.size());
  r.observed = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  r.pass = r.observed <= factor;
  return r;
}

const std::vector<std::string> &battery_suites()
{
  static const std::vector<std::string> suites = {"all",      "consistency", "coercivity", "galerkin",
                                                  "poincare", "basis",       "jumps"};
  return suites;
}

std::vector<CheckReport> run_battery(const BatteryOptions &options)
{
  const auto &suites = battery_suites();
  if (std::find(suites.begin(), suites.end(), options.suite) == suites.end())
  {
    throw std::invalid_argument("unknown suite '" + options.suite + "'");
  }
  const auto want = [&](const char *s) { return options.suite == "all" || options.suite == s; };
  const std::vector<MeshCase> squares = {mesh_case(Domain::Square, CellKind::Triangle, 1),
                                         mesh_case(Domain::Square, CellKind::Triangle, 2),
                                         mesh_case(Domain::Square, CellKind::Triangle, 4)};
  const std::vector<MeshCase> quads = {mesh_case(Domain::Square, CellKind::Quadrilateral, 1),
                                       mesh_case(Domain::Square, CellKind::Quadrilateral, 2)};
  const MeshCase cube = mesh_case(Domain::Cube, CellKind::Tetrahedron, 1);
  std::vector<const MeshCase *> planar;
  for (const auto &m : squares)
  {
    planar.push_back(&m);
  }
  for (const auto &m : quads)
  {
    planar.push_back(&m);
  }
  std::vector<const MeshCase *> all = planar;
  all.push_back(&cube);

  std::vector<CheckReport> out;
  if (want("consistency"))
  {
    for (const MeshCase *m : planar)
    {
      for (int p : {2, 3})
      {
        out.push_back(check_consistency(*m, p));
      }
    }
    out.push_back(check_consistency(squares.front(), 2, 1));
  }
  if (want("coercivity"))
  {
    const auto eta_for = [&](const MeshCase &m)
    { return options.eta.value_or(default_penalties(m.mesh.dim)); };
    const bool custom = options.eta.has_value();
    const auto tag = [&](CheckReport r)
    {
      // Non-default penalties are outside the published setting.
      if (custom)
      {
        r.role = CheckRole::Control;
      }
      return r;
    };
    std::vector<CheckReport> refinement, degrees, quad_refinement;
    for (const MeshCase &m : squares)
    {
      refinement.push_back(tag(check_coercivity(m, 2, eta_for(m), options.samples, options.seed)));
    }
    for (int p : {3, 4})
    {
      degrees.push_back(tag(check_coercivity(squares[1], p, eta_for(squares[1]), options.samples, options.seed)));
    }
    for (const MeshCase &m : quads)
    {
      quad_refinement.push_back(tag(check_coercivity(m, 2, eta_for(m), options.samples, options.seed)));
    }
    CheckReport cube_report = tag(check_coercivity(cube, 3, eta_for(cube), options.samples, options.seed));
    out.insert(out.end(), refinement.begin(), refinement.end());
    out.insert(out.end(), degrees.begin(), degrees.end());
    out.insert(out.end(), quad_refinement.begin(), quad_refinement.end());
    out.push_back(cube_report);
    std::vector<CheckReport> by_degree = {refinement[1]};
    by_degree.insert(by_degree.end(), degrees.begin(), degrees.end());
    for (auto [name, group] : {std::pair{"coercivity-stability-h", refinement},
                               std::pair{"coercivity-stability-p", by_degree},
                               std::pair{"coercivity-stability-quad-h", quad_refinement}})
    {
      out.push_back(tag(check_stability(name, group)));
    }
    if (!custom)
    {
      CheckReport control = check_coercivity(squares.front(), 2, {1e-6, 1e-6}, options.samples, options.seed);
      control.role = CheckRole::Control;
      out.push_back(control);
    }
  }
  if (want("galerkin"))
  {
    for (const MeshCase *m : all)
    {
      for (int p : {2, 3})
      {
        out.push_back(check_galerkin(*m, p));
      }
    }
    out.push_back(check_galerkin(squares.front(), 2, 1e-6));
  }
  if (want("poincare"))
  {
    for (int p : {2, 3})
    {
      std::vector<CheckReport> group;
      for (int level = 0; level < 2; ++level)
      {
        group.push_back(check_poincare(squares[level], p, options.samples, options.seed));
      }
      out.insert(out.end(), group.begin(), group.end());
      out.push_back(check_stability("poincare-stability-h", group));
    }
    std::vector<CheckReport> quad_group;
    for (const MeshCase &m : quads)
    {
      quad_group.push_back(check_poincare(m, 2, options.samples, options.seed));
    }
    out.insert(out.end(), quad_group.begin(), quad_group.end());
    out.push_back(check_stability("poincare-stability-quad-h", quad_group));
    out.push_back(check_poincare(cube, 2, options.samples, options.seed));
  }
  if (want("basis"))
  {
    for (int p = 2; p <= 8; ++p)
    {
      out.push_back(check_basis_counts(p));
      for (CheckReport &r : check_basis_orthogonality(p))
      {
        out.push_back(std::move(r));
      }
      out.push_back(check_projector(p));
    }
  }
  if (want("jumps"))
  {
    for (const MeshCase *m : all)
    {
      for (int p : {2, 3})
      {
        out.push_back(check_jump_vanishing(*m, p));
      }
    }
    out.push_back(check_jump_vanishing(squares[1], 2, 3));
  }
  return out;
}

bool battery_passed(const std::vector<CheckReport> &reports)
{
  return std::all_of(reports.begin(), reports.end(),
                     [](const CheckReport &r) { return r.role != CheckRole::Check || r.pass; });
}

}  // namespace quadcurl
