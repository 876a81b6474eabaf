// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, preceded by indented
// detail lines. Published values are restated here instead of being taken
// from the library tables so that both are checked against the source.
//
//   acceptance [criterion ...] [--known-deviation N ...]
//
// A criterion listed with --known-deviation still prints its real verdict;
// only the exit status ignores it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "quadcurl/eigsolve.hpp"
#include "quadcurl/study.hpp"
#include "quadcurl/verify.hpp"

using namespace quadcurl;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome
{
  bool pass = true;
  std::string summary;
};

void detail(const std::string &line)
{
  std::cout << "  " << line << '\n' << std::flush;
}

std::string join(const std::vector<double> &v, const char *spec = "{:.6g}")
{
  std::string out;
  for (double x : v)
  {
    out += (out.empty() ? "" : ", ") + fmt::format(fmt::runtime(spec), x);
  }
  return out;
}

struct Solved
{
  std::vector<double> lambda;
  int n_V = 0;
  double seconds = 0.0;
};

Solved solve_mesh(const Mesh &mesh, int p, PenaltyParameters eta, int k = 5)
{
  const auto t0 = Clock::now();
  const AssembledSystem sys = assemble_system(mesh, p, eta);
  Solved s;
  s.n_V = sys.n_V();
  for (const EigenPair &e : solve_eigs(sys, k))
  {
    s.lambda.push_back(e.lambda);
  }
  s.seconds = seconds_since(t0);
  return s;
}

Solved solve_structured(Domain domain, CellKind kind, int n, int p, int k = 5)
{
  return solve_mesh(build_structured_mesh(domain, kind, n), p, default_penalties(domain == Domain::Cube ? 3 : 2),
                    k);
}

double max_relative(const std::vector<double> &a, const std::vector<double> &b)
{
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
  {
    m = std::max(m, std::abs(a[i] - b[i]) / std::abs(b[i]));
  }
  return a.size() < b.size() ? INFINITY : m;
}

std::vector<double> relative_errors(const std::vector<double> &a, const std::vector<double> &ref)
{
  std::vector<double> e;
  for (std::size_t i = 0; i < std::min(a.size(), ref.size()); ++i)
  {
    e.push_back(std::abs(a[i] - ref[i]) / ref[i]);
  }
  return e;
}

// Published columns, lambda_1..5.
const std::vector<double> kSquareTri8 = {697.66, 703.97, 2294.94, 4112.82, 4912.41};
const std::vector<double> kSquareTri16 = {707.89, 709.47, 2354.17, 4251.31, 5027.41};
const std::vector<double> kSquareTri32 = {708.32, 708.67, 2353.56, 4259.09, 5028.64};
const std::vector<double> kSquareQuad40 = {713.4, 714.5, 2387.6, 4306.8, 5081};
const std::vector<double> kSquareQuad80 = {709.4, 709.7, 2360.1, 4269.7, 5039.3};
const std::vector<double> kSquareQuadRate80 = {1.9264, 1.9175, 1.8949, 1.8765, 1.8969};
const std::vector<double> kLQuad32 = {33.6188, 99.1287, 384.0611, 402.516, 688.5538};
const std::vector<double> kLQuad64 = {33.4995, 98.6054, 381.7741, 399.245, 683.8663};
const std::vector<double> kLQuadRate64 = {1.9386, 1.9135, 1.9231, 1.7890, 1.8817};
const std::vector<double> kHangingSquare = {7.0e2, 7.07e2, 2.3e3, 4.2e3, 5.0e3};

// Reference values the published errors are measured against: the converged
// p-sweep on the square, and lambda / (1 + relerr) of the finest L-shape
// triangle column.
const std::vector<double> kSquareReference = {707.9715, 707.9716, 2349.9858, 4255.8141, 5023.9923};
const std::vector<double> kLReference = {33.4589 / (1 + 4.18e-05), 98.4204 / (1 + 3.76e-05),
                                         380.9735 / (1 + 4.78e-05), 397.9045 / (1 + 2.26e-05),
                                         682.1436 / (1 + 3.48e-05)};

Outcome square_triangles()
{
  const auto t0 = Clock::now();
  Outcome o;
  const std::vector<std::pair<int, const std::vector<double> *>> cols = {
      {8, &kSquareTri8}, {16, &kSquareTri16}, {32, &kSquareTri32}};
  std::string worst;
  for (const auto &[n, printed] : cols)
  {
    const Solved s = solve_structured(Domain::UnitSquare, CellKind::Triangle, n, 2);
    const double rel = max_relative(s.lambda, *printed);
    detail(fmt::format("h=1/{} n_V={} lambda = {} | printed {} | max rel diff {:.2e} ({:.1f} s)", n, s.n_V,
                       join(s.lambda), join(*printed), rel, s.seconds));
    o.pass = o.pass && rel <= 1e-3;
    worst += fmt::format("{}1/{}: {:.1e}", worst.empty() ? "" : ", ", n, rel);
  }
  const double total = seconds_since(t0);
  o.pass = o.pass && total < 300.0;
  o.summary = fmt::format("unit square, triangles, p=2: max rel diff per h {} (tol 1e-3), {:.0f} s", worst, total);
  return o;
}

Outcome lshape_triangles()
{
  Outcome o;
  std::vector<double> errs, hs;
  double lambda32 = 0.0;
  for (int n : {8, 16, 32})
  {
    const Solved s = solve_structured(Domain::LShape, CellKind::Triangle, n, 2);
    errs.push_back(std::abs(s.lambda[0] - kLReference[0]) / kLReference[0]);
    hs.push_back(1.0 / n);
    detail(fmt::format("h=1/{} lambda_1 = {:.6f} relerr {:.3e} ({:.1f} s)", n, s.lambda[0], errs.back(), s.seconds));
    lambda32 = s.lambda[0];
  }
  const auto rates = convergence_rate(errs, hs, RateMode::H);
  const double rel = std::abs(lambda32 - 33.4664) / 33.4664;
  bool below_two = true;
  std::string rate_text;
  for (const auto &r : rates)
  {
    if (r)
    {
      below_two = below_two && *r < 2.0;
      rate_text += fmt::format("{}{:.2f}", rate_text.empty() ? "" : ", ", *r);
    }
  }
  o.pass = rel <= 1e-3 && below_two;
  o.summary = fmt::format("L-shape, triangles: lambda_1(1/32) = {:.4f} vs 33.4664 rel {:.1e} (tol 1e-3); rates {} (< 2)",
                          lambda32, rel, rate_text);
  return o;
}

Outcome quadrilaterals()
{
  Outcome o;
  struct Pair
  {
    Domain domain;
    int coarse, fine;
    const std::vector<double> *printed_coarse, *printed_fine, *printed_rate, *reference;
  };
  std::string text;
  for (const Pair &c : {Pair{Domain::UnitSquare, 40, 80, &kSquareQuad40, &kSquareQuad80, &kSquareQuadRate80,
                             &kSquareReference},
                        Pair{Domain::LShape, 32, 64, &kLQuad32, &kLQuad64, &kLQuadRate64, &kLReference}})
  {
    const Solved a = solve_structured(c.domain, CellKind::Quadrilateral, c.coarse, 2);
    const Solved b = solve_structured(c.domain, CellKind::Quadrilateral, c.fine, 2);
    const double ra = max_relative(a.lambda, *c.printed_coarse);
    const double rb = max_relative(b.lambda, *c.printed_fine);
    detail(fmt::format("{} h=1/{} n_V={} lambda = {} | printed {} | max rel diff {:.2e} ({:.1f} s)",
                       to_string(c.domain), c.coarse, a.n_V, join(a.lambda), join(*c.printed_coarse), ra, a.seconds));
    detail(fmt::format("{} h=1/{} n_V={} lambda = {} | printed {} | max rel diff {:.2e} ({:.1f} s)",
                       to_string(c.domain), c.fine, b.n_V, join(b.lambda), join(*c.printed_fine), rb, b.seconds));
    const std::vector<double> ea = relative_errors(a.lambda, *c.reference);
    const std::vector<double> eb = relative_errors(b.lambda, *c.reference);
    double rate_dev = 0.0;
    std::vector<double> rates;
    for (std::size_t i = 0; i < ea.size(); ++i)
    {
      const double r = std::log(ea[i] / eb[i]) / std::log(2.0);
      rates.push_back(r);
      rate_dev = std::max(rate_dev, std::abs(r - (*c.printed_rate)[i]));
    }
    detail(fmt::format("{} rates {} | printed {} | max deviation {:.2f}", to_string(c.domain),
                       join(rates, "{:.3f}"), join(*c.printed_rate, "{:.4f}"), rate_dev));
    o.pass = o.pass && ra <= 5e-3 && rb <= 5e-3 && rate_dev <= 0.35;
    text += fmt::format("{}{} rel {:.1e}/{:.1e}, rate dev {:.2f}", text.empty() ? "" : "; ", to_string(c.domain), ra,
                        rb, rate_dev);
  }
  o.summary = fmt::format("quadrilaterals, two finest affordable meshes: {} (tol 5e-3, rate +-0.35)", text);
  return o;
}

Outcome degree_sweep()
{
  const auto t0 = Clock::now();
  Outcome o;
  std::vector<double> errs, ps;
  for (int p = 2; p <= 5; ++p)
  {
    const Solved s = solve_structured(Domain::UnitSquare, CellKind::Triangle, 8, p);
    errs.push_back(std::abs(s.lambda[0] - 707.9715) / 707.9715);
    ps.push_back(p);
    detail(fmt::format("p={} n_V={} lambda_1 = {:.6f} relerr {:.3e} ({:.1f} s)", p, s.n_V, s.lambda[0], errs.back(),
                       s.seconds));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < errs.size(); ++i)
  {
    decreasing = decreasing && errs[i] < errs[i - 1];
  }
  const auto r = fitted_rate(errs, ps, RateMode::P);
  const double total = seconds_since(t0);
  o.pass = decreasing && r && *r >= 1.5 && *r <= 3.5 && total < 600.0;
  o.summary = fmt::format("unit square h=1/8 p=2..5: errors {}decreasing, fitted r = {:.2f} (in [1.5, 3.5]), {:.0f} s",
                          decreasing ? "strictly " : "not ", r.value_or(NAN), total);
  return o;
}

Outcome cube()
{
  Outcome o;
  const std::vector<std::pair<int, double>> printed = {{5, 168.4810}, {6, 112.2701}};
  std::string text;
  for (const auto &[p, value] : printed)
  {
    const Solved s = solve_structured(Domain::Cube, CellKind::Tetrahedron, 1, p);
    const double rel = std::abs(s.lambda[0] - value) / value;
    detail(fmt::format("p={} n_V={} lambda = {} | printed lambda_1 {} | rel {:.2e} ({:.1f} s)", p, s.n_V,
                       join(s.lambda), value, rel, s.seconds));
    o.pass = o.pass && rel <= 1e-2;
    text += fmt::format("{}p={} {:.4f} vs {} rel {:.1e}", text.empty() ? "" : ", ", p, s.lambda[0], value, rel);
  }
  o.summary = fmt::format("cube, 6 tetrahedra: {} (tol 1e-2)", text);
  return o;
}

Outcome manufactured()
{
  Outcome o;
  const ManufacturedSolution ms(3);
  std::string text;
  for (int p : {2, 3})
  {
    std::vector<double> errs, hs;
    for (int n : {1, 2, 4, 8})
    {
      const Mesh mesh = build_structured_mesh(Domain::Square, CellKind::Triangle, n);
      const AssembledSystem sys = assemble_system(mesh, p, default_penalties(2), false);
      const Vector load = assemble_load(*sys.space, [&](const Vec3 &x) { return ms.source(x); }, ms.degree());
      const Vector w = solve_source(sys, load);
      errs.push_back(dg_error(*sys.space, w, [&](const Vec3 &x) { return ms.exact(x); }).norm());
      hs.push_back(1.0 / n);
    }
    const auto rates = convergence_rate(errs, hs, RateMode::H);
    const auto fit = fitted_rate(errs, hs, RateMode::H);
    std::vector<double> shown;
    for (const auto &r : rates)
    {
      if (r)
      {
        shown.push_back(*r);
      }
    }
    detail(fmt::format("p={} DG-norm errors {} rates {} fitted {:.3f}", p, join(errs, "{:.3e}"),
                       join(shown, "{:.3f}"), fit.value_or(NAN)));
    o.pass = o.pass && fit && std::abs(*fit - (p - 1)) <= 0.3;
    text += fmt::format("{}p={} rate {:.2f} (target {})", text.empty() ? "" : ", ", p, fit.value_or(NAN), p - 1);
  }
  o.summary = fmt::format("manufactured source on (-1,1)^2, n=1..8: {} (tol 0.3)", text);
  return o;
}

double max_abs_entry(const SparseMatrix &m)
{
  double out = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
    {
      out = std::max(out, std::abs(it.value()));
    }
  }
  return out;
}

std::string failing(const std::vector<CheckReport> &reports)
{
  std::string out;
  for (const CheckReport &r : reports)
  {
    if (r.role == CheckRole::Check && !r.pass)
    {
      out += (out.empty() ? "" : "; ") + r.check + " " + r.mesh + " p=" + std::to_string(r.p);
    }
  }
  return out.empty() ? "none" : out;
}

double max_observed(const std::vector<CheckReport> &reports, const std::string &name)
{
  double m = 0.0;
  for (const CheckReport &r : reports)
  {
    if (r.role == CheckRole::Check && r.check == name)
    {
      m = std::max(m, r.observed);
    }
  }
  return m;
}

Outcome properties()
{
  Outcome o;
  std::vector<CheckReport> reports;
  for (const char *suite : {"consistency", "galerkin", "jumps"})
  {
    for (CheckReport &r : run_battery(BatteryOptions{suite}))
    {
      reports.push_back(std::move(r));
    }
  }
  const bool battery = battery_passed(reports);
  detail(fmt::format("battery: {} reports, max consistency {:.2e} (tol 1e-8), max galerkin {:.2e} (tol 1e-10), "
                     "failing: {}",
                     reports.size(), max_observed(reports, "consistency"), max_observed(reports, "galerkin"),
                     failing(reports)));

  std::vector<Mesh> meshes = {build_structured_mesh(Domain::Square, CellKind::Triangle, 1),
                              build_structured_mesh(Domain::LShape, CellKind::Quadrilateral, 1),
                              build_structured_mesh(Domain::Cube, CellKind::Tetrahedron, 1)};
  {
    const std::vector<int> marked = {0, 5};
    meshes.push_back(build_hanging_mesh(build_structured_mesh(Domain::Square, CellKind::Triangle, 1), marked).mesh);
  }
  double sym = 0.0, constraint = 0.0, ortho = 0.0, shift = 0.0, oracle = 0.0;
  for (const Mesh &mesh : meshes)
  {
    const int p = mesh.dim == 3 ? 3 : 2;
    const AssembledSystem sys = assemble_system(mesh, p, default_penalties(mesh.dim));
    if (sys.n_V() + sys.n_U() > kDenseLimit)
    {
      throw std::logic_error("acceptance: oracle system too large");
    }
    for (const SparseMatrix *m : {&sys.A, &sys.M, &sys.Atilde})
    {
      const SparseMatrix mt = m->transpose();
      sym = std::max(sym, max_abs_entry(*m - mt) / max_abs_entry(*m));
    }
    const std::vector<EigenPair> pairs = solve_eigs(sys, 5);
    EigenOptions full;
    full.use_full_form = true;
    const std::vector<EigenPair> shifted = solve_eigs(sys, 5, full);
    const std::vector<double> dense = dense_oracle_eigs(sys, 5);
    Matrix U(sys.n_V(), pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
    {
      U.col(i) = pairs[i].u;
      constraint = std::max(constraint, pairs[i].constraint_residual);
      shift = std::max(shift, std::abs(shifted[i].lambda - pairs[i].lambda - 1.0) / shifted[i].lambda);
      oracle = std::max(oracle, std::abs(pairs[i].lambda - dense[i]) / dense[i]);
    }
    const Matrix G = U.transpose() * (sys.M * U);
    ortho = std::max(ortho, (G - Matrix::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff());
    detail(fmt::format("{} {} p={} n_V={} n_U={}: lambda = {}", to_string(mesh.kind()), mesh.is_conforming() ? "conforming" : "hanging", p,
                       sys.n_V(), sys.n_U(), join(std::vector<double>(dense.begin(), dense.end()))));
  }
  detail(fmt::format("symmetry {:.1e} (1e-12), constraint residual {:.1e} (1e-8), M-orthonormality {:.1e} (1e-9), "
                     "shift identity {:.1e} (1e-9), dense oracle {:.1e} (1e-9)",
                     sym, constraint, ortho, shift, oracle));
  o.pass = battery && sym <= 1e-12 && constraint <= 1e-8 && ortho <= 1e-9 && shift <= 1e-9 && oracle <= 1e-9;
  o.summary = fmt::format("property battery {} and eigen identities: sym {:.0e}, constraint {:.0e}, ortho {:.0e}, "
                          "shift {:.0e}, oracle {:.0e}",
                          battery ? "passes" : "fails", sym, constraint, ortho, shift, oracle);
  return o;
}

Outcome stability()
{
  Outcome o;
  std::vector<CheckReport> reports;
  for (const char *suite : {"coercivity", "poincare"})
  {
    for (CheckReport &r : run_battery(BatteryOptions{suite}))
    {
      reports.push_back(std::move(r));
    }
  }
  double min_c0 = INFINITY;
  std::string ratios;
  for (const CheckReport &r : reports)
  {
    if (r.role != CheckRole::Check)
    {
      continue;
    }
    if (r.check == "coercivity")
    {
      min_c0 = std::min(min_c0, r.observed);
    }
    if (r.check.find("stability") != std::string::npos)
    {
      ratios += fmt::format("{}{} {:.2f}", ratios.empty() ? "" : ", ", r.check, r.observed);
      detail(fmt::format("{} ratio {:.3f} (<= 2) {}", r.check, r.observed, r.pass ? "ok" : "FAIL"));
    }
    else
    {
      detail(fmt::format("{} {} p={} observed {:.4g}{}", r.check, r.mesh, r.p, r.observed,
                         r.detail.empty() ? "" : " [" + r.detail + "]"));
    }
  }
  o.pass = battery_passed(reports) && min_c0 > 1e-3;
  o.summary = fmt::format("min sampled coercivity {:.3f} (> 1e-3); stability ratios {}; failing: {}", min_c0, ratios,
                          failing(reports));
  return o;
}

Outcome basis()
{
  Outcome o;
  const std::vector<CheckReport> reports = run_battery(BatteryOptions{"basis"});
  double projector = 0.0;
  int counts_ok = 0, demoted = 0;
  for (const CheckReport &r : reports)
  {
    if (r.check == "basis-counts" && r.pass)
    {
      ++counts_ok;
    }
    if (r.check == "projector")
    {
      projector = std::max(projector, r.observed);
    }
    if (r.role == CheckRole::Observation)
    {
      ++demoted;
      detail(fmt::format("demoted {} p={}: {}", r.check, r.p, r.detail));
    }
  }
  o.pass = battery_passed(reports) && counts_ok == 7 && projector <= 1e-12;
  o.summary = fmt::format("counts match for {}/7 degrees, projector error {:.1e} (1e-12), {} Gram reports demoted "
                          "with violating pairs listed",
                          counts_ok, projector, demoted);
  return o;
}

Outcome hanging()
{
  Outcome o;
  StudyConfig c = default_study(Domain::UnitSquare, CellKind::Triangle, SweepMode::H);
  c.hanging = true;
  c.levels = {0};
  const StudyResult r = run_study(c);
  const StudyRow &row = r.rows.at(0);
  bool agree = row.lambda.size() == kHangingSquare.size();
  for (std::size_t i = 0; agree && i < row.lambda.size(); ++i)
  {
    agree = agrees_to_two_digits(row.lambda[i], kHangingSquare[i]);
  }
  detail(fmt::format("{} | n_V = {} (published 7176) | lambda = {} | published {}", r.log.at(0), row.n_V,
                     join(row.lambda), join(kHangingSquare)));
  o.pass = agree;
  o.summary = fmt::format("hanging-node unit square, n_V = {}: two-digit agreement {}", row.n_V,
                          agree ? "for all five" : "fails");
  return o;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app("acceptance criteria");
  std::vector<int> selected;
  std::vector<int> known;
  app.add_option("criteria", selected, "criteria to run (default: all)")->check(CLI::Range(1, 10));
  app.add_option("--known-deviation", known, "criteria whose failure is documented; excluded from the exit status")
      ->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"square triangle table", square_triangles},
      {"L-shape triangle table", lshape_triangles},
      {"quadrilateral tables", quadrilaterals},
      {"p-sweep", degree_sweep},
      {"cube", cube},
      {"manufactured rates", manufactured},
      {"property battery", properties},
      {"stability", stability},
      {"hierarchical basis", basis},
      {"hanging-node demo", hanging},
  };
  if (selected.empty())
  {
    for (int i = 1; i <= 10; ++i)
    {
      selected.push_back(i);
    }
  }
  const std::set<int> known_set(known.begin(), known.end());
  int unexpected = 0;
  for (int id : selected)
  {
    const auto &[name, run] = criteria.at(id - 1);
    Outcome o;
    try
    {
      o = run();
    }
    catch (const std::exception &e)
    {
      o.pass = false;
      o.summary = std::string("error: ") + e.what();
    }
    const bool excused = !o.pass && known_set.count(id);
    std::cout << fmt::format("criterion {} {}: {}: {}{}\n", id, o.pass ? "PASS" : "FAIL", name, o.summary,
                             excused ? " [known deviation, see README]" : "")
              << std::flush;
    if (!o.pass && !excused)
    {
      ++unexpected;
    }
  }
  return unexpected == 0 ? 0 : 1;
}
