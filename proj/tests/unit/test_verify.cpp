// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "quadcurl/verify.hpp"

using namespace quadcurl;

TEST_CASE("consistency holds for the clamped field and fails for the control")
{
  const MeshCase mc = mesh_case(Domain::Square, CellKind::Triangle, 1);
  CHECK(mc.label == "square-tri-n1");
  const CheckReport ok = check_consistency(mc, 2);
  CHECK(ok.pass);
  CHECK(ok.observed <= 1e-8);
  CHECK(ok.role == CheckRole::Check);
  const CheckReport control = check_consistency(mc, 2, 1);
  CHECK(control.role == CheckRole::Control);
  CHECK_FALSE(control.pass);
  CHECK(control.observed > 1e-4);
}

TEST_CASE("coercivity at the default penalties and a tiny-penalty control")
{
  const MeshCase mc = mesh_case(Domain::Square, CellKind::Triangle, 2);
  const CheckReport ok = check_coercivity(mc, 2, default_penalties(2), 100);
  CHECK(ok.pass);
  CHECK(ok.observed > 1e-3);
  const CheckReport weak = check_coercivity(mc, 2, PenaltyParameters{1e-6, 1e-6}, 100);
  CHECK_FALSE(weak.pass);
}

TEST_CASE("Galerkin orthogonality and its perturbed control")
{
  const MeshCase mc = mesh_case(Domain::LShape, CellKind::Quadrilateral, 1);
  CHECK(check_galerkin(mc, 2).pass);
  CHECK_FALSE(check_galerkin(mc, 2, 1e-3).pass);
}

TEST_CASE("jumps of global polynomials vanish")
{
  const MeshCase mc = mesh_case(Domain::Cube, CellKind::Tetrahedron, 1);
  CHECK(check_jump_vanishing(mc, 2).pass);
  CHECK_FALSE(check_jump_vanishing(mc, 2, 0).pass);
}

TEST_CASE("Poincare ratio is finite and at least one")
{
  const CheckReport r = check_poincare(mesh_case(Domain::Square, CellKind::Triangle, 1), 2, 50);
  CHECK(r.pass);
  CHECK(r.observed >= 1.0);
}

TEST_CASE("rectangle basis checks")
{
  for (int p = 2; p <= 8; ++p)
  {
    CHECK(check_basis_counts(p).pass);
    const CheckReport pi = check_projector(p);
    CHECK(pi.pass);
    CHECK(pi.observed <= 1e-12);
  }
  for (const CheckReport &r : check_basis_orthogonality(3))
  {
    // Either orthogonal, or demoted with the violating pairs listed.
    CHECK((r.pass || (r.role == CheckRole::Observation && !r.detail.empty())));
  }
}

TEST_CASE("stability ratio")
{
  CheckReport a, b;
  a.observed = 1.0;
  b.observed = 1.5;
  CHECK(check_stability("s", {a, b}).pass);
  b.observed = 3.0;
  const CheckReport bad = check_stability("s", {a, b});
  CHECK_FALSE(bad.pass);
  CHECK(bad.observed == doctest::Approx(3.0));
}

TEST_CASE("report rows and battery bookkeeping")
{
  CHECK(check_csv_header() == "check,mesh,p,eta1,eta2,observed,threshold,pass");
  CheckReport r;
  r.check = "x";
  r.mesh = "m";
  r.role = CheckRole::Control;
  CHECK(r.csv_row().rfind("control:x,m,", 0) == 0);
  r.role = CheckRole::Observation;
  CHECK(r.csv_row().rfind("observation:x,", 0) == 0);

  const auto &suites = battery_suites();
  CHECK(std::find(suites.begin(), suites.end(), "all") != suites.end());
  CHECK_THROWS_AS(run_battery(BatteryOptions{"nope"}), std::invalid_argument);

  CheckReport pass_check, fail_control;
  pass_check.pass = true;
  fail_control.role = CheckRole::Control;
  CHECK(battery_passed({pass_check, fail_control}));
  CheckReport fail_check;
  CHECK_FALSE(battery_passed({pass_check, fail_check}));

  const std::vector<CheckReport> basis = run_battery(BatteryOptions{"basis"});
  CHECK_FALSE(basis.empty());
  CHECK(battery_passed(basis));
}
