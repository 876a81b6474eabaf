// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUADCURL_VERIFY_HPP
#define QUADCURL_VERIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "quadcurl/assembly.hpp"
#include "quadcurl/mesh.hpp"

namespace quadcurl
{

enum class CheckRole
{
  Check,        // counts toward the battery verdict
  Control,      // negative control, expected to fail
  Observation   // recorded only (e.g. a demoted orthogonality claim)
};

struct CheckReport
{
  std::string check;
  std::string mesh;
  int p = 0;
  PenaltyParameters eta;
  int samples = 0;
  double observed = 0.0;
  double threshold = 0.0;
  bool pass = false;
  CheckRole role = CheckRole::Check;
  std::string detail;  // free text, e.g. violating pairs

  /// `check,mesh,p,eta1,eta2,observed,threshold,pass`; controls and
  /// observations are prefixed `control:` / `observation:` in the check column.
  std::string csv_row() const;
};

std::string check_csv_header();

struct MeshCase
{
  std::string label;
  Mesh mesh;
};

MeshCase mesh_case(Domain domain, CellKind kind, int n);

/// max_i |a_h(w, phi_i) - (f, phi_i)| for the manufactured solution on the
/// square (-1,1)^2, with f integrated at degree 2p + 6. Threshold 1e-8.
/// exponent = 1 gives a field whose curl has a nonzero tangential trace.
CheckReport check_consistency(const MeshCase &mc, int p, int exponent = 3);

/// min over random v of v^T A v / ||v||_h^2, seeded; passes above 1e-3.
CheckReport check_coercivity(const MeshCase &mc, int p, PenaltyParameters eta, int samples = 200,
                             unsigned seed = 20240607u);

/// Solves the source problem, then max_i |a_h(w_h, phi_i) - (f, phi_i)| /
/// |load| <= 1e-10. load_perturbation is added to the first load entry after
/// the solve (negative control when nonzero).
CheckReport check_galerkin(const MeshCase &mc, int p, double load_perturbation = 0.0);

/// max over random v in ker B of ||v||_h / |v|_h (dense kernel basis).
/// Passes when finite; stability is judged across meshes by check_stability.
CheckReport check_poincare(const MeshCase &mc, int p, int samples = 200, unsigned seed = 20240607u);

/// Gram matrices of the hierarchical rectangle basis under (curl, curl) and
/// the tangential edge pairing; off-diagonals against 1e-12 times the
/// diagonal maximum. Violating family pairs are listed in detail and the
/// report is demoted to an observation.
std::vector<CheckReport> check_basis_orthogonality(int p);

/// Family counts of the hierarchical rectangle basis against the listing.
CheckReport check_basis_counts(int p);

/// Edge-mean interpolant from exact edge quadrature against a high-order
/// reference quadrature, maximum over a set of gradient fields.
CheckReport check_projector(int p);

/// Interior-face weighted jump terms of the L2 projection of a global
/// polynomial of degree p, relative to its DG norm. Threshold 1e-11.
/// perturb_cell >= 0 perturbs that cell's coefficients (negative control).
CheckReport check_jump_vanishing(const MeshCase &mc, int p, int perturb_cell = -1);

/// Ratio max/min of the observed values of the given reports against the
/// factor (2 by default).
CheckReport check_stability(const std::string &name, const std::vector<CheckReport> &reports,
                            double factor = 2.0);

struct BatteryOptions
{
  std::string suite = "all";  // all, consistency, coercivity, galerkin, poincare, basis, jumps
  std::optional<PenaltyParameters> eta;  // overrides the per-dimension defaults
  unsigned seed = 20240607u;
  int samples = 200;
};

/// Suites accepted by run_battery.
const std::vector<std::string> &battery_suites();

/// Standard battery: square triangles n = 1, 2, 4; square quads n = 1, 2; the
/// six-tetrahedron cube; p in {2, 3}. Throws std::invalid_argument for an
/// unknown suite.
std::vector<CheckReport> run_battery(const BatteryOptions &options);

/// True iff every report with role Check passes.
bool battery_passed(const std::vector<CheckReport> &reports);

}  // namespace quadcurl

#endif  // QUADCURL_VERIFY_HPP
