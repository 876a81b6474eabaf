// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUADCURL_STUDY_HPP
#define QUADCURL_STUDY_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quadcurl/assembly.hpp"
#include "quadcurl/mesh.hpp"

namespace quadcurl
{

enum class SweepMode
{
  H,  // refine the mesh at fixed p
  P   // raise p on a fixed mesh
};

struct StudyConfig
{
  Domain domain = Domain::UnitSquare;
  CellKind kind = CellKind::Triangle;
  bool hanging = false;  // locally refined triangles, see hanging_demo_mesh
  SweepMode mode = SweepMode::H;
  int p = 2;      // degree of an h-sweep, first degree of a p-sweep
  int p_max = 2;  // last degree of a p-sweep
  std::vector<int> levels;  // structured-mesh parameters n (h-sweep); first entry for a p-sweep
  PenaltyParameters eta;
  int k = 5;
  std::optional<double> target;  // eigensolver shift
  std::vector<double> reference;  // empty: reference_eigenvalues(domain)
  long dof_budget = 400000;       // skip points with more V_h unknowns
  int hanging_dofs = 0;           // 0: hanging_target_dofs(domain)
  unsigned seed = 20240607u;
  int jobs = 1;
};

/// Fills eta with the per-dimension defaults.
StudyConfig default_study(Domain domain, CellKind kind, SweepMode mode);

struct StudyRow
{
  double param = 0.0;  // h or p
  double h = 0.0;
  int p = 0;
  int n_V = 0;
  int n_U = 0;
  std::vector<double> lambda;
  std::vector<std::optional<double>> relerr;
  std::vector<std::optional<double>> rate;
  double seconds = 0.0;
  bool skipped = false;
  std::string note;
};

struct StudyResult
{
  std::vector<StudyRow> rows;
  std::vector<std::string> log;  // one line per point, with wall time or skip reason
  std::vector<std::optional<double>> fitted_rates;  // per eigenvalue index
};

/// Mesh size of build_structured_mesh(domain, kind, n): the leg length 1/n in
/// 2D, the subcube edge 2/n for the cube.
double structured_h(Domain domain, int n);

/// Published reference eigenvalues: the converged p-sweep on the unit square
/// (also used for (-1,1)^2 after scaling by 1/16), the values the L-shape
/// errors were measured against, and the highest published degree on the
/// cube. Empty when unknown.
std::vector<double> reference_eigenvalues(Domain domain);

/// Published values for the tabulated configurations, used by the regression
/// checks. Empty when the configuration has no published column.
struct PublishedColumn
{
  std::string label;
  std::vector<double> lambda;
};
std::optional<PublishedColumn> published_values(Domain domain, CellKind kind, double h, int p);

/// Published DOF count of the hanging-node demo (7176 square, 3816 L-shape).
int hanging_target_dofs(Domain domain);

/// Published two- or three-digit eigenvalues of the hanging-node demo.
std::vector<double> hanging_published_values(Domain domain);

/// True when |value - published| is below one unit in the second significant
/// digit of published.
bool agrees_to_two_digits(double value, double published);

/// Seeded local refinement of a structured triangle mesh (base n): cells are
/// marked one at a time in a shuffled order until the P_p space reaches
/// target_dofs unknowns.
Mesh hanging_demo_mesh(Domain domain, int n, int p, int target_dofs, unsigned seed);

/// Runs the sweep; rows are returned in sweep order.
StudyResult run_study(const StudyConfig &config);

/// `param,h,p,n_V,n_U,k,lambda,relerr,rate`, one line per eigenvalue and
/// computed point; blank fields where undefined. Skipped points are omitted.
void write_study_csv(std::ostream &os, const StudyResult &result);

/// Parsed long-format CSV (skipped columns allowed to be blank).
struct StudyCsvRow
{
  double param = 0.0;
  double h = 0.0;
  int p = 0;
  int k = 0;
  double lambda = 0.0;
  std::optional<double> relerr;
  std::optional<double> rate;
};

/// Throws std::runtime_error naming the offending line.
std::vector<StudyCsvRow> read_study_csv(std::istream &is);

struct PlotBounds
{
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;  // data units
};

/// Static SVG of relerr against h (log-log, with a slope guide from the
/// least-squares fit) or against p (semi-log), one series per eigenvalue.
/// Returns the axis bounds used.
PlotBounds emit_plot(const std::vector<StudyCsvRow> &rows, SweepMode mode, std::ostream &svg);

}  // namespace quadcurl

#endif  // QUADCURL_STUDY_HPP
