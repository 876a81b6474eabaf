// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line driver: eigenvalue studies, the verification battery, plots,
// mesh files and matrix dumps.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "quadcurl/assembly.hpp"
#include "quadcurl/mesh.hpp"
#include "quadcurl/study.hpp"
#include "quadcurl/verify.hpp"

namespace
{

using namespace quadcurl;

constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct MeshChoice
{
  CellKind kind = CellKind::Triangle;
  bool hanging = false;
};

MeshChoice parse_mesh_choice(const std::string &name, Domain domain)
{
  if (name.empty())
  {
    return {domain == Domain::Cube ? CellKind::Tetrahedron : CellKind::Triangle, false};
  }
  if (name == "hanging")
  {
    return {CellKind::Triangle, true};
  }
  return {parse_cell_kind(name), false};
}

// Writes to the named file, or stdout for "-" or an empty name.
template <class F>
void with_output(const std::string &path, F &&write)
{
  if (path.empty() || path == "-")
  {
    write(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os)
  {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  write(os);
}

PenaltyParameters penalties(Domain domain, const std::optional<double> &eta1, const std::optional<double> &eta2)
{
  PenaltyParameters eta = default_penalties(domain == Domain::Cube ? 3 : 2);
  if (eta1)
  {
    eta.eta1 = *eta1;
  }
  if (eta2)
  {
    eta.eta2 = *eta2;
  }
  return eta;
}

struct CommonOptions
{
  std::string domain = "unit-square";
  std::string mesh;
  std::optional<double> eta1, eta2;
  std::string out;
  unsigned seed = 20240607u;
};

void add_common(CLI::App *cmd, CommonOptions &o)
{
  cmd->add_option("--domain", o.domain, "square, unit-square, lshape or cube")
      ->check(CLI::IsMember({"square", "unit-square", "lshape", "cube"}));
  cmd->add_option("--mesh", o.mesh, "tri, quad, tet or hanging")
      ->check(CLI::IsMember({"tri", "triangle", "quad", "quadrilateral", "tet", "tetrahedron", "hanging"}));
  cmd->add_option("--eta1", o.eta1, "curl-jump penalty weight");
  cmd->add_option("--eta2", o.eta2, "tangential-jump penalty weight");
  cmd->add_option("--out", o.out, "output file (stdout when omitted)");
  cmd->add_option("--seed", o.seed, "random seed");
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"hp-IPDG quad-curl source and eigenvalue solver"};
  app.require_subcommand(1);

  CommonOptions study_common;
  int p = 2;
  std::optional<int> p_max;
  std::vector<int> levels;
  int num_eigs = 5;
  std::optional<double> target;
  long dof_budget = 400000;
  int jobs = 1;
  std::string plot_path;
  CLI::App *study = app.add_subcommand("study", "h- or p-sweep of the lowest eigenvalues, CSV output");
  add_common(study, study_common);
  study->add_option("--p", p, "polynomial degree (first degree of a p-sweep)")->check(CLI::Range(2, 12));
  study->add_option("--p-max", p_max, "last degree; a p-sweep when larger than --p")->check(CLI::Range(2, 12));
  study->add_option("--levels", levels, "structured mesh parameters n (h = 1/n; cube h = 2/n)")
      ->check(CLI::PositiveNumber);
  study->add_option("--num-eigs", num_eigs, "number of eigenvalues")->check(CLI::Range(1, 50));
  study->add_option("--target", target, "eigensolver shift");
  study->add_option("--dof-budget", dof_budget, "skip sweep points with more unknowns");
  study->add_option("--jobs", jobs, "concurrent sweep points")->check(CLI::Range(1, 64));
  study->add_option("--plot", plot_path, "also write an SVG plot of the errors");

  CommonOptions verify_common;
  std::string suite = "all";
  int samples = 200;
  CLI::App *verify = app.add_subcommand("verify", "property battery, CSV report");
  verify->add_option("--suite", suite, "all, consistency, coercivity, galerkin, poincare, basis or jumps");
  verify->add_option("--eta1", verify_common.eta1, "override eta1 (coercivity runs become controls)");
  verify->add_option("--eta2", verify_common.eta2, "override eta2 (coercivity runs become controls)");
  verify->add_option("--samples", samples, "random samples per check")->check(CLI::Range(100, 100000));
  verify->add_option("--out", verify_common.out, "output file (stdout when omitted)");
  verify->add_option("--seed", verify_common.seed, "random seed");

  std::string csv_path, plot_mode = "h", svg_path;
  CLI::App *plot = app.add_subcommand("plot", "SVG error plot from a study CSV");
  plot->add_option("csv", csv_path, "study CSV")->required();
  plot->add_option("--mode", plot_mode, "h (log-log) or p (semi-log)")->check(CLI::IsMember({"h", "p"}));
  plot->add_option("--out", svg_path, "SVG file (stdout when omitted)");

  CommonOptions mesh_common;
  int mesh_n = 1;
  CLI::App *mesh_cmd = app.add_subcommand("mesh", "write a structured or hanging-node mesh");
  add_common(mesh_cmd, mesh_common);
  mesh_cmd->add_option("--n", mesh_n, "structured mesh parameter")->check(CLI::PositiveNumber);
  mesh_cmd->add_option("--p", p, "degree used to size a hanging-node mesh")->check(CLI::Range(2, 12));

  CommonOptions dump_common;
  int dump_n = 1;
  std::string matrix = "A";
  CLI::App *dump = app.add_subcommand("dump", "assemble and write a matrix in coordinate format");
  add_common(dump, dump_common);
  dump->add_option("--n", dump_n, "structured mesh parameter")->check(CLI::PositiveNumber);
  dump->add_option("--p", p, "polynomial degree")->check(CLI::Range(2, 12));
  dump->add_option("--matrix", matrix, "A, M, Atilde or B")->check(CLI::IsMember({"A", "M", "Atilde", "B"}));

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e);
    return kExitUsage;
  }

  try
  {
    if (study->parsed())
    {
      const Domain domain = parse_domain(study_common.domain);
      const MeshChoice mc = parse_mesh_choice(study_common.mesh, domain);
      if (domain == Domain::Cube && mc.kind != CellKind::Tetrahedron)
      {
        throw UsageError("the cube is meshed with tetrahedra only");
      }
      if (domain != Domain::Cube && mc.kind == CellKind::Tetrahedron)
      {
        throw UsageError("tetrahedra require --domain cube");
      }
      const bool p_sweep = (p_max && *p_max > p) || domain == Domain::Cube;
      StudyConfig config = default_study(domain, mc.kind, p_sweep ? SweepMode::P : SweepMode::H);
      config.hanging = mc.hanging;
      config.eta = penalties(domain, study_common.eta1, study_common.eta2);
      config.k = num_eigs;
      config.target = target;
      config.dof_budget = dof_budget;
      config.seed = study_common.seed;
      config.jobs = jobs;
      if (study->count("--p") || domain != Domain::Cube)
      {
        config.p = p;
      }
      config.p_max = p_max.value_or(config.mode == SweepMode::P ? std::max(config.p, config.p_max) : config.p);
      if (study->count("--levels"))
      {
        config.levels = levels;
      }
      else if (mc.hanging)
      {
        config.levels.clear();  // base mesh chosen from the DOF target
        if (config.mode == SweepMode::H)
        {
          config.levels = {0};
        }
      }
      const StudyResult result = run_study(config);
      for (const std::string &line : result.log)
      {
        std::cerr << line << '\n';
      }
      for (std::size_t i = 0; i < result.fitted_rates.size(); ++i)
      {
        if (result.fitted_rates[i])
        {
          std::cerr << fmt::format("fitted rate lambda_{}: {:.4f}\n", i + 1, *result.fitted_rates[i]);
        }
      }
      std::ostringstream csv;
      write_study_csv(csv, result);
      with_output(study_common.out, [&](std::ostream &os) { os << csv.str(); });
      if (!plot_path.empty())
      {
        std::istringstream in(csv.str());
        const auto rows = read_study_csv(in);
        with_output(plot_path, [&](std::ostream &os) { emit_plot(rows, config.mode, os); });
      }
      return 0;
    }
    if (verify->parsed())
    {
      const auto &suites = battery_suites();
      if (std::find(suites.begin(), suites.end(), suite) == suites.end())
      {
        throw UsageError("unknown suite '" + suite + "'");
      }
      BatteryOptions options;
      options.suite = suite;
      options.seed = verify_common.seed;
      options.samples = samples;
      if (verify_common.eta1 || verify_common.eta2)
      {
        options.eta = penalties(Domain::Square, verify_common.eta1, verify_common.eta2);
      }
      const std::vector<CheckReport> reports = run_battery(options);
      with_output(verify_common.out,
                  [&](std::ostream &os)
                  {
                    os << check_csv_header() << '\n';
                    for (const CheckReport &r : reports)
                    {
                      os << r.csv_row() << '\n';
                    }
                  });
      for (const CheckReport &r : reports)
      {
        if (r.role == CheckRole::Control && r.pass)
        {
          std::cerr << "warning: negative control passed: " << r.check << " on " << r.mesh << '\n';
        }
        if (r.role == CheckRole::Check && !r.pass)
        {
          std::cerr << "FAILED: " << r.check << " on " << r.mesh << " p=" << r.p << ": " << r.detail << '\n';
        }
        if (r.role == CheckRole::Observation)
        {
          std::cerr << "observation: " << r.check << " p=" << r.p << ": " << r.detail << '\n';
        }
      }
      return battery_passed(reports) ? 0 : kExitCheckFailure;
    }
    if (plot->parsed())
    {
      std::ifstream in(csv_path);
      if (!in)
      {
        throw UsageError("cannot open '" + csv_path + "'");
      }
      const auto rows = read_study_csv(in);
      with_output(svg_path, [&](std::ostream &os)
                  { emit_plot(rows, plot_mode == "h" ? SweepMode::H : SweepMode::P, os); });
      return 0;
    }
    if (mesh_cmd->parsed())
    {
      const Domain domain = parse_domain(mesh_common.domain);
      const MeshChoice mc = parse_mesh_choice(mesh_common.mesh, domain);
      const Mesh mesh = mc.hanging ? hanging_demo_mesh(domain, mesh_n, p, hanging_target_dofs(domain), mesh_common.seed)
                                   : build_structured_mesh(domain, mc.kind, mesh_n);
      with_output(mesh_common.out, [&](std::ostream &os) { write_mesh(os, mesh); });
      return 0;
    }
    if (dump->parsed())
    {
      const Domain domain = parse_domain(dump_common.domain);
      const MeshChoice mc = parse_mesh_choice(dump_common.mesh, domain);
      const Mesh mesh = mc.hanging ? hanging_demo_mesh(domain, dump_n, p, hanging_target_dofs(domain), dump_common.seed)
                                   : build_structured_mesh(domain, mc.kind, dump_n);
      const AssembledSystem sys =
          assemble_system(mesh, p, penalties(domain, dump_common.eta1, dump_common.eta2), matrix == "B");
      const SparseMatrix &m = matrix == "A" ? sys.A : matrix == "M" ? sys.M : matrix == "Atilde" ? sys.Atilde : sys.B;
      with_output(dump_common.out, [&](std::ostream &os) { write_matrix(os, m); });
      return 0;
    }
  }
  catch (const UsageError &e)
  {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  catch (const std::invalid_argument &e)
  {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailure;
  }
  return 0;
}
