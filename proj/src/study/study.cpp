// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include "quadcurl/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "quadcurl/eigsolve.hpp"

namespace quadcurl
{

namespace
{

int local_dofs(CellKind kind, int p)
{
  const int d = cell_dim(kind);
  return d == 2 ? 2 * (p + 1) * (p + 2) / 2 : 3 * (p + 1) * (p + 2) * (p + 3) / 6;
}

// Largest structured n whose conforming mesh stays at or below target.
int hanging_base(Domain domain, int p, int target)
{
  int n = 1;
  while (static_cast<long>(build_structured_mesh(domain, CellKind::Triangle, 2 * n).cells.size()) *
             local_dofs(CellKind::Triangle, p) <=
         target)
  {
    n *= 2;
  }
  return n;
}

Mesh point_mesh(const StudyConfig &config, int n, int p)
{
  if (config.hanging)
  {
    const int target = config.hanging_dofs > 0 ? config.hanging_dofs : hanging_target_dofs(config.domain);
    return hanging_demo_mesh(config.domain, n > 0 ? n : hanging_base(config.domain, p, target), p, target,
                             config.seed);
  }
  return build_structured_mesh(config.domain, config.kind, n);
}

StudyRow compute_point(const StudyConfig &config, int n, int p, const std::vector<double> &reference)
{
  const auto start = std::chrono::steady_clock::now();
  StudyRow row;
  row.p = p;
  const Mesh mesh = point_mesh(config, n, p);
  row.h = config.hanging ? mesh.max_h() / std::sqrt(2.0) : structured_h(config.domain, n);
  row.param = config.mode == SweepMode::H ? row.h : p;
  row.n_V = static_cast<int>(mesh.cells.size()) * local_dofs(mesh.kind(), p);
  if (row.n_V > config.dof_budget)
  {
    row.skipped = true;
    row.note = fmt::format("n_V = {} exceeds the DOF budget {}", row.n_V, config.dof_budget);
    return row;
  }
  const AssembledSystem sys = assemble_system(mesh, p, config.eta);
  row.n_V = sys.n_V();
  row.n_U = sys.n_U();
  EigenOptions options;
  options.shift = config.target;
  options.seed = config.seed;
  SolveReport report;
  const std::vector<EigenPair> pairs = solve_eigs(sys, config.k, options, &report);
  for (std::size_t i = 0; i < pairs.size(); ++i)
  {
    row.lambda.push_back(pairs[i].lambda);
    if (i < reference.size() && reference[i] > 0.0)
    {
      row.relerr.emplace_back(std::abs(pairs[i].lambda - reference[i]) / reference[i]);
    }
    else
    {
      row.relerr.emplace_back();
    }
  }
  if (!report.converged)
  {
    row.note = "eigensolver did not converge; partial results";
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::string format_optional(const std::optional<double> &v, const char *spec)
{
  return v ? fmt::format(fmt::runtime(spec), *v) : std::string();
}

std::optional<double> parse_optional(const std::string &field, int line)
{
  if (field.empty())
  {
    return std::nullopt;
  }
  try
  {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size())
    {
      throw std::invalid_argument(field);
    }
    return v;
  }
  catch (const std::exception &)
  {
    throw std::runtime_error(fmt::format("line {}: cannot parse number '{}'", line, field));
  }
}

}  // namespace

double structured_h(Domain domain, int n)
{
  return domain == Domain::Cube ? 2.0 / n : 1.0 / n;
}

StudyConfig default_study(Domain domain, CellKind kind, SweepMode mode)
{
  StudyConfig c;
  c.domain = domain;
  c.kind = kind;
  c.mode = mode;
  c.eta = default_penalties(domain == Domain::Cube ? 3 : 2);
  if (domain == Domain::Cube)
  {
    c.kind = CellKind::Tetrahedron;
    c.levels = {1};
    c.p = 5;
    c.p_max = 6;
    c.mode = SweepMode::P;
  }
  else if (mode == SweepMode::P)
  {
    c.levels = {domain == Domain::Square ? 4 : 8};
    c.p = 2;
    c.p_max = 5;
  }
  else if (kind == CellKind::Quadrilateral && domain != Domain::LShape)
  {
    c.levels = domain == Domain::Square ? std::vector<int>{5, 10, 20} : std::vector<int>{10, 20, 40};
  }
  else
  {
    c.levels = domain == Domain::Square ? std::vector<int>{4, 8, 16} : std::vector<int>{8, 16, 32};
  }
  return c;
}

Mesh hanging_demo_mesh(Domain domain, int n, int p, int target_dofs, unsigned seed)
{
  const Mesh base = build_structured_mesh(domain, CellKind::Triangle, n);
  std::vector<int> order(base.cells.size());
  for (std::size_t i = 0; i < order.size(); ++i)
  {
    order[i] = static_cast<int>(i);
  }
  std::mt19937 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const int per_cell = local_dofs(CellKind::Triangle, p);
  std::vector<int> marked;
  Mesh mesh = base;
  for (int c : order)
  {
    if (static_cast<long>(mesh.cells.size()) * per_cell >= target_dofs)
    {
      break;
    }
    marked.push_back(c);
    mesh = build_hanging_mesh(base, marked).mesh;
  }
  return mesh;
}

StudyResult run_study(const StudyConfig &config)
{
  if (config.k < 1)
  {
    throw std::invalid_argument("run_study: k must be positive");
  }
  const std::vector<double> reference =
      config.reference.empty() ? reference_eigenvalues(config.domain) : config.reference;
  // Sweep points as (n, p).
  std::vector<std::pair<int, int>> points;
  if (config.mode == SweepMode::H)
  {
    for (int n : config.levels)
    {
      points.emplace_back(n, config.p);
    }
  }
  else if (!config.levels.empty() || config.hanging)
  {
    const int n = config.levels.empty() ? 0 : config.levels.front();
    for (int p = config.p; p <= config.p_max; ++p)
    {
      points.emplace_back(n, p);
    }
  }
  StudyResult result;
  result.rows.resize(points.size());
  std::vector<std::string> errors(points.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]
  {
    for (std::size_t i = next++; i < points.size(); i = next++)
    {
      try
      {
        result.rows[i] = compute_point(config, points[i].first, points[i].second, reference);
      }
      catch (const std::exception &e)
      {
        errors[i] = e.what();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(points.size())));
  std::vector<std::thread> threads;
  for (int j = 1; j < jobs; ++j)
  {
    threads.emplace_back(worker);
  }
  worker();
  for (auto &t : threads)
  {
    t.join();
  }
  for (std::size_t i = 0; i < points.size(); ++i)
  {
    if (!errors[i].empty())
    {
      throw std::runtime_error(fmt::format("study point n={} p={}: {}", points[i].first, points[i].second,
                                           errors[i]));
    }
    const StudyRow &row = result.rows[i];
    if (row.skipped)
    {
      result.log.push_back(fmt::format("skipped n={} p={}: {}", points[i].first, points[i].second, row.note));
    }
    else
    {
      result.log.push_back(fmt::format("n={} p={} h={:g} n_V={} n_U={} time {:.2f} s{}", points[i].first,
                                       row.p, row.h, row.n_V, row.n_U, row.seconds,
                                       row.note.empty() ? "" : " (" + row.note + ")"));
    }
  }
  // Rates over consecutive computed rows.
  std::vector<StudyRow *> computed;
  for (StudyRow &row : result.rows)
  {
    if (!row.skipped)
    {
      computed.push_back(&row);
    }
  }
  const RateMode mode = config.mode == SweepMode::H ? RateMode::H : RateMode::P;
  for (StudyRow *row : computed)
  {
    row->rate.assign(row->lambda.size(), std::nullopt);
  }
  for (int i = 0; i < config.k; ++i)
  {
    std::vector<double> errs, params;
    std::vector<StudyRow *> owners;
    for (StudyRow *row : computed)
    {
      if (i < static_cast<int>(row->relerr.size()) && row->relerr[i])
      {
        errs.push_back(*row->relerr[i]);
        params.push_back(row->param);
        owners.push_back(row);
      }
    }
    const auto rates = convergence_rate(errs, params, mode);
    for (std::size_t j = 0; j < owners.size(); ++j)
    {
      owners[j]->rate[i] = rates[j];
    }
    result.fitted_rates.push_back(errs.size() >= 2 ? fitted_rate(errs, params, mode) : std::nullopt);
  }
  return result;
}

void write_study_csv(std::ostream &os, const StudyResult &result)
{
  os << "param,h,p,n_V,n_U,k,lambda,relerr,rate\n";
  for (const StudyRow &row : result.rows)
  {
    if (row.skipped)
    {
      continue;
    }
    for (std::size_t i = 0; i < row.lambda.size(); ++i)
    {
      os << fmt::format("{:.10g},{:.10g},{},{},{},{},{:.10g},{},{}\n", row.param, row.h, row.p, row.n_V,
                        row.n_U, i + 1, row.lambda[i], format_optional(row.relerr[i], "{:.6e}"),
                        format_optional(i < row.rate.size() ? row.rate[i] : std::nullopt, "{:.4f}"));
    }
  }
}

std::vector<StudyCsvRow> read_study_csv(std::istream &is)
{
  std::vector<StudyCsvRow> rows;
  std::string line;
  int number = 0;
  bool header = false;
  while (std::getline(is, line))
  {
    ++number;
    if (!line.empty() && line.back() == '\r')
    {
      line.pop_back();
    }
    if (line.empty())
    {
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
    {
      fields.push_back(field);
    }
    if (line.back() == ',')
    {
      fields.emplace_back();
    }
    if (!header)
    {
      if (line != "param,h,p,n_V,n_U,k,lambda,relerr,rate")
      {
        throw std::runtime_error(fmt::format("line {}: expected the study CSV header", number));
      }
      header = true;
      continue;
    }
    if (fields.size() != 9)
    {
      throw std::runtime_error(fmt::format("line {}: expected 9 fields, found {}", number, fields.size()));
    }
    StudyCsvRow row;
    const auto required = [&](int idx)
    {
      const auto v = parse_optional(fields[idx], number);
      if (!v)
      {
        throw std::runtime_error(fmt::format("line {}: field {} is empty", number, idx + 1));
      }
      return *v;
    };
    row.param = required(0);
    row.h = required(1);
    row.p = static_cast<int>(required(2));
    row.k = static_cast<int>(required(5));
    row.lambda = required(6);
    row.relerr = parse_optional(fields[7], number);
    row.rate = parse_optional(fields[8], number);
    rows.push_back(row);
  }
  if (!header)
  {
    throw std::runtime_error("line 1: empty input, expected the study CSV header");
  }
  return rows;
}

}  // namespace quadcurl
