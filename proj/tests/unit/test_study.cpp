// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <regex>
#include <sstream>
#include <string>

#include "quadcurl/study.hpp"

using namespace quadcurl;

namespace
{

StudyResult handmade_result()
{
  StudyResult r;
  for (int i = 0; i < 3; ++i)
  {
    StudyRow row;
    row.h = 1.0 / (4 << i);
    row.param = row.h;
    row.p = 2;
    row.n_V = 100 * (i + 1);
    row.n_U = 10 * (i + 1);
    row.lambda = {10.0 + std::pow(0.25, i), 20.0};
    row.relerr = {0.1 * std::pow(0.25, i), std::nullopt};
    row.rate = {i == 0 ? std::nullopt : std::optional<double>(2.0), std::nullopt};
    r.rows.push_back(row);
  }
  StudyRow skipped;
  skipped.skipped = true;
  r.rows.push_back(skipped);
  return r;
}

int count(const std::string &text, const std::string &needle)
{
  int n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
  {
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("study CSV round trip")
{
  std::stringstream ss;
  write_study_csv(ss, handmade_result());
  const std::string text = ss.str();
  CHECK(text.rfind("param,h,p,n_V,n_U,k,lambda,relerr,rate\n", 0) == 0);
  CHECK(count(text, "\n") == 1 + 3 * 2);
  const std::vector<StudyCsvRow> rows = read_study_csv(ss);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].k == 1);
  CHECK(rows[1].k == 2);
  CHECK(rows[0].h == doctest::Approx(0.25));
  CHECK(rows[2].lambda == doctest::Approx(10.25));
  CHECK(*rows[2].relerr == doctest::Approx(0.025));
  CHECK_FALSE(rows[0].rate.has_value());
  CHECK(*rows[2].rate == doctest::Approx(2.0));
  CHECK_FALSE(rows[3].relerr.has_value());
}

TEST_CASE("empty sweeps give a header-only CSV")
{
  std::stringstream ss;
  write_study_csv(ss, StudyResult{});
  CHECK(ss.str() == "param,h,p,n_V,n_U,k,lambda,relerr,rate\n");
  CHECK(read_study_csv(ss).empty());
}

TEST_CASE("CSV errors name the line")
{
  const auto message = [](const std::string &text)
  {
    std::istringstream is(text);
    try
    {
      read_study_csv(is);
    }
    catch (const std::runtime_error &e)
    {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("").find("line 1") != std::string::npos);
  CHECK(message("h,lambda\n").find("line 1") != std::string::npos);
  CHECK(message("param,h,p,n_V,n_U,k,lambda,relerr,rate\n1,1,2,3,4,1,5,,\n1,1,2,3,4,1,x,,\n").find("line 3") !=
        std::string::npos);
  CHECK(message("param,h,p,n_V,n_U,k,lambda,relerr,rate\n1,1,2\n").find("line 2") != std::string::npos);
}

TEST_CASE("SVG plot")
{
  std::stringstream csv;
  write_study_csv(csv, handmade_result());
  const std::vector<StudyCsvRow> rows = read_study_csv(csv);
  std::ostringstream svg;
  const PlotBounds b = emit_plot(rows, SweepMode::H, svg);
  const std::string text = svg.str();
  CHECK(text.rfind("<svg", 0) == 0);
  CHECK(text.find("</svg>") != std::string::npos);
  CHECK(count(text, "class=\"point\"") == 3);
  CHECK(count(text, "class=\"plot-area\"") == 1);
  CHECK(text.find("rate 2.00") != std::string::npos);
  // Decade-aligned error axis containing the data.
  CHECK(b.y_min <= 0.1 * 0.0625);
  CHECK(b.y_max >= 0.1);
  CHECK(std::abs(std::log10(b.y_min) - std::round(std::log10(b.y_min))) < 1e-12);
  CHECK(std::abs(std::log10(b.y_max) - std::round(std::log10(b.y_max))) < 1e-12);
  CHECK(b.x_min <= 1.0 / 16);
  CHECK(b.x_max >= 0.25);
  // Points fall inside the plot area.
  const std::regex circle("cx=\"([0-9.]+)\" cy=\"([0-9.]+)\"");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), circle); it != std::sregex_iterator(); ++it)
  {
    const double cx = std::stod((*it)[1]), cy = std::stod((*it)[2]);
    CHECK(cx >= 70.0);
    CHECK(cx <= 510.0);
    CHECK(cy >= 30.0);
    CHECK(cy <= 370.0);
  }
  std::ostringstream empty;
  emit_plot({}, SweepMode::P, empty);
  CHECK(count(empty.str(), "class=\"point\"") == 0);
}

TEST_CASE("published values and references")
{
  CHECK(structured_h(Domain::UnitSquare, 8) == doctest::Approx(0.125));
  CHECK(structured_h(Domain::Cube, 1) == doctest::Approx(2.0));
  const auto col = published_values(Domain::UnitSquare, CellKind::Triangle, 1.0 / 32, 2);
  REQUIRE(col.has_value());
  CHECK(col->lambda[0] == doctest::Approx(708.32));
  CHECK(published_values(Domain::UnitSquare, CellKind::Triangle, 1.0 / 8, 5)->lambda[0] ==
        doctest::Approx(707.971329));
  CHECK(published_values(Domain::Cube, CellKind::Tetrahedron, 2.0, 6)->lambda[0] == doctest::Approx(112.2701));
  CHECK_FALSE(published_values(Domain::Square, CellKind::Triangle, 1.0 / 8, 2).has_value());
  CHECK(reference_eigenvalues(Domain::Square)[0] * 16 == doctest::Approx(707.9715));
  CHECK(hanging_target_dofs(Domain::UnitSquare) == 7176);
  CHECK(hanging_target_dofs(Domain::LShape) == 3816);
}

TEST_CASE("two-digit agreement")
{
  CHECK(agrees_to_two_digits(709.67, 7.0e2));
  CHECK(agrees_to_two_digits(2365.4, 2.3e3));
  CHECK_FALSE(agrees_to_two_digits(720.0, 7.0e2));
  CHECK_FALSE(agrees_to_two_digits(35.0, 33.0));
  CHECK(agrees_to_two_digits(33.9, 33.0));
}

TEST_CASE("small sweeps")
{
  StudyConfig c = default_study(Domain::Square, CellKind::Triangle, SweepMode::H);
  CHECK(c.levels == std::vector<int>{4, 8, 16});
  c.levels = {1, 2};
  c.k = 3;
  c.jobs = 2;
  const StudyResult r = run_study(c);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.log.size() == 2);
  CHECK(r.rows[1].n_V == 4 * r.rows[0].n_V);
  CHECK(r.rows[0].lambda.size() == 3);
  CHECK_FALSE(r.rows[0].rate[0].has_value());
  CHECK(r.rows[1].rate[0].has_value());
  CHECK(*r.rows[1].relerr[0] < *r.rows[0].relerr[0]);

  c.dof_budget = 10;
  const StudyResult none = run_study(c);
  CHECK(none.rows[0].skipped);
  CHECK(none.log[0].find("skipped") != std::string::npos);
  std::ostringstream os;
  write_study_csv(os, none);
  CHECK(os.str() == "param,h,p,n_V,n_U,k,lambda,relerr,rate\n");

  StudyConfig bad = c;
  bad.k = 0;
  CHECK_THROWS_AS(run_study(bad), std::invalid_argument);
}

TEST_CASE("p-sweep defaults")
{
  const StudyConfig cube = default_study(Domain::Cube, CellKind::Triangle, SweepMode::H);
  CHECK(cube.kind == CellKind::Tetrahedron);
  CHECK(cube.mode == SweepMode::P);
  CHECK(cube.eta.eta1 == doctest::Approx(15.6));
  CHECK(cube.eta.eta2 == doctest::Approx(1.35));
  const StudyConfig sq = default_study(Domain::UnitSquare, CellKind::Triangle, SweepMode::P);
  CHECK(sq.levels == std::vector<int>{8});
  CHECK(sq.p == 2);
  CHECK(sq.p_max == 5);
}

TEST_CASE("hanging demo mesh is seeded and reaches the target")
{
  const Mesh a = hanging_demo_mesh(Domain::UnitSquare, 4, 2, 600, 5u);
  const Mesh b = hanging_demo_mesh(Domain::UnitSquare, 4, 2, 600, 5u);
  CHECK(a.cells.size() == b.cells.size());
  CHECK(a.cells.size() * 12 >= 600);
  CHECK_FALSE(a.is_conforming());
  CHECK(a.measure() == doctest::Approx(1.0));
}
