// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "quadcurl/eigsolve.hpp"
#include "quadcurl/study.hpp"

namespace quadcurl
{

namespace
{

constexpr double kWidth = 640.0, kHeight = 420.0;
constexpr double kLeft = 70.0, kRight = 130.0, kTop = 30.0, kBottom = 50.0;
const char *const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

PlotBounds emit_plot(const std::vector<StudyCsvRow> &rows, SweepMode mode, std::ostream &svg)
{
  const bool log_x = mode == SweepMode::H;
  std::map<int, std::vector<std::pair<double, double>>> series;  // k -> (x, relerr)
  for (const StudyCsvRow &r : rows)
  {
    if (r.relerr && *r.relerr > 0.0)
    {
      series[r.k].emplace_back(mode == SweepMode::H ? r.h : r.p, *r.relerr);
    }
  }
  PlotBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
               std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto &[k, pts] : series)
  {
    for (const auto &[x, y] : pts)
    {
      b.x_min = std::min(b.x_min, x);
      b.x_max = std::max(b.x_max, x);
      b.y_min = std::min(b.y_min, y);
      b.y_max = std::max(b.y_max, y);
    }
  }
  if (series.empty())
  {
    b = log_x ? PlotBounds{0.01, 1.0, 1e-6, 1.0} : PlotBounds{1.0, 2.0, 1e-6, 1.0};
  }
  // Whole decades on log axes, half a step of padding on the degree axis.
  b.y_min = std::pow(10.0, std::floor(std::log10(b.y_min)));
  b.y_max = std::pow(10.0, std::ceil(std::log10(b.y_max)));
  if (b.y_max <= b.y_min)
  {
    b.y_max = b.y_min * 10.0;
  }
  if (log_x)
  {
    b.x_min = std::pow(10.0, std::floor(std::log10(b.x_min) * 2.0) / 2.0);
    b.x_max = std::pow(10.0, std::ceil(std::log10(b.x_max) * 2.0) / 2.0);
    if (b.x_max <= b.x_min)
    {
      b.x_max = b.x_min * std::sqrt(10.0);
    }
  }
  else
  {
    b.x_min -= 0.5;
    b.x_max += 0.5;
  }
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const auto sx = [&](double x)
  {
    const double t = log_x ? (std::log10(x) - std::log10(b.x_min)) / (std::log10(b.x_max) - std::log10(b.x_min))
                           : (x - b.x_min) / (b.x_max - b.x_min);
    return kLeft + t * pw;
  };
  const auto sy = [&](double y)
  {
    const double t = (std::log10(y) - std::log10(b.y_min)) / (std::log10(b.y_max) - std::log10(b.y_min));
    return kTop + (1.0 - t) * ph;
  };

  svg << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      kWidth, kHeight, kWidth, kHeight);
  svg << fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
  svg << fmt::format(
      "<rect class=\"plot-area\" x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      kLeft, kTop, pw, ph);
  // Ticks: decades on log axes, integers on the degree axis.
  for (int e = static_cast<int>(std::round(std::log10(b.y_min))); e <= std::round(std::log10(b.y_max)); ++e)
  {
    const double y = sy(std::pow(10.0, e));
    svg << fmt::format("<line x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" stroke=\"#ddd\"/>\n", kLeft,
                       y, kLeft + pw, y);
    svg << fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" text-anchor=\"end\">1e{}</text>\n", kLeft - 6, y + 4, e);
  }
  if (log_x)
  {
    for (int e = static_cast<int>(std::floor(std::log10(b.x_min))); e <= std::ceil(std::log10(b.x_max)); ++e)
    {
      for (int m = 1; m < 10; ++m)
      {
        const double x = m * std::pow(10.0, e);
        if (x < b.x_min * (1 - 1e-12) || x > b.x_max * (1 + 1e-12))
        {
          continue;
        }
        svg << fmt::format("<line x1=\"{0:.3f}\" y1=\"{1:.3f}\" x2=\"{0:.3f}\" y2=\"{2:.3f}\" stroke=\"black\"/>\n",
                           sx(x), kTop + ph, kTop + ph + (m == 1 ? 6 : 3));
        if (m == 1)
        {
          svg << fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" text-anchor=\"middle\">1e{}</text>\n", sx(x),
                             kTop + ph + 18, e);
        }
      }
    }
  }
  else
  {
    for (int p = static_cast<int>(std::ceil(b.x_min)); p <= b.x_max; ++p)
    {
      svg << fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" text-anchor=\"middle\">{}</text>\n", sx(p), kTop + ph + 18,
                         p);
    }
  }
  svg << fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2,
                     kHeight - 12, log_x ? "h" : "p");
  svg << fmt::format(
      "<text x=\"16\" y=\"{:.3f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.3f})\">relative "
      "error</text>\n",
      kTop + ph / 2, kTop + ph / 2);

  int index = 0;
  for (const auto &[k, pts] : series)
  {
    const char *color = kColors[index % 10];
    std::string path;
    for (const auto &[x, y] : pts)
    {
      path += fmt::format("{}{:.3f},{:.3f}", path.empty() ? "M" : " L", sx(x), sy(y));
    }
    svg << fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\"/>\n", path, color);
    for (const auto &[x, y] : pts)
    {
      svg << fmt::format("<circle class=\"point\" cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"3\" fill=\"{}\"/>\n", sx(x), sy(y),
                         color);
    }
    std::string label = fmt::format("lambda_{}", k);
    if (pts.size() >= 2)
    {
      std::vector<double> errs, params;
      for (const auto &[x, y] : pts)
      {
        params.push_back(x);
        errs.push_back(y);
      }
      if (const auto r = fitted_rate(errs, params, log_x ? RateMode::H : RateMode::P))
      {
        label += fmt::format(" (rate {:.2f})", *r);
        if (log_x && index == 0)
        {
          // Slope guide through the last point of the first series.
          const double x1 = pts.back().first, y1 = pts.back().second;
          const double x0 = b.x_max, y0 = y1 * std::pow(x0 / x1, *r);
          if (y0 <= b.y_max && y0 >= b.y_min)
          {
            svg << fmt::format(
                "<line class=\"guide\" x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" stroke=\"#888\" "
                "stroke-dasharray=\"4 3\"/>\n",
                sx(x1), sy(y1), sx(x0), sy(y0));
          }
        }
      }
    }
    svg << fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" fill=\"{}\">{}</text>\n", kLeft + pw + 8,
                       kTop + 14 + 16 * index, color, label);
    ++index;
  }
  svg << "</svg>\n";
  return b;
}

}  // namespace quadcurl
