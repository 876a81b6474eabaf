// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "quadcurl/mesh.hpp"

namespace quadcurl
{

void write_mesh(std::ostream &os, const Mesh &mesh)
{
  os << "dim " << mesh.dim << '\n';
  os << "vertices " << mesh.vertices.size() << '\n';
  for (const auto &x : mesh.vertices)
  {
    os << fmt::format("{:.17g}", x[0]);
    for (int d = 1; d < mesh.dim; ++d)
    {
      os << fmt::format(" {:.17g}", x[d]);
    }
    os << '\n';
  }
  os << "cells " << mesh.cells.size() << ' ' << to_string(mesh.kind()) << '\n';
  for (const auto &cell : mesh.cells)
  {
    for (std::size_t i = 0; i < cell.vertices.size(); ++i)
    {
      os << (i ? " " : "") << cell.vertices[i];
    }
    os << '\n';
  }
}

namespace
{

// Next non-empty line with comments stripped; tracks the line number for
// error messages.
class LineReader
{
public:
  explicit LineReader(std::istream &is) : is_(is) {}

  std::istringstream next()
  {
    std::string line;
    while (std::getline(is_, line))
    {
      ++number_;
      if (const auto hash = line.find('#'); hash != std::string::npos)
      {
        line.erase(hash);
      }
      if (line.find_first_not_of(" \t\r") != std::string::npos)
      {
        return std::istringstream(line);
      }
    }
    fail("unexpected end of file");
  }

  [[noreturn]] void fail(const std::string &what) const
  {
    throw std::runtime_error("mesh file line " + std::to_string(number_) + ": " + what);
  }

private:
  std::istream &is_;
  int number_ = 0;
};

}  // namespace

Mesh read_mesh(std::istream &is)
{
  LineReader reader(is);
  Mesh mesh;
  std::string word;
  std::size_t count = 0;

  auto header = reader.next();
  if (!(header >> word >> mesh.dim) || word != "dim" || (mesh.dim != 2 && mesh.dim != 3))
  {
    reader.fail("expected `dim 2` or `dim 3`");
  }
  header = reader.next();
  if (!(header >> word >> count) || word != "vertices")
  {
    reader.fail("expected `vertices <N>`");
  }
  mesh.vertices.resize(count);
  for (auto &x : mesh.vertices)
  {
    auto line = reader.next();
    x = {0.0, 0.0, 0.0};
    for (int d = 0; d < mesh.dim; ++d)
    {
      if (!(line >> x[d]))
      {
        reader.fail("expected " + std::to_string(mesh.dim) + " coordinates");
      }
    }
  }
  std::string kind_name;
  header = reader.next();
  if (!(header >> word >> count >> kind_name) || word != "cells")
  {
    reader.fail("expected `cells <M> <kind>`");
  }
  CellKind kind{};
  try
  {
    kind = parse_cell_kind(kind_name);
  }
  catch (const std::invalid_argument &)
  {
    reader.fail("unknown cell kind `" + kind_name + "`");
  }
  mesh.cells.resize(count, Cell{kind, {}});
  for (auto &cell : mesh.cells)
  {
    auto line = reader.next();
    cell.vertices.resize(cell_vertex_count(kind));
    for (int &v : cell.vertices)
    {
      if (!(line >> v) || v < 0 || v >= static_cast<int>(mesh.vertices.size()))
      {
        reader.fail("bad vertex index");
      }
    }
  }
  mesh.finalize();
  return mesh;
}

}  // namespace quadcurl
