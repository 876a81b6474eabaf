// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include <ostream>
#include <vector>

#include <fmt/format.h>

#include "quadcurl/assembly.hpp"

namespace quadcurl
{

void write_matrix(std::ostream &os, const SparseMatrix &A)
{
  const bool symmetric = A.rows() == A.cols();
  std::vector<std::string> lines;
  for (int i = 0; i < A.outerSize(); ++i)
  {
    for (SparseMatrix::InnerIterator it(A, i); it; ++it)
    {
      if (!symmetric || it.col() <= i)
      {
        lines.push_back(fmt::format("{} {} {:.17g}\n", i, it.col(), it.value()));
      }
    }
  }
  if (symmetric)
  {
    os << "%%sym " << A.rows() << ' ' << lines.size() << '\n';
  }
  else
  {
    os << "%%general " << A.rows() << ' ' << A.cols() << ' ' << lines.size() << '\n';
  }
  for (const auto &line : lines)
  {
    os << line;
  }
}

}  // namespace quadcurl
