// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#include "assembly/face_kernel.hpp"

#include <algorithm>

namespace quadcurl::detail
{

Vector repeat3(const std::vector<double> &weights, double scale)
{
  Vector w(3 * weights.size());
  for (std::size_t q = 0; q < weights.size(); ++q)
  {
    w.segment<3>(3 * q).setConstant(weights[q] * scale);
  }
  return w;
}

Matrix cross_columns(const Matrix &x, const Vec3 &n)
{
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index q = 0; q < x.cols() / 3; ++q)
  {
    const auto a0 = x.col(3 * q), a1 = x.col(3 * q + 1), a2 = x.col(3 * q + 2);
    y.col(3 * q) = a1 * n[2] - a2 * n[1];
    y.col(3 * q + 1) = a2 * n[0] - a0 * n[2];
    y.col(3 * q + 2) = a0 * n[1] - a1 * n[0];
  }
  return y;
}

FaceKernel::FaceKernel(const DGSpace &space, const Face &face, int degree)
{
  const Mesh &mesh = space.mesh();
  if (degree < 0)
  {
    int pmax = mesh.cells[face.plus].p;
    if (face.minus >= 0)
    {
      pmax = std::max(pmax, mesh.cells[face.minus].p);
    }
    degree = 2 * pmax;
  }
  quad_ = face_quadrature(mesh, face, degree);
  weights3_ = repeat3(quad_.weights);
  const double avg = face.boundary() ? 1.0 : 0.5;
  VectorEvaluation ev;
  for (int s = 0; s < (face.boundary() ? 1 : 2); ++s)
  {
    FaceSide side;
    side.cell = s == 0 ? face.plus : face.minus;
    const Vec3 n = (s == 0 ? 1.0 : -1.0) * face.normal;
    space.basis(side.cell).evaluate(s == 0 ? quad_.plus_ref : quad_.minus_ref,
                                    mesh.cell_map(side.cell), ev, 3);
    side.jump = cross_columns(ev.value, n);
    side.jump_curl = cross_columns(ev.curl, n);
    side.avg_curl3 = avg * ev.curl3;
    side.avg_curl2 = avg * ev.curl2;
    side.value = std::move(ev.value);
    side.curl2 = std::move(ev.curl2);
    side.curl3 = std::move(ev.curl3);
    sides_.push_back(std::move(side));
  }
}

}  // namespace quadcurl::detail
