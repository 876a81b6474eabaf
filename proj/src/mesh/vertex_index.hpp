// Copyright (c) 2026 The quadcurl authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUADCURL_SRC_MESH_VERTEX_INDEX_HPP
#define QUADCURL_SRC_MESH_VERTEX_INDEX_HPP

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "quadcurl/types.hpp"

namespace quadcurl::detail
{

// Coordinate lookup for vertices produced by bisection; coordinates are
// rounded to 1e-9 before hashing.
class VertexIndex
{
public:
  explicit VertexIndex(const std::vector<Vec3> &vertices)
  {
    for (int i = 0; i < static_cast<int>(vertices.size()); ++i)
    {
      insert(vertices[i], i);
    }
  }

  void insert(const Vec3 &x, int id) { map_.emplace(key(x), id); }

  int find(const Vec3 &x) const
  {
    const auto it = map_.find(key(x));
    return it == map_.end() ? -1 : it->second;
  }

private:
  using Key = std::array<long long, 3>;
  static Key key(const Vec3 &x)
  {
    return {std::llround(x[0] * 1e9), std::llround(x[1] * 1e9), std::llround(x[2] * 1e9)};
  }
  std::map<Key, int> map_;
};

}  // namespace quadcurl::detail

#endif  // QUADCURL_SRC_MESH_VERTEX_INDEX_HPP
