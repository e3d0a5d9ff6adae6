#pragma once

// Mask-enumeration closure oracle for tiny ambient geometries: intersect
// every nice subset of g that contains X.  Feasible only when the number of
// vertices outside X is small; used to cross-check both production routes.

#include <algorithm>
#include <optional>
#include <vector>

#include "psp/closure.hpp"
#include "psp/geometry.hpp"

namespace psp::testing {

inline std::optional<std::vector<VertexId>> mask_nice_intersection(
    const Geometry& g, const std::vector<VertexId>& X, std::size_t max_free = 18) {
  std::vector<VertexId> base = X;
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  std::vector<VertexId> free;
  for (VertexId v : g.vertex_ids()) {
    if (!std::binary_search(base.begin(), base.end(), v)) free.push_back(v);
  }
  if (free.size() > max_free) return std::nullopt;

  FlagGraph fg(g);
  const std::size_t n = free.size();
  std::vector<std::uint32_t> masks;
  masks.reserve(1u << n);
  for (std::uint32_t m = 0; m < (1u << n); ++m) masks.push_back(m);
  std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    return pa != pb ? pa < pb : a < b;
  });

  std::vector<std::uint32_t> minimal_nice;
  bool any = false;
  std::vector<VertexId> result;
  for (std::uint32_t m : masks) {
    bool redundant = false;
    for (std::uint32_t mn : minimal_nice) {
      if ((m & mn) == mn) {
        redundant = true;
        break;
      }
    }
    if (redundant) continue;  // supersets of a nice set cannot shrink the intersection
    std::vector<VertexId> set = base;
    for (std::size_t i = 0; i < n; ++i) {
      if (m & (1u << i)) set.push_back(free[i]);
    }
    std::sort(set.begin(), set.end());
    if (set.empty() || !is_nice(fg, set)) continue;
    minimal_nice.push_back(m);
    if (!any) {
      result = set;
      any = true;
    } else {
      std::vector<VertexId> merged;
      std::set_intersection(result.begin(), result.end(), set.begin(), set.end(),
                            std::back_inserter(merged));
      result = std::move(merged);
    }
  }
  if (!any) return std::nullopt;
  return result;
}

}  // namespace psp::testing
