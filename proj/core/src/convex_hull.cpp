// Copyright 2026 The kitsfuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kitsfuse/convex_hull.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_set>

namespace kitsfuse {
namespace {

using Vec = std::array<std::int64_t, 3>;

constexpr std::int64_t kMaxCoordinate = std::int64_t{1} << 20;

Vec sub(const Index3& a, const Index3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
Vec cross(const Vec& a, const Vec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
std::int64_t dot(const Vec& a, const Vec& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

struct Face {
  std::array<std::uint32_t, 3> v{};
  HalfSpace plane;
  std::vector<std::uint32_t> outside;
  bool alive = true;
};

HalfSpace plane_through(const Index3& a, const Index3& b, const Index3& c) {
  HalfSpace h;
  h.normal = cross(sub(b, a), sub(c, a));
  const std::int64_t g = std::gcd(std::gcd(std::llabs(h.normal[0]), std::llabs(h.normal[1])),
                                  std::llabs(h.normal[2]));
  if (g > 1) {
    for (auto& n : h.normal) n /= g;
  }
  h.offset = dot(h.normal, a);
  return h;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// Indices of four affinely independent points, or fewer when the set is
// degenerate.
std::vector<std::size_t> initial_simplex(std::span<const Index3> pts) {
  std::vector<std::size_t> s;
  if (pts.empty()) return s;
  s.push_back(0);
  // Farthest point from pts[0] along any direction keeps the simplex well
  // spread, which limits the work of the first few insertions.
  std::size_t best = 0;
  std::int64_t best_d = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Vec d = sub(pts[i], pts[0]);
    const std::int64_t d2 = dot(d, d);
    if (d2 > best_d) {
      best_d = d2;
      best = i;
    }
  }
  if (best_d == 0) return s;
  s.push_back(best);
  const Vec e1 = sub(pts[best], pts[0]);
  std::int64_t best_area = 0;
  best = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Vec c = cross(e1, sub(pts[i], pts[0]));
    const std::int64_t a2 = dot(c, c);
    if (a2 > best_area) {
      best_area = a2;
      best = i;
    }
  }
  if (best_area == 0) return s;
  s.push_back(best);
  const Vec n = cross(e1, sub(pts[best], pts[0]));
  std::int64_t best_vol = 0;
  best = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const std::int64_t v = std::llabs(dot(n, sub(pts[i], pts[0])));
    if (v > best_vol) {
      best_vol = v;
      best = i;
    }
  }
  if (best_vol == 0) return s;
  s.push_back(best);
  return s;
}

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

int affine_dimension(std::span<const Index3> points) {
  if (points.empty()) return -1;
  return static_cast<int>(initial_simplex(points).size()) - 1;
}

std::optional<ConvexHull3> ConvexHull3::build(std::span<const Index3> points) {
  for (const auto& p : points) {
    for (auto c : p) {
      if (c > kMaxCoordinate || c < -kMaxCoordinate) {
        throw Error(ErrorCode::kInvalidArgument,
                    "convex hull coordinates must fit in +/-2^20");
      }
    }
  }
  const auto simplex = initial_simplex(points);
  if (simplex.size() < 4) return std::nullopt;

  std::vector<Face> faces;
  auto add_face = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    Face f;
    f.v = {a, b, c};
    f.plane = plane_through(points[a], points[b], points[c]);
    faces.push_back(std::move(f));
    return static_cast<std::uint32_t>(faces.size() - 1);
  };

  {
    const auto i0 = static_cast<std::uint32_t>(simplex[0]);
    const auto i1 = static_cast<std::uint32_t>(simplex[1]);
    const auto i2 = static_cast<std::uint32_t>(simplex[2]);
    const auto i3 = static_cast<std::uint32_t>(simplex[3]);
    const std::array<std::array<std::uint32_t, 4>, 4> tets = {{
        {i0, i1, i2, i3}, {i0, i1, i3, i2}, {i0, i2, i3, i1}, {i1, i2, i3, i0}}};
    for (const auto& t : tets) {
      // Orient so the opposite vertex lies strictly inside.
      if (plane_through(points[t[0]], points[t[1]], points[t[2]]).excess(points[t[3]]) > 0) {
        add_face(t[0], t[2], t[1]);
      } else {
        add_face(t[0], t[1], t[2]);
      }
    }
  }

  // Outside sets: each remaining point is parked on one face it sees.
  {
    std::vector<bool> in_simplex(points.size(), false);
    for (auto i : simplex) in_simplex[i] = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (in_simplex[i]) continue;
      for (auto& f : faces) {
        if (f.plane.excess(points[i]) > 0) {
          f.outside.push_back(static_cast<std::uint32_t>(i));
          break;
        }
      }
    }
  }

  std::vector<std::uint32_t> visible;
  std::unordered_set<std::uint64_t> visible_edges;
  std::vector<std::uint32_t> orphans;
  std::vector<std::uint32_t> created;
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    while (faces[fi].alive && !faces[fi].outside.empty()) {
      // Farthest outside point of this face (excess is proportional to the
      // distance for a fixed plane).
      auto& out = faces[fi].outside;
      std::size_t best = 0;
      std::int64_t best_excess = -1;
      for (std::size_t k = 0; k < out.size(); ++k) {
        const std::int64_t e = faces[fi].plane.excess(points[out[k]]);
        if (e > best_excess) {
          best_excess = e;
          best = k;
        }
      }
      const std::uint32_t apex = out[best];
      const Index3& p = points[apex];

      visible.clear();
      visible_edges.clear();
      for (std::size_t k = 0; k < faces.size(); ++k) {
        if (faces[k].alive && faces[k].plane.excess(p) > 0) {
          visible.push_back(static_cast<std::uint32_t>(k));
          const auto& v = faces[k].v;
          visible_edges.insert(edge_key(v[0], v[1]));
          visible_edges.insert(edge_key(v[1], v[2]));
          visible_edges.insert(edge_key(v[2], v[0]));
        }
      }

      orphans.clear();
      created.clear();
      for (auto k : visible) {
        for (auto q : faces[k].outside) {
          if (q != apex) orphans.push_back(q);
        }
      }
      for (auto k : visible) {
        faces[k].alive = false;
        faces[k].outside.clear();
        faces[k].outside.shrink_to_fit();
        const auto v = faces[k].v;
        for (int e = 0; e < 3; ++e) {
          const std::uint32_t a = v[e];
          const std::uint32_t b = v[(e + 1) % 3];
          // Horizon edge: the face across it stays.
          if (!visible_edges.contains(edge_key(b, a))) {
            created.push_back(add_face(a, b, apex));
          }
        }
      }
      for (auto q : orphans) {
        for (auto k : created) {
          if (faces[k].plane.excess(points[q]) > 0) {
            faces[k].outside.push_back(q);
            break;
          }
        }
      }
    }
  }

  ConvexHull3 hull;
  std::vector<bool> is_vertex(points.size(), false);
  for (const auto& f : faces) {
    if (!f.alive) continue;
    hull.facets_.push_back(f.plane);
    for (auto v : f.v) is_vertex[v] = true;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (is_vertex[i]) hull.vertices_.push_back(points[i]);
  }
  return hull;
}

bool ConvexHull3::contains(const Index3& p) const noexcept {
  return std::all_of(facets_.begin(), facets_.end(),
                     [&p](const HalfSpace& h) { return h.excess(p) <= 0; });
}

std::optional<std::pair<std::int64_t, std::int64_t>> ConvexHull3::row_span(
    std::int64_t y, std::int64_t z) const noexcept {
  std::int64_t lo = std::numeric_limits<std::int64_t>::min();
  std::int64_t hi = std::numeric_limits<std::int64_t>::max();
  for (const auto& h : facets_) {
    // normal.x * x <= rest
    const std::int64_t rest = h.offset - h.normal[1] * y - h.normal[2] * z;
    if (h.normal[0] > 0) {
      hi = std::min(hi, floor_div(rest, h.normal[0]));
    } else if (h.normal[0] < 0) {
      lo = std::max(lo, ceil_div(rest, h.normal[0]));
    } else if (rest < 0) {
      return std::nullopt;
    }
    if (lo > hi) return std::nullopt;
  }
  return std::make_pair(lo, hi);
}

}  // namespace kitsfuse
