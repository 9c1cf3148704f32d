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

#include "kitsfuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "kitsfuse/components.hpp"

namespace kitsfuse {
namespace {

// Uniform hash grid over face centers for fixed-radius queries.
class PointGrid {
 public:
  PointGrid(std::span<const Point3> points, double cell)
      : points_(points), cell_(cell) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      buckets_[key(cell_index(points[i]))].push_back(static_cast<std::uint32_t>(i));
    }
  }

  bool any_within(const Point3& q, double radius) const {
    const double r2 = radius * radius;
    const auto c = cell_index(q);
    const auto reach = static_cast<std::int64_t>(std::ceil(radius / cell_));
    for (std::int64_t dz = -reach; dz <= reach; ++dz) {
      for (std::int64_t dy = -reach; dy <= reach; ++dy) {
        for (std::int64_t dx = -reach; dx <= reach; ++dx) {
          const auto it = buckets_.find(key({c[0] + dx, c[1] + dy, c[2] + dz}));
          if (it == buckets_.end()) continue;
          for (auto i : it->second) {
            const auto& p = points_[i];
            const double ex = p[0] - q[0];
            const double ey = p[1] - q[1];
            const double ez = p[2] - q[2];
            if (ex * ex + ey * ey + ez * ez <= r2) return true;
          }
        }
      }
    }
    return false;
  }

 private:
  std::array<std::int64_t, 3> cell_index(const Point3& p) const {
    return {static_cast<std::int64_t>(std::floor(p[0] / cell_)),
            static_cast<std::int64_t>(std::floor(p[1] / cell_)),
            static_cast<std::int64_t>(std::floor(p[2] / cell_))};
  }
  static std::uint64_t key(const std::array<std::int64_t, 3>& c) {
    // 21 bits per axis is plenty for any volume we can hold in memory.
    const auto u = [](std::int64_t v) {
      return static_cast<std::uint64_t>(v + (1 << 20)) & 0x1fffffU;
    };
    return u(c[0]) | (u(c[1]) << 21) | (u(c[2]) << 42);
  }

  std::span<const Point3> points_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
};

std::size_t count_within(std::span<const Point3> from, const PointGrid& to,
                         double tolerance) {
  return static_cast<std::size_t>(std::count_if(
      from.begin(), from.end(),
      [&](const Point3& p) { return to.any_within(p, tolerance); }));
}

}  // namespace

std::vector<Point3> boundary_faces(const BinaryMask& mask) {
  const Geometry& g = mask.geometry();
  const auto& s = g.spacing();
  std::vector<Point3> faces;
  std::size_t i = 0;
  auto inside = [&](std::int64_t x, std::int64_t y, std::int64_t z) {
    return g.contains(x, y, z) && mask.test(g.linear_index(x, y, z));
  };
  for (std::int64_t z = 0; z < g.nz(); ++z) {
    for (std::int64_t y = 0; y < g.ny(); ++y) {
      for (std::int64_t x = 0; x < g.nx(); ++x, ++i) {
        if (!mask.test(i)) continue;
        const double cx = (static_cast<double>(x) + 0.5) * s[0];
        const double cy = (static_cast<double>(y) + 0.5) * s[1];
        const double cz = (static_cast<double>(z) + 0.5) * s[2];
        const double x0 = static_cast<double>(x) * s[0];
        const double x1 = static_cast<double>(x + 1) * s[0];
        const double y0 = static_cast<double>(y) * s[1];
        const double y1 = static_cast<double>(y + 1) * s[1];
        const double z0 = static_cast<double>(z) * s[2];
        const double z1 = static_cast<double>(z + 1) * s[2];
        if (!inside(x - 1, y, z)) faces.push_back({x0, cy, cz});
        if (!inside(x + 1, y, z)) faces.push_back({x1, cy, cz});
        if (!inside(x, y - 1, z)) faces.push_back({cx, y0, cz});
        if (!inside(x, y + 1, z)) faces.push_back({cx, y1, cz});
        if (!inside(x, y, z - 1)) faces.push_back({cx, cy, z0});
        if (!inside(x, y, z + 1)) faces.push_back({cx, cy, z1});
      }
    }
  }
  return faces;
}

double region_dice(const LabelVolume& pred, const LabelVolume& gt, Region region) {
  require_same_geometry(pred.geometry(), gt.geometry(), "region_dice");
  return binary_dice(region_mask(pred, region), region_mask(gt, region));
}

double mask_surface_dice(const BinaryMask& pred, const BinaryMask& gt,
                         double tolerance_mm) {
  require_same_geometry(pred.geometry(), gt.geometry(), "surface_dice");
  if (!(tolerance_mm >= 0.0) || !std::isfinite(tolerance_mm)) {
    throw Error(ErrorCode::kInvalidArgument,
                "surface dice tolerance must be finite and >= 0");
  }
  const auto fp = boundary_faces(pred);
  const auto fg = boundary_faces(gt);
  if (fp.empty() && fg.empty()) return 1.0;
  if (fp.empty() || fg.empty()) return 0.0;
  const auto& s = pred.geometry().spacing();
  const double min_spacing = std::min({s[0], s[1], s[2]});
  const double cell = std::max(tolerance_mm, 0.5 * min_spacing);
  const PointGrid grid_p(fp, cell);
  const PointGrid grid_g(fg, cell);
  const std::size_t hits =
      count_within(fp, grid_g, tolerance_mm) + count_within(fg, grid_p, tolerance_mm);
  return static_cast<double>(hits) / static_cast<double>(fp.size() + fg.size());
}

double surface_dice(const LabelVolume& pred, const LabelVolume& gt,
                    Region region, double tolerance_mm) {
  require_same_geometry(pred.geometry(), gt.geometry(), "surface_dice");
  return mask_surface_dice(region_mask(pred, region), region_mask(gt, region),
                           tolerance_mm);
}

CaseReport evaluate_case(const LabelVolume& pred, const LabelVolume& gt,
                         double tolerance_mm, std::string case_id) {
  require_same_geometry(pred.geometry(), gt.geometry(),
                        case_id.empty() ? "evaluate_case" : "case " + case_id);
  CaseReport r;
  r.case_id = std::move(case_id);
  for (std::size_t k = 0; k < kAllRegions.size(); ++k) {
    const auto mp = region_mask(pred, kAllRegions[k]);
    const auto mg = region_mask(gt, kAllRegions[k]);
    r.regions[k].dice = binary_dice(mp, mg);
    r.regions[k].surface_dice = mask_surface_dice(mp, mg, tolerance_mm);
  }
  return r;
}

MetricsSummary aggregate(std::span<const CaseReport> reports) {
  if (reports.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot aggregate zero case reports");
  }
  MetricsSummary s;
  s.cases = reports.size();
  for (const auto& r : reports) {
    for (std::size_t k = 0; k < 3; ++k) {
      s.mean_dice[k] += r.regions[k].dice;
      s.mean_surface_dice[k] += r.regions[k].surface_dice;
    }
  }
  const double n = static_cast<double>(reports.size());
  for (std::size_t k = 0; k < 3; ++k) {
    s.mean_dice[k] /= n;
    s.mean_surface_dice[k] /= n;
    s.overall_dice += s.mean_dice[k] / 3.0;
    s.overall_surface_dice += s.mean_surface_dice[k] / 3.0;
  }
  return s;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

}  // namespace

std::string format_case_table(std::span<const CaseReport> reports) {
  std::string out = "case_id";
  for (auto region : kAllRegions) {
    out += "\tdice_";
    out += region_name(region);
  }
  for (auto region : kAllRegions) {
    out += "\tsurface_dice_";
    out += region_name(region);
  }
  out += '\n';
  for (const auto& r : reports) {
    out += r.case_id;
    for (const auto& s : r.regions) out += '\t' + fmt(s.dice);
    for (const auto& s : r.regions) out += '\t' + fmt(s.surface_dice);
    out += '\n';
  }
  return out;
}

std::string format_summary(const MetricsSummary& s) {
  std::string out = "metric\tregion\tvalue\n";
  for (std::size_t k = 0; k < 3; ++k) {
    out += "dice\t" + std::string(region_name(kAllRegions[k])) + '\t' +
           fmt(s.mean_dice[k]) + '\n';
  }
  out += "dice\tmean\t" + fmt(s.overall_dice) + '\n';
  for (std::size_t k = 0; k < 3; ++k) {
    out += "surface_dice\t" + std::string(region_name(kAllRegions[k])) + '\t' +
           fmt(s.mean_surface_dice[k]) + '\n';
  }
  out += "surface_dice\tmean\t" + fmt(s.overall_surface_dice) + '\n';
  out += "cases\tall\t" + std::to_string(s.cases) + '\n';
  return out;
}

}  // namespace kitsfuse
