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

#include "kitsfuse/fusion.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <vector>

#include "kitsfuse/convex_hull.hpp"
#include "kitsfuse/resample.hpp"

namespace kitsfuse {
namespace {

std::vector<std::uint8_t> copy_data(const LabelVolume& v) {
  return {v.data().begin(), v.data().end()};
}

// Removes, in `labels`, the tumor voxels of components whose flag is 0.
// Returns the number of rejected components.
std::size_t relabel_rejected(std::vector<std::uint8_t>& labels,
                             const ComponentLabeling& cc,
                             const std::vector<std::uint8_t>& survives,
                             std::uint8_t replacement) {
  std::size_t rejected = 0;
  for (std::size_t id = 1; id < survives.size(); ++id) rejected += !survives[id];
  if (rejected == 0) return 0;
  const auto ids = cc.ids();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (ids[i] != 0 && !survives[ids[i]]) labels[i] = replacement;
  }
  return rejected;
}

struct RowExtent {
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
};

}  // namespace

LabelVolume gate_by_lowres(const LabelVolume& full,
                           const LabelVolume& low_on_full_grid,
                           Connectivity conn, double min_overlap_fraction) {
  require_same_geometry(full.geometry(), low_on_full_grid.geometry(),
                        "gate_by_lowres");
  const auto cc = label_components(foreground_mask(full), conn);
  std::vector<std::size_t> supported(cc.count() + 1, 0);
  const auto ids = cc.ids();
  const auto low = low_on_full_grid.data();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] != 0 && low[i] != kBackground) ++supported[ids[i]];
  }
  std::vector<std::uint8_t> keep(cc.count() + 1, 1);
  bool any_removed = false;
  for (const auto& c : cc.components()) {
    const std::size_t s = supported[c.id];
    const bool ok = s >= 1 && static_cast<double>(s) >=
                                  min_overlap_fraction *
                                      static_cast<double>(c.voxel_count);
    if (!ok) {
      keep[c.id] = 0;
      any_removed = true;
    }
  }
  if (!any_removed) return full;
  auto out = copy_data(full);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (ids[i] != 0 && !keep[ids[i]]) out[i] = kBackground;
  }
  return LabelVolume(full.geometry(), std::move(out));
}

TumorFilterResult tumor_cross_scale_filter(const LabelVolume& full,
                                           const LabelVolume& low_on_full_grid,
                                           const FusionConfig& cfg) {
  require_same_geometry(full.geometry(), low_on_full_grid.geometry(),
                        "tumor_cross_scale_filter");
  cfg.validate();
  const auto ca = label_components(region_mask(full, Region::kTumor), cfg.connectivity);
  const auto cb = label_components(region_mask(low_on_full_grid, Region::kTumor),
                                   cfg.connectivity);

  // Overlap counts of every intersecting (full component, low component) pair.
  std::unordered_map<std::uint64_t, std::size_t> overlap;
  const auto ia = ca.ids();
  const auto ib = cb.ids();
  for (std::size_t i = 0; i < ia.size(); ++i) {
    if (ia[i] != 0 && ib[i] != 0) {
      ++overlap[(static_cast<std::uint64_t>(ia[i]) << 32) | ib[i]];
    }
  }
  std::vector<std::uint8_t> keep_a(ca.count() + 1, 0);
  std::vector<std::uint8_t> keep_b(cb.count() + 1, 0);
  for (const auto& [key, inter] : overlap) {
    const auto a = static_cast<std::uint32_t>(key >> 32);
    const auto b = static_cast<std::uint32_t>(key & 0xffffffffU);
    const double d = dice_from_counts(inter, ca.components()[a - 1].voxel_count,
                                      cb.components()[b - 1].voxel_count);
    if (d > cfg.tumor_dice_threshold) {
      keep_a[a] = 1;
      keep_b[b] = 1;
    }
  }
  const std::uint8_t replacement =
      cfg.tumor_fp_relabel == TumorRelabel::kBackground ? kBackground : kKidney;
  auto a_out = copy_data(full);
  auto b_out = copy_data(low_on_full_grid);
  const std::size_t removed_a = relabel_rejected(a_out, ca, keep_a, replacement);
  const std::size_t removed_b = relabel_rejected(b_out, cb, keep_b, replacement);
  return {LabelVolume(full.geometry(), std::move(a_out)),
          LabelVolume(full.geometry(), std::move(b_out)), removed_a, removed_b};
}

LabelVolume join_predictions(const LabelVolume& full,
                             const LabelVolume& low_on_full_grid,
                             const FusionConfig& cfg) {
  require_same_geometry(full.geometry(), low_on_full_grid.geometry(),
                        "join_predictions");
  (void)cfg.conflict_rule;  // kFullResWins is the only rule.
  auto out = copy_data(full);
  const auto low = low_on_full_grid.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == kBackground) out[i] = low[i];
  }
  return LabelVolume(full.geometry(), std::move(out));
}

LabelVolume hull_merge_tumor(const LabelVolume& labels, Connectivity conn) {
  const Geometry& g = labels.geometry();
  const auto cc = label_components(region_mask(labels, Region::kTumor), conn);
  if (cc.count() == 0) return labels;

  // Per component, the x-extent of every (y, z) row it occupies. Hull
  // vertices are always row endpoints, so these points span the same hull
  // as the full voxel set.
  std::vector<std::vector<RowExtent>> rows(cc.count());
  for (const auto& c : cc.components()) {
    const auto ny = c.bbox.max[1] - c.bbox.min[1] + 1;
    const auto nz = c.bbox.max[2] - c.bbox.min[2] + 1;
    rows[c.id - 1].resize(static_cast<std::size_t>(ny * nz));
  }
  const auto ids = cc.ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == 0) continue;
    const auto& c = cc.components()[ids[i] - 1];
    const Index3 p = g.coordinates(i);
    const auto ny = c.bbox.max[1] - c.bbox.min[1] + 1;
    auto& r = rows[ids[i] - 1][static_cast<std::size_t>(
        (p[1] - c.bbox.min[1]) + ny * (p[2] - c.bbox.min[2]))];
    r.lo = std::min(r.lo, p[0]);
    r.hi = std::max(r.hi, p[0]);
  }

  auto out = copy_data(labels);
  const auto in = labels.data();
  bool changed = false;
  std::vector<Index3> points;
  for (const auto& c : cc.components()) {
    points.clear();
    const auto ny = c.bbox.max[1] - c.bbox.min[1] + 1;
    const auto& comp_rows = rows[c.id - 1];
    for (std::size_t k = 0; k < comp_rows.size(); ++k) {
      const auto& r = comp_rows[k];
      if (r.lo > r.hi) continue;
      const std::int64_t y = c.bbox.min[1] + static_cast<std::int64_t>(k) % ny;
      const std::int64_t z = c.bbox.min[2] + static_cast<std::int64_t>(k) / ny;
      points.push_back({r.lo, y, z});
      if (r.hi != r.lo) points.push_back({r.hi, y, z});
    }
    const auto hull = ConvexHull3::build(points);
    if (!hull) continue;  // flat component: hull adds no voxel centers
    for (std::int64_t z = c.bbox.min[2]; z <= c.bbox.max[2]; ++z) {
      for (std::int64_t y = c.bbox.min[1]; y <= c.bbox.max[1]; ++y) {
        const auto span = hull->row_span(y, z);
        if (!span) continue;
        const std::int64_t x0 = std::max(span->first, c.bbox.min[0]);
        const std::int64_t x1 = std::min(span->second, c.bbox.max[0]);
        for (std::int64_t x = x0; x <= x1; ++x) {
          const std::size_t i = g.linear_index(x, y, z);
          if (in[i] != kBackground && in[i] != kTumor) {
            out[i] = kTumor;
            changed = true;
          }
        }
      }
    }
  }
  if (!changed) return labels;
  return LabelVolume(g, std::move(out));
}

LabelVolume postprocess_pair(const LabelVolume& full, const LabelVolume& low,
                             const FusionConfig& cfg) {
  cfg.validate();
  LabelVolume low_grid =
      resample_labels(low, TargetSpec::with_geometry(full.geometry()));
  LabelVolume current = full;
  if (cfg.steps.gate) {
    current = gate_by_lowres(current, low_grid, cfg.connectivity,
                             cfg.gate_min_overlap_fraction);
  }
  if (cfg.steps.tumor_filter) {
    auto filtered = tumor_cross_scale_filter(current, low_grid, cfg);
    current = std::move(filtered.full);
    low_grid = std::move(filtered.low);
  }
  if (cfg.steps.join) current = join_predictions(current, low_grid, cfg);
  if (cfg.steps.hull_merge) current = hull_merge_tumor(current, cfg.connectivity);
  if (cfg.steps.min_volume) {
    current = filter_min_volume(current, cfg.min_volume_mm3, cfg.connectivity);
  }
  return current;
}

LabelVolume ensemble_join(std::span<const LabelVolume> results,
                          const FusionConfig& cfg) {
  if (results.empty()) {
    throw Error(ErrorCode::kEmptyInput, "ensemble_join needs at least one result");
  }
  LabelVolume acc = results.front();
  for (std::size_t i = 1; i < results.size(); ++i) {
    acc = join_predictions(acc, results[i], cfg);
  }
  return acc;
}

}  // namespace kitsfuse
