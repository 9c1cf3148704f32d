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

#include "kitsfuse/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "kv_text.hpp"

namespace kitsfuse {
namespace {

constexpr int kMaxPlacementAttempts = 4000;

Point3 extent_mm(const Shape3& shape, const Spacing3& spacing) {
  return {static_cast<double>(shape[0]) * spacing[0],
          static_cast<double>(shape[1]) * spacing[1],
          static_cast<double>(shape[2]) * spacing[2]};
}

bool box_inside(const Point3& center, const Point3& radii, const Point3& extent) {
  for (int a = 0; a < 3; ++a) {
    if (center[a] - radii[a] < 0.0 || center[a] + radii[a] > extent[a]) return false;
  }
  return true;
}

std::string point_text(const Point3& p) {
  std::ostringstream os;
  os << "(" << p[0] << ", " << p[1] << ", " << p[2] << ")";
  return os.str();
}

void check_sphere(const Sphere& s, const std::vector<Ellipsoid>& kidneys,
                  const Point3& extent, std::string_view what) {
  if (!(s.radius_mm > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " radius must be > 0");
  }
  if (!box_inside(s.center_mm, {s.radius_mm, s.radius_mm, s.radius_mm}, extent)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " at " + point_text(s.center_mm) +
                    " does not fit inside the volume");
  }
  const bool in_kidney = std::any_of(kidneys.begin(), kidneys.end(),
                                     [&](const Ellipsoid& k) {
                                       return k.contains(s.center_mm);
                                     });
  if (!in_kidney) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " center " + point_text(s.center_mm) +
                    " is not inside a kidney");
  }
}

std::vector<std::uint8_t> erode_once(const std::vector<std::uint8_t>& in,
                                     const Geometry& g) {
  std::vector<std::uint8_t> out = in;
  std::size_t i = 0;
  for (std::int64_t z = 0; z < g.nz(); ++z) {
    for (std::int64_t y = 0; y < g.ny(); ++y) {
      for (std::int64_t x = 0; x < g.nx(); ++x, ++i) {
        if (in[i] == kBackground) continue;
        const std::array<Index3, 6> nbrs = {{{x - 1, y, z}, {x + 1, y, z},
                                             {x, y - 1, z}, {x, y + 1, z},
                                             {x, y, z - 1}, {x, y, z + 1}}};
        for (const auto& n : nbrs) {
          if (g.contains(n[0], n[1], n[2]) && in[g.linear_index(n)] == kBackground) {
            out[i] = kBackground;
            break;
          }
        }
      }
    }
  }
  return out;
}

// Voxels whose centers fall inside `s`.
std::vector<std::size_t> voxelize(const Sphere& s, const Geometry& g) {
  std::vector<std::size_t> out;
  Index3 lo{};
  Index3 hi{};
  for (int a = 0; a < 3; ++a) {
    const double sp = g.spacing()[a];
    lo[a] = std::max<std::int64_t>(
        0, static_cast<std::int64_t>(std::floor((s.center_mm[a] - s.radius_mm) / sp)) - 1);
    hi[a] = std::min<std::int64_t>(
        g.shape()[a] - 1,
        static_cast<std::int64_t>(std::ceil((s.center_mm[a] + s.radius_mm) / sp)) + 1);
  }
  for (std::int64_t z = lo[2]; z <= hi[2]; ++z) {
    for (std::int64_t y = lo[1]; y <= hi[1]; ++y) {
      for (std::int64_t x = lo[0]; x <= hi[0]; ++x) {
        if (s.contains(g.voxel_center_mm({x, y, z}))) {
          out.push_back(g.linear_index(x, y, z));
        }
      }
    }
  }
  return out;
}

bool clear_neighbourhood(const std::vector<std::uint8_t>& labels,
                         const Geometry& g, std::size_t voxel) {
  const Index3 p = g.coordinates(voxel);
  for (std::int64_t dz = -1; dz <= 1; ++dz) {
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        const std::int64_t x = p[0] + dx;
        const std::int64_t y = p[1] + dy;
        const std::int64_t z = p[2] + dz;
        if (g.contains(x, y, z) && labels[g.linear_index(x, y, z)] != kBackground) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

bool Ellipsoid::contains(const Point3& p) const noexcept {
  double s = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double d = (p[a] - center_mm[a]) / radii_mm[a];
    s += d * d;
  }
  return s <= 1.0;
}

bool Sphere::contains(const Point3& p) const noexcept {
  const double dx = p[0] - center_mm[0];
  const double dy = p[1] - center_mm[1];
  const double dz = p[2] - center_mm[2];
  return dx * dx + dy * dy + dz * dz <= radius_mm * radius_mm;
}

void PhantomSpec::validate() const {
  try {
    Geometry(shape, spacing);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidArgument, e.what());
  }
  if (!(noise_std_hu >= 0.0) || !std::isfinite(noise_std_hu)) {
    throw Error(ErrorCode::kInvalidArgument, "noise_std_hu must be finite and >= 0");
  }
  const Point3 extent = extent_mm(shape, spacing);
  for (const auto& k : kidneys) {
    for (double r : k.radii_mm) {
      if (!(r > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "kidney radii must be > 0");
      }
    }
    if (!box_inside(k.center_mm, k.radii_mm, extent)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "kidney at " + point_text(k.center_mm) +
                      " does not fit inside the volume");
    }
  }
  for (const auto& t : tumors) check_sphere(t, kidneys, extent, "tumor");
  for (const auto& c : cysts) check_sphere(c, kidneys, extent, "cyst");
}

PhantomSpec PhantomSpec::standard(std::uint64_t seed) {
  PhantomSpec s;
  s.shape = {128, 112, 80};
  s.spacing = {1.25, 1.25, 1.5};
  s.kidneys = {{{50.0, 70.0, 60.0}, {25.0, 30.0, 40.0}},
               {{110.0, 70.0, 60.0}, {25.0, 30.0, 40.0}}};
  s.tumors = {{{60.0, 60.0, 70.0}, 12.0}};
  s.cysts = {{{110.0, 80.0, 50.0}, 8.0}};
  s.seed = seed;
  return s;
}

PhantomSpec PhantomSpec::random(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&rng](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };
  PhantomSpec s;
  s.shape = {48, 40, 32};
  s.spacing = {2.0, 2.0, 2.5};
  s.seed = seed;
  const Point3 extent = extent_mm(s.shape, s.spacing);
  const int kidneys = std::uniform_int_distribution<int>(1, 2)(rng);
  for (int k = 0; k < kidneys; ++k) {
    Ellipsoid e;
    e.radii_mm = {uni(15.0, 20.0), uni(15.0, 20.0), uni(15.0, 20.0)};
    for (int a = 0; a < 3; ++a) {
      e.center_mm[a] = uni(e.radii_mm[a] + 1.0, extent[a] - e.radii_mm[a] - 1.0);
    }
    s.kidneys.push_back(e);
  }
  auto inside_point = [&](const Ellipsoid& k, double margin_r) {
    Point3 c{};
    for (int a = 0; a < 3; ++a) {
      const double lo = std::max(margin_r, k.center_mm[a] - 0.5 * k.radii_mm[a]);
      const double hi = std::min(extent[a] - margin_r, k.center_mm[a] + 0.5 * k.radii_mm[a]);
      c[a] = lo < hi ? uni(lo, hi) : k.center_mm[a];
    }
    return c;
  };
  // Tumors are kept apart (gap of several voxels) so each stays its own
  // convex component.
  const int tumors = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int attempt = 0; attempt < 200 && static_cast<int>(s.tumors.size()) < tumors;
       ++attempt) {
    const auto& k = s.kidneys[std::uniform_int_distribution<std::size_t>(
        0, s.kidneys.size() - 1)(rng)];
    Sphere t;
    t.radius_mm = uni(4.0, 8.0);
    t.center_mm = inside_point(k, t.radius_mm);
    if (!k.contains(t.center_mm) ||
        !box_inside(t.center_mm, {t.radius_mm, t.radius_mm, t.radius_mm}, extent)) {
      continue;
    }
    const bool apart = std::all_of(s.tumors.begin(), s.tumors.end(), [&](const Sphere& o) {
      const double dx = o.center_mm[0] - t.center_mm[0];
      const double dy = o.center_mm[1] - t.center_mm[1];
      const double dz = o.center_mm[2] - t.center_mm[2];
      return std::sqrt(dx * dx + dy * dy + dz * dz) > o.radius_mm + t.radius_mm + 8.0;
    });
    if (apart) s.tumors.push_back(t);
  }
  const int cysts = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int attempt = 0; attempt < 200 && static_cast<int>(s.cysts.size()) < cysts;
       ++attempt) {
    const auto& k = s.kidneys[std::uniform_int_distribution<std::size_t>(
        0, s.kidneys.size() - 1)(rng)];
    Sphere c;
    c.radius_mm = uni(3.0, 6.0);
    c.center_mm = inside_point(k, c.radius_mm);
    if (k.contains(c.center_mm) &&
        box_inside(c.center_mm, {c.radius_mm, c.radius_mm, c.radius_mm}, extent)) {
      s.cysts.push_back(c);
    }
  }
  return s;
}

Phantom generate_phantom(const PhantomSpec& spec) {
  spec.validate();
  const Geometry g(spec.shape, spec.spacing);
  std::vector<std::uint8_t> labels(g.voxel_count(), kBackground);
  std::vector<float> image(g.voxel_count());
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, spec.noise_std_hu);
  std::size_t i = 0;
  for (std::int64_t z = 0; z < g.nz(); ++z) {
    for (std::int64_t y = 0; y < g.ny(); ++y) {
      for (std::int64_t x = 0; x < g.nx(); ++x, ++i) {
        const Point3 p = g.voxel_center_mm({x, y, z});
        auto hit = [&p](const auto& prims) {
          return std::any_of(prims.begin(), prims.end(),
                             [&p](const auto& s) { return s.contains(p); });
        };
        std::uint8_t code = kBackground;
        if (hit(spec.tumors)) {
          code = kTumor;
        } else if (hit(spec.cysts)) {
          code = kCyst;
        } else if (hit(spec.kidneys)) {
          code = kKidney;
        }
        labels[i] = code;
        constexpr float kHu[4] = {kPhantomBackgroundHu, kPhantomKidneyHu,
                                  kPhantomTumorHu, kPhantomCystHu};
        const double n = spec.noise_std_hu > 0.0 ? noise(rng) : 0.0;
        image[i] = static_cast<float>(kHu[code] + n);
      }
    }
  }
  return {ImageVolume(g, std::move(image)), LabelVolume(g, std::move(labels))};
}

void DegradeSpec::validate() const {
  for (double s : lowres_spacing) {
    if (!(s > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "lowres spacing must be > 0");
    }
  }
  if (add_fp_tumor.count > 0 &&
      !(add_fp_tumor.radius_min_mm > 0.0 &&
        add_fp_tumor.radius_max_mm >= add_fp_tumor.radius_min_mm)) {
    throw Error(ErrorCode::kInvalidArgument,
                "false positive radii need 0 < min <= max");
  }
  if (erode_boundary_steps < 0) {
    throw Error(ErrorCode::kInvalidArgument, "erosion steps must be >= 0");
  }
}

bool DegradeSpec::is_identity() const noexcept {
  return !downsample_to_lowres && add_fp_tumor.count == 0 &&
         erode_boundary_steps == 0 && !drop_tumor;
}

DegradeResult degrade_with_report(const LabelVolume& labels,
                                  const DegradeSpec& spec) {
  spec.validate();
  const Geometry& g = labels.geometry();
  DegradeResult result{labels, 0, 0};
  if (spec.is_identity()) return result;

  LabelVolume current = labels;
  if (spec.downsample_to_lowres) {
    const auto coarse =
        resample_labels(current, TargetSpec::with_spacing(spec.lowres_spacing));
    current = resample_labels(coarse, TargetSpec::with_geometry(g));
  }
  std::vector<std::uint8_t> data = std::move(current).release();
  for (int step = 0; step < spec.erode_boundary_steps; ++step) {
    data = erode_once(data, g);
  }
  if (spec.drop_tumor) {
    std::replace(data.begin(), data.end(), kTumor, kBackground);
  }
  if (spec.add_fp_tumor.count > 0) {
    std::mt19937_64 rng(spec.seed);
    const Point3 extent = extent_mm(g.shape(), g.spacing());
    for (std::size_t n = 0; n < spec.add_fp_tumor.count; ++n) {
      bool placed = false;
      for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
        Sphere s;
        s.radius_mm = std::uniform_real_distribution<double>(
            spec.add_fp_tumor.radius_min_mm, spec.add_fp_tumor.radius_max_mm)(rng);
        bool fits = true;
        for (int a = 0; a < 3; ++a) {
          if (extent[a] < 2.0 * s.radius_mm) {
            fits = false;
            break;
          }
          s.center_mm[a] = std::uniform_real_distribution<double>(
              s.radius_mm, extent[a] - s.radius_mm)(rng);
        }
        if (!fits) break;
        const auto voxels = voxelize(s, g);
        if (voxels.empty()) continue;
        const bool clear = std::all_of(voxels.begin(), voxels.end(), [&](std::size_t v) {
          return clear_neighbourhood(data, g, v);
        });
        if (!clear) continue;
        for (auto v : voxels) data[v] = kTumor;
        result.fp_voxels += voxels.size();
        ++result.fp_components;
        placed = true;
      }
      if (!placed) {
        throw Error(ErrorCode::kInvalidArgument,
                    "could not place false positive tumor " + std::to_string(n + 1) +
                        " in background");
      }
    }
  }
  result.labels = LabelVolume(g, std::move(data));
  return result;
}

LabelVolume degrade(const LabelVolume& labels, const DegradeSpec& spec) {
  return degrade_with_report(labels, spec).labels;
}

ScenarioSpec ScenarioSpec::named(std::string_view name, std::uint64_t seed) {
  ScenarioSpec s;
  s.name = std::string(name);
  s.phantom = PhantomSpec::standard(seed);
  s.full.seed = seed + 1;
  s.low.seed = seed + 2;
  if (name == "consistent") {
    s.low_grid = PredictionGrid::kFull;
  } else if (name == "fp_tumors") {
    s.full.add_fp_tumor = {3, 3.0, 5.0};
  } else if (name == "missing_tumor") {
    s.full.drop_tumor = true;
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown scenario '" + std::string(name) +
                    "', expected consistent, fp_tumors or missing_tumor");
  }
  return s;
}

namespace {

std::vector<double> parse_numbers(std::string_view v, std::string_view key,
                                  std::size_t n) {
  const auto parts = detail::split_list(v);
  if (parts.size() != n) {
    throw Error(ErrorCode::kConfig, "key '" + std::string(key) + "' needs " +
                                        std::to_string(n) + " values");
  }
  std::vector<double> out;
  for (auto p : parts) out.push_back(detail::parse_double(p, key, ErrorCode::kConfig));
  return out;
}

bool apply_degrade_key(DegradeSpec& d, std::string_view field,
                       const std::string& key, const std::string& v) {
  constexpr auto kErr = ErrorCode::kConfig;
  if (field == "downsample_to_lowres") {
    d.downsample_to_lowres = detail::parse_bool(v, key, kErr);
  } else if (field == "add_fp_tumor") {
    const auto n = parse_numbers(v, key, 3);
    if (n[0] < 0 || n[0] != std::floor(n[0])) {
      throw Error(kErr, "false positive count must be a non-negative integer");
    }
    d.add_fp_tumor = {static_cast<std::size_t>(n[0]), n[1], n[2]};
  } else if (field == "erode_boundary") {
    d.erode_boundary_steps = static_cast<int>(detail::parse_int(v, key, kErr));
  } else if (field == "drop_tumor") {
    d.drop_tumor = detail::parse_bool(v, key, kErr);
  } else if (field == "seed") {
    d.seed = static_cast<std::uint64_t>(detail::parse_int(v, key, kErr));
  } else {
    return false;
  }
  return true;
}

}  // namespace

ScenarioSpec ScenarioSpec::from_text(std::string_view text) {
  constexpr auto kErr = ErrorCode::kConfig;
  const auto entries = detail::parse_kv(text, kErr);
  std::optional<std::string> builtin;
  std::uint64_t seed = 0;
  for (const auto& kv : entries) {
    if (kv.key == "scenario") builtin = kv.value;
    if (kv.key == "seed") seed = static_cast<std::uint64_t>(detail::parse_int(kv.value, kv.key, kErr));
  }
  if (builtin) {
    for (const auto& kv : entries) {
      if (kv.key != "scenario" && kv.key != "seed") {
        throw Error(kErr, "key '" + kv.key + "' cannot be combined with scenario");
      }
    }
    return named(*builtin, seed);
  }

  ScenarioSpec s;
  s.phantom = PhantomSpec{};
  for (const auto& kv : entries) {
    const auto& k = kv.key;
    const auto& v = kv.value;
    if (k == "name") {
      s.name = v;
    } else if (k == "shape") {
      const auto n = parse_numbers(v, k, 3);
      s.phantom.shape = {static_cast<std::int64_t>(n[0]), static_cast<std::int64_t>(n[1]),
                         static_cast<std::int64_t>(n[2])};
    } else if (k == "spacing_mm") {
      const auto n = parse_numbers(v, k, 3);
      s.phantom.spacing = {n[0], n[1], n[2]};
    } else if (k == "seed") {
      s.phantom.seed = seed;
    } else if (k == "noise_std_hu") {
      s.phantom.noise_std_hu = detail::parse_double(v, k, kErr);
    } else if (k == "kidney") {
      const auto n = parse_numbers(v, k, 6);
      s.phantom.kidneys.push_back({{n[0], n[1], n[2]}, {n[3], n[4], n[5]}});
    } else if (k == "tumor" || k == "cyst") {
      const auto n = parse_numbers(v, k, 4);
      (k == "tumor" ? s.phantom.tumors : s.phantom.cysts)
          .push_back({{n[0], n[1], n[2]}, n[3]});
    } else if (k == "low.grid") {
      if (v == "lowres") {
        s.low_grid = PredictionGrid::kLowRes;
      } else if (v == "full") {
        s.low_grid = PredictionGrid::kFull;
      } else {
        throw Error(kErr, "low.grid must be lowres or full, got '" + v + "'");
      }
    } else if (k.rfind("full.", 0) == 0 &&
               apply_degrade_key(s.full, std::string_view(k).substr(5), k, v)) {
    } else if (k.rfind("low.", 0) == 0 &&
               apply_degrade_key(s.low, std::string_view(k).substr(4), k, v)) {
    } else {
      throw Error(kErr, "line " + std::to_string(kv.line) +
                            ": unknown scenario key '" + k + "'");
    }
  }
  s.phantom.validate();
  s.full.validate();
  s.low.validate();
  return s;
}

std::string ScenarioSpec::to_text() const {
  std::ostringstream os;
  os.precision(17);
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << "name = " << name << "\n"
     << "shape = " << phantom.shape[0] << " " << phantom.shape[1] << " "
     << phantom.shape[2] << "\n"
     << "spacing_mm = " << phantom.spacing[0] << " " << phantom.spacing[1] << " "
     << phantom.spacing[2] << "\n"
     << "seed = " << phantom.seed << "\n"
     << "noise_std_hu = " << phantom.noise_std_hu << "\n";
  for (const auto& k : phantom.kidneys) {
    os << "kidney = " << k.center_mm[0] << " " << k.center_mm[1] << " "
       << k.center_mm[2] << " " << k.radii_mm[0] << " " << k.radii_mm[1] << " "
       << k.radii_mm[2] << "\n";
  }
  for (const auto& t : phantom.tumors) {
    os << "tumor = " << t.center_mm[0] << " " << t.center_mm[1] << " "
       << t.center_mm[2] << " " << t.radius_mm << "\n";
  }
  for (const auto& c : phantom.cysts) {
    os << "cyst = " << c.center_mm[0] << " " << c.center_mm[1] << " "
       << c.center_mm[2] << " " << c.radius_mm << "\n";
  }
  for (const auto& [prefix, d] : {std::pair<const char*, const DegradeSpec*>{"full", &full},
                                  std::pair<const char*, const DegradeSpec*>{"low", &low}}) {
    os << prefix << ".downsample_to_lowres = " << b(d->downsample_to_lowres) << "\n"
       << prefix << ".add_fp_tumor = " << d->add_fp_tumor.count << " "
       << d->add_fp_tumor.radius_min_mm << " " << d->add_fp_tumor.radius_max_mm << "\n"
       << prefix << ".erode_boundary = " << d->erode_boundary_steps << "\n"
       << prefix << ".drop_tumor = " << b(d->drop_tumor) << "\n"
       << prefix << ".seed = " << d->seed << "\n";
  }
  os << "low.grid = " << (low_grid == PredictionGrid::kLowRes ? "lowres" : "full")
     << "\n";
  return os.str();
}

ScenarioOutput generate_scenario(const ScenarioSpec& spec) {
  Phantom truth = generate_phantom(spec.phantom);
  auto full = degrade_with_report(truth.labels, spec.full);
  LabelVolume low = degrade(truth.labels, spec.low);
  if (spec.low_grid == PredictionGrid::kLowRes) {
    low = resample_labels(low, TargetSpec::with_spacing(spec.low.lowres_spacing));
  }
  std::optional<double> expected;
  const DegradeSpec& f = spec.full;
  if (!f.downsample_to_lowres && f.erode_boundary_steps == 0 && !f.drop_tumor) {
    const std::size_t t = truth.labels.histogram()[kTumor];
    const std::size_t fp = full.fp_voxels;
    expected = (t + fp) == 0 ? 1.0
                             : 2.0 * static_cast<double>(t) /
                                   static_cast<double>(2 * t + fp);
  }
  return {std::move(truth), std::move(full.labels), std::move(low),
          full.fp_voxels, full.fp_components, expected};
}

}  // namespace kitsfuse
