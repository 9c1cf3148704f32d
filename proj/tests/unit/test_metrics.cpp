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

#include <gtest/gtest.h>

#include <random>

#include "kitsfuse/metrics.hpp"
#include "kitsfuse/phantom.hpp"
#include "oracles.hpp"

namespace kitsfuse {
namespace {

TEST(RegionDiceTest, Examples) {
  std::mt19937_64 rng(1);
  const Geometry g({8, 8, 8}, {1, 1, 1});
  const auto a = testing::random_labels(rng, g, 0.4);
  for (auto r : kAllRegions) EXPECT_EQ(region_dice(a, a, r), 1.0);

  const auto gt = testing::paint(LabelVolume::background(g), testing::box({0, 0, 0}, {3, 3, 3}),
                                 kTumor);
  EXPECT_EQ(region_dice(LabelVolume::background(g), gt, Region::kTumor), 0.0);
  const auto half = testing::paint(LabelVolume::background(g),
                                   testing::box({2, 0, 0}, {5, 3, 3}), kTumor);
  EXPECT_EQ(region_dice(half, gt, Region::kTumor), 0.5);
  EXPECT_THROW(region_dice(a, LabelVolume::background(Geometry({8, 8, 7}, {1, 1, 1})),
                           Region::kTumor),
               Error);
}

TEST(RegionDiceTest, MatchesVoxelCounting) {
  std::mt19937_64 rng(2);
  const Geometry g({8, 8, 8}, {1, 1, 1});
  for (int i = 0; i < 200; ++i) {
    const auto p = testing::random_labels(rng, g, 0.4);
    const auto t = testing::random_labels(rng, g, 0.4);
    for (auto r : kAllRegions) {
      std::size_t np = 0, nt = 0, both = 0;
      for (std::size_t v = 0; v < p.size(); ++v) {
        const bool a = region_contains(r, p[v]);
        const bool b = region_contains(r, t[v]);
        np += a;
        nt += b;
        both += a && b;
      }
      const double expected = np + nt == 0 ? 1.0 : 2.0 * both / static_cast<double>(np + nt);
      EXPECT_EQ(region_dice(p, t, r), expected);
    }
  }
}

TEST(SurfaceDiceTest, FacesMatchOracle) {
  std::mt19937_64 rng(3);
  const Geometry g({5, 6, 4}, {0.78, 1.3, 2.5});
  for (int i = 0; i < 50; ++i) {
    const auto m = testing::random_mask(rng, g, 0.4);
    const auto faces = boundary_faces(m);
    const auto oracle = testing::brute_faces(m);
    ASSERT_EQ(faces.size(), oracle.size());
    for (std::size_t k = 0; k < faces.size(); ++k) EXPECT_EQ(faces[k], oracle[k]);
  }
  // A lone voxel has six faces.
  const auto one = testing::paint(LabelVolume::background(g), {{{2, 2, 2}}}, kTumor);
  EXPECT_EQ(boundary_faces(region_mask(one, Region::kTumor)).size(), 6U);
}

TEST(SurfaceDiceTest, Examples) {
  const Geometry g({12, 12, 12}, {1, 1, 1});
  const auto cube = testing::paint(LabelVolume::background(g),
                                   testing::box({2, 2, 2}, {5, 5, 5}), kTumor);
  for (double tol : {0.0, 0.5, 3.0}) EXPECT_EQ(surface_dice(cube, cube, Region::kTumor, tol), 1.0);
  const auto far = testing::paint(LabelVolume::background(g),
                                  testing::box({8, 8, 8}, {10, 10, 10}), kTumor);
  EXPECT_EQ(surface_dice(cube, far, Region::kTumor, 0.0), 0.0);
  EXPECT_EQ(surface_dice(cube, LabelVolume::background(g), Region::kTumor, 1.0), 0.0);
  EXPECT_EQ(surface_dice(LabelVolume::background(g), LabelVolume::background(g), Region::kTumor,
                         1.0),
            1.0);
  EXPECT_THROW(surface_dice(cube, cube, Region::kTumor, -1.0), Error);

  const auto shifted = testing::paint(LabelVolume::background(g),
                                      testing::box({3, 2, 2}, {6, 5, 5}), kTumor);
  const double expected = testing::brute_surface_dice(region_mask(cube, Region::kTumor),
                                                      region_mask(shifted, Region::kTumor), 1.0);
  EXPECT_NEAR(surface_dice(cube, shifted, Region::kTumor, 1.0), expected, 1e-9);
  // Every face of the shifted cube lies within 1 mm of the other surface,
  // but not within 0.5 mm.
  EXPECT_EQ(expected, 1.0);
  const double tight = testing::brute_surface_dice(region_mask(cube, Region::kTumor),
                                                   region_mask(shifted, Region::kTumor), 0.5);
  EXPECT_NEAR(surface_dice(cube, shifted, Region::kTumor, 0.5), tight, 1e-9);
  EXPECT_LT(tight, 1.0);
  EXPECT_GT(tight, 0.0);
}

TEST(SurfaceDiceTest, MatchesAllPairsOracle) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> tol(0.0, 3.0);
  std::uniform_real_distribution<double> sp(0.5, 2.5);
  for (int i = 0; i < 150; ++i) {
    const Geometry g({6, 5, 4}, {sp(rng), sp(rng), sp(rng)});
    const auto a = testing::random_mask(rng, g, 0.15 + 0.005 * i);
    const auto b = testing::random_mask(rng, g, 0.3);
    const double t = i % 10 == 0 ? 0.0 : tol(rng);
    ASSERT_NEAR(mask_surface_dice(a, b, t), testing::brute_surface_dice(a, b, t), 1e-9) << i;
  }
}

TEST(SurfaceDiceTest, SymmetricAndMonotone) {
  std::mt19937_64 rng(5);
  const Geometry g({8, 7, 6}, {0.9, 0.9, 2.0});
  for (int i = 0; i < 50; ++i) {
    const auto a = testing::random_labels(rng, g, 0.3);
    const auto b = testing::random_labels(rng, g, 0.3);
    double prev = -1.0;
    for (double t = 0.0; t <= 4.0; t += 0.25) {
      for (auto r : kAllRegions) EXPECT_EQ(surface_dice(a, b, r, t), surface_dice(b, a, r, t));
      const double s = surface_dice(a, b, Region::kKidneyAndMasses, t);
      EXPECT_GE(s, prev);
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 1.0);
      prev = s;
    }
  }
}

TEST(AggregateTest, Means) {
  CaseReport a{"a", {}};
  CaseReport b{"b", {}};
  for (int r = 0; r < 3; ++r) {
    a.regions[r] = {0.8, 0.4};
    b.regions[r] = {0.6, 0.2};
  }
  const auto s = aggregate(std::vector<CaseReport>{a, b});
  EXPECT_EQ(s.cases, 2U);
  EXPECT_DOUBLE_EQ(s.mean_dice[2], 0.7);
  EXPECT_DOUBLE_EQ(s.mean_surface_dice[0], 0.3);
  EXPECT_DOUBLE_EQ(s.overall_dice, 0.7);
  EXPECT_THROW(aggregate(std::vector<CaseReport>{}), Error);

  const Geometry g({4, 4, 4}, {1, 1, 1});
  std::mt19937_64 rng(6);
  const auto v = testing::random_labels(rng, g, 0.5);
  const auto one = aggregate(std::vector<CaseReport>{evaluate_case(v, v, 1.0, "x")});
  EXPECT_EQ(one.overall_dice, 1.0);
  EXPECT_EQ(one.overall_surface_dice, 1.0);
}

TEST(AggregateTest, TextOutputs) {
  CaseReport a{"case_00001", {}};
  a.regions = {RegionScores{1.0, 0.5}, RegionScores{0.25, 0.125}, RegionScores{0.0, 1.0}};
  const auto table = format_case_table(std::vector<CaseReport>{a});
  EXPECT_NE(table.find("case_00001\t"), std::string::npos);
  EXPECT_NE(table.find("0.125000000"), std::string::npos);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 2);
  const auto summary = format_summary(aggregate(std::vector<CaseReport>{a}));
  EXPECT_NE(summary.find("dice\ttumor\t0.000000000"), std::string::npos);
}

// Reports of the built-in scenarios, produced once by this implementation
// after the oracle tests above passed, and frozen to catch regressions.
struct Golden {
  const char* scenario;
  std::uint64_t seed;
  double dice[3];
  double surface[3];
};

constexpr Golden kGoldens[] = {
    {"fp_tumors", 0, {0.99871163389937723, 0.96640388114008491, 0.95686030213362405},
     {0.98968287928493315, 0.91021928009929665, 0.87564469914040111}},
    {"fp_tumors", 5, {0.99835872733951092, 0.95757721427713016, 0.94566723102970607},
     {0.98794494542002853, 0.89649551752241241, 0.85746352413019078}},
    {"missing_tumor", 1, {0.98548560845160926, 0.37254901960784315, 0},
     {0.96918715434307756, 0.46796657381615597, 0}},
    {"consistent", 3, {1, 1, 1}, {1, 1, 1}},
};

TEST(GoldenTest, ScenarioReportsAreStable) {
  for (const auto& gold : kGoldens) {
    const auto out = generate_scenario(ScenarioSpec::named(gold.scenario, gold.seed));
    const auto report = evaluate_case(out.full_prediction, out.truth.labels, 2.0);
    for (int r = 0; r < 3; ++r) {
      EXPECT_NEAR(report.regions[r].dice, gold.dice[r], 1e-9) << gold.scenario;
      EXPECT_NEAR(report.regions[r].surface_dice, gold.surface[r], 1e-9) << gold.scenario;
    }
  }
}

}  // namespace
}  // namespace kitsfuse
