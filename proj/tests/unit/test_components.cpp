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

#include "kitsfuse/components.hpp"
#include "oracles.hpp"

namespace kitsfuse {
namespace {

std::vector<std::uint8_t> bytes_of(const BinaryMask& m) {
  return {m.data().begin(), m.data().end()};
}

BinaryMask mask_of(const Geometry& g, const std::vector<std::array<std::int64_t, 3>>& voxels) {
  std::vector<std::uint8_t> d(g.voxel_count(), 0);
  for (const auto& v : voxels) d[g.linear_index(v[0], v[1], v[2])] = 1;
  return BinaryMask(g, std::move(d));
}

TEST(ComponentsTest, EmptyMaskHasNoComponents) {
  const Geometry g({4, 4, 4}, {1, 1, 1});
  for (auto conn : {Connectivity::kFace6, Connectivity::kVertex26}) {
    const auto cl = label_components(BinaryMask::empty(g), conn);
    EXPECT_EQ(cl.count(), 0U);
    for (auto id : cl.ids()) EXPECT_EQ(id, 0U);
  }
}

TEST(ComponentsTest, CornerContact) {
  const Geometry g({3, 3, 3}, {1, 1, 1});
  const auto m = mask_of(g, {{0, 0, 0}, {1, 1, 1}});
  EXPECT_EQ(label_components(m, Connectivity::kVertex26).count(), 1U);
  EXPECT_EQ(label_components(m, Connectivity::kFace6).count(), 2U);
  // Edge contact behaves the same way.
  const auto e = mask_of(g, {{0, 0, 0}, {1, 1, 0}});
  EXPECT_EQ(label_components(e, Connectivity::kVertex26).count(), 1U);
  EXPECT_EQ(label_components(e, Connectivity::kFace6).count(), 2U);
}

TEST(ComponentsTest, MatchesFloodFillOracle) {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> density(0.05, 0.7);
  const Geometry g({8, 8, 8}, {1, 1, 1});
  for (int trial = 0; trial < 1000; ++trial) {
    const auto m = testing::random_mask(rng, g, density(rng));
    const auto raw = bytes_of(m);
    for (bool full26 : {false, true}) {
      const auto cl = label_components(m, full26 ? Connectivity::kVertex26 : Connectivity::kFace6);
      const auto oracle = testing::bfs_components(raw, 8, 8, 8, full26);
      ASSERT_TRUE(std::equal(oracle.begin(), oracle.end(), cl.ids().begin()))
          << "trial " << trial << " full26=" << full26;
    }
  }
}

TEST(ComponentsTest, ComponentStatistics) {
  const Geometry g({10, 6, 5}, {0.5, 2.0, 1.5});
  auto voxels = testing::box({2, 1, 1}, {4, 3, 2});
  voxels.push_back({9, 5, 4});
  const auto cl = label_components(mask_of(g, voxels), Connectivity::kVertex26);
  ASSERT_EQ(cl.count(), 2U);
  const auto& a = cl.components()[0];
  EXPECT_EQ(a.id, 1U);
  EXPECT_EQ(a.voxel_count, 18U);
  EXPECT_DOUBLE_EQ(a.volume_mm3, 18 * 1.5);
  EXPECT_EQ(a.bbox.min, (Index3{2, 1, 1}));
  EXPECT_EQ(a.bbox.max, (Index3{4, 3, 2}));
  EXPECT_EQ(a.first_voxel, g.linear_index(2, 1, 1));
  const auto& b = cl.components()[1];
  EXPECT_EQ(b.id, 2U);
  EXPECT_EQ(b.voxel_count, 1U);
  EXPECT_EQ(cl.component_mask(2).count(), 1U);
  EXPECT_TRUE(cl.component_mask(2).test(g.linear_index(9, 5, 4)));
}

TEST(ComponentsTest, DiceExamples) {
  const Geometry g({10, 1, 1}, {1, 1, 1});
  const auto a = mask_of(g, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}});
  const auto b = mask_of(g, {{1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {4, 0, 0}, {5, 0, 0}, {6, 0, 0}});
  EXPECT_DOUBLE_EQ(binary_dice(a, b), 0.6);
  EXPECT_EQ(binary_dice(a, a), 1.0);
  EXPECT_EQ(binary_dice(a, mask_of(g, {{9, 0, 0}})), 0.0);
  EXPECT_EQ(binary_dice(BinaryMask::empty(g), BinaryMask::empty(g)), 1.0);
  EXPECT_EQ(binary_dice(a, BinaryMask::empty(g)), 0.0);
  EXPECT_EQ(dice_from_counts(0, 0, 0), 1.0);
  EXPECT_THROW(binary_dice(a, BinaryMask::empty(Geometry({10, 1, 2}, {1, 1, 1}))), Error);
}

TEST(ComponentsTest, DiceSymmetricAndMonotone) {
  std::mt19937_64 rng(3);
  const Geometry g({8, 8, 8}, {1, 1, 1});
  for (int i = 0; i < 200; ++i) {
    const auto a = testing::random_mask(rng, g, 0.3);
    const auto b = testing::random_mask(rng, g, 0.3);
    EXPECT_EQ(binary_dice(a, b), binary_dice(b, a));
  }
  for (std::size_t inter = 0; inter < 20; ++inter) {
    EXPECT_LT(dice_from_counts(inter, 20, 30), dice_from_counts(inter + 1, 20, 30));
  }
}

TEST(ComponentsTest, MinVolumeStrictThreshold) {
  const Geometry g({102, 102, 3}, {1, 1, 1});
  // 99 x 101 x 1 = 9,999 voxels and 100 x 100 x 1 = 10,000 voxels.
  const auto labels = testing::paint(LabelVolume::background(g),
                                     testing::box({0, 0, 0}, {98, 100, 0}), kKidney);
  ASSERT_EQ(labels.histogram()[kKidney], 9999U);
  EXPECT_EQ(filter_min_volume(labels, 10000.0, Connectivity::kVertex26).histogram()[0],
            g.voxel_count());

  auto big = testing::paint(LabelVolume::background(g), testing::box({0, 0, 0}, {99, 99, 0}),
                            kKidney);
  big = testing::paint(big, {{{50, 50, 0}}}, kTumor);
  ASSERT_EQ(big.histogram()[kKidney] + big.histogram()[kTumor], 10000U);
  EXPECT_EQ(filter_min_volume(big, 10000.0, Connectivity::kVertex26), big);
}

TEST(ComponentsTest, MinVolumeExactlyAtThresholdWithSpacing) {
  const Geometry g({30, 30, 10}, {2, 2, 2});
  // 25 x 5 x 10 = 1,250 voxels x 8 mm³ = 10,000 mm³.
  const auto keep = testing::paint(LabelVolume::background(g),
                                   testing::box({0, 0, 0}, {24, 4, 9}), kKidney);
  EXPECT_EQ(filter_min_volume(keep, 10000.0, Connectivity::kFace6), keep);
  // One voxel less is 9,992 mm³.
  const auto drop = testing::paint(keep, {{{24, 4, 9}}}, kBackground);
  EXPECT_EQ(filter_min_volume(drop, 10000.0, Connectivity::kFace6),
            LabelVolume::background(g));
}

TEST(ComponentsTest, MinVolumeUsesWholeForegroundBlobs) {
  // A blob made of several classes counts as one foreground blob.
  const Geometry g({10, 10, 10}, {1, 1, 1});
  auto labels = testing::paint(LabelVolume::background(g), testing::box({0, 0, 0}, {1, 1, 1}),
                               kKidney);
  labels = testing::paint(labels, testing::box({2, 0, 0}, {3, 1, 1}), kTumor);
  labels = testing::paint(labels, {{{9, 9, 9}}}, kCyst);
  const auto out = filter_min_volume(labels, 16.0, Connectivity::kVertex26);
  EXPECT_EQ(out.histogram()[kKidney], 8U);
  EXPECT_EQ(out.histogram()[kTumor], 8U);
  EXPECT_EQ(out.histogram()[kCyst], 0U);
}

TEST(ComponentsTest, MinVolumeProperties) {
  std::mt19937_64 rng(99);
  const Geometry g({12, 10, 8}, {1.5, 1.5, 2.0});
  for (int i = 0; i < 100; ++i) {
    const auto labels = testing::random_labels(rng, g, 0.25);
    EXPECT_EQ(filter_min_volume(labels, 0.0, Connectivity::kVertex26), labels);
    const double threshold = 5.0 * (i % 10);
    const auto once = filter_min_volume(labels, threshold, Connectivity::kFace6);
    EXPECT_EQ(filter_min_volume(once, threshold, Connectivity::kFace6), once);
    for (std::size_t v = 0; v < labels.size(); ++v) {
      EXPECT_TRUE(once[v] == labels[v] || once[v] == kBackground);
    }
  }
  EXPECT_THROW(filter_min_volume(LabelVolume::background(g), -1.0, Connectivity::kFace6), Error);
}

}  // namespace
}  // namespace kitsfuse
