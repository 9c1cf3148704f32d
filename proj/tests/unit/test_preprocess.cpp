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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "kitsfuse/preprocess.hpp"
#include "oracles.hpp"

namespace kitsfuse {
namespace {

bool patch_has(const Patch& p, std::uint8_t code) {
  return std::find(p.labels.data().begin(), p.labels.data().end(), code) !=
         p.labels.data().end();
}

bool patch_has_foreground(const Patch& p) {
  return std::any_of(p.labels.data().begin(), p.labels.data().end(),
                     [](std::uint8_t v) { return v != 0; });
}

TEST(PreprocessTest, KitsConstants) {
  const auto s = IntensityStats::kits23();
  EXPECT_NEAR(s.normalize(400.0), (302.0 - 103.0) / 73.3, 1e-12);
  EXPECT_NEAR(s.normalize(400.0), 2.7148703956, 1e-6);
  EXPECT_EQ(s.normalize(103.0), 0.0);
  EXPECT_NEAR(s.normalize(-1000.0), -2.1964529332, 1e-6);
}

TEST(PreprocessTest, ClipAndNormalizeBounds) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(-3000.0F, 3000.0F);
  const Geometry g({10, 10, 10}, {1, 1, 1});
  std::vector<float> d(g.voxel_count());
  for (auto& v : d) v = u(rng);
  const auto s = IntensityStats::kits23();
  const auto out = clip_and_normalize(ImageVolume(g, d), s);
  const double lo = (s.clip_low() - s.mean()) / s.std();
  const double hi = (s.clip_high() - s.mean()) / s.std();
  for (float v : out.data()) {
    EXPECT_GE(v, static_cast<float>(lo) - 1e-6F);
    EXPECT_LE(v, static_cast<float>(hi) + 1e-6F);
  }
  // Re-applying with stats matching the normalized bounds changes nothing.
  const IntensityStats unit(lo - 1e-3, hi + 1e-3, 0.0, 1.0);
  EXPECT_EQ(clip_and_normalize(out, unit), out);
}

TEST(PreprocessTest, StatsInvariants) {
  EXPECT_THROW(IntensityStats(5, 5, 5, 1), Error);
  EXPECT_THROW(IntensityStats(0, 1, 0, 0), Error);
  EXPECT_THROW(IntensityStats(0, 1, 0, -1), Error);
  const auto s = IntensityStats::from_text(IntensityStats::kits23().to_text());
  EXPECT_EQ(s.clip_low(), -58.0);
  EXPECT_EQ(s.clip_high(), 302.0);
  EXPECT_EQ(s.mean(), 103.0);
  EXPECT_EQ(s.std(), 73.3);
  EXPECT_THROW(IntensityStats::from_text("clip_low = 1\n"), Error);
}

TEST(PreprocessTest, PercentileMatchesOracle) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(100.0, 50.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(1 + trial * 200);
    for (auto& x : v) x = n(rng);
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (double p : {0.0, 0.5, 25.0, 50.0, 99.5, 100.0}) {
      EXPECT_EQ(percentile_sorted(sorted, p), testing::brute_percentile(v, p));
    }
  }
}

TEST(PreprocessTest, ForegroundStatsOfOneToThousand) {
  const Geometry g({10, 10, 11}, {1, 1, 1});
  std::vector<float> img(g.voxel_count(), -999.0F);
  std::vector<std::uint8_t> lab(g.voxel_count(), 0);
  for (int i = 0; i < 1000; ++i) {
    img[static_cast<std::size_t>(i)] = static_cast<float>(i + 1);
    lab[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(1 + i % 3);
  }
  std::vector<std::pair<ImageVolume, LabelVolume>> cases;
  cases.emplace_back(ImageVolume(g, img), LabelVolume(g, lab));
  const auto s = compute_foreground_stats(cases);

  std::vector<double> values(1000);
  std::iota(values.begin(), values.end(), 1.0);
  EXPECT_DOUBLE_EQ(s.clip_low(), testing::brute_percentile(values, 0.5));
  EXPECT_DOUBLE_EQ(s.clip_high(), testing::brute_percentile(values, 99.5));
  EXPECT_NEAR(s.clip_low(), 5.995, 1e-9);
  EXPECT_NEAR(s.clip_high(), 995.005, 1e-9);
  EXPECT_DOUBLE_EQ(s.mean(), 500.5);
  EXPECT_NEAR(s.std(), std::sqrt((1000.0 * 1000.0 - 1.0) / 12.0), 1e-9);
}

TEST(PreprocessTest, ForegroundStatsPoolsCases) {
  const Geometry g({2, 1, 1}, {1, 1, 1});
  std::vector<std::pair<ImageVolume, LabelVolume>> cases;
  cases.emplace_back(ImageVolume(g, {1.0F, 50.0F}), LabelVolume(g, {1, 0}));
  cases.emplace_back(ImageVolume(g, {3.0F, 7.0F}), LabelVolume(g, {2, 0}));
  const auto s = compute_foreground_stats(cases);
  EXPECT_DOUBLE_EQ(s.mean(), 2.0);
  EXPECT_DOUBLE_EQ(s.std(), 1.0);
}

TEST(PreprocessTest, ForegroundStatsErrors) {
  const Geometry g({2, 2, 2}, {1, 1, 1});
  std::vector<std::pair<ImageVolume, LabelVolume>> cases;
  cases.emplace_back(ImageVolume::filled(g, 5.0F), LabelVolume::background(g));
  try {
    compute_foreground_stats(cases);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoForeground);
  }
  cases.clear();
  cases.emplace_back(ImageVolume::filled(g, 5.0F),
                     LabelVolume(g, std::vector<std::uint8_t>(8, kKidney)));
  try {
    compute_foreground_stats(cases);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateStats);
  }
}

TEST(PreprocessTest, AllBackgroundCaseIsFlagged) {
  const Geometry g({20, 20, 20}, {1, 1, 1});
  const auto batch = sample_patches(ImageVolume::filled(g, 0.0F), LabelVolume::background(g),
                                    PatchSpec{{8, 8, 8}, 1.0 / 3.0}, 6, 9);
  EXPECT_FALSE(batch.foreground_available);
  EXPECT_EQ(batch.forced_count, 0U);
  EXPECT_EQ(batch.patches.size(), 6U);
  for (const auto& p : batch.patches) EXPECT_FALSE(p.foreground_forced);
}

TEST(PreprocessTest, SingleTumorVoxelIsFound) {
  const Geometry g({128, 128, 128}, {1, 1, 1});
  const auto labels = testing::paint(LabelVolume::background(g), {{{77, 5, 120}}}, kTumor);
  const auto img = ImageVolume::filled(g, 1.0F);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto batch = sample_patches(img, labels, PatchSpec{}, 3, seed);
    ASSERT_EQ(batch.patches.size(), 3U);
    EXPECT_GE(batch.forced_count, 1U);
    const auto hits = std::count_if(batch.patches.begin(), batch.patches.end(),
                                    [](const Patch& p) { return patch_has(p, kTumor); });
    EXPECT_GE(hits, 1);
  }
}

TEST(PreprocessTest, SamplingIsDeterministic) {
  std::mt19937_64 rng(4);
  const Geometry g({30, 25, 20}, {1, 1, 1});
  const auto labels = testing::random_labels(rng, g, 0.01);
  const auto img = ImageVolume::filled(g, 2.0F);
  const PatchSpec spec{{10, 12, 8}, 0.5};
  const auto a = sample_patches(img, labels, spec, 10, 1234);
  const auto b = sample_patches(img, labels, spec, 10, 1234);
  ASSERT_EQ(a.patches.size(), b.patches.size());
  for (std::size_t i = 0; i < a.patches.size(); ++i) {
    EXPECT_EQ(a.patches[i].origin, b.patches[i].origin);
    EXPECT_EQ(a.patches[i].labels, b.patches[i].labels);
  }
}

TEST(PreprocessTest, OversamplingFractionBounds) {
  const Geometry g({60, 60, 60}, {1, 1, 1});
  auto labels = testing::paint(LabelVolume::background(g), testing::box({2, 2, 2}, {3, 3, 3}),
                               kKidney);
  labels = testing::paint(labels, {{{55, 50, 57}}}, kCyst);
  const auto img = ImageVolume::filled(g, 0.0F);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto all = sample_patches(img, labels, PatchSpec{{8, 8, 8}, 1.0}, 7, seed);
    EXPECT_EQ(all.forced_count, 7U);
    for (const auto& p : all.patches) {
      EXPECT_TRUE(p.foreground_forced);
      EXPECT_TRUE(patch_has(p, p.forced_class));
      EXPECT_TRUE(patch_has_foreground(p));
    }
    const auto none = sample_patches(img, labels, PatchSpec{{8, 8, 8}, 0.0}, 7, seed);
    EXPECT_EQ(none.forced_count, 0U);
    for (const auto& p : none.patches) EXPECT_FALSE(p.foreground_forced);
    const auto third = sample_patches(img, labels, PatchSpec{{8, 8, 8}, 1.0 / 3.0}, 9, seed);
    EXPECT_EQ(third.forced_count, 3U);
    const auto third10 = sample_patches(img, labels, PatchSpec{{8, 8, 8}, 1.0 / 3.0}, 10, seed);
    EXPECT_EQ(third10.forced_count, 4U);
  }
}

TEST(PreprocessTest, ForcedClassesCoverPresentClasses) {
  const Geometry g({40, 40, 40}, {1, 1, 1});
  auto labels = testing::paint(LabelVolume::background(g), testing::box({0, 0, 0}, {9, 9, 9}),
                               kKidney);
  labels = testing::paint(labels, {{{30, 30, 30}}}, kTumor);
  std::array<int, 4> seen{};
  const auto batch = sample_patches(ImageVolume::filled(g, 0.0F), labels,
                                    PatchSpec{{4, 4, 4}, 1.0}, 200, 77);
  for (const auto& p : batch.patches) ++seen[p.forced_class];
  EXPECT_EQ(seen[0], 0);
  EXPECT_EQ(seen[kCyst], 0);  // absent class is never chosen
  EXPECT_GT(seen[kKidney], 50);
  EXPECT_GT(seen[kTumor], 50);
}

TEST(PreprocessTest, PatchPaddingOutsideVolume) {
  const Geometry g({3, 3, 3}, {1, 1, 1});
  const auto img = ImageVolume::filled(g, 5.0F);
  const auto labels = LabelVolume(g, std::vector<std::uint8_t>(27, kKidney));
  const auto p = extract_patch(img, labels, {-1, 2, 0}, {3, 3, 3});
  EXPECT_EQ(p.image.at(0, 0, 0), 0.0F);
  EXPECT_EQ(p.labels.at(0, 0, 0), kBackground);
  EXPECT_EQ(p.image.at(1, 0, 0), 5.0F);
  EXPECT_EQ(p.labels.at(1, 0, 0), kKidney);
  EXPECT_EQ(p.labels.at(1, 1, 0), kBackground);
  EXPECT_EQ(p.labels.histogram()[kKidney], 2U * 1U * 3U);
}

TEST(PreprocessTest, PatchSpecValidation) {
  EXPECT_THROW((PatchSpec{{0, 1, 1}, 0.5}.validate()), Error);
  EXPECT_THROW((PatchSpec{{1, 1, 1}, 1.5}.validate()), Error);
  EXPECT_THROW((PatchSpec{{1, 1, 1}, -0.1}.validate()), Error);
  EXPECT_NO_THROW(PatchSpec{}.validate());
}

TEST(PreprocessTest, SamplingRejectsGeometryMismatch) {
  const Geometry a({4, 4, 4}, {1, 1, 1});
  const Geometry b({4, 4, 5}, {1, 1, 1});
  EXPECT_THROW(sample_patches(ImageVolume::filled(a, 0), LabelVolume::background(b),
                              PatchSpec{{2, 2, 2}, 0.5}, 1, 0),
               Error);
}

class AugmentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(8);
    const Geometry g({5, 4, 3}, {1, 1, 1});
    labels_.emplace(testing::random_labels(rng, g, 0.6));
    std::vector<float> d(g.voxel_count());
    std::iota(d.begin(), d.end(), 0.0F);
    image_.emplace(g, d);
  }
  std::optional<ImageVolume> image_;
  std::optional<LabelVolume> labels_;
};

TEST_F(AugmentTest, MirrorIsAnInvolution) {
  for (int axis = 0; axis < 3; ++axis) {
    AugmentOps ops;
    (axis == 0 ? ops.mirror_x : axis == 1 ? ops.mirror_y : ops.mirror_z) = true;
    const auto once = augment_patch(*image_, *labels_, ops);
    EXPECT_NE(once.first, *image_);
    const auto twice = augment_patch(once.first, once.second, ops);
    EXPECT_EQ(twice.first, *image_);
    EXPECT_EQ(twice.second, *labels_);
  }
}

TEST_F(AugmentTest, RotationHasOrderFour) {
  AugmentOps rot;
  rot.rot90_xy = true;
  auto cur = std::make_pair(*image_, *labels_);
  for (int k = 1; k <= 4; ++k) {
    cur = augment_patch(cur.first, cur.second, rot);
    if (k < 4) EXPECT_NE(cur.first, *image_);
  }
  EXPECT_EQ(cur.first, *image_);
  EXPECT_EQ(cur.second, *labels_);
  // Quarter turn (x, y) -> (ny - 1 - y, x) swaps the in-plane extents.
  const auto one = augment_patch(*image_, *labels_, rot);
  EXPECT_EQ(one.first.geometry().shape(), (Shape3{4, 5, 3}));
  EXPECT_EQ(one.first.at(4 - 1 - 2, 1, 0), image_->at(1, 2, 0));
}

TEST_F(AugmentTest, HistogramAndPairingPreserved) {
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    const auto ops = random_augment_ops(seed);
    const auto [img, lab] = augment_patch(*image_, *labels_, ops);
    EXPECT_EQ(lab.histogram(), labels_->histogram());
    // Image values are unique voxel ids, so each label must travel with its
    // image value.
    for (std::size_t i = 0; i < img.size(); ++i) {
      EXPECT_EQ(lab[i], (*labels_)[static_cast<std::size_t>(img[i])]);
    }
  }
  EXPECT_EQ(random_augment_ops(5).rot90_xy, random_augment_ops(5).rot90_xy);
}

}  // namespace
}  // namespace kitsfuse
