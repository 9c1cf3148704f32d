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

#include <cmath>
#include <numbers>

#include "kitsfuse/components.hpp"
#include "kitsfuse/phantom.hpp"
#include "oracles.hpp"

namespace kitsfuse {
namespace {

TEST(PhantomTest, NoPrimitivesIsBackground) {
  PhantomSpec spec;
  spec.shape = {10, 10, 10};
  const auto p = generate_phantom(spec);
  EXPECT_EQ(p.labels, LabelVolume::background(Geometry(spec.shape, spec.spacing)));
  EXPECT_EQ(p.image.geometry(), p.labels.geometry());
}

TEST(PhantomTest, SphereVoxelizationVolume) {
  PhantomSpec spec;
  spec.shape = {40, 40, 40};
  spec.spacing = {1, 1, 1};
  spec.kidneys = {Ellipsoid{{20, 20, 20}, {15, 15, 15}}};
  spec.tumors = {Sphere{{20, 20, 20}, 10}};
  const auto p = generate_phantom(spec);
  const double analytic = 4.0 / 3.0 * std::numbers::pi * 1000.0;
  const double n = static_cast<double>(p.labels.histogram()[kTumor]);
  EXPECT_NEAR(n, analytic, 0.02 * analytic);
}

TEST(PhantomTest, OverridesAndIntensities) {
  PhantomSpec spec;
  spec.shape = {30, 30, 30};
  spec.spacing = {1, 1, 1};
  spec.noise_std_hu = 0.0;
  spec.kidneys = {Ellipsoid{{15, 15, 15}, {12, 10, 8}}};
  spec.cysts = {Sphere{{15, 15, 15}, 5}};
  spec.tumors = {Sphere{{18, 15, 15}, 3}};
  const auto p = generate_phantom(spec);
  EXPECT_EQ(p.labels.at(18, 15, 15), kTumor);   // tumor beats cyst
  EXPECT_EQ(p.labels.at(11, 15, 15), kCyst);    // cyst beats kidney
  EXPECT_EQ(p.labels.at(15, 15, 21), kKidney);
  EXPECT_EQ(p.labels.at(0, 0, 0), kBackground);
  EXPECT_EQ(p.image.at(18, 15, 15), kPhantomTumorHu);
  EXPECT_EQ(p.image.at(11, 15, 15), kPhantomCystHu);
  EXPECT_EQ(p.image.at(15, 15, 21), kPhantomKidneyHu);
  EXPECT_EQ(p.image.at(0, 0, 0), kPhantomBackgroundHu);
}

TEST(PhantomTest, Deterministic) {
  const auto a = generate_phantom(PhantomSpec::standard(3));
  const auto b = generate_phantom(PhantomSpec::standard(3));
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.labels, b.labels);
  const auto c = generate_phantom(PhantomSpec::standard(4));
  EXPECT_NE(a.image, c.image);
  for (std::uint64_t s = 0; s < 20; ++s) {
    EXPECT_EQ(generate_phantom(PhantomSpec::random(s)).labels,
              generate_phantom(PhantomSpec::random(s)).labels);
  }
}

TEST(PhantomTest, SpecValidation) {
  PhantomSpec spec;
  spec.shape = {20, 20, 20};
  spec.spacing = {1, 1, 1};
  spec.kidneys = {Ellipsoid{{10, 10, 10}, {5, 5, 5}}};
  spec.tumors = {Sphere{{2, 2, 2}, 1}};  // outside every kidney
  EXPECT_THROW(generate_phantom(spec), Error);
  spec.tumors = {Sphere{{10, 10, 10}, 15}};  // does not fit
  EXPECT_THROW(generate_phantom(spec), Error);
  spec.tumors.clear();
  spec.kidneys = {Ellipsoid{{10, 10, 10}, {5, 0, 5}}};
  EXPECT_THROW(generate_phantom(spec), Error);
  for (std::uint64_t s = 0; s < 50; ++s) EXPECT_NO_THROW(PhantomSpec::random(s).validate());
}

TEST(DegradeTest, EmptySpecIsIdentity) {
  const auto truth = generate_phantom(PhantomSpec::random(1)).labels;
  EXPECT_TRUE(DegradeSpec{}.is_identity());
  EXPECT_EQ(degrade(truth, DegradeSpec{}), truth);
}

TEST(DegradeTest, FalsePositiveTumorsStayApart) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto truth = generate_phantom(PhantomSpec::random(seed)).labels;
    DegradeSpec spec;
    spec.add_fp_tumor = {1 + seed % 3, 2.0, 4.0};
    spec.seed = seed;
    const auto r = degrade_with_report(truth, spec);
    EXPECT_EQ(r.fp_components, spec.add_fp_tumor.count);
    std::size_t added = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (truth[i] != kBackground) {
        ASSERT_EQ(r.labels[i], truth[i]);
      } else if (r.labels[i] != kBackground) {
        ASSERT_EQ(r.labels[i], kTumor);
        ++added;
      }
    }
    EXPECT_EQ(added, r.fp_voxels);
    // Each sphere is its own foreground blob.
    const auto before = label_components(foreground_mask(truth), Connectivity::kVertex26).count();
    const auto after =
        label_components(foreground_mask(r.labels), Connectivity::kVertex26).count();
    EXPECT_EQ(after, before + spec.add_fp_tumor.count);
  }
}

TEST(DegradeTest, DropTumor) {
  const auto truth = generate_phantom(PhantomSpec::standard()).labels;
  ASSERT_GT(truth.histogram()[kTumor], 0U);
  const auto out = degrade(truth, DegradeSpec{.drop_tumor = true});
  const auto h = out.histogram();
  EXPECT_EQ(h[kTumor], 0U);
  EXPECT_EQ(h[kKidney], truth.histogram()[kKidney]);
  EXPECT_EQ(h[kCyst], truth.histogram()[kCyst]);
}

TEST(DegradeTest, ErosionShrinks) {
  const auto truth = generate_phantom(PhantomSpec::standard()).labels;
  DegradeSpec spec;
  spec.erode_boundary_steps = 2;
  const auto out = degrade(truth, spec);
  const auto fg_in = foreground_mask(truth).count();
  const auto fg_out = foreground_mask(out).count();
  EXPECT_LT(fg_out, fg_in);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] != kBackground) ASSERT_EQ(out[i], truth[i]);
  }
}

TEST(DegradeTest, DownsampleKeepsLargeStructures) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto truth = generate_phantom(PhantomSpec::standard(seed)).labels;
    DegradeSpec spec;
    spec.downsample_to_lowres = true;
    const auto out = degrade(truth, spec);
    EXPECT_EQ(out.geometry(), truth.geometry());
    EXPECT_GE(binary_dice(foreground_mask(out), foreground_mask(truth)), 0.9);
    EXPECT_GE(binary_dice(region_mask(out, Region::kMasses), region_mask(truth, Region::kMasses)),
              0.9);
  }
}

TEST(DegradeTest, InvalidSpec) {
  DegradeSpec spec;
  spec.add_fp_tumor = {1, 0.0, 2.0};
  EXPECT_THROW(spec.validate(), Error);
  spec.add_fp_tumor = {1, 3.0, 2.0};
  EXPECT_THROW(spec.validate(), Error);
  spec.add_fp_tumor = {};
  spec.erode_boundary_steps = -1;
  EXPECT_THROW(spec.validate(), Error);
}

TEST(ScenarioTest, FalsePositiveScenarioKnowsItsDice) {
  const auto out = generate_scenario(ScenarioSpec::named("fp_tumors"));
  EXPECT_EQ(out.full_fp_components, 3U);
  ASSERT_TRUE(out.expected_full_tumor_dice.has_value());
  const double measured = binary_dice(region_mask(out.full_prediction, Region::kTumor),
                                      region_mask(out.truth.labels, Region::kTumor));
  EXPECT_NEAR(*out.expected_full_tumor_dice, measured, 1e-12);
  EXPECT_LT(measured, 1.0);
  EXPECT_EQ(out.low_prediction.geometry().spacing(), kLowResSpacing);
}

TEST(ScenarioTest, ConsistentScenario) {
  const auto out = generate_scenario(ScenarioSpec::named("consistent"));
  EXPECT_EQ(out.full_prediction, out.truth.labels);
  EXPECT_EQ(out.low_prediction, out.truth.labels);
  EXPECT_THROW(ScenarioSpec::named("nope"), Error);
}

TEST(ScenarioTest, TextRoundTrip) {
  auto spec = ScenarioSpec::named("fp_tumors", 7);
  spec.low.erode_boundary_steps = 1;
  const auto back = ScenarioSpec::from_text(spec.to_text());
  EXPECT_EQ(back.to_text(), spec.to_text());
  const auto a = generate_scenario(spec);
  const auto b = generate_scenario(back);
  EXPECT_EQ(a.full_prediction, b.full_prediction);
  EXPECT_EQ(a.low_prediction, b.low_prediction);

  const auto builtin = ScenarioSpec::from_text("scenario = missing_tumor\nseed = 2\n");
  EXPECT_EQ(builtin.to_text(), ScenarioSpec::named("missing_tumor", 2).to_text());
  EXPECT_THROW(ScenarioSpec::from_text("bogus_key = 1\n"), Error);
}

}  // namespace
}  // namespace kitsfuse
