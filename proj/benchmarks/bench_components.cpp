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

#include <benchmark/benchmark.h>

#include <random>

#include "kitsfuse/components.hpp"

namespace kitsfuse {
namespace {

BinaryMask random_mask(std::int64_t n, double density) {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution on(density);
  const Geometry g({n, n, n}, {1, 1, 1});
  std::vector<std::uint8_t> d(g.voxel_count());
  for (auto& v : d) v = on(rng);
  return BinaryMask(g, std::move(d));
}

void BM_LabelComponents(benchmark::State& state) {
  const auto mask = random_mask(state.range(0), 0.3);
  const auto conn = state.range(1) ? Connectivity::kVertex26 : Connectivity::kFace6;
  for (auto _ : state) benchmark::DoNotOptimize(label_components(mask, conn));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mask.size()));
}
BENCHMARK(BM_LabelComponents)->ArgsProduct({{64, 128}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_FilterMinVolume(benchmark::State& state) {
  const auto mask = random_mask(128, 0.3);
  std::vector<std::uint8_t> d(mask.data().begin(), mask.data().end());
  const LabelVolume labels(mask.geometry(), std::move(d));
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter_min_volume(labels, 50.0, Connectivity::kVertex26));
  }
}
BENCHMARK(BM_FilterMinVolume)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace kitsfuse
