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

#include "kitsfuse/fusion.hpp"
#include "kitsfuse/phantom.hpp"

namespace kitsfuse {
namespace {

const ScenarioOutput& scenario() {
  static const ScenarioOutput out = generate_scenario(ScenarioSpec::named("fp_tumors"));
  return out;
}

void BM_PostprocessPair(benchmark::State& state) {
  const auto& s = scenario();
  const FusionConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(postprocess_pair(s.full_prediction, s.low_prediction, cfg));
  }
}
BENCHMARK(BM_PostprocessPair)->Unit(benchmark::kMillisecond);

void BM_HullMerge(benchmark::State& state) {
  const auto& s = scenario();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hull_merge_tumor(s.truth.labels, Connectivity::kVertex26));
  }
}
BENCHMARK(BM_HullMerge)->Unit(benchmark::kMillisecond);

void BM_GeneratePhantom(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(generate_phantom(PhantomSpec::standard(1)));
}
BENCHMARK(BM_GeneratePhantom)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace kitsfuse
