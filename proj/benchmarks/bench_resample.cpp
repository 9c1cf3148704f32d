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

#include "kitsfuse/phantom.hpp"
#include "kitsfuse/resample.hpp"

namespace kitsfuse {
namespace {

const Phantom& phantom() {
  static const Phantom p = generate_phantom(PhantomSpec::standard(2));
  return p;
}

void BM_ResampleImageToLowRes(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(resample_image(phantom().image, TargetSpec::lowres()));
  }
}
BENCHMARK(BM_ResampleImageToLowRes)->Unit(benchmark::kMillisecond);

void BM_ResampleLabelsToFullRes(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(resample_labels(phantom().labels, TargetSpec::fullres()));
  }
}
BENCHMARK(BM_ResampleLabelsToFullRes)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace kitsfuse
