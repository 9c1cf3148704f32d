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

#include "kitsfuse/metrics.hpp"
#include "kitsfuse/phantom.hpp"

namespace kitsfuse {
namespace {

void BM_EvaluateCase(benchmark::State& state) {
  static const auto s = generate_scenario(ScenarioSpec::named("fp_tumors"));
  const double tol = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_case(s.full_prediction, s.truth.labels, tol));
  }
}
BENCHMARK(BM_EvaluateCase)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace kitsfuse
