// Copyright 2026 The histfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "histfilter/enumeration.h"
#include "histfilter/estimation.h"

namespace histfilter {
namespace {

const Evaluation& MidInstance() {
  static const Evaluation* eval = [] {
    const SizeRegime regime = SizeRegimes()[1];
    const Instance inst =
        GenerateInstance(regime.config, BiasedRandomSpec{0.7, 3}, regime.tricks_played, 11);
    return new Evaluation(inst.public_state, MakePolicy(inst.policy_spec, inst.config));
  }();
  return *eval;
}

void BM_MemberValues(benchmark::State& state) {
  const Evaluation& eval = MidInstance();
  for (auto _ : state) benchmark::DoNotOptimize(MemberValues(eval.belief(), eval.policy()));
}

void BM_MemberValuesSerial(benchmark::State& state) {
  const Evaluation& eval = MidInstance();
  for (auto _ : state) benchmark::DoNotOptimize(MemberValuesSerial(eval.belief(), eval.policy()));
}

SweepSpec SmallSweep() {
  SweepSpec spec;
  spec.sample_grid = {100};
  spec.thinning_grid = {10};
  spec.replicates = 8;
  return spec;
}

void BM_Sweep(benchmark::State& state) {
  const Evaluation& eval = MidInstance();
  for (auto _ : state) benchmark::DoNotOptimize(Sweep(eval, SmallSweep()));
}

void BM_SweepSerial(benchmark::State& state) {
  const Evaluation& eval = MidInstance();
  for (auto _ : state) benchmark::DoNotOptimize(SweepSerial(eval, SmallSweep()));
}

BENCHMARK(BM_MemberValues)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MemberValuesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace histfilter

BENCHMARK_MAIN();
