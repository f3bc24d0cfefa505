// Copyright 2026 The ACS Diagnostic Authors
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

#include <benchmark/benchmark.h>

#include "acs/forest.hpp"
#include "acs/model_format.hpp"
#include "acs/simulator.hpp"
#include "acs/telemetry.hpp"

namespace {

using namespace acs;

const forest::RandomForest& model() {
  static const auto f = [] {
    const auto data = sim::generate_dataset(Scenario::kMotion, {}, 10);
    return forest::train_forest(data.rows, {}, 10);
  }();
  return f;
}

const Dataset& frames() {
  static const auto d = sim::generate_dataset(Scenario::kMotion, {}, 11);
  return d;
}

void BM_Classify(benchmark::State& state) {
  const auto& f = model();
  const auto& d = frames();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forest::classify(f, d.rows[i].frame));
    if (++i == d.size()) i = 0;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Classify);

void BM_Pipeline(benchmark::State& state) {
  const auto& f = model();
  const auto& d = frames();
  telemetry::Pipeline p(f, {0.5, 5});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.process(d.rows[i].frame));
    if (++i == d.size()) i = 0;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Pipeline);

void BM_DecodeStream(benchmark::State& state) {
  std::vector<std::uint8_t> bytes;
  for (const auto& r : frames().rows) telemetry::append_frame(bytes, r.frame);
  for (auto _ : state) {
    benchmark::DoNotOptimize(telemetry::decode_stream(bytes));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(frames().size()));
}
BENCHMARK(BM_DecodeStream);

void BM_Train(benchmark::State& state) {
  const auto data = sim::generate_dataset(Scenario::kMotionless, {}, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forest::train_forest(data.rows, {}, 3));
  }
}
BENCHMARK(BM_Train)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
