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

#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>

#include "acs/eval.hpp"
#include "acs/forest.hpp"
#include "acs/model_format.hpp"
#include "acs/simulator.hpp"

namespace acs {

struct ReplicationOptions {
  std::uint64_t seed = 42;
  sim::SimConfig sim;
  forest::TrainParams params;
  double test_fraction = 0.2;
  double threshold = 0.5;
  eval::BaselineRule baseline_rule = eval::BaselineRule::kMean;
};

/// Substream seeds of a replication run, all derived from the master seed.
struct ReplicationSeeds {
  std::uint64_t motionless_data;
  std::uint64_t motion_data;
  std::uint64_t motionless_split;
  std::uint64_t motion_split;
  std::uint64_t forest;

  static ReplicationSeeds from(std::uint64_t seed);
};

struct ScenarioResult {
  std::size_t test_rows = 0;
  eval::ConfusionMatrix cm;
  eval::Metrics metrics;
  eval::RocCurve roc;
  eval::ConfusionMatrix baseline_cm;
  eval::Metrics baseline;
};

struct ReplicationReport {
  ReplicationSeeds seeds{};
  Dataset motionless_data;
  Dataset motion_data;
  Dataset train;
  Dataset motionless_test;
  Dataset motion_test;
  model::ModelBlob model_blob;
  std::string model_digest;
  eval::Calibration calibration;
  ScenarioResult motionless;
  ScenarioResult motion;
  std::map<eval::Metric, eval::Significance> significance;
};

/// The full study: simulate both scenarios, train on 80% of the motionless
/// rows only, then score the held-out 20% of each scenario with the forest
/// and the linear-average baseline.
ReplicationReport run_replication(const ReplicationOptions& options);

/// Side-by-side metric table with significance verdicts.
void print_replication_table(const ReplicationReport& report, std::ostream& out);

}  // namespace acs
