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

#include "acs/replicate.hpp"

#include <fmt/format.h>

#include "acs/rng.hpp"

namespace acs {

namespace {

ScenarioResult score(const forest::RandomForest& forest,
                     const eval::Calibration& cal, const Dataset& test,
                     const ReplicationOptions& options) {
  ScenarioResult r;
  r.test_rows = test.size();
  const auto labels = eval::labels_of(test);
  r.cm = eval::confusion_matrix(
      labels, eval::forest_predictions(forest, test, options.threshold));
  r.metrics = eval::compute_metrics(r.cm);
  r.roc = eval::roc_points(eval::forest_scores(forest, test), labels);
  r.baseline_cm = eval::confusion_matrix(
      labels, eval::baseline_predictions(cal, test, options.baseline_rule));
  r.baseline = eval::compute_metrics(r.baseline_cm);
  return r;
}

}  // namespace

ReplicationSeeds ReplicationSeeds::from(std::uint64_t seed) {
  return {derive_seed(seed, 0), derive_seed(seed, 1), derive_seed(seed, 2),
          derive_seed(seed, 3), derive_seed(seed, 4)};
}

ReplicationReport run_replication(const ReplicationOptions& options) {
  ReplicationReport rep;
  rep.seeds = ReplicationSeeds::from(options.seed);
  rep.motionless_data = sim::generate_dataset(Scenario::kMotionless,
                                              options.sim,
                                              rep.seeds.motionless_data);
  rep.motion_data = sim::generate_dataset(Scenario::kMotion, options.sim,
                                          rep.seeds.motion_data);

  auto [train, motionless_test] = eval::train_test_split(
      rep.motionless_data, options.test_fraction, rep.seeds.motionless_split);
  auto [unused, motion_test] = eval::train_test_split(
      rep.motion_data, options.test_fraction, rep.seeds.motion_split);
  rep.train = std::move(train);
  rep.motionless_test = std::move(motionless_test);
  rep.motion_test = std::move(motion_test);

  const auto forest =
      forest::train_forest(rep.train.rows, options.params, rep.seeds.forest);
  rep.model_blob = model::encode_model(forest);
  rep.model_digest = model::model_digest(rep.model_blob);
  rep.calibration = eval::calibrate_linear(rep.train);

  rep.motionless = score(forest, rep.calibration, rep.motionless_test, options);
  rep.motion = score(forest, rep.calibration, rep.motion_test, options);
  for (auto m : eval::kAllMetrics) {
    rep.significance[m] =
        eval::significance_overlap(rep.motionless.metrics[m],
                                   rep.motion.metrics[m]);
  }
  return rep;
}

void print_replication_table(const ReplicationReport& report,
                             std::ostream& out) {
  const auto row = [&](std::string_view name, const eval::Metrics& m,
                       std::string auc) {
    out << fmt::format("{:<22}", name);
    for (auto k : eval::kAllMetrics) out << fmt::format("{:>15.4f}", m[k]);
    out << fmt::format("{:>9}\n", auc);
  };

  out << fmt::format("{:<22}", "scenario");
  for (auto k : eval::kAllMetrics) {
    out << fmt::format("{:>15}", eval::metric_name(k));
  }
  out << fmt::format("{:>9}\n", "auc");
  row("motionless", report.motionless.metrics,
      fmt::format("{:.4f}", report.motionless.roc.auc));
  row("motion", report.motion.metrics,
      fmt::format("{:.4f}", report.motion.roc.auc));
  row("baseline motionless", report.motionless.baseline, "-");
  row("baseline motion", report.motion.baseline, "-");

  out << fmt::format("{:<22}", "10% error bars");
  for (auto k : eval::kAllMetrics) {
    const bool sig =
        report.significance.at(k) == eval::Significance::kSignificant;
    out << fmt::format("{:>15}", sig ? "significant" : "insignificant");
  }
  out << '\n';

  const double gap =
      report.motion.metrics.specificity() - report.motion.baseline.specificity();
  out << fmt::format("motion specificity gain over baseline: {:+.4f}\n", gap);
  out << fmt::format("train rows {}, motionless test rows {}, motion test rows {}\n",
                     report.train.size(), report.motionless.test_rows,
                     report.motion.test_rows);
  out << "model digest " << report.model_digest << '\n';
}

}  // namespace acs
