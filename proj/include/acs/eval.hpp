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

// Diagnostic evaluation: splits, confusion matrices, the five headline
// metrics, ROC/AUC, the +/-10% overlap significance rule and the
// calibrated linear-average baseline.

#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "acs/forest.hpp"
#include "acs/types.hpp"

namespace acs::eval {

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded shuffle-split. When stratified, each class contributes
/// round(n_class * test_fraction) rows to the test side. Both index lists are
/// returned in ascending order.
SplitIndices split_indices(const Dataset& dataset, double test_fraction,
                           std::uint64_t seed, bool stratified = true);

std::pair<Dataset, Dataset> train_test_split(const Dataset& dataset,
                                             double test_fraction,
                                             std::uint64_t seed,
                                             bool stratified = true);

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion_matrix(std::span<const Label> labels,
                                 std::span<const Label> predictions);

enum class Metric { kAccuracy, kPrecision, kSensitivity, kSpecificity, kF1 };
inline constexpr std::array<Metric, 5> kAllMetrics = {
    Metric::kAccuracy, Metric::kPrecision, Metric::kSensitivity,
    Metric::kSpecificity, Metric::kF1};

std::string metric_name(Metric m);

struct Metrics {
  std::array<double, 5> values{};
  // A metric with a zero denominator is reported as 0 and flagged here.
  std::array<bool, 5> undefined{};

  double operator[](Metric m) const { return values[static_cast<std::size_t>(m)]; }
  bool is_undefined(Metric m) const {
    return undefined[static_cast<std::size_t>(m)];
  }
  double accuracy() const { return (*this)[Metric::kAccuracy]; }
  double precision() const { return (*this)[Metric::kPrecision]; }
  double sensitivity() const { return (*this)[Metric::kSensitivity]; }
  double specificity() const { return (*this)[Metric::kSpecificity]; }
  double f1() const { return (*this)[Metric::kF1]; }
};

/// Accuracy, precision, sensitivity, specificity and F1. Throws DataError for
/// an all-zero matrix.
Metrics compute_metrics(const ConfusionMatrix& cm);

struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (fpr, tpr)
  std::vector<double> thresholds;  // first entry is +inf for (0, 0)
  double auc = 0.0;
};

/// Sweeps every distinct score as an inclusive threshold, highest first.
/// Throws DataError unless both classes are present.
RocCurve roc_points(std::span<const double> scores,
                    std::span<const Label> labels);

enum class Significance { kSignificant, kInsignificant };

/// Insignificant iff [a(1-rel), a(1+rel)] and [b(1-rel), b(1+rel)] intersect.
Significance significance_overlap(double metric_a, double metric_b,
                                  double rel = 0.10);

/// Per-sensor linear map from ADC counts to estimated bag pressure.
struct Calibration {
  std::array<double, kNumSensors> slope{};
  std::array<double, kNumSensors> intercept{};

  std::array<double, kNumSensors> estimate(const SensorFrame& frame) const;
};

/// Least-squares fit of bag pressure against counts, sensor by sensor.
Calibration calibrate_linear(const Dataset& train);

enum class BaselineRule {
  kMean,       // mean estimated pressure >= 30 mmHg
  kAnySensor,  // any single estimate >= 30 mmHg
};

Label baseline_decide(const std::array<double, kNumSensors>& estimates,
                      BaselineRule rule = BaselineRule::kMean);

Label baseline_classify(const Calibration& cal, const SensorFrame& frame,
                        BaselineRule rule = BaselineRule::kMean);

// Convenience wrappers over a whole dataset.
std::vector<Label> labels_of(const Dataset& dataset);
std::vector<double> forest_scores(const forest::RandomForest& forest,
                                  const Dataset& dataset);
std::vector<Label> forest_predictions(const forest::RandomForest& forest,
                                      const Dataset& dataset,
                                      double threshold = 0.5);
std::vector<Label> baseline_predictions(const Calibration& cal,
                                        const Dataset& dataset,
                                        BaselineRule rule = BaselineRule::kMean);

/// `metric,value,flag` rows: the five metrics then tp, tn, fp, fn.
void write_metrics_csv(const Metrics& metrics, const ConfusionMatrix& cm,
                       std::ostream& out);

/// Reads the five metric rows back; throws DataError if any is missing.
std::map<Metric, double> read_metrics_csv(std::istream& in);

/// `threshold,fpr,tpr` rows.
void write_roc_csv(const RocCurve& roc, std::ostream& out);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace acs::eval
