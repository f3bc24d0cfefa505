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

#include "acs/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "acs/error.hpp"
#include "acs/rng.hpp"

namespace acs::eval {

namespace {

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(v[i - 1], v[j]);
  }
}

std::size_t test_count(std::size_t n, double fraction) {
  return static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * fraction));
}

double ratio(std::uint64_t num, std::uint64_t den, bool& undefined) {
  undefined = den == 0;
  return undefined ? 0.0
                   : static_cast<double>(num) / static_cast<double>(den);
}

Dataset subset(const Dataset& d, const std::vector<std::size_t>& idx) {
  Dataset out;
  out.scenario = d.scenario;
  out.rows.reserve(idx.size());
  for (auto i : idx) out.rows.push_back(d.rows[i]);
  return out;
}

}  // namespace

SplitIndices split_indices(const Dataset& dataset, double test_fraction,
                           std::uint64_t seed, bool stratified) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ParameterError("test_fraction must be in (0, 1)");
  }
  Rng rng(seed);
  SplitIndices out;
  auto take = [&](std::vector<std::size_t> pool) {
    shuffle(pool, rng);
    const auto k = test_count(pool.size(), test_fraction);
    out.test.insert(out.test.end(), pool.begin(),
                    pool.begin() + static_cast<long>(k));
    out.train.insert(out.train.end(), pool.begin() + static_cast<long>(k),
                     pool.end());
  };

  if (stratified) {
    std::vector<std::size_t> neg;
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      (dataset.rows[i].label == Label::kPositive ? pos : neg).push_back(i);
    }
    if (neg.empty() || pos.empty()) {
      throw DataError("stratified split needs both classes");
    }
    take(std::move(neg));
    take(std::move(pos));
  } else {
    std::vector<std::size_t> all(dataset.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    take(std::move(all));
  }
  if (out.train.empty() || out.test.empty()) {
    throw DataError("split leaves an empty train or test side");
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& dataset,
                                             double test_fraction,
                                             std::uint64_t seed,
                                             bool stratified) {
  const auto idx = split_indices(dataset, test_fraction, seed, stratified);
  return {subset(dataset, idx.train), subset(dataset, idx.test)};
}

ConfusionMatrix confusion_matrix(std::span<const Label> labels,
                                 std::span<const Label> predictions) {
  if (labels.size() != predictions.size()) {
    throw ParameterError("labels and predictions differ in length");
  }
  if (labels.empty()) throw ParameterError("confusion matrix of nothing");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool truth = labels[i] == Label::kPositive;
    const bool pred = predictions[i] == Label::kPositive;
    if (truth && pred) ++cm.tp;
    else if (!truth && !pred) ++cm.tn;
    else if (pred) ++cm.fp;
    else ++cm.fn;
  }
  return cm;
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::kAccuracy: return "accuracy";
    case Metric::kPrecision: return "precision";
    case Metric::kSensitivity: return "sensitivity";
    case Metric::kSpecificity: return "specificity";
    case Metric::kF1: return "f1";
  }
  return "unknown";
}

Metrics compute_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw DataError("metrics of an empty confusion matrix");
  Metrics m;
  auto slot = [&](Metric k) -> std::pair<double&, bool&> {
    const auto i = static_cast<std::size_t>(k);
    return {m.values[i], m.undefined[i]};
  };
  {
    auto [v, u] = slot(Metric::kAccuracy);
    v = ratio(cm.tp + cm.tn, cm.total(), u);
  }
  {
    auto [v, u] = slot(Metric::kPrecision);
    v = ratio(cm.tp, cm.tp + cm.fp, u);
  }
  {
    auto [v, u] = slot(Metric::kSensitivity);
    v = ratio(cm.tp, cm.tp + cm.fn, u);
  }
  {
    auto [v, u] = slot(Metric::kSpecificity);
    v = ratio(cm.tn, cm.tn + cm.fp, u);
  }
  {
    // Harmonic mean of precision and sensitivity; with both defined it reduces
    // to 2TP / (2TP + FP + FN), computed in one rounding.
    auto [v, u] = slot(Metric::kF1);
    if (m.is_undefined(Metric::kPrecision) ||
        m.is_undefined(Metric::kSensitivity) || cm.tp == 0) {
      v = 0.0;
      u = true;
    } else {
      v = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn, u);
    }
  }
  return m;
}

RocCurve roc_points(std::span<const double> scores,
                    std::span<const Label> labels) {
  if (scores.size() != labels.size()) {
    throw ParameterError("scores and labels differ in length");
  }
  std::uint64_t positives = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (std::isnan(scores[i])) throw ParameterError("NaN score");
    positives += labels[i] == Label::kPositive;
  }
  const std::uint64_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw DataError("ROC needs both classes");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.points.emplace_back(0.0, 0.0);
  roc.thresholds.push_back(std::numeric_limits<double>::infinity());
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == threshold; ++i) {
      (labels[order[i]] == Label::kPositive ? tp : fp) += 1;
    }
    roc.points.emplace_back(
        static_cast<double>(fp) / static_cast<double>(negatives),
        static_cast<double>(tp) / static_cast<double>(positives));
    roc.thresholds.push_back(threshold);
  }

  for (std::size_t i = 1; i < roc.points.size(); ++i) {
    const auto [x0, y0] = roc.points[i - 1];
    const auto [x1, y1] = roc.points[i];
    roc.auc += (x1 - x0) * (y0 + y1) / 2.0;
  }
  return roc;
}

Significance significance_overlap(double metric_a, double metric_b,
                                  double rel) {
  if (!(rel > 0)) throw ParameterError("relative error bar must be positive");
  for (double m : {metric_a, metric_b}) {
    if (!(m >= 0.0 && m <= 1.0)) {
      throw ParameterError("metric values must be in [0, 1]");
    }
  }
  const double lo = std::max(metric_a * (1 - rel), metric_b * (1 - rel));
  const double hi = std::min(metric_a * (1 + rel), metric_b * (1 + rel));
  return lo <= hi ? Significance::kInsignificant : Significance::kSignificant;
}

std::array<double, kNumSensors> Calibration::estimate(
    const SensorFrame& frame) const {
  std::array<double, kNumSensors> out{};
  for (std::size_t i = 0; i < kNumSensors; ++i) {
    out[i] = slope[i] * frame.counts[i] + intercept[i];
  }
  return out;
}

Calibration calibrate_linear(const Dataset& train) {
  std::set<double> pressures;
  for (const auto& r : train.rows) pressures.insert(r.bag_pressure_mmhg);
  if (pressures.size() < 2) {
    throw DataError("calibration needs at least two distinct pressures");
  }
  const auto n = static_cast<double>(train.size());
  double mean_p = 0;
  for (const auto& r : train.rows) mean_p += r.bag_pressure_mmhg;
  mean_p /= n;

  Calibration cal;
  for (std::size_t s = 0; s < kNumSensors; ++s) {
    double mean_c = 0;
    for (const auto& r : train.rows) mean_c += r.frame.counts[s];
    mean_c /= n;
    double sxx = 0;
    double sxy = 0;
    for (const auto& r : train.rows) {
      const double dc = r.frame.counts[s] - mean_c;
      sxx += dc * dc;
      sxy += dc * (r.bag_pressure_mmhg - mean_p);
    }
    if (sxx == 0) {
      throw DataError("sensor s" + std::to_string(s) +
                      " has constant counts; cannot fit");
    }
    cal.slope[s] = sxy / sxx;
    cal.intercept[s] = mean_p - cal.slope[s] * mean_c;
    if (!(cal.slope[s] > 0)) {
      throw DataError("sensor s" + std::to_string(s) +
                      " fit has non-positive slope");
    }
  }
  return cal;
}

Label baseline_decide(const std::array<double, kNumSensors>& estimates,
                      BaselineRule rule) {
  if (rule == BaselineRule::kAnySensor) {
    for (double e : estimates) {
      if (e >= kAcsThresholdMmHg) return Label::kPositive;
    }
    return Label::kNegative;
  }
  double sum = 0;
  for (double e : estimates) sum += e;
  return label_for_pressure(sum / static_cast<double>(kNumSensors));
}

Label baseline_classify(const Calibration& cal, const SensorFrame& frame,
                        BaselineRule rule) {
  return baseline_decide(cal.estimate(frame), rule);
}

std::vector<Label> labels_of(const Dataset& dataset) {
  std::vector<Label> out;
  out.reserve(dataset.size());
  for (const auto& r : dataset.rows) out.push_back(r.label);
  return out;
}

std::vector<double> forest_scores(const forest::RandomForest& forest,
                                  const Dataset& dataset) {
  std::vector<double> out;
  out.reserve(dataset.size());
  for (const auto& r : dataset.rows) {
    out.push_back(forest::predict_proba(forest, r.frame));
  }
  return out;
}

std::vector<Label> forest_predictions(const forest::RandomForest& forest,
                                      const Dataset& dataset,
                                      double threshold) {
  std::vector<Label> out;
  out.reserve(dataset.size());
  for (const auto& r : dataset.rows) {
    out.push_back(forest::classify(forest, r.frame, threshold));
  }
  return out;
}

std::vector<Label> baseline_predictions(const Calibration& cal,
                                        const Dataset& dataset,
                                        BaselineRule rule) {
  std::vector<Label> out;
  out.reserve(dataset.size());
  for (const auto& r : dataset.rows) {
    out.push_back(baseline_classify(cal, r.frame, rule));
  }
  return out;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_metrics_csv(const Metrics& metrics, const ConfusionMatrix& cm,
                       std::ostream& out) {
  out << "metric,value,flag\n";
  for (auto m : kAllMetrics) {
    out << metric_name(m) << ',' << format_double(metrics[m]) << ','
        << (metrics.is_undefined(m) ? "undefined" : "ok") << '\n';
  }
  out << "tp," << cm.tp << ",count\n"
      << "tn," << cm.tn << ",count\n"
      << "fp," << cm.fp << ",count\n"
      << "fn," << cm.fn << ",count\n";
}

std::map<Metric, double> read_metrics_csv(std::istream& in) {
  std::map<Metric, double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line_no == 1) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw DataError("metrics line " + std::to_string(line_no) +
                      ": expected metric,value,flag");
    }
    const auto name = line.substr(0, c1);
    for (auto m : kAllMetrics) {
      if (metric_name(m) != name) continue;
      double v = 0;
      const char* first = line.data() + c1 + 1;
      const char* last = line.data() + c2;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc{} || ptr != last) {
        throw DataError("metrics line " + std::to_string(line_no) +
                        ": bad value");
      }
      out[m] = v;
    }
  }
  for (auto m : kAllMetrics) {
    if (!out.count(m)) throw DataError("metrics file lacks " + metric_name(m));
  }
  return out;
}

void write_roc_csv(const RocCurve& roc, std::ostream& out) {
  out << "threshold,fpr,tpr\n";
  for (std::size_t i = 0; i < roc.points.size(); ++i) {
    out << format_double(roc.thresholds[i]) << ','
        << format_double(roc.points[i].first) << ','
        << format_double(roc.points[i].second) << '\n';
  }
}

}  // namespace acs::eval
