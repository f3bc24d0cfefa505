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

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "acs/error.hpp"
#include "acs/simulator.hpp"
#include "oracles.hpp"

namespace acs::eval {
namespace {

constexpr Label P = Label::kPositive;
constexpr Label N = Label::kNegative;

TEST(SplitTest, ProtocolSizes) {
  const auto d = sim::generate_dataset(Scenario::kMotionless, {}, 1);
  const auto s = split_indices(d, 0.2, 5);
  EXPECT_EQ(s.test.size(), 96u);
  EXPECT_EQ(s.train.size(), 384u);

  Dataset short_run = d;
  short_run.rows.erase(short_run.rows.begin() + 200, short_run.rows.begin() + 280);
  const auto p = split_indices(short_run, 0.2, 5);
  EXPECT_EQ(p.test.size(), 80u);
  EXPECT_EQ(p.train.size(), 320u);
}

TEST(SplitTest, PartitionAndDeterminism) {
  const auto d = sim::generate_dataset(Scenario::kMotion, {}, 2);
  for (bool stratified : {true, false}) {
    const auto a = split_indices(d, 0.2, 9, stratified);
    const auto b = split_indices(d, 0.2, 9, stratified);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.test, b.test);
    std::set<std::size_t> all(a.train.begin(), a.train.end());
    all.insert(a.test.begin(), a.test.end());
    EXPECT_EQ(all.size(), d.size());
  }
  const auto s = train_test_split(d, 0.2, 9).second;
  EXPECT_EQ(s.count(P), 48u);
  EXPECT_NE(split_indices(d, 0.2, 9).test, split_indices(d, 0.2, 10).test);
}

TEST(SplitTest, Errors) {
  auto d = sim::generate_dataset(Scenario::kMotionless, {}, 1);
  EXPECT_THROW(split_indices(d, 0.0, 1), ParameterError);
  EXPECT_THROW(split_indices(d, 1.0, 1), ParameterError);
  d.rows.resize(240);  // negatives only
  EXPECT_THROW(split_indices(d, 0.2, 1), DataError);
  EXPECT_THROW(split_indices(d, 0.001, 1, false), DataError);
}

TEST(ConfusionTest, SpecCases) {
  const std::vector<Label> l1{P, P, N, N};
  EXPECT_EQ(confusion_matrix(l1, l1), (ConfusionMatrix{2, 2, 0, 0}));
  const std::vector<Label> l2{P, N}, p2{N, P};
  EXPECT_EQ(confusion_matrix(l2, p2), (ConfusionMatrix{0, 0, 1, 1}));
  const std::vector<Label> l3{P, P, P, N}, p3{P, N, P, N};
  EXPECT_EQ(confusion_matrix(l3, p3), (ConfusionMatrix{2, 1, 0, 1}));
  EXPECT_THROW(confusion_matrix(l1, l2), ParameterError);
}

TEST(MetricsTest, SpecCases) {
  const auto perfect = compute_metrics({2, 2, 0, 0});
  for (auto m : kAllMetrics) EXPECT_EQ(perfect[m], 1.0);
  EXPECT_EQ(compute_metrics({3, 0, 1, 0}).precision(), 0.75);
  // 97 of 100 positives found, 3 false alarms: precision = sensitivity = 0.97.
  const auto equal = compute_metrics({97, 50, 3, 3});
  EXPECT_DOUBLE_EQ(equal.precision(), 0.97);
  EXPECT_DOUBLE_EQ(equal.f1(), 0.97);
  EXPECT_THROW(compute_metrics({}), DataError);
}

TEST(MetricsTest, UndefinedFlags) {
  const auto m = compute_metrics({0, 5, 0, 0});
  EXPECT_TRUE(m.is_undefined(Metric::kPrecision));
  EXPECT_TRUE(m.is_undefined(Metric::kSensitivity));
  EXPECT_TRUE(m.is_undefined(Metric::kF1));
  EXPECT_FALSE(m.is_undefined(Metric::kSpecificity));
  EXPECT_EQ(m.precision(), 0.0);
}

TEST(MetricsTest, RationalOracleSmall) {
  for (int tp = 0; tp <= 8; ++tp)
    for (int tn = 0; tn <= 8; ++tn)
      for (int fp = 0; fp <= 8; ++fp)
        for (int fn = 0; fn <= 8; ++fn) {
          if (tp + tn + fp + fn == 0) continue;
          const ConfusionMatrix cm{static_cast<std::uint64_t>(tp),
                                   static_cast<std::uint64_t>(tn),
                                   static_cast<std::uint64_t>(fp),
                                   static_cast<std::uint64_t>(fn)};
          const auto got = compute_metrics(cm);
          const auto want = oracle::rational_metrics(tp, tn, fp, fn);
          for (auto k : kAllMetrics) {
            const auto w = want.get(k);
            ASSERT_EQ(got.is_undefined(k), !w.has_value());
            if (w) ASSERT_EQ(got[k], oracle::to_double(*w));
            ASSERT_GE(got[k], 0.0);
            ASSERT_LE(got[k], 1.0);
          }
        }
}

TEST(RocTest, SpecCases) {
  const std::vector<double> s{0.9, 0.8, 0.4, 0.2};
  const std::vector<Label> sep{P, P, N, N}, mixed{P, N, P, N};
  EXPECT_EQ(roc_points(s, sep).auc, 1.0);
  EXPECT_EQ(roc_points(s, mixed).auc, 0.75);
  const std::vector<double> flat{0.3, 0.3, 0.3, 0.3};
  const auto r = roc_points(flat, mixed);
  EXPECT_EQ(r.auc, 0.5);
  ASSERT_EQ(r.points.size(), 2u);
  EXPECT_EQ(r.points.back(), std::make_pair(1.0, 1.0));
  const std::vector<Label> one{P, P, P, P};
  EXPECT_THROW(roc_points(s, one), DataError);
}

TEST(RocTest, CurveIsMonotone) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 2 + rng.uniform_index(40);
    std::vector<double> scores;
    std::vector<Label> labels;
    for (std::size_t i = 0; i < n; ++i) {
      scores.push_back(static_cast<double>(rng.uniform_index(6)) / 5);
      labels.push_back(i == 0 ? P : i == 1 ? N : rng.uniform_index(2) ? P : N);
    }
    const auto r = roc_points(scores, labels);
    EXPECT_EQ(r.points.front(), std::make_pair(0.0, 0.0));
    EXPECT_EQ(r.points.back(), std::make_pair(1.0, 1.0));
    for (std::size_t i = 1; i < r.points.size(); ++i) {
      EXPECT_GE(r.points[i].first, r.points[i - 1].first);
      EXPECT_GE(r.points[i].second, r.points[i - 1].second);
      EXPECT_LT(r.thresholds[i], r.thresholds[i - 1]);
    }
    EXPECT_NEAR(r.auc, oracle::concordance_auc(scores, labels), 1e-12);
  }
}

TEST(SignificanceTest, SpecCases) {
  EXPECT_EQ(significance_overlap(0.98, 0.88), Significance::kInsignificant);
  EXPECT_EQ(significance_overlap(0.98, 0.98), Significance::kInsignificant);
  EXPECT_EQ(significance_overlap(0.9, 0.5), Significance::kSignificant);
  EXPECT_EQ(significance_overlap(0.9, 0.5, 0.3), Significance::kInsignificant);
  EXPECT_THROW(significance_overlap(0.9, 0.5, 0.0), ParameterError);
  EXPECT_THROW(significance_overlap(1.2, 0.5), ParameterError);
}

TEST(SignificanceTest, Symmetric) {
  for (int a = 0; a <= 20; ++a)
    for (int b = 0; b <= 20; ++b)
      EXPECT_EQ(significance_overlap(a / 20.0, b / 20.0),
                significance_overlap(b / 20.0, a / 20.0));
}

TEST(BaselineTest, DecisionRule) {
  EXPECT_EQ(baseline_decide({30, 30, 30, 30, 30}), P);
  EXPECT_EQ(baseline_decide({0, 0, 0, 0, 0}), N);
  EXPECT_EQ(baseline_decide({50, 50, 10, 10, 10}), N);
  EXPECT_EQ(baseline_decide({50, 50, 10, 10, 10}, BaselineRule::kAnySensor), P);
}

TEST(BaselineTest, NoiseFreeTwoLevelFitIsExact) {
  sim::SimConfig cfg;
  cfg.noise_sigma = 0;
  cfg.levels = {10, 40};
  cfg.rows_per_level = 4;
  const auto d = sim::generate_dataset(Scenario::kMotionless, cfg, 3);
  const auto cal = calibrate_linear(d);
  for (const auto& r : d.rows) {
    for (double e : cal.estimate(r.frame)) {
      EXPECT_NEAR(e, r.bag_pressure_mmhg, 1e-9);
    }
  }
}

TEST(BaselineTest, ExactOnLinearInput) {
  Dataset d;
  for (int p = 0; p <= 50; p += 5) {
    LabeledSample s;
    s.bag_pressure_mmhg = p;
    s.label = label_for_pressure(p);
    for (std::size_t i = 0; i < kNumSensors; ++i) {
      s.frame.counts[i] = static_cast<std::uint16_t>(100 + (i + 2) * p);
    }
    d.rows.push_back(s);
  }
  const auto cal = calibrate_linear(d);
  for (std::size_t i = 0; i < kNumSensors; ++i) {
    EXPECT_NEAR(cal.slope[i], 1.0 / static_cast<double>(i + 2), 1e-12);
  }
  for (const auto& r : d.rows) {
    for (double e : cal.estimate(r.frame)) EXPECT_NEAR(e, r.bag_pressure_mmhg, 1e-9);
  }
}

TEST(BaselineTest, DefaultSlopesPositiveAndConstantFails) {
  const auto d = sim::generate_dataset(Scenario::kMotionless, {}, 8);
  const auto cal = calibrate_linear(d);
  for (double s : cal.slope) EXPECT_GT(s, 0);

  auto flat = d;
  for (auto& r : flat.rows) r.frame.counts[2] = 500;
  EXPECT_THROW(calibrate_linear(flat), DataError);
}

TEST(ReportTest, MetricsCsvRoundTrip) {
  const ConfusionMatrix cm{40, 45, 3, 8};
  const auto m = compute_metrics(cm);
  std::stringstream s;
  write_metrics_csv(m, cm, s);
  const auto back = read_metrics_csv(s);
  for (auto k : kAllMetrics) EXPECT_EQ(back.at(k), m[k]);
}

TEST(ReportTest, RocCsvStartsAtInfinity) {
  const std::vector<double> s{0.9, 0.1};
  const std::vector<Label> l{P, N};
  std::ostringstream out;
  write_roc_csv(roc_points(s, l), out);
  EXPECT_EQ(out.str(), "threshold,fpr,tpr\ninf,0,0\n0.9,0,1\n0.1,1,1\n");
}

}  // namespace
}  // namespace acs::eval
