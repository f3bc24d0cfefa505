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

#include "acs/forest.hpp"

#include <gtest/gtest.h>

#include <numeric>

#include "acs/error.hpp"
#include "acs/model_format.hpp"
#include "acs/simulator.hpp"
#include "oracles.hpp"

namespace acs::forest {
namespace {

TrainingSet one_feature(std::vector<std::uint16_t> values,
                        std::vector<int> labels) {
  TrainingSet d;
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::array<std::uint16_t, kNumSensors> row{};
    row[0] = values[i];
    d.features.push_back(row);
    d.labels.push_back(labels[i] ? Label::kPositive : Label::kNegative);
  }
  return d;
}

std::vector<std::uint32_t> all_rows(const TrainingSet& d) {
  std::vector<std::uint32_t> rows(d.size());
  std::iota(rows.begin(), rows.end(), 0u);
  return rows;
}

RandomForest single_leaf_forest(std::uint32_t pos, std::uint32_t neg) {
  std::vector<DecisionTree> trees;
  trees.emplace_back(std::vector<Node>{Node::make_leaf(pos, neg)}, 1);
  TrainParams p;
  p.n_trees = 1;
  p.max_depth = 1;
  return RandomForest(std::move(trees), p, 0);
}

// n trees that vote positive, the rest negative.
RandomForest voting_forest(int positive, int total) {
  std::vector<DecisionTree> trees;
  for (int i = 0; i < total; ++i) {
    trees.emplace_back(
        std::vector<Node>{i < positive ? Node::make_leaf(1, 0)
                                       : Node::make_leaf(0, 1)},
        1);
  }
  TrainParams p;
  p.n_trees = total;
  p.max_depth = 1;
  return RandomForest(std::move(trees), p, 0);
}

TEST(GiniTest, SpecValues) {
  EXPECT_DOUBLE_EQ(gini_impurity(5, 5), 0.5);
  EXPECT_DOUBLE_EQ(gini_impurity(10, 0), 0.0);
  EXPECT_DOUBLE_EQ(gini_impurity(3, 1), 0.375);
  EXPECT_THROW(gini_impurity(0, 0), DataError);
}

TEST(GiniTest, BoundedByHalf) {
  for (std::uint64_t p = 0; p <= 40; ++p) {
    for (std::uint64_t n = 0; n <= 40; ++n) {
      if (p + n == 0) continue;
      const double g = gini_impurity(p, n);
      EXPECT_GE(g, 0.0);
      EXPECT_LE(g, 0.5);
    }
  }
}

TEST(BestSplitTest, MidpointOfSeparatingGap) {
  const auto d = one_feature({1, 2, 9, 10}, {0, 0, 1, 1});
  const std::vector<int> features{0};
  const auto s = best_split(d, all_rows(d), features);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->feature, 0);
  EXPECT_EQ(s->threshold, 5.5f);
  EXPECT_EQ(s->weighted_impurity, 0.0);
}

TEST(BestSplitTest, ConstantFeatureHasNoSplit) {
  const auto d = one_feature({7, 7, 7, 7}, {0, 1, 0, 1});
  const std::vector<int> features{0};
  EXPECT_FALSE(best_split(d, all_rows(d), features));
}

TEST(BestSplitTest, TieGoesToLowestFeature) {
  auto d = one_feature({1, 2, 9, 10}, {0, 0, 1, 1});
  for (auto& row : d.features) row[3] = row[0];
  const std::vector<int> features{3, 0};
  const auto s = best_split(d, all_rows(d), features);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->feature, 0);
}

TEST(BestSplitTest, MatchesExhaustiveOracle) {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    TrainingSet d;
    const auto n = 2 + rng.uniform_index(19);
    for (std::size_t i = 0; i < n; ++i) {
      std::array<std::uint16_t, kNumSensors> row{};
      for (auto& v : row) v = static_cast<std::uint16_t>(rng.uniform_index(11));
      d.features.push_back(row);
      d.labels.push_back(rng.uniform_index(2) ? Label::kPositive
                                              : Label::kNegative);
    }
    std::vector<int> features;
    for (int f = 0; f < 5; ++f) {
      if (rng.uniform_index(2)) features.push_back(f);
    }
    if (features.empty()) features.push_back(static_cast<int>(rng.uniform_index(5)));

    const auto rows = all_rows(d);
    const auto got = best_split(d, rows, features);
    const auto want = oracle::brute_force_split(d, rows, features);
    ASSERT_EQ(got.has_value(), want.has_value()) << "trial " << trial;
    if (!got) continue;
    EXPECT_EQ(got->feature, want->feature) << "trial " << trial;
    EXPECT_EQ(got->threshold, static_cast<float>(want->threshold));
    EXPECT_NEAR(got->weighted_impurity, oracle::to_double(want->weighted_impurity),
                1e-15);
  }
}

TEST(BestSplitTest, RejectsBadArguments) {
  const auto d = one_feature({1, 2}, {0, 1});
  const std::vector<int> none;
  const std::vector<int> bad{5};
  const std::vector<std::uint32_t> no_rows;
  const std::vector<int> f0{0};
  EXPECT_THROW(best_split(d, all_rows(d), none), ParameterError);
  EXPECT_THROW(best_split(d, all_rows(d), bad), ParameterError);
  EXPECT_THROW(best_split(d, no_rows, f0), ParameterError);
}

TEST(GrowTreeTest, SingleSampleIsOneLeaf) {
  const auto d = one_feature({3}, {1});
  Rng rng(1);
  const auto t = grow_tree(d, TrainParams{}, rng);
  ASSERT_EQ(t.nodes().size(), 1u);
  EXPECT_EQ(t.nodes()[0], Node::make_leaf(1, 0));
}

TEST(GrowTreeTest, SeparableSetHasNoTrainingErrors) {
  TrainingSet d;
  Rng gen(5);
  for (int i = 0; i < 20; ++i) {
    std::array<std::uint16_t, kNumSensors> row{};
    for (auto& v : row) v = static_cast<std::uint16_t>(gen.uniform_index(4096));
    // Positive exactly when s0 + s1 > 4095: separable, though not on one axis.
    d.labels.push_back(row[0] + row[1] > 4095 ? Label::kPositive
                                              : Label::kNegative);
    row[2] = static_cast<std::uint16_t>(d.labels.back() == Label::kPositive
                                            ? 3000 + i
                                            : 1000 + i);
    d.features.push_back(row);
  }
  TrainParams p;
  p.max_features = 5;
  Rng rng(9);
  const auto t = grow_tree(d, p, rng);
  EXPECT_LE(t.depth(), 5);
  for (std::size_t i = 0; i < d.size(); ++i) {
    SensorFrame f;
    f.counts = d.features[i];
    EXPECT_EQ(tree_predict(t, f), d.labels[i]) << "row " << i;
  }
}

TEST(GrowTreeTest, DepthCapOne) {
  const auto d = one_feature({1, 2, 3, 4, 5, 6}, {0, 1, 0, 1, 0, 1});
  TrainParams p;
  p.max_depth = 1;
  p.max_features = 5;
  Rng rng(3);
  const auto t = grow_tree(d, p, rng);
  EXPECT_LE(t.nodes().size(), 3u);
  EXPECT_LE(t.depth(), 1);
}

TEST(GrowTreeTest, EmptySampleSetThrows) {
  TrainingSet d;
  Rng rng(1);
  EXPECT_THROW(grow_tree(d, TrainParams{}, rng), DataError);
}

TEST(TrainForestTest, DeterministicPerSeed) {
  const auto data = sim::generate_dataset(Scenario::kMotionless, {}, 11);
  const auto a = train_forest(data.rows, {}, 77);
  const auto b = train_forest(data.rows, {}, 77);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.trees().size(), 100u);
}

TEST(TrainForestTest, SeedsProduceDifferentForests) {
  auto data = sim::generate_dataset(Scenario::kMotionless, {}, 11);
  data.rows.resize(400);
  const auto a = model::encode_model(train_forest(data.rows, {}, 1));
  const auto b = model::encode_model(train_forest(data.rows, {}, 2));
  EXPECT_NE(a, b);
}

TEST(TrainForestTest, RowOrderInvariantWithoutBootstrap) {
  auto data = sim::generate_dataset(Scenario::kMotionless, {}, 4);
  TrainParams p;
  p.n_trees = 10;
  p.bootstrap = false;
  const auto a = train_forest(data.rows, p, 8);
  std::reverse(data.rows.begin(), data.rows.end());
  const auto b = train_forest(data.rows, p, 8);
  EXPECT_EQ(a, b);
}

TEST(TrainForestTest, DegenerateInputs) {
  std::vector<LabeledSample> one_class(4);
  EXPECT_THROW(train_forest(one_class, {}, 1), DegenerateDatasetError);
  EXPECT_THROW(train_forest({}, {}, 1), DegenerateDatasetError);
  TrainParams bad;
  bad.n_trees = 0;
  auto data = sim::generate_dataset(Scenario::kMotionless, {}, 1);
  EXPECT_THROW(train_forest(data.rows, bad, 1), ParameterError);
}

TEST(TrainForestTest, TreesRespectStructure) {
  const auto data = sim::generate_dataset(Scenario::kMotion, {}, 3);
  const auto f = train_forest(data.rows, {}, 5);
  for (const auto& t : f.trees()) {
    EXPECT_FALSE(DecisionTree::check_structure(t.nodes(), 5));
    EXPECT_LE(t.nodes().size(), 63u);
  }
}

TEST(PredictTest, LeafMajorityAndTie) {
  SensorFrame f;
  EXPECT_EQ(tree_predict(single_leaf_forest(3, 1).trees()[0], f), Label::kPositive);
  EXPECT_EQ(tree_predict(single_leaf_forest(1, 1).trees()[0], f), Label::kPositive);
  EXPECT_EQ(tree_predict(single_leaf_forest(1, 3).trees()[0], f), Label::kNegative);
}

TEST(PredictTest, StrictLessRoutesLeft) {
  const DecisionTree t({Node::make_internal(0, 500.0f, 1, 2),
                        Node::make_leaf(0, 4), Node::make_leaf(4, 0)},
                       1);
  SensorFrame f;
  f.counts[0] = 499;
  EXPECT_EQ(tree_predict(t, f), Label::kNegative);
  f.counts[0] = 500;
  EXPECT_EQ(tree_predict(t, f), Label::kPositive);
}

TEST(PredictTest, VoteFractions) {
  SensorFrame f;
  EXPECT_EQ(predict_proba(voting_forest(100, 100), f), 1.0);
  EXPECT_EQ(predict_proba(voting_forest(60, 100), f), 0.6);
  EXPECT_EQ(predict_proba(voting_forest(0, 100), f), 0.0);
  EXPECT_EQ(positive_votes(voting_forest(37, 100), f), 37);
}

TEST(DecideTest, InclusiveThreshold) {
  EXPECT_EQ(decide(0.5, 0.5), Label::kPositive);
  EXPECT_EQ(decide(0.49, 0.5), Label::kNegative);
  EXPECT_EQ(decide(0.6, 0.7), Label::kNegative);
  EXPECT_THROW(decide(0.5, 0.0), ParameterError);
  EXPECT_THROW(decide(0.5, 1.01), ParameterError);
  EXPECT_EQ(classify(voting_forest(60, 100), SensorFrame{}, 0.6), Label::kPositive);
}

TEST(PredictTest, ProbabilityMonotoneInThreshold) {
  const auto data = sim::generate_dataset(Scenario::kMotion, {}, 21);
  const auto f = train_forest(data.rows, {}, 2);
  for (const auto& r : data.rows) {
    const double p = predict_proba(f, r.frame);
    ASSERT_GE(p, 0.0);
    ASSERT_LE(p, 1.0);
    Label prev = Label::kPositive;
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
      const Label l = classify(f, r.frame, t);
      // Raising the threshold can only turn positives into negatives.
      ASSERT_FALSE(prev == Label::kNegative && l == Label::kPositive);
      prev = l;
    }
  }
}

TEST(StructureTest, RejectsBrokenTrees) {
  EXPECT_THROW(DecisionTree({}, 1), ParameterError);
  // Child pointing backwards.
  EXPECT_THROW(DecisionTree({Node::make_internal(0, 1.0f, 0, 1),
                             Node::make_leaf(1, 0)},
                            2),
               ParameterError);
  // Too deep.
  EXPECT_THROW(DecisionTree({Node::make_internal(0, 1.0f, 1, 2),
                             Node::make_leaf(1, 0), Node::make_leaf(0, 1)},
                            0),
               ParameterError);
  // Empty leaf.
  EXPECT_THROW(DecisionTree({Node::make_leaf(0, 0)}, 1), ParameterError);
  // Feature out of range.
  EXPECT_THROW(DecisionTree({Node::make_internal(5, 1.0f, 1, 2),
                             Node::make_leaf(1, 0), Node::make_leaf(0, 1)},
                            1),
               ParameterError);
}

}  // namespace
}  // namespace acs::forest
