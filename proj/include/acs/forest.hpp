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

// Random-forest classifier over five-channel FSR frames: CART induction with
// the Gini criterion, bootstrap aggregation and vote-fraction scoring.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acs/rng.hpp"
#include "acs/types.hpp"

namespace acs::forest {

struct TrainParams {
  int n_trees = 100;
  int max_depth = 5;
  int max_features = 2;  // floor(sqrt(5))
  int min_samples_split = 2;
  bool bootstrap = true;

  /// Throws ParameterError if any field is out of range.
  void validate() const;

  friend bool operator==(const TrainParams&, const TrainParams&) = default;
};

/// 1 - (pos/n)^2 - (neg/n)^2. Throws DataError for an empty node.
double gini_impurity(std::uint64_t pos, std::uint64_t neg);

/// One node of a tree stored as a flat preorder array. Children are indices
/// into the same array; the root is element 0.
struct Node {
  enum class Kind : std::uint8_t { kInternal = 0, kLeaf = 1 };

  Kind kind = Kind::kLeaf;
  std::uint8_t feature = 0;
  float threshold = 0.0f;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;

  static Node make_leaf(std::uint32_t pos, std::uint32_t neg);
  static Node make_internal(std::uint8_t feature, float threshold,
                            std::uint32_t left, std::uint32_t right);

  bool is_leaf() const { return kind == Kind::kLeaf; }

  friend bool operator==(const Node&, const Node&) = default;
};

class DecisionTree {
 public:
  /// Throws ParameterError if the node array is not a well-formed preorder
  /// tree within `max_depth`.
  DecisionTree(std::vector<Node> nodes, int max_depth);

  std::span<const Node> nodes() const { return nodes_; }
  int max_depth() const { return max_depth_; }

  /// Longest root-to-leaf path, in edges.
  int depth() const;

  /// Structural check shared with the model decoder. Returns a description of
  /// the first violation, or nothing if the array is a valid tree.
  static std::optional<std::string> check_structure(std::span<const Node> nodes,
                                                    int max_depth);

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<Node> nodes_;
  int max_depth_;
};

class RandomForest {
 public:
  static constexpr int kNumFeatures = static_cast<int>(kNumSensors);

  /// Throws ParameterError if the tree count disagrees with params.n_trees.
  RandomForest(std::vector<DecisionTree> trees, TrainParams params,
               std::uint64_t seed);

  std::span<const DecisionTree> trees() const { return trees_; }
  const TrainParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  int n_features() const { return kNumFeatures; }

  friend bool operator==(const RandomForest&, const RandomForest&) = default;

 private:
  std::vector<DecisionTree> trees_;
  TrainParams params_;
  std::uint64_t seed_;
};

/// Feature matrix and labels in the layout the tree grower consumes.
struct TrainingSet {
  std::vector<std::array<std::uint16_t, kNumSensors>> features;
  std::vector<Label> labels;

  static TrainingSet from_samples(std::span<const LabeledSample> samples);
  std::size_t size() const { return labels.size(); }
};

struct Split {
  int feature = 0;
  float threshold = 0.0f;
  double weighted_impurity = 0.0;
};

/// Exhaustive CART split search over `candidate_features`.
///
/// Thresholds sit at midpoints of consecutive distinct values; the split with
/// the smallest child-count-weighted Gini wins, ties going to the lowest
/// feature index and then the lowest threshold. Candidates are compared in
/// exact integer arithmetic, so ties are detected exactly. Returns nothing if
/// every candidate feature is constant over `rows`.
std::optional<Split> best_split(const TrainingSet& data,
                                std::span<const std::uint32_t> rows,
                                std::span<const int> candidate_features);

/// Grows one CART tree over `rows` (which may repeat, as in a bootstrap
/// sample). Consumes `rng` only for per-node feature subsampling, in preorder.
DecisionTree grow_tree(const TrainingSet& data,
                       std::span<const std::uint32_t> rows,
                       const TrainParams& params, Rng& rng);

DecisionTree grow_tree(const TrainingSet& data, const TrainParams& params,
                       Rng& rng);

/// Trains params.n_trees trees. Tree i draws its bootstrap sample and its
/// feature subsets from Rng(derive_seed(seed, i)), so the result is a pure
/// function of (dataset, params, seed).
RandomForest train_forest(std::span<const LabeledSample> dataset,
                          const TrainParams& params, std::uint64_t seed);

/// Leaf majority; a tied leaf votes positive.
Label tree_predict(const DecisionTree& tree, const SensorFrame& frame);

int positive_votes(const RandomForest& forest, const SensorFrame& frame);

/// Fraction of trees voting positive.
double predict_proba(const RandomForest& forest, const SensorFrame& frame);

/// Positive iff probability >= threshold. Throws ParameterError unless
/// threshold is in (0, 1].
Label decide(double probability, double threshold);

Label classify(const RandomForest& forest, const SensorFrame& frame,
               double threshold = 0.5);

}  // namespace acs::forest
