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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "acs/error.hpp"

namespace acs::forest {

namespace {

using u128 = unsigned __int128;

// Rows above this could overflow the 128-bit split comparison.
constexpr std::size_t kMaxRows = std::size_t{1} << 24;

struct ClassCounts {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;

  std::uint64_t total() const { return pos + neg; }
  void add(Label l) { (l == Label::kPositive ? pos : neg) += 1; }
  void remove(Label l) { (l == Label::kPositive ? pos : neg) -= 1; }
};

// Weighted Gini of a split is 1 - S/n with
//   S = (pL^2 + qL^2)/nL + (pR^2 + qR^2)/nR,
// so minimizing impurity is maximizing S. S is kept as num/den.
struct SplitScore {
  u128 num = 0;
  u128 den = 1;

  static SplitScore of(const ClassCounts& l, const ClassCounts& r) {
    const u128 a = u128{l.pos} * l.pos + u128{l.neg} * l.neg;
    const u128 b = u128{r.pos} * r.pos + u128{r.neg} * r.neg;
    return {a * r.total() + b * l.total(), u128{l.total()} * r.total()};
  }

  bool better_than(const SplitScore& o) const {
    return num * o.den > o.num * den;
  }
};

double impurity_from_score(const SplitScore& s, std::uint64_t n) {
  const u128 total = s.den * n;
  return static_cast<double>(total - s.num) / static_cast<double>(total);
}

ClassCounts count_rows(const TrainingSet& data,
                       std::span<const std::uint32_t> rows) {
  ClassCounts c;
  for (auto r : rows) c.add(data.labels[r]);
  return c;
}

class TreeBuilder {
 public:
  TreeBuilder(const TrainingSet& data, const TrainParams& params, Rng& rng)
      : data_(data), params_(params), rng_(rng) {}

  std::vector<Node> build(std::vector<std::uint32_t> rows) {
    nodes_.clear();
    grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  std::uint32_t grow(std::vector<std::uint32_t>& rows, int depth) {
    const ClassCounts counts = count_rows(data_, rows);
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    const auto leaf = Node::make_leaf(static_cast<std::uint32_t>(counts.pos),
                                      static_cast<std::uint32_t>(counts.neg));

    if (counts.pos == 0 || counts.neg == 0 || depth >= params_.max_depth ||
        rows.size() < static_cast<std::size_t>(params_.min_samples_split)) {
      nodes_.push_back(leaf);
      return index;
    }

    const auto features = draw_features();
    const auto split = best_split(data_, rows, features);
    if (!split) {
      nodes_.push_back(leaf);
      return index;
    }

    std::vector<std::uint32_t> left_rows;
    std::vector<std::uint32_t> right_rows;
    for (auto r : rows) {
      const auto value = static_cast<float>(data_.features[r][split->feature]);
      (value < split->threshold ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    auto node = Node::make_internal(static_cast<std::uint8_t>(split->feature),
                                    split->threshold, 0, 0);
    node.pos = leaf.pos;
    node.neg = leaf.neg;
    nodes_.push_back(node);
    const auto left = grow(left_rows, depth + 1);
    const auto right = grow(right_rows, depth + 1);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
  }

  // Partial Fisher-Yates: max_features distinct indices, returned sorted.
  std::vector<int> draw_features() {
    std::array<int, kNumSensors> pool{};
    std::iota(pool.begin(), pool.end(), 0);
    const auto k = static_cast<std::size_t>(params_.max_features);
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + rng_.uniform_index(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    std::vector<int> out(pool.begin(), pool.begin() + static_cast<long>(k));
    std::sort(out.begin(), out.end());
    return out;
  }

  const TrainingSet& data_;
  const TrainParams& params_;
  Rng& rng_;
  std::vector<Node> nodes_;
};

}  // namespace

void TrainParams::validate() const {
  if (n_trees < 1) throw ParameterError("n_trees must be >= 1");
  if (max_depth < 1) throw ParameterError("max_depth must be >= 1");
  if (max_features < 1 || max_features > static_cast<int>(kNumSensors)) {
    throw ParameterError("max_features must be in [1, 5]");
  }
  if (min_samples_split < 2) {
    throw ParameterError("min_samples_split must be >= 2");
  }
}

double gini_impurity(std::uint64_t pos, std::uint64_t neg) {
  const std::uint64_t n = pos + neg;
  if (n == 0) throw DataError("gini impurity of an empty node");
  const double p = static_cast<double>(pos) / static_cast<double>(n);
  const double q = static_cast<double>(neg) / static_cast<double>(n);
  return 1.0 - p * p - q * q;
}

Node Node::make_leaf(std::uint32_t pos, std::uint32_t neg) {
  Node n;
  n.kind = Kind::kLeaf;
  n.pos = pos;
  n.neg = neg;
  return n;
}

Node Node::make_internal(std::uint8_t feature, float threshold,
                         std::uint32_t left, std::uint32_t right) {
  Node n;
  n.kind = Kind::kInternal;
  n.feature = feature;
  n.threshold = threshold;
  n.left = left;
  n.right = right;
  return n;
}

std::optional<std::string> DecisionTree::check_structure(
    std::span<const Node> nodes, int max_depth) {
  if (nodes.empty()) return "tree has no nodes";
  if (max_depth < 1) return "max_depth must be >= 1";

  // Popping children right-after-left must visit indices 0, 1, 2, ... in
  // order for the array to be a preorder layout.
  std::vector<std::pair<std::uint32_t, int>> stack{{0, 0}};
  std::size_t cursor = 0;
  while (!stack.empty()) {
    const auto [index, depth] = stack.back();
    stack.pop_back();
    if (index != cursor) {
      return "node " + std::to_string(index) + " breaks preorder layout";
    }
    ++cursor;
    if (depth > max_depth) {
      return "node " + std::to_string(index) + " exceeds max_depth";
    }
    const Node& n = nodes[index];
    if (n.is_leaf()) {
      if (std::uint64_t{n.pos} + n.neg == 0) {
        return "leaf " + std::to_string(index) + " is empty";
      }
      continue;
    }
    if (n.kind != Node::Kind::kInternal) {
      return "node " + std::to_string(index) + " has unknown kind";
    }
    if (n.feature >= kNumSensors) {
      return "node " + std::to_string(index) + " has feature out of range";
    }
    if (!std::isfinite(n.threshold)) {
      return "node " + std::to_string(index) + " has non-finite threshold";
    }
    if (n.left >= nodes.size() || n.right >= nodes.size()) {
      return "node " + std::to_string(index) + " has child out of range";
    }
    stack.emplace_back(n.right, depth + 1);
    stack.emplace_back(n.left, depth + 1);
  }
  if (cursor != nodes.size()) return "tree has unreachable nodes";
  return std::nullopt;
}

DecisionTree::DecisionTree(std::vector<Node> nodes, int max_depth)
    : nodes_(std::move(nodes)), max_depth_(max_depth) {
  if (auto err = check_structure(nodes_, max_depth_)) {
    throw ParameterError("invalid tree: " + *err);
  }
}

int DecisionTree::depth() const {
  int deepest = 0;
  std::vector<std::pair<std::uint32_t, int>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [index, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    const Node& n = nodes_[index];
    if (!n.is_leaf()) {
      stack.emplace_back(n.left, d + 1);
      stack.emplace_back(n.right, d + 1);
    }
  }
  return deepest;
}

RandomForest::RandomForest(std::vector<DecisionTree> trees, TrainParams params,
                           std::uint64_t seed)
    : trees_(std::move(trees)), params_(params), seed_(seed) {
  if (trees_.size() != static_cast<std::size_t>(params_.n_trees)) {
    throw ParameterError("forest has " + std::to_string(trees_.size()) +
                         " trees, params say " +
                         std::to_string(params_.n_trees));
  }
}

TrainingSet TrainingSet::from_samples(std::span<const LabeledSample> samples) {
  TrainingSet set;
  set.features.reserve(samples.size());
  set.labels.reserve(samples.size());
  for (const auto& s : samples) {
    set.features.push_back(s.frame.counts);
    set.labels.push_back(s.label);
  }
  return set;
}

std::optional<Split> best_split(const TrainingSet& data,
                                std::span<const std::uint32_t> rows,
                                std::span<const int> candidate_features) {
  if (rows.empty()) throw ParameterError("best_split: no samples");
  if (candidate_features.empty()) {
    throw ParameterError("best_split: no candidate features");
  }
  if (rows.size() >= kMaxRows) throw ParameterError("best_split: too many rows");

  std::vector<int> features(candidate_features.begin(),
                            candidate_features.end());
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());

  const ClassCounts all = count_rows(data, rows);
  std::vector<std::uint32_t> order(rows.begin(), rows.end());

  std::optional<Split> best;
  SplitScore best_score;
  for (const int f : features) {
    if (f < 0 || f >= static_cast<int>(kNumSensors)) {
      throw ParameterError("best_split: feature index out of range");
    }
    const auto value = [&](std::uint32_t r) { return data.features[r][f]; };
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
      return value(a) < value(b);
    });

    ClassCounts left;
    ClassCounts right = all;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      left.add(data.labels[order[i]]);
      right.remove(data.labels[order[i]]);
      const auto lo = value(order[i]);
      const auto hi = value(order[i + 1]);
      if (lo == hi) continue;
      const auto score = SplitScore::of(left, right);
      // Strict improvement only: earlier (lower) features and thresholds keep
      // ties.
      if (!best || score.better_than(best_score)) {
        best_score = score;
        best = Split{f, static_cast<float>((static_cast<double>(lo) + hi) / 2.0),
                     0.0};
      }
    }
  }
  if (best) best->weighted_impurity = impurity_from_score(best_score, all.total());
  return best;
}

DecisionTree grow_tree(const TrainingSet& data,
                       std::span<const std::uint32_t> rows,
                       const TrainParams& params, Rng& rng) {
  params.validate();
  if (rows.empty()) throw DataError("grow_tree: empty sample set");
  for (auto r : rows) {
    if (r >= data.size()) throw ParameterError("grow_tree: row out of range");
  }
  TreeBuilder builder(data, params, rng);
  return DecisionTree(
      builder.build(std::vector<std::uint32_t>(rows.begin(), rows.end())),
      params.max_depth);
}

DecisionTree grow_tree(const TrainingSet& data, const TrainParams& params,
                       Rng& rng) {
  std::vector<std::uint32_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0u);
  return grow_tree(data, rows, params, rng);
}

RandomForest train_forest(std::span<const LabeledSample> dataset,
                          const TrainParams& params, std::uint64_t seed) {
  params.validate();
  if (dataset.empty()) throw DegenerateDatasetError("training set is empty");
  const auto set = TrainingSet::from_samples(dataset);
  const auto positives = static_cast<std::size_t>(
      std::count(set.labels.begin(), set.labels.end(), Label::kPositive));
  if (positives == 0 || positives == set.size()) {
    throw DegenerateDatasetError("training set contains a single class");
  }

  const std::size_t n = set.size();
  std::vector<DecisionTree> trees;
  trees.reserve(static_cast<std::size_t>(params.n_trees));
  std::vector<std::uint32_t> rows(n);
  for (int t = 0; t < params.n_trees; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    if (params.bootstrap) {
      for (auto& r : rows) r = static_cast<std::uint32_t>(rng.uniform_index(n));
    } else {
      std::iota(rows.begin(), rows.end(), 0u);
    }
    trees.push_back(grow_tree(set, rows, params, rng));
  }
  return RandomForest(std::move(trees), params, seed);
}

Label tree_predict(const DecisionTree& tree, const SensorFrame& frame) {
  const auto nodes = tree.nodes();
  const Node* n = &nodes[0];
  while (!n->is_leaf()) {
    const auto value = static_cast<float>(frame.counts[n->feature]);
    n = &nodes[value < n->threshold ? n->left : n->right];
  }
  return n->pos >= n->neg ? Label::kPositive : Label::kNegative;
}

int positive_votes(const RandomForest& forest, const SensorFrame& frame) {
  int votes = 0;
  for (const auto& tree : forest.trees()) {
    votes += tree_predict(tree, frame) == Label::kPositive;
  }
  return votes;
}

double predict_proba(const RandomForest& forest, const SensorFrame& frame) {
  return static_cast<double>(positive_votes(forest, frame)) /
         static_cast<double>(forest.trees().size());
}

Label decide(double probability, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ParameterError("decision threshold must be in (0, 1]");
  }
  return probability >= threshold ? Label::kPositive : Label::kNegative;
}

Label classify(const RandomForest& forest, const SensorFrame& frame,
               double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ParameterError("decision threshold must be in (0, 1]");
  }
  return decide(predict_proba(forest, frame), threshold);
}

}  // namespace acs::forest
