#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "gramlex/instances.hpp"

namespace gramlex {

using ClassCounts = std::map<std::string, std::size_t>;

/// 1 - sum of squared class proportions. Throws gramlex::Error on an empty
/// distribution.
double gini(const ClassCounts& counts);

/// Most frequent label; ties go to the lexicographically smallest label.
std::string majority_label(const ClassCounts& counts);

ClassCounts count_labels(const std::vector<Instance>& instances);

struct LearnerConfig {
  int max_depth = 8;
  std::size_t min_leaf = 20;
  double min_impurity_decrease = 0.001;
  std::uint64_t seed = 42;  // reserved; training is deterministic
};

inline constexpr const char* kTreeSchemaVersion = "1";

/// Binary decision tree over categorical features. Each split tests
/// "feature = value"; an absent feature takes the `other` branch.
class DecisionTree {
 public:
  struct Node {
    bool leaf = true;
    std::string feature;
    std::string value;
    int match = -1;
    int other = -1;
    ClassCounts counts;
    std::string prediction;

    bool operator==(const Node&) const = default;
  };

  DecisionTree() = default;
  explicit DecisionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  const Node& root() const { return nodes_.front(); }
  const Node& node(int index) const { return nodes_.at(static_cast<std::size_t>(index)); }
  const std::vector<Node>& nodes() const { return nodes_; }
  bool empty() const { return nodes_.empty(); }
  int depth() const;
  std::size_t leaf_count() const;

  /// Index of the leaf the feature map routes to.
  int route(const FeatureMap& features) const;
  const std::string& predict(const FeatureMap& features) const;

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& doc);

  bool operator==(const DecisionTree&) const = default;

 private:
  std::vector<Node> nodes_;  // nodes_[0] is the root
};

/// Greedy CART with gini impurity over every observed (feature, value)
/// equality test. Split ties go to the lexicographically smallest
/// (feature, value). Throws gramlex::Error on an empty training set.
DecisionTree train_tree(const std::vector<Instance>& train, const LearnerConfig& cfg);

inline const std::string& predict(const DecisionTree& tree, const Instance& inst) {
  return tree.predict(inst.features);
}

}  // namespace gramlex
