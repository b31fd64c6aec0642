#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gramlex/instances.hpp"
#include "gramlex/tree.hpp"
#include "gramlex/treebank.hpp"

namespace gramlex {

struct Condition {
  std::string feature;
  std::string value;
  bool is = true;  // false: "is-not" (other branch)

  bool operator==(const Condition&) const = default;
};

bool holds(const Condition& c, const FeatureMap& features);

/// One root-to-leaf path of a trained tree, read as "if conditions then prediction".
struct Rule {
  std::vector<Condition> conditions;
  std::string prediction;
  std::size_t support = 0;
  double precision = 0.0;
  ClassCounts class_counts;
  bool exception = false;  // predicts something other than the dominant label
  int leaf = -1;           // node index in the source tree
  std::vector<ExampleRef> examples;
  std::vector<ExampleRef> counterexamples;

  bool matches(const FeatureMap& features) const;
  bool operator==(const Rule&) const = default;
};

/// One rule per leaf, ordered by descending support (ties: tree order).
/// Rules whose prediction differs from the root majority are exceptions.
std::vector<Rule> extract_rules(const DecisionTree& tree);

/// Resolves an instance to a displayable example, or nullopt when the
/// source sentence is unavailable.
using ExampleResolver = std::function<std::optional<ExampleRef>(const Instance&)>;

/// Up to k examples (label == prediction) and k counterexamples among the
/// instances matching the rule's conditions, shortest sentences first.
Rule attach_examples(Rule rule, const std::vector<Instance>& instances,
                     const ExampleResolver& resolve, std::size_t k);

/// Treebank-backed overload: highlights the head and dependent tokens.
Rule attach_examples(Rule rule, const std::vector<Instance>& instances, const Treebank& tb,
                     std::size_t k);

struct Metrics {
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  double tree_accuracy = 0.0;
  double baseline_accuracy = 0.0;
  std::string dominant_label;
  double dominant_fraction = 0.0;  // share of training labels equal to dominant_label

  bool operator==(const Metrics&) const = default;
};

/// Held-out accuracy of the tree against always predicting the training
/// majority. Throws gramlex::Error when either set is empty.
Metrics evaluate(const DecisionTree& tree, const std::vector<Instance>& train,
                 const std::vector<Instance>& test);

struct SplitRatios {
  double train = 0.8;
  double dev = 0.1;
  double test = 0.1;
};

struct DatasetSplit {
  std::vector<Instance> train;
  std::vector<Instance> dev;
  std::vector<Instance> test;
};

/// Sentence-level split: distinct sent_ids are ordered by a seeded FNV-1a
/// hash and cut at round(ratio * #sentences). Instance order is preserved
/// within each part.
DatasetSplit split_dataset(const std::vector<Instance>& instances, const SplitRatios& ratios,
                           std::uint64_t seed);

}  // namespace gramlex
