#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gramlex/treebank.hpp"

namespace gramlex {

struct FormExample {
  std::string form;
  std::string lemma;
  std::size_t count = 0;
  ExampleRef example;

  bool operator==(const FormExample&) const = default;
};

struct ValueSummary {
  std::string value;
  std::size_t total_count = 0;
  std::vector<std::pair<std::string, std::size_t>> by_upos;  // descending count
  std::vector<FormExample> example_forms;                    // descending count

  bool operator==(const ValueSummary&) const = default;
};

struct FeatureSummary {
  std::string attribute;
  std::vector<ValueSummary> values;  // descending total_count

  bool operator==(const FeatureSummary&) const = default;
};

/// Frequency-ordered inventory of every morphological attribute in the
/// treebank. Equal counts order by value, upos or form. Each example form
/// carries its shortest containing sentence.
std::vector<FeatureSummary> summarize_features(const Treebank& tb, std::size_t top_n_examples);

}  // namespace gramlex
