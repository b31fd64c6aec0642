#include "gramlex/tree.hpp"

#include <algorithm>
#include <functional>

#include "gramlex/error.hpp"

namespace gramlex {

double gini(const ClassCounts& counts) {
  std::size_t total = 0;
  for (const auto& [label, n] : counts) total += n;
  if (total == 0) throw Error("gini: empty class distribution");
  double sum = 0.0;
  for (const auto& [label, n] : counts) {
    const double p = static_cast<double>(n) / static_cast<double>(total);
    sum += p * p;
  }
  return 1.0 - sum;
}

std::string majority_label(const ClassCounts& counts) {
  std::string best;
  std::size_t best_n = 0;
  for (const auto& [label, n] : counts) {  // std::map iterates labels in order
    if (n > best_n) {
      best = label;
      best_n = n;
    }
  }
  return best;
}

ClassCounts count_labels(const std::vector<Instance>& instances) {
  ClassCounts counts;
  for (const auto& inst : instances) ++counts[inst.label];
  return counts;
}

int DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::function<int(int)> walk = [&](int i) -> int {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    return n.leaf ? 0 : 1 + std::max(walk(n.match), walk(n.other));
  };
  return walk(0);
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.leaf; }));
}

int DecisionTree::route(const FeatureMap& features) const {
  int i = 0;
  while (!nodes_[static_cast<std::size_t>(i)].leaf) {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    auto it = features.find(n.feature);
    i = (it != features.end() && it->second == n.value) ? n.match : n.other;
  }
  return i;
}

const std::string& DecisionTree::predict(const FeatureMap& features) const {
  return nodes_[static_cast<std::size_t>(route(features))].prediction;
}

namespace {

nlohmann::json node_to_json(const std::vector<DecisionTree::Node>& nodes, int i) {
  const auto& n = nodes[static_cast<std::size_t>(i)];
  nlohmann::json j;
  j["counts"] = n.counts;
  if (n.leaf) {
    j["kind"] = "leaf";
    j["prediction"] = n.prediction;
  } else {
    j["kind"] = "split";
    j["feature"] = n.feature;
    j["value"] = n.value;
    j["prediction"] = n.prediction;
    j["match"] = node_to_json(nodes, n.match);
    j["other"] = node_to_json(nodes, n.other);
  }
  return j;
}

int node_from_json(const nlohmann::json& j, std::vector<DecisionTree::Node>& nodes) {
  const int index = static_cast<int>(nodes.size());
  nodes.emplace_back();
  DecisionTree::Node n;
  n.counts = j.at("counts").get<ClassCounts>();
  n.prediction = j.at("prediction").get<std::string>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "split") {
    n.leaf = false;
    n.feature = j.at("feature").get<std::string>();
    n.value = j.at("value").get<std::string>();
    n.match = node_from_json(j.at("match"), nodes);
    n.other = node_from_json(j.at("other"), nodes);
  } else if (kind != "leaf") {
    throw Error("tree json: unknown node kind '" + kind + "'");
  }
  nodes[static_cast<std::size_t>(index)] = std::move(n);
  return index;
}

}  // namespace

nlohmann::json DecisionTree::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kTreeSchemaVersion;
  j["root"] = nodes_.empty() ? nlohmann::json() : node_to_json(nodes_, 0);
  return j;
}

DecisionTree DecisionTree::from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("schema_version").get<std::string>() != kTreeSchemaVersion) {
      throw Error("tree json: unsupported schema_version");
    }
    std::vector<Node> nodes;
    node_from_json(doc.at("root"), nodes);
    return DecisionTree(std::move(nodes));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("tree json: ") + e.what());
  }
}

namespace {

// Training works on interned ids. Pair ids follow lexicographic
// (feature, value) order and label ids follow lexicographic label order, so
// "smallest id" is the tie-break the public contract promises.
class Trainer {
 public:
  Trainer(const std::vector<Instance>& train, const LearnerConfig& cfg) : cfg_(cfg) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::string> labels;
    for (const auto& inst : train) {
      labels.push_back(inst.label);
      for (const auto& kv : inst.features) pairs.push_back(kv);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    pairs_ = std::move(pairs);
    labels_ = std::move(labels);

    rows_.reserve(train.size());
    label_of_.reserve(train.size());
    for (const auto& inst : train) {
      std::vector<int> row;
      row.reserve(inst.features.size());
      for (const auto& kv : inst.features) {
        row.push_back(static_cast<int>(
            std::lower_bound(pairs_.begin(), pairs_.end(), std::pair<std::string, std::string>(kv)) -
            pairs_.begin()));
      }
      rows_.push_back(std::move(row));
      label_of_.push_back(static_cast<int>(
          std::lower_bound(labels_.begin(), labels_.end(), inst.label) - labels_.begin()));
    }
    table_.assign(pairs_.size() * labels_.size(), 0);
    on_path_.assign(pairs_.size(), false);
  }

  std::vector<DecisionTree::Node> run() {
    std::vector<int> all(rows_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    build(all, 0);
    return std::move(nodes_);
  }

 private:
  static double gini_of(const std::vector<std::size_t>& c, std::size_t total) {
    double sum = 0.0;
    for (std::size_t n : c) {
      const double p = static_cast<double>(n) / static_cast<double>(total);
      sum += p * p;
    }
    return 1.0 - sum;
  }

  int build(const std::vector<int>& members, int depth) {
    const std::size_t L = labels_.size();
    std::vector<std::size_t> counts(L, 0);
    for (int r : members) ++counts[static_cast<std::size_t>(label_of_[static_cast<std::size_t>(r)])];

    DecisionTree::Node node;
    std::size_t best_label = 0;
    for (std::size_t l = 0; l < L; ++l) {
      if (counts[l] > 0) node.counts[labels_[l]] = counts[l];
      if (counts[l] > counts[best_label]) best_label = l;
    }
    node.prediction = labels_[best_label];

    const int index = static_cast<int>(nodes_.size());
    nodes_.push_back(node);

    const std::size_t n = members.size();
    const double parent = gini_of(counts, n);
    const bool can_split = depth < cfg_.max_depth && parent > 0.0 && n >= 2 * cfg_.min_leaf;
    if (!can_split) return index;

    std::vector<int> touched;
    for (int r : members) {
      const std::size_t label = static_cast<std::size_t>(label_of_[static_cast<std::size_t>(r)]);
      for (int p : rows_[static_cast<std::size_t>(r)]) {
        std::size_t* cell = &table_[static_cast<std::size_t>(p) * L];
        bool fresh = true;
        for (std::size_t l = 0; l < L; ++l) fresh = fresh && cell[l] == 0;
        if (fresh) touched.push_back(p);
        ++cell[label];
      }
    }

    int best_pair = -1;
    double best_decrease = 0.0;
    std::vector<std::size_t> match(L), other(L);
    for (int p : touched) {
      if (on_path_[static_cast<std::size_t>(p)]) continue;
      const std::size_t* cell = &table_[static_cast<std::size_t>(p) * L];
      std::size_t n_match = 0;
      for (std::size_t l = 0; l < L; ++l) {
        match[l] = cell[l];
        other[l] = counts[l] - cell[l];
        n_match += cell[l];
      }
      const std::size_t n_other = n - n_match;
      if (n_match < cfg_.min_leaf || n_other < cfg_.min_leaf) continue;
      const double weighted = (static_cast<double>(n_match) * gini_of(match, n_match) +
                               static_cast<double>(n_other) * gini_of(other, n_other)) /
                              static_cast<double>(n);
      const double decrease = parent - weighted;
      constexpr double kTieEps = 1e-12;
      if (best_pair < 0 || decrease > best_decrease + kTieEps ||
          (decrease > best_decrease - kTieEps && p < best_pair)) {
        best_pair = p;
        best_decrease = decrease;
      }
    }
    for (int p : touched) {
      std::fill_n(table_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(p) * L),
                  L, 0);
    }

    if (best_pair < 0 || best_decrease <= 1e-12 ||
        best_decrease < cfg_.min_impurity_decrease) {
      return index;
    }

    std::vector<int> match_rows, other_rows;
    for (int r : members) {
      const auto& row = rows_[static_cast<std::size_t>(r)];
      (std::binary_search(row.begin(), row.end(), best_pair) ? match_rows : other_rows).push_back(r);
    }

    on_path_[static_cast<std::size_t>(best_pair)] = true;
    const int m = build(match_rows, depth + 1);
    const int o = build(other_rows, depth + 1);
    on_path_[static_cast<std::size_t>(best_pair)] = false;

    auto& self = nodes_[static_cast<std::size_t>(index)];
    self.leaf = false;
    self.feature = pairs_[static_cast<std::size_t>(best_pair)].first;
    self.value = pairs_[static_cast<std::size_t>(best_pair)].second;
    self.match = m;
    self.other = o;
    return index;
  }

  const LearnerConfig& cfg_;
  std::vector<std::pair<std::string, std::string>> pairs_;
  std::vector<std::string> labels_;
  std::vector<std::vector<int>> rows_;  // sorted pair ids per instance
  std::vector<int> label_of_;
  std::vector<std::size_t> table_;      // pair x label counts, zero between nodes
  std::vector<bool> on_path_;
  std::vector<DecisionTree::Node> nodes_;
};

}  // namespace

DecisionTree train_tree(const std::vector<Instance>& train, const LearnerConfig& cfg) {
  if (train.empty()) throw Error("train_tree: no instances");
  if (cfg.max_depth < 1 || cfg.min_leaf < 1) throw Error("train_tree: invalid learner config");
  return DecisionTree(Trainer(train, cfg).run());
}

}  // namespace gramlex
