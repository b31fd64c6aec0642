#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "gramlex/error.hpp"
#include "gramlex/tree.hpp"
#include "oracle.hpp"
#include "synth.hpp"

using namespace gramlex;

namespace {

Instance mk(FeatureMap f, std::string label) { return Instance{std::move(f), std::move(label), {}}; }

std::vector<Instance> random_dataset(synth::Rng& rng, std::size_t n) {
  const std::vector<std::string> feats{"f1", "f2", "f3", "f4"};
  const std::vector<std::string> values{"a", "b", "c"};
  const std::vector<std::string> labels{"x", "y", "z"};
  std::vector<Instance> out;
  for (std::size_t i = 0; i < n; ++i) {
    Instance inst;
    for (const auto& f : feats) {
      if (rng.chance(80)) inst.features[f] = rng.pick(values);
    }
    // Mostly a function of f1 and f2, with noise.
    const auto f1 = inst.features.find("f1");
    const auto f2 = inst.features.find("f2");
    if (rng.chance(15)) {
      inst.label = rng.pick(labels);
    } else if (f1 != inst.features.end() && f1->second == "a") {
      inst.label = "x";
    } else if (f2 != inst.features.end() && f2->second == "b") {
      inst.label = "y";
    } else {
      inst.label = "z";
    }
    out.push_back(std::move(inst));
  }
  return out;
}

// Rebuilds the tree top-down with the exhaustive oracle and compares node by node.
void check_against_oracle(const DecisionTree& tree, int index, const std::vector<Instance>& members,
                          const LearnerConfig& cfg, int depth) {
  const auto& node = tree.node(index);
  const ClassCounts counts = count_labels(members);
  CHECK(node.counts == counts);
  CHECK(node.prediction == majority_label(counts));
  std::optional<oracle::BestSplit> best;
  if (depth < cfg.max_depth && counts.size() > 1) best = oracle::best_split(members, cfg.min_leaf);
  const bool should_split =
      best && best->decrease > 1e-12 && best->decrease >= cfg.min_impurity_decrease;
  REQUIRE(node.leaf == !should_split);
  if (node.leaf) return;
  CHECK(node.feature == best->pair.first);
  CHECK(node.value == best->pair.second);
  std::vector<Instance> yes, no;
  for (const auto& inst : members) {
    const auto it = inst.features.find(node.feature);
    (it != inst.features.end() && it->second == node.value ? yes : no).push_back(inst);
  }
  check_against_oracle(tree, node.match, yes, cfg, depth + 1);
  check_against_oracle(tree, node.other, no, cfg, depth + 1);
}

}  // namespace

TEST_CASE("gini") {
  CHECK(gini({{"a", 5}}) == doctest::Approx(0.0));
  CHECK(gini({{"a", 5}, {"b", 5}}) == doctest::Approx(0.5));
  CHECK(gini({{"a", 1}, {"b", 1}, {"c", 1}}) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(gini({}), Error);
  CHECK_THROWS_AS(gini({{"a", 0}}), Error);
}

TEST_CASE("gini bounds on random distributions") {
  synth::Rng rng(5);
  for (int round = 0; round < 300; ++round) {
    ClassCounts c;
    const std::size_t k = 1 + rng.below(6);
    for (std::size_t i = 0; i < k; ++i) c["l" + std::to_string(i)] = 1 + rng.below(50);
    const double g = gini(c);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0 - 1.0 / static_cast<double>(k) + 1e-12);
  }
}

TEST_CASE("majority label breaks ties by name") {
  CHECK(majority_label({{"before", 3}, {"after", 3}}) == "after");
  CHECK(majority_label({{"before", 4}, {"after", 3}}) == "before");
}

TEST_CASE("perfectly separable data gives one split and pure leaves") {
  std::vector<Instance> data;
  for (int i = 0; i < 30; ++i) data.push_back(mk({{"dep-upos", "PRON"}}, "after"));
  for (int i = 0; i < 70; ++i) data.push_back(mk({{"dep-upos", "NOUN"}}, "before"));
  LearnerConfig cfg;
  cfg.min_leaf = 5;
  const DecisionTree t = train_tree(data, cfg);
  CHECK(t.depth() == 1);
  CHECK(t.leaf_count() == 2);
  CHECK(t.root().feature == "dep-upos");
  CHECK(t.root().value == "NOUN");  // both values tie; lexicographically smaller wins
  for (const auto& inst : data) CHECK(predict(t, inst) == inst.label);
}

TEST_CASE("missing feature takes the other branch") {
  std::vector<Instance> data;
  for (int i = 0; i < 10; ++i) data.push_back(mk({{"f", "v"}}, "yes"));
  for (int i = 0; i < 10; ++i) data.push_back(mk({}, "no"));
  LearnerConfig cfg;
  cfg.min_leaf = 1;
  const DecisionTree t = train_tree(data, cfg);
  CHECK(t.predict({}) == "no");
  CHECK(t.predict({{"f", "w"}}) == "no");
  CHECK(t.predict({{"f", "v"}}) == "yes");
}

TEST_CASE("constant labels give a single leaf") {
  std::vector<Instance> data(10, mk({{"f", "v"}}, "only"));
  const DecisionTree t = train_tree(data, {});
  CHECK(t.nodes().size() == 1);
  CHECK(t.root().leaf);
  CHECK(t.root().prediction == "only");
}

TEST_CASE("empty training set and bad config throw") {
  CHECK_THROWS_AS(train_tree({}, {}), Error);
  LearnerConfig bad;
  bad.max_depth = 0;
  CHECK_THROWS_AS(train_tree({mk({}, "a")}, bad), Error);
  bad = {};
  bad.min_leaf = 0;
  CHECK_THROWS_AS(train_tree({mk({}, "a")}, bad), Error);
}

TEST_CASE("min_leaf and max_depth are respected") {
  synth::Rng rng(17);
  const auto data = random_dataset(rng, 400);
  for (std::size_t min_leaf : {1u, 5u, 20u, 60u}) {
    for (int max_depth : {1, 2, 4, 8}) {
      LearnerConfig cfg;
      cfg.min_leaf = min_leaf;
      cfg.max_depth = max_depth;
      const DecisionTree t = train_tree(data, cfg);
      CHECK(t.depth() <= max_depth);
      for (const auto& n : t.nodes()) {
        std::size_t total = 0;
        for (const auto& [l, c] : n.counts) total += c;
        CHECK(total >= min_leaf);
      }
    }
  }
}

TEST_CASE("tree matches the exhaustive split oracle") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    synth::Rng rng(seed);
    const auto data = random_dataset(rng, 60 + rng.below(200));
    LearnerConfig cfg;
    cfg.min_leaf = 1 + rng.below(10);
    cfg.max_depth = 1 + static_cast<int>(rng.below(5));
    cfg.min_impurity_decrease = rng.chance(50) ? 0.0 : 0.01;
    const DecisionTree t = train_tree(data, cfg);
    check_against_oracle(t, 0, data, cfg, 0);
  }
}

TEST_CASE("training accuracy is at least the majority baseline") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    synth::Rng rng(seed);
    const auto data = random_dataset(rng, 50 + rng.below(300));
    LearnerConfig cfg;
    cfg.min_leaf = 1 + rng.below(30);
    const DecisionTree t = train_tree(data, cfg);
    const std::string maj = majority_label(count_labels(data));
    std::size_t tree_hits = 0, base_hits = 0;
    for (const auto& inst : data) {
      tree_hits += predict(t, inst) == inst.label;
      base_hits += maj == inst.label;
    }
    CHECK(tree_hits >= base_hits);
  }
}

TEST_CASE("training is deterministic and order of features is irrelevant") {
  synth::Rng rng(8);
  const auto data = random_dataset(rng, 300);
  LearnerConfig cfg;
  cfg.min_leaf = 3;
  CHECK(train_tree(data, cfg) == train_tree(data, cfg));
}

TEST_CASE("json round trip") {
  synth::Rng rng(9);
  const auto data = random_dataset(rng, 200);
  LearnerConfig cfg;
  cfg.min_leaf = 4;
  const DecisionTree t = train_tree(data, cfg);
  const auto j = t.to_json();
  CHECK(j.at("schema_version") == "1");
  const DecisionTree back = DecisionTree::from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.to_json() == j);
  for (const auto& inst : data) CHECK(back.predict(inst.features) == t.predict(inst.features));
  CHECK_THROWS_AS(DecisionTree::from_json({{"schema_version", "9"}, {"root", nullptr}}), Error);
  CHECK_THROWS_AS(DecisionTree::from_json({{"schema_version", "1"}}), Error);
}
