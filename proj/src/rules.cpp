#include "gramlex/rules.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "gramlex/error.hpp"
#include "gramlex/text.hpp"

namespace gramlex {

bool holds(const Condition& c, const FeatureMap& features) {
  auto it = features.find(c.feature);
  const bool equal = it != features.end() && it->second == c.value;
  return c.is ? equal : !equal;
}

bool Rule::matches(const FeatureMap& features) const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [&](const Condition& c) { return holds(c, features); });
}

std::vector<Rule> extract_rules(const DecisionTree& tree) {
  std::vector<Rule> rules;
  if (tree.empty()) return rules;
  const std::string dominant = tree.root().prediction;

  std::vector<Condition> path;
  std::function<void(int)> walk = [&](int i) {
    const auto& n = tree.node(i);
    if (!n.leaf) {
      path.push_back({n.feature, n.value, true});
      walk(n.match);
      path.back().is = false;
      walk(n.other);
      path.pop_back();
      return;
    }
    Rule r;
    r.conditions = path;
    r.prediction = n.prediction;
    r.class_counts = n.counts;
    r.support = std::accumulate(n.counts.begin(), n.counts.end(), std::size_t{0},
                                [](std::size_t acc, const auto& kv) { return acc + kv.second; });
    const auto hit = n.counts.find(n.prediction);
    r.precision = r.support == 0 || hit == n.counts.end()
                      ? 0.0
                      : static_cast<double>(hit->second) / static_cast<double>(r.support);
    r.exception = n.prediction != dominant;
    r.leaf = i;
    rules.push_back(std::move(r));
  };
  walk(0);
  std::stable_sort(rules.begin(), rules.end(),
                   [](const Rule& a, const Rule& b) { return a.support > b.support; });
  return rules;
}

Rule attach_examples(Rule rule, const std::vector<Instance>& instances,
                     const ExampleResolver& resolve, std::size_t k) {
  rule.examples.clear();
  rule.counterexamples.clear();
  if (k == 0) return rule;

  struct Candidate {
    std::size_t length;
    std::size_t order;
    ExampleRef ref;
  };
  std::vector<Candidate> positive, negative;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Instance& inst = instances[i];
    if (!rule.matches(inst.features)) continue;
    auto ref = resolve(inst);
    if (!ref) continue;
    const std::size_t len = ref->tokens.size();
    (inst.label == rule.prediction ? positive : negative).push_back({len, i, std::move(*ref)});
  }
  auto pick = [k](std::vector<Candidate>& pool, std::vector<ExampleRef>& out) {
    std::stable_sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
      return a.length != b.length ? a.length < b.length : a.order < b.order;
    });
    for (std::size_t i = 0; i < pool.size() && out.size() < k; ++i) out.push_back(std::move(pool[i].ref));
  };
  pick(positive, rule.examples);
  pick(negative, rule.counterexamples);
  return rule;
}

Rule attach_examples(Rule rule, const std::vector<Instance>& instances, const Treebank& tb,
                     std::size_t k) {
  ExampleResolver resolve = [&tb](const Instance& inst) -> std::optional<ExampleRef> {
    const Sentence* s = tb.find(inst.provenance.sent_id);
    if (s == nullptr) return std::nullopt;
    std::vector<int> hl;
    if (inst.provenance.head_id > 0) hl.push_back(inst.provenance.head_id);
    if (inst.provenance.dep_id > 0) hl.push_back(inst.provenance.dep_id);
    return make_example(*s, std::move(hl));
  };
  return attach_examples(std::move(rule), instances, resolve, k);
}

Metrics evaluate(const DecisionTree& tree, const std::vector<Instance>& train,
                 const std::vector<Instance>& test) {
  if (train.empty() || test.empty()) throw Error("evaluate: empty train or test set");
  Metrics m;
  m.train_size = train.size();
  m.test_size = test.size();
  const ClassCounts train_counts = count_labels(train);
  m.dominant_label = majority_label(train_counts);
  m.dominant_fraction = static_cast<double>(train_counts.at(m.dominant_label)) /
                        static_cast<double>(train.size());
  std::size_t tree_hits = 0, base_hits = 0;
  for (const auto& inst : test) {
    if (tree.predict(inst.features) == inst.label) ++tree_hits;
    if (inst.label == m.dominant_label) ++base_hits;
  }
  m.tree_accuracy = static_cast<double>(tree_hits) / static_cast<double>(test.size());
  m.baseline_accuracy = static_cast<double>(base_hits) / static_cast<double>(test.size());
  return m;
}

DatasetSplit split_dataset(const std::vector<Instance>& instances, const SplitRatios& ratios,
                           std::uint64_t seed) {
  if (instances.empty()) throw Error("no instances");
  if (ratios.train < 0 || ratios.dev < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.dev + ratios.test - 1.0) > 1e-9) {
    throw Error("split ratios must be non-negative and sum to 1");
  }

  std::vector<std::string> ids;
  std::unordered_set<std::string> seen;
  for (const auto& inst : instances) {
    if (seen.insert(inst.provenance.sent_id).second) ids.push_back(inst.provenance.sent_id);
  }
  const std::string salt = std::to_string(seed) + ":";
  std::vector<std::pair<std::uint64_t, std::string>> keyed;
  keyed.reserve(ids.size());
  for (auto& id : ids) keyed.emplace_back(text::fnv1a64(salt + id), std::move(id));
  std::sort(keyed.begin(), keyed.end());

  const auto total = static_cast<double>(keyed.size());
  const auto n_train = std::min(keyed.size(), static_cast<std::size_t>(std::llround(ratios.train * total)));
  const auto n_dev =
      std::min(keyed.size() - n_train, static_cast<std::size_t>(std::llround(ratios.dev * total)));

  std::unordered_map<std::string, int> part;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    part[keyed[i].second] = i < n_train ? 0 : (i < n_train + n_dev ? 1 : 2);
  }
  DatasetSplit out;
  for (const auto& inst : instances) {
    switch (part[inst.provenance.sent_id]) {
      case 0: out.train.push_back(inst); break;
      case 1: out.dev.push_back(inst); break;
      default: out.test.push_back(inst); break;
    }
  }
  return out;
}

}  // namespace gramlex
