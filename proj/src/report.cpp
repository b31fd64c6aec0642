#include "gramlex/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "gramlex/error.hpp"
#include "gramlex/text.hpp"

namespace gramlex {

using nlohmann::json;

std::string_view to_string(Aspect a) {
  switch (a) {
    case Aspect::WordOrder: return "word_order";
    case Aspect::Agreement: return "agreement";
    case Aspect::Suffix: return "suffix";
    case Aspect::Vocabulary: return "vocabulary";
    case Aspect::General: return "general";
  }
  return "general";
}

Aspect aspect_from_string(std::string_view s) {
  for (Aspect a : kAllAspects) {
    if (to_string(a) == s) return a;
  }
  throw Error("unknown aspect '" + std::string(s) + "'");
}

std::string_view concept_name(Aspect a) {
  switch (a) {
    case Aspect::WordOrder: return "Word Order";
    case Aspect::Agreement: return "Agreement";
    case Aspect::Suffix: return "Suffix Usage";
    case Aspect::Vocabulary: return "Vocabulary";
    case Aspect::General: return "General Information";
  }
  return "";
}

json method_metadata() {
  return {
      {"learner", "CART decision tree; gini impurity; binary feature=value splits; "
                  "absent feature takes the non-matching branch; no pruning"},
      {"split", "sentence-level seeded hash split (train/dev/test)"},
      {"suffix_segmentation", "longest common prefix of form and lemma"},
      {"aligner", "IBM Model 1 (EM) in both directions, intersection symmetrisation"},
      {"sense_selection", "first-ranked sense from the sense lexicon"},
  };
}

std::string grammar_point_id(std::string_view language, Aspect aspect, std::string_view question) {
  return text::slugify(std::string(language) + " " + std::string(to_string(aspect)) + " " +
                       std::string(question));
}

GrammarPoint build_grammar_point(std::string language, Aspect aspect, std::string type,
                                 std::string question, const DecisionTree* tree,
                                 std::vector<Rule> rules, std::optional<Metrics> metrics,
                                 json payload) {
  if (tree != nullptr) {
    if (tree->empty() || rules.size() != tree->leaf_count()) {
      throw Error("inconsistent rule/tree pairing: rule count does not match leaves");
    }
    std::set<int> leaves;
    for (const auto& r : rules) {
      if (r.leaf < 0 || static_cast<std::size_t>(r.leaf) >= tree->nodes().size()) {
        throw Error("inconsistent rule/tree pairing: unknown leaf");
      }
      const auto& n = tree->node(r.leaf);
      std::size_t support = 0;
      for (const auto& [l, c] : n.counts) support += c;
      if (!n.leaf || n.prediction != r.prediction || support != r.support ||
          !leaves.insert(r.leaf).second) {
        throw Error("inconsistent rule/tree pairing at leaf " + std::to_string(r.leaf));
      }
    }
  } else if (!rules.empty()) {
    throw Error("inconsistent rule/tree pairing: rules without a tree");
  }

  GrammarPoint p;
  p.id = grammar_point_id(language, aspect, question);
  p.language = std::move(language);
  p.aspect = aspect;
  p.type = std::move(type);
  p.question = std::move(question);
  if (tree != nullptr) {
    p.dominant_label = tree->root().prediction;
    std::size_t total = 0;
    for (const auto& [l, c] : tree->root().counts) total += c;
    const auto it = tree->root().counts.find(p.dominant_label);
    p.dominant_fraction = total == 0 || it == tree->root().counts.end()
                              ? 0.0
                              : static_cast<double>(it->second) / static_cast<double>(total);
  }
  std::stable_partition(rules.begin(), rules.end(), [](const Rule& r) { return r.exception; });
  p.rules = std::move(rules);
  p.metrics = std::move(metrics);
  p.payload = std::move(payload);
  return p;
}

json to_json(const ExampleRef& e) {
  return {{"sent_id", e.sent_id},
          {"tokens", e.tokens},
          {"highlight", e.highlight},
          {"translation", e.translation}};
}

ExampleRef example_from_json(const json& j) {
  ExampleRef e;
  e.sent_id = j.at("sent_id").get<std::string>();
  e.tokens = j.at("tokens").get<std::vector<std::string>>();
  e.highlight = j.at("highlight").get<std::vector<int>>();
  e.translation = j.at("translation").get<std::string>();
  return e;
}

namespace {

json examples_json(const std::vector<ExampleRef>& v) {
  json a = json::array();
  for (const auto& e : v) a.push_back(to_json(e));
  return a;
}

std::vector<ExampleRef> examples_from(const json& a) {
  std::vector<ExampleRef> out;
  for (const auto& e : a) out.push_back(example_from_json(e));
  return out;
}

Rule rule_from_json(const json& j) {
  Rule r;
  for (const auto& c : j.at("conditions")) {
    const std::string pol = c.at("polarity").get<std::string>();
    if (pol != "is" && pol != "is-not") throw Error("rule: bad polarity '" + pol + "'");
    r.conditions.push_back(
        {c.at("feature").get<std::string>(), c.at("value").get<std::string>(), pol == "is"});
  }
  r.prediction = j.at("prediction").get<std::string>();
  r.support = j.at("support").get<std::size_t>();
  r.precision = j.at("precision").get<double>();
  r.class_counts = j.at("class_counts").get<ClassCounts>();
  r.exception = j.at("exception").get<bool>();
  r.leaf = j.at("leaf").get<int>();
  r.examples = examples_from(j.at("examples"));
  r.counterexamples = examples_from(j.at("counterexamples"));
  return r;
}

Metrics metrics_from_json(const json& j) {
  Metrics m;
  m.train_size = j.at("train_size").get<std::size_t>();
  m.test_size = j.at("test_size").get<std::size_t>();
  m.tree_accuracy = j.at("tree_accuracy").get<double>();
  m.baseline_accuracy = j.at("baseline_accuracy").get<double>();
  m.dominant_label = j.at("dominant_label").get<std::string>();
  m.dominant_fraction = j.at("dominant_fraction").get<double>();
  return m;
}

GrammarPoint point_from_json(const json& j) {
  GrammarPoint p;
  p.id = j.at("id").get<std::string>();
  p.language = j.at("language").get<std::string>();
  p.aspect = aspect_from_string(j.at("aspect").get<std::string>());
  p.type = j.at("type").get<std::string>();
  p.question = j.at("question").get<std::string>();
  p.dominant_label = j.at("dominant").at("label").get<std::string>();
  p.dominant_fraction = j.at("dominant").at("fraction").get<double>();
  if (j.contains("metrics") && !j.at("metrics").is_null()) p.metrics = metrics_from_json(j.at("metrics"));
  for (const auto& r : j.at("rules")) p.rules.push_back(rule_from_json(r));
  p.payload = j.at("payload");
  return p;
}

}  // namespace

json to_json(const Rule& r) {
  json conds = json::array();
  for (const auto& c : r.conditions) {
    conds.push_back({{"feature", c.feature}, {"value", c.value}, {"polarity", c.is ? "is" : "is-not"}});
  }
  return {{"conditions", conds},
          {"prediction", r.prediction},
          {"support", r.support},
          {"precision", r.precision},
          {"class_counts", r.class_counts},
          {"exception", r.exception},
          {"leaf", r.leaf},
          {"examples", examples_json(r.examples)},
          {"counterexamples", examples_json(r.counterexamples)}};
}

json to_json(const Metrics& m) {
  return {{"train_size", m.train_size},
          {"test_size", m.test_size},
          {"tree_accuracy", m.tree_accuracy},
          {"baseline_accuracy", m.baseline_accuracy},
          {"dominant_label", m.dominant_label},
          {"dominant_fraction", m.dominant_fraction}};
}

json to_json(const GrammarPoint& p) {
  json rules = json::array();
  for (const auto& r : p.rules) rules.push_back(to_json(r));
  return {{"id", p.id},
          {"language", p.language},
          {"aspect", to_string(p.aspect)},
          {"type", p.type},
          {"question", p.question},
          {"dominant", {{"label", p.dominant_label}, {"fraction", p.dominant_fraction}}},
          {"metrics", p.metrics ? to_json(*p.metrics) : json()},
          {"rules", rules},
          {"payload", p.payload}};
}

json to_json(const Report& r) {
  json points = json::array();
  for (const auto& p : r.points) points.push_back(to_json(p));
  return {{"schema_version", r.schema_version},
          {"created", r.created},
          {"config_digest", r.config_digest},
          {"metadata", r.metadata},
          {"points", points}};
}

Report report_from_json(const json& j) {
  try {
    Report r;
    r.schema_version = j.at("schema_version").get<std::string>();
    r.created = j.at("created").get<std::string>();
    r.config_digest = j.at("config_digest").get<std::string>();
    r.metadata = j.value("metadata", json::object());
    for (const auto& p : j.at("points")) r.points.push_back(point_from_json(p));
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("report json: ") + e.what());
  }
}

std::string emit_json(const Report& report) { return to_json(report).dump(2) + "\n"; }

Report read_report(const std::string& path) {
  json j;
  try {
    j = json::parse(text::read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
  return report_from_json(j);
}

Report merge_reports(const std::vector<Report>& reports) {
  if (reports.empty()) throw Error("merge_reports: no input reports");
  Report out = reports.front();
  std::string language;
  std::set<std::string> ids;
  std::string digest_material;
  for (const auto& r : reports) {
    if (r.schema_version != out.schema_version) {
      throw Error("schema mismatch: " + r.schema_version + " vs " + out.schema_version);
    }
    digest_material += r.config_digest;
    for (const auto& p : r.points) {
      if (language.empty()) language = p.language;
      if (p.language != language) throw Error("language mismatch: " + p.language + " vs " + language);
    }
  }
  out.points.clear();
  for (const auto& r : reports) {
    for (const auto& p : r.points) {
      if (!ids.insert(p.id).second) throw Error("duplicate id: " + p.id);
      out.points.push_back(p);
    }
  }
  if (reports.size() > 1) out.config_digest = text::hex64(text::fnv1a64(digest_material));
  return out;
}

Report merge_report_files(const std::vector<std::string>& paths) {
  std::vector<Report> reports;
  for (const auto& p : paths) reports.push_back(read_report(p));
  return merge_reports(reports);
}

void upsert_points(Report& into, const std::vector<GrammarPoint>& points) {
  for (const auto& p : points) {
    auto it = std::find_if(into.points.begin(), into.points.end(),
                           [&](const GrammarPoint& q) { return q.id == p.id; });
    if (it != into.points.end()) {
      *it = p;
    } else {
      into.points.push_back(p);
    }
  }
}

std::string evaluation_tsv(const Report& report) {
  std::ostringstream out;
  out << "concept\ttype\tautolex\tbaseline\n";
  out << std::fixed << std::setprecision(2);
  for (Aspect a : kAllAspects) {
    if (a == Aspect::Vocabulary) {
      // Pooled row over every lexical-selection question, weighted by test size.
      double tree_hits = 0, base_hits = 0;
      std::size_t n = 0;
      for (const auto& p : report.points) {
        if (p.aspect != a || !p.metrics) continue;
        tree_hits += p.metrics->tree_accuracy * static_cast<double>(p.metrics->test_size);
        base_hits += p.metrics->baseline_accuracy * static_cast<double>(p.metrics->test_size);
        n += p.metrics->test_size;
      }
      if (n > 0) {
        out << concept_name(a) << "\tSemantic Subdivisions\t" << 100.0 * tree_hits / static_cast<double>(n)
            << '\t' << 100.0 * base_hits / static_cast<double>(n) << '\n';
      }
    }
    for (const auto& p : report.points) {
      if (p.aspect != a || !p.metrics) continue;
      out << concept_name(a) << '\t' << p.type << '\t' << 100.0 * p.metrics->tree_accuracy << '\t'
          << 100.0 * p.metrics->baseline_accuracy << '\n';
    }
  }
  return out.str();
}

}  // namespace gramlex
