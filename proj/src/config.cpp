#include "gramlex/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gramlex/error.hpp"
#include "gramlex/text.hpp"

namespace gramlex {

using nlohmann::json;

json RunConfig::settings_json() const {
  json rel = json::array();
  for (const auto& r : relations) {
    rel.push_back({{"name", r.name},
                   {"deprels", r.dependent_deprels},
                   {"head_upos", r.head_upos},
                   {"dep_upos", r.dependent_upos},
                   {"question", r.question}});
  }
  const auto& d = thresholds.divergence;
  return {
      {"language", language},
      {"seed", seed},
      {"learner",
       {{"max_depth", learner.max_depth},
        {"min_leaf", learner.min_leaf},
        {"min_impurity_decrease", learner.min_impurity_decrease}}},
      {"features",
       {{"lemma_vocab_size", features.lemma_vocab_size},
        {"include_neighbor_pos", features.include_neighbor_pos},
        {"neighbor_window", features.neighbor_window},
        {"include_morph_feats", features.include_morph_feats},
        {"include_sibling_deprels", features.include_sibling_deprels}}},
      {"split", {{"train", split.train}, {"dev", split.dev}, {"test", split.test}}},
      {"thresholds",
       {{"min_suffix_count", thresholds.min_suffix_count},
        {"examples_per_rule", thresholds.examples_per_rule},
        {"summary_examples", thresholds.summary_examples},
        {"vocab_min_freq", thresholds.vocab_min_freq},
        {"vocab_examples", thresholds.vocab_examples},
        {"max_sentence_len", thresholds.max_sentence_len},
        {"em_iterations", thresholds.em_iterations},
        {"merge_lemmas", thresholds.merge_lemmas},
        {"min_count", d.min_count},
        {"min_candidates", d.min_candidates},
        {"min_prob", d.min_prob},
        {"stoplist", d.stoplist}}},
      {"relations", rel},
      {"agreement_attributes", agreement_attributes},
      {"suffix_upos", suffix_upos},
  };
}

std::string RunConfig::digest(std::string_view extra) const {
  std::string canon = settings_json().dump();
  canon += '\n';
  canon += extra;
  return text::hex64(text::fnv1a64(canon));
}

namespace {

std::string strip_value(std::string v) {
  v = text::trim(v);
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    v = v.substr(1, v.size() - 2);
  }
  return v;
}

std::vector<std::string> parse_list(std::string v) {
  for (char& c : v) {
    if (c == '[' || c == ']' || c == '"' || c == '\'') c = ' ';
  }
  std::vector<std::string> out;
  for (const auto& part : text::split(v, ',')) {
    std::string t = text::trim(part);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& raw) {
  const std::string v = strip_value(raw);
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ParseError("config: '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string v = text::fold_case(strip_value(raw));
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ParseError("config: '" + key + "' expects true/false, got '" + v + "'");
}

[[noreturn]] void unknown(const std::string& section, const std::string& key) {
  throw ParseError("config: unknown key '" + key + "' in [" + section + "]");
}

void apply_learner(RunConfig& cfg, const std::string& key, const std::string& v) {
  if (key == "max_depth") {
    cfg.learner.max_depth = parse_number<int>(key, v);
  } else if (key == "min_leaf" || key == "min_support") {
    cfg.learner.min_leaf = parse_number<std::size_t>(key, v);
  } else if (key == "min_impurity_decrease") {
    cfg.learner.min_impurity_decrease = parse_number<double>(key, v);
  } else {
    unknown("learner", key);
  }
}

void apply_features(RunConfig& cfg, const std::string& key, const std::string& v) {
  auto& f = cfg.features;
  if (key == "lemma_vocab_size") {
    f.lemma_vocab_size = parse_number<std::size_t>(key, v);
  } else if (key == "include_neighbor_pos") {
    f.include_neighbor_pos = parse_bool(key, v);
  } else if (key == "neighbor_window") {
    f.neighbor_window = parse_number<int>(key, v);
  } else if (key == "include_morph_feats") {
    f.include_morph_feats = parse_bool(key, v);
  } else if (key == "include_sibling_deprels") {
    f.include_sibling_deprels = parse_bool(key, v);
  } else {
    unknown("features", key);
  }
}

void apply_thresholds(RunConfig& cfg, const std::string& key, const std::string& v) {
  auto& t = cfg.thresholds;
  if (key == "min_suffix_count") {
    t.min_suffix_count = parse_number<std::size_t>(key, v);
  } else if (key == "examples_per_rule") {
    t.examples_per_rule = parse_number<std::size_t>(key, v);
  } else if (key == "summary_examples") {
    t.summary_examples = parse_number<std::size_t>(key, v);
  } else if (key == "vocab_min_freq") {
    t.vocab_min_freq = parse_number<std::size_t>(key, v);
  } else if (key == "vocab_examples") {
    t.vocab_examples = parse_number<std::size_t>(key, v);
  } else if (key == "max_sentence_len") {
    t.max_sentence_len = parse_number<std::size_t>(key, v);
  } else if (key == "em_iterations") {
    t.em_iterations = parse_number<int>(key, v);
  } else if (key == "merge_lemmas") {
    t.merge_lemmas = parse_bool(key, v);
  } else if (key == "min_count") {
    t.divergence.min_count = parse_number<std::size_t>(key, v);
  } else if (key == "min_candidates") {
    t.divergence.min_candidates = parse_number<std::size_t>(key, v);
  } else if (key == "min_prob") {
    t.divergence.min_prob = parse_number<double>(key, v);
  } else if (key == "stoplist") {
    const auto words = parse_list(v);
    t.divergence.stoplist = std::set<std::string>(words.begin(), words.end());
  } else {
    unknown("thresholds", key);
  }
}

void apply_split(RunConfig& cfg, const std::string& key, const std::string& v) {
  if (key == "train") {
    cfg.split.train = parse_number<double>(key, v);
  } else if (key == "dev") {
    cfg.split.dev = parse_number<double>(key, v);
  } else if (key == "test") {
    cfg.split.test = parse_number<double>(key, v);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, v);
  } else {
    unknown("split", key);
  }
}

void apply_extract(RunConfig& cfg, const std::string& key, const std::string& v) {
  if (key == "language") {
    cfg.language = strip_value(v);
  } else if (key == "agreement_attributes") {
    cfg.agreement_attributes = parse_list(v);
  } else if (key == "suffix_upos") {
    cfg.suffix_upos = parse_list(v);
  } else {
    unknown("extract", key);
  }
}

void apply_relation(RunConfig& cfg, const std::string& name,
                    const boost::property_tree::ptree& node) {
  RelationSpec* spec = nullptr;
  for (auto& r : cfg.relations) {
    if (r.name == name) spec = &r;
  }
  if (spec == nullptr) {
    cfg.relations.push_back(RelationSpec{.name = name});
    spec = &cfg.relations.back();
  }
  auto to_set = [](const std::string& v) {
    const auto items = parse_list(v);
    return std::set<std::string>(items.begin(), items.end());
  };
  for (const auto& [key, leaf] : node) {
    const std::string& v = leaf.data();
    if (key == "deprels") {
      spec->dependent_deprels = to_set(v);
    } else if (key == "head_upos") {
      spec->head_upos = to_set(v);
    } else if (key == "dep_upos" || key == "dependent_upos") {
      spec->dependent_upos = to_set(v);
    } else if (key == "question") {
      spec->question = strip_value(v);
    } else {
      unknown("relation." + name, key);
    }
  }
  if (spec->dependent_deprels.empty()) {
    throw ParseError("config: [relation." + name + "] needs at least one deprel");
  }
}

}  // namespace

void apply_config_text(RunConfig& cfg, std::string_view text_in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(text_in)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError("config: " + e.message(), e.line());
  }
  for (const auto& [section, node] : tree) {
    if (node.empty()) throw ParseError("config: key '" + section + "' outside any section");
    if (text::starts_with(section, "relation.")) {
      apply_relation(cfg, section.substr(9), node);
      continue;
    }
    for (const auto& [key, leaf] : node) {
      const std::string& v = leaf.data();
      if (section == "learner") {
        apply_learner(cfg, key, v);
      } else if (section == "features") {
        apply_features(cfg, key, v);
      } else if (section == "thresholds") {
        apply_thresholds(cfg, key, v);
      } else if (section == "split") {
        apply_split(cfg, key, v);
      } else if (section == "extract") {
        apply_extract(cfg, key, v);
      } else {
        throw ParseError("config: unknown section [" + section + "]");
      }
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  apply_config_text(cfg, text::read_file(path));
}

void check_config(const RunConfig& cfg) {
  if (cfg.learner.max_depth < 1) throw Error("config: max_depth must be >= 1");
  if (cfg.learner.min_leaf < 1) throw Error("config: min_leaf must be >= 1");
  if (cfg.learner.min_impurity_decrease < 0) throw Error("config: min_impurity_decrease must be >= 0");
  if (cfg.features.neighbor_window < 0) throw Error("config: neighbor_window must be >= 0");
  if (cfg.split.train < 0 || cfg.split.dev < 0 || cfg.split.test < 0 ||
      std::abs(cfg.split.train + cfg.split.dev + cfg.split.test - 1.0) > 1e-9) {
    throw Error("config: split ratios must be non-negative and sum to 1");
  }
  if (cfg.thresholds.examples_per_rule < 1) throw Error("config: examples_per_rule must be >= 1");
  if (cfg.thresholds.em_iterations < 1) throw Error("config: em_iterations must be >= 1");
  const auto& d = cfg.thresholds.divergence;
  if (d.min_prob < 0 || d.min_prob > 1) throw Error("config: min_prob must lie in [0, 1]");
  for (const auto& r : cfg.relations) {
    if (r.dependent_deprels.empty()) throw Error("config: relation '" + r.name + "' has no deprels");
  }
}

}  // namespace gramlex
