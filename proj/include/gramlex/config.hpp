#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gramlex/bitext.hpp"
#include "gramlex/instances.hpp"
#include "gramlex/lexicon.hpp"
#include "gramlex/rules.hpp"
#include "gramlex/tree.hpp"

namespace gramlex {

struct Thresholds {
  std::size_t min_suffix_count = 5;
  std::size_t examples_per_rule = 5;
  std::size_t summary_examples = 5;
  std::size_t vocab_min_freq = 3;
  std::size_t vocab_examples = 3;
  std::size_t max_sentence_len = 80;
  int em_iterations = 10;
  bool merge_lemmas = true;
  DivergenceFilter divergence;
};

/// Everything that shapes a run. Paths are inputs, the rest is hashed into
/// the report's config digest.
struct RunConfig {
  std::vector<std::string> treebanks;
  std::string bitext_src;
  std::string bitext_tgt;
  std::string lexicon;
  std::string categories;
  std::string out_dir = "out";
  std::string translit;
  std::string language;
  std::uint64_t seed = 42;
  LearnerConfig learner;
  FeatureConfig features;
  SplitRatios split;
  Thresholds thresholds;
  std::vector<RelationSpec> relations = default_relation_specs();
  std::vector<std::string> agreement_attributes = {"Gender", "Person"};
  std::vector<std::string> suffix_upos = {"NOUN", "VERB"};

  /// Canonical JSON of every setting except input and output paths.
  nlohmann::json settings_json() const;
  /// FNV-1a hex digest of settings_json() plus any extra config text
  /// (e.g. the category file contents).
  std::string digest(std::string_view extra = {}) const;
};

/// Applies an INI/TOML-style file on top of `cfg`. Sections: [learner],
/// [features], [thresholds], [split], [extract] and [relation.<name>].
/// Unknown sections or keys raise ParseError.
void apply_config_text(RunConfig& cfg, std::string_view text);
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Checks value ranges. Throws gramlex::Error.
void check_config(const RunConfig& cfg);

}  // namespace gramlex
