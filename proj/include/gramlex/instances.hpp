#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gramlex/treebank.hpp"

namespace gramlex {

/// Marker the learner uses for an absent feature. Never stored as a value.
inline constexpr std::string_view kMissing = "\xE2\x88\x85";  // U+2205
inline constexpr std::string_view kOtherBucket = "OTHER";
inline constexpr std::string_view kNoSuffix = "NONE";

using FeatureMap = std::map<std::string, std::string>;

struct Provenance {
  std::string sent_id;
  int head_id = 0;
  int dep_id = 0;

  bool operator==(const Provenance&) const = default;
};

struct Instance {
  FeatureMap features;
  std::string label;
  Provenance provenance;

  bool operator==(const Instance&) const = default;
};

struct RelationSpec {
  std::string name;
  std::set<std::string> dependent_deprels;
  std::set<std::string> head_upos;       // empty = any
  std::set<std::string> dependent_upos;  // empty = any
  std::string question;                  // teacher-facing wording; may be empty

  /// Matches the deprel exactly or by its universal part ("nsubj:pass" -> "nsubj").
  bool matches(const Token& head, const Token& dep) const;
};

/// Subject-verb, object-verb, adjective-noun, numeral-noun, noun-adposition.
std::vector<RelationSpec> default_relation_specs();

struct FeatureConfig {
  std::size_t lemma_vocab_size = 100;
  bool include_neighbor_pos = true;
  int neighbor_window = 1;
  bool include_morph_feats = true;
  bool include_sibling_deprels = true;
};

/// Top-K lemmas by corpus frequency; ties broken lexicographically.
std::set<std::string> build_lemma_vocab(const Treebank& tb, std::size_t k);

FeatureMap featurize(const Sentence& sentence, int head_id, int dep_id, const FeatureConfig& cfg,
                     const std::set<std::string>& lemma_vocab);

struct ExtractionStats {
  std::size_t candidate_edges = 0;  // edges in well-formed sentences
  std::size_t matched = 0;
  std::size_t skipped = 0;
  std::size_t excluded_sentences = 0;  // sentences failing validation
};

struct Dataset {
  std::vector<Instance> instances;
  ExtractionStats stats;
};

inline constexpr std::string_view kBefore = "before";
inline constexpr std::string_view kAfter = "after";

Dataset extract_order_instances(const Treebank& tb, const RelationSpec& spec,
                                const FeatureConfig& cfg);

inline constexpr std::string_view kAgree = "agree";
inline constexpr std::string_view kDisagree = "disagree";

/// Agreement on `attribute` between head and dependent. Edges where either
/// token lacks the attribute are counted in `stats.skipped`. Features never
/// include head-<attribute> or dep-<attribute>.
Dataset extract_agreement_instances(const Treebank& tb, const std::string& attribute,
                                    const FeatureConfig& cfg);

struct Segmentation {
  std::string stem;
  std::string suffix;
  bool confident = false;
};

/// Longest-common-prefix segmentation of a case-folded form against its
/// lemma. A prefix shorter than 2 code points or half the lemma is not
/// confident and yields an empty stem and suffix.
Segmentation segment_suffix(std::string_view form, std::string_view lemma);

struct SuffixDataset {
  std::map<std::string, std::size_t> inventory;  // suffix -> count, count >= min
  std::vector<Instance> instances;
  /// Inventory pairs (shorter, longer) where the longer adds one leading
  /// character; possible stem-alternation variants.
  std::vector<std::pair<std::string, std::string>> sandhi_candidates;
  std::size_t unsegmented = 0;
  std::size_t rare_relabelled = 0;
};

SuffixDataset extract_suffix_instances(const Treebank& tb, const std::string& upos,
                                       const FeatureConfig& cfg, std::size_t min_suffix_count);

/// One "feature=value ... <TAB> label" line per instance.
std::string dump_tsv(const std::vector<Instance>& instances);

}  // namespace gramlex
