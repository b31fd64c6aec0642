#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gramlex/bitext.hpp"
#include "gramlex/instances.hpp"
#include "gramlex/treebank.hpp"

namespace gramlex {

/// Per pair_id, one lemma per target token (from a target-side treebank).
using TargetLemmas = std::unordered_map<std::string, std::vector<std::string>>;

/// Maps bitext pairs to target treebank sentences by line number (pair k is
/// sentence k). Pairs whose token count disagrees with the sentence are left
/// out and fall back to surface forms.
TargetLemmas target_lemmas_from_treebank(const Bitext& bt, const Treebank& target_tb);

struct TranslationSet {
  std::string english_lemma;
  std::map<std::string, std::size_t> candidates;  // L2 key -> link count
  std::map<std::string, std::vector<std::string>> example_pair_ids;
  std::map<std::string, std::set<std::string>> surface_forms;  // L2 key -> forms seen

  std::size_t total() const;
  bool operator==(const TranslationSet&) const = default;
};

/// L2 key for target token j of a pair: its lemma when available, else the form.
std::string l2_key(const SentencePair& pair, std::size_t j, const TargetLemmas* lemmas);

/// Counts every alignment link under its English word; sorted by English word.
std::vector<TranslationSet> extract_translation_sets(const Bitext& bt,
                                                     const std::vector<Alignment>& alignments,
                                                     const TargetLemmas* lemmas = nullptr);

/// Fifty frequent English function words.
std::set<std::string> default_stoplist();

struct DivergenceFilter {
  std::size_t min_count = 3;
  std::size_t min_candidates = 2;
  double min_prob = 0.1;
  std::set<std::string> stoplist = default_stoplist();
};

/// Keeps sets whose English word is not stoplisted and that retain at least
/// min_candidates candidates after dropping rare (< min_count) or
/// improbable (sum of t(form | english) over the key's forms < min_prob) ones.
std::vector<TranslationSet> filter_divergent_pairs(const std::vector<TranslationSet>& sets,
                                                   const DivergenceFilter& filter,
                                                   const TranslationTable& table);

/// Lexical-selection dataset for one English word: one instance per linked
/// occurrence whose L2 key is a retained candidate. Provenance uses the
/// pair_id as sentence id and 1-based (source, target) positions.
std::vector<Instance> build_selection_instances(const TranslationSet& ts, const Bitext& bt,
                                                const std::vector<Alignment>& alignments,
                                                const TargetLemmas* lemmas,
                                                const std::set<std::string>& stoplist);

/// L2 sentence with the given 1-based target positions highlighted and the
/// English side as translation.
ExampleRef bitext_example(const SentencePair& pair, std::vector<int> target_highlight);

struct Synset {
  std::string id;
  std::string pos;
  std::vector<std::string> lemmas;
  std::vector<std::string> hypernyms;
  std::vector<std::string> antonyms;
  std::string gloss;
};

/// Six-column TSV sense inventory: id, pos, lemmas, hypernyms, antonyms,
/// gloss (lists comma-separated). Lemma senses are ranked by file order.
class SenseLexicon {
 public:
  static SenseLexicon parse(std::string_view tsv);
  static SenseLexicon load(const std::string& path);

  const Synset* find(std::string_view id) const;
  /// Ranked synset ids for (lemma, pos); nullptr when the lemma is unknown.
  const std::vector<std::string>* senses(const std::string& lemma, const std::string& pos) const;
  bool has_pos(const std::string& lemma, const std::string& pos) const;
  std::size_t size() const { return synsets_.size(); }

 private:
  std::map<std::string, Synset> synsets_;
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> lemma_index_;
};

/// "NOUN" -> "n", "VERB" -> "v", "ADJ"/"s" -> "a", "ADV" -> "r"; others pass through.
std::string normalize_pos(std::string_view pos);

struct CategoryConfig {
  std::map<std::string, std::set<std::string>> categories;

  /// Food, relationships, animals, fruits, colors, time, body parts, vehicle,
  /// elements, furniture, clothing, keyed to WordNet-style synset ids.
  static CategoryConfig defaults();
  /// INI/TOML: `name = id1, id2` or `name = ["id1", "id2"]`, optional sections.
  static CategoryConfig parse(std::string_view text);
  static CategoryConfig load(const std::string& path);
};

/// First-sense synset, then breadth-first over hypernyms; the category whose
/// synset is reached in the fewest hops wins (name order on ties).
std::optional<std::string> assign_category(const std::string& lemma, const std::string& pos,
                                           const SenseLexicon& lex, const CategoryConfig& cats);

/// English word -> (lemma, upos) from an annotated English treebank, taking
/// the most frequent analysis per lowercased form.
using EnglishAnalyses = std::map<std::string, std::pair<std::string, std::string>>;
EnglishAnalyses english_analyses(const Treebank& tb_english);

struct AdjectiveEntry {
  std::string adjective;
  std::size_t frequency = 0;
  std::string gloss;
  std::vector<std::string> synonyms;
  std::vector<std::string> antonyms;
  std::vector<std::pair<std::string, std::size_t>> translations;  // descending count
  std::vector<ExampleRef> examples;

  bool operator==(const AdjectiveEntry&) const = default;
};

/// English adjectives seen at least min_freq times on the source side, with
/// synonyms from their first adjectival synset, antonyms from its antonym
/// links and translations from `sets`. Sorted by descending frequency.
std::vector<AdjectiveEntry> adjective_sets(const EnglishAnalyses* english, const Bitext& bt,
                                           const std::vector<Alignment>& alignments,
                                           const SenseLexicon& lex,
                                           const std::vector<TranslationSet>& sets,
                                           std::size_t min_freq, std::size_t k);

struct CategoryWord {
  std::string english;
  std::size_t frequency = 0;
  std::vector<std::pair<std::string, std::size_t>> translations;
  std::vector<ExampleRef> examples;

  bool operator==(const CategoryWord&) const = default;
};

/// Category name -> words, plus a POS-filtered "verbs" list.
std::map<std::string, std::vector<CategoryWord>> categorize_vocabulary(
    const EnglishAnalyses* english, const Bitext& bt, const std::vector<Alignment>& alignments,
    const SenseLexicon& lex, const CategoryConfig& cats, const std::vector<TranslationSet>& sets,
    const std::set<std::string>& stoplist, std::size_t min_freq, std::size_t k);

/// TSV dump: english, candidate, count, example pair ids.
std::string translation_sets_tsv(const std::vector<TranslationSet>& sets);

}  // namespace gramlex
