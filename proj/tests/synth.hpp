// Deterministic corpus generators used by the unit and acceptance tests.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gramlex/bitext.hpp"

namespace synth {

/// splitmix64; portable, unlike the standard distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  bool chance(unsigned percent) { return below(100) < percent; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::uint64_t state_;
};

struct Tok {
  std::string form;
  std::string lemma;
  std::string upos;
  std::string feats;  // already in CoNLL-U order, "_" when empty
  int head = 0;
  std::string deprel;
};

std::string to_conllu(const std::string& sent_id, const std::vector<Tok>& toks,
                      const std::string& english = "");

/// Several clauses per sentence; subjects follow their verb iff they are
/// pronouns. Exactly one pronoun-subject clause in five; other subjects
/// are common nouns or names.
std::string word_order_corpus(std::size_t sentences, std::uint64_t seed);
inline constexpr std::size_t kClausesPerSentence = 5;

/// Nouns end in "laa" iff Case=Acc and in "madhe" iff Case=Loc.
std::string suffix_corpus(std::size_t sentences, std::uint64_t seed);

/// A verb-final language with gender agreement, case suffixes, numerals,
/// adjectives and postpositions; stands in for a real UD treebank.
std::string ud_style_treebank(std::size_t sentences, std::uint64_t seed);

struct ParallelCorpus {
  std::vector<std::string> source;
  std::vector<std::string> target;
  std::vector<gramlex::Alignment> gold;  // (source index, target index)
};

/// One-to-one dictionary of `words` entries; targets are shuffled
/// translations of distinct source words.
ParallelCorpus dictionary_bitext(std::size_t pairs, std::size_t words, std::uint64_t seed);

/// English "rice" is "bhaat" when "cooked" is in the sentence, else "tandul".
ParallelCorpus rice_bitext(std::size_t pairs, std::uint64_t seed);

/// Ten-synset sense lexicon and matching category config.
std::string fixture_lexicon();
std::string fixture_categories();

}  // namespace synth
