#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gramlex {

/// Ordered attribute=value pairs from the FEATS column, in input order.
using Feats = std::vector<std::pair<std::string, std::string>>;

struct Token {
  int id = 0;  // 1-based within the sentence
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;
  Feats feats;
  int head = 0;  // 0 = root
  std::string deprel;
  std::string deps;
  std::string misc;

  /// Value of a morphological attribute, or nullptr.
  const std::string* feat(std::string_view attribute) const;
};

struct Sentence {
  std::string sent_id;
  std::vector<Token> tokens;
  std::vector<std::string> comments;  // verbatim, including the leading '#'
  std::optional<std::string> translation;

  /// Token by 1-based id, or nullptr when out of range.
  const Token* token(int id) const;
  /// The `# text` comment when present, else space-joined forms.
  std::string text() const;
  std::vector<std::string> forms() const;
};

struct ParseStats {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t multiword_ranges_dropped = 0;
  std::size_t empty_nodes_dropped = 0;
  std::size_t renamed_sent_ids = 0;
};

class Treebank {
 public:
  std::string language;
  std::vector<Sentence> sentences;
  std::vector<std::string> source_paths;
  ParseStats stats;

  const Sentence* find(std::string_view sent_id) const;
  std::size_t token_count() const;

  /// Appends another treebank's sentences, renaming colliding sent_ids.
  void append(Treebank other);

  /// Must be called after mutating `sentences` directly.
  void reindex();

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

/// A sentence excerpt selected to illustrate a pattern. `highlight` holds
/// 1-based token ids to emphasise.
struct ExampleRef {
  std::string sent_id;
  std::vector<std::string> tokens;
  std::vector<int> highlight;
  std::string translation;  // English gloss; empty when unavailable

  bool operator==(const ExampleRef&) const = default;
};

ExampleRef make_example(const Sentence& s, std::vector<int> highlight);

struct Violation {
  enum class Kind { DanglingHead, SelfHead, ZeroRoots, MultiRoot, NonContiguousIds };
  Kind kind;
  std::string sent_id;
  std::string detail;
};

std::string_view to_string(Violation::Kind kind);

/// Parses CoNLL-U text. Multiword-token ranges ("3-4") and empty nodes
/// ("3.1") are dropped and counted in `stats`. Throws ParseError (with the
/// offending line) or EncodingError.
Treebank parse_conllu(std::string_view text, std::string language);

Treebank read_conllu_file(const std::string& path, std::string language);

/// Canonical CoNLL-U: comments verbatim, FEATS alphabetised, `_` for empty
/// columns, a blank line after every sentence.
std::string serialize_conllu(const Treebank& tb);

std::vector<Violation> validate(const Treebank& tb);
std::vector<Violation> validate(const Sentence& s);

/// True when the sentence is a well-formed single-rooted tree.
bool is_well_formed(const Sentence& s);

}  // namespace gramlex
