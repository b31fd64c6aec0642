#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gramlex {

struct SentencePair {
  std::vector<std::string> source;  // English, lowercased
  std::vector<std::string> target;  // L2, untouched
  std::string pair_id;              // 1-based line number in the input files
};

struct Bitext {
  std::vector<SentencePair> pairs;
  std::size_t dropped_empty = 0;
  std::size_t dropped_long = 0;

  const SentencePair* find(std::string_view pair_id) const;
};

struct BitextOptions {
  std::size_t max_len = 80;
  bool lowercase_source = true;
};

/// Builds a bitext from parallel line sequences (line i of each side is one
/// pair). Pairs with an empty side or more than max_len tokens on either
/// side are dropped and counted.
Bitext make_bitext(const std::vector<std::string>& source_lines,
                   const std::vector<std::string>& target_lines, const BitextOptions& opts = {});

/// Moses-style two-file loader. Throws IoError, or Error("line count mismatch").
Bitext load_bitext(const std::string& source_path, const std::string& target_path,
                   const BitextOptions& opts = {});

/// Lexical translation probabilities t(target | source). Row 0 is the
/// reserved NULL source.
class TranslationTable {
 public:
  static constexpr std::string_view kNull = "<NULL>";

  double prob(std::string_view source, std::string_view target) const;
  /// Sorted (target, probability) pairs for one source word; empty if unknown.
  std::vector<std::pair<std::string, double>> row(std::string_view source) const;
  std::vector<std::string> sources() const;
  bool has_target(std::string_view target) const;
  /// Largest |sum_f t(f|s) - 1| over all rows.
  double max_row_error() const;

  /// TSV lines "source<TAB>target<TAB>probability" for entries >= min_prob.
  std::string to_tsv(double min_prob = 1e-4) const;

 private:
  friend class Ibm1Trainer;
  std::vector<std::string> src_vocab_;
  std::vector<std::string> tgt_vocab_;
  std::unordered_map<std::string, int> src_index_;
  std::unordered_map<std::string, int> tgt_index_;
  std::vector<std::vector<std::pair<int, double>>> rows_;  // sorted by target id
};

struct Ibm1Options {
  int iterations = 10;
  bool use_null = true;
};

/// Per-iteration diagnostics. `log_likelihood[k]` is the corpus
/// log-likelihood under the parameters before iteration k+1; the last entry
/// is after the final iteration.
struct Ibm1Trace {
  std::vector<double> log_likelihood;
  std::vector<double> row_error;  // after each M-step
};

/// IBM Model 1 EM. Uniform start over co-occurring pairs; fixed accumulation
/// order, so identical input gives a bitwise-identical table.
TranslationTable train_ibm1(const Bitext& bt, const Ibm1Options& opts, Ibm1Trace* trace = nullptr);

/// Reverse-direction bitext (target becomes source) for symmetrisation.
Bitext reversed(const Bitext& bt);

using Alignment = std::set<std::pair<int, int>>;  // (source index, target index)

/// Viterbi alignment under Model 1: each target word links to its most
/// probable source word (smallest index on ties). Unseen target words and
/// words where NULL is strictly more probable stay unlinked.
Alignment align(const SentencePair& pair, const TranslationTable& table, bool use_null);

inline Alignment transpose(const Alignment& a) {
  Alignment out;
  for (const auto& [i, j] : a) out.emplace(j, i);
  return out;
}

/// Intersection of the forward links with the transposed reverse links.
Alignment symmetrize(const Alignment& forward, const Alignment& reverse_transposed);

/// Forward and reverse Model 1, intersected per pair.
std::vector<Alignment> align_bitext(const Bitext& bt, const Ibm1Options& opts,
                                    TranslationTable* forward_table = nullptr);

/// Pharaoh "i-j" notation, links sorted, space-separated.
std::string to_pharaoh(const Alignment& a);
Alignment parse_pharaoh(std::string_view line);

}  // namespace gramlex
