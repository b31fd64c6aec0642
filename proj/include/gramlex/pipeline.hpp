#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "gramlex/bitext.hpp"
#include "gramlex/config.hpp"
#include "gramlex/lexicon.hpp"
#include "gramlex/report.hpp"
#include "gramlex/rules.hpp"
#include "gramlex/treebank.hpp"

namespace gramlex {

/// A trained question kept alongside its point for tree dumps and audits.
struct LearnedQuestion {
  std::string point_id;
  DecisionTree tree;
  std::vector<Instance> train;
  std::vector<Instance> test;
};

struct PipelineResult {
  std::vector<GrammarPoint> points;
  std::vector<LearnedQuestion> learned;  // same order as the points that have trees
  std::size_t sentences = 0;
  std::size_t instances = 0;
  std::vector<std::string> warnings;

  std::size_t rule_count() const;
};

/// "Are subjects before or after verbs?" -> "... verbs in Marathi?"
std::string with_language(const std::string& question, const std::string& language);

/// Splits, trains, extracts rules with examples and evaluates one question.
/// Returns nullopt (and a warning) when the data cannot support a held-out
/// evaluation: no instances, or an empty train or test part.
std::optional<std::pair<GrammarPoint, LearnedQuestion>> learn_point(
    const std::string& language, Aspect aspect, const std::string& type,
    const std::string& question, const std::vector<Instance>& instances, nlohmann::json payload,
    const RunConfig& cfg, const ExampleResolver& resolve, std::string& warning);

inline const std::set<std::string>& known_questions() {
  static const std::set<std::string> q{"word_order", "agreement", "suffix", "general"};
  return q;
}

/// Runs the requested treebank questions ("word_order", "agreement",
/// "suffix", "general") on a bounded pool of `jobs` workers. Points come back
/// in a fixed order independent of completion order.
PipelineResult run_extract(const Treebank& tb, const RunConfig& cfg,
                           const std::set<std::string>& questions, unsigned jobs);

/// One point per morphological attribute; no model, no metrics.
std::vector<GrammarPoint> summarize_points(const Treebank& tb, const std::string& language,
                                           std::size_t top_n);

struct VocabInputs {
  const Bitext* bitext = nullptr;
  const std::vector<Alignment>* alignments = nullptr;
  const TranslationTable* table = nullptr;
  const TargetLemmas* lemmas = nullptr;     // optional
  const SenseLexicon* lexicon = nullptr;    // optional; enables categories and adjectives
  const CategoryConfig* categories = nullptr;
  const EnglishAnalyses* english = nullptr;  // optional
};

struct VocabResult {
  PipelineResult pipeline;
  std::vector<TranslationSet> all_sets;
  std::vector<TranslationSet> divergent;
};

/// Lexical-selection questions for every divergent English word, plus the
/// category and adjective word lists when a lexicon is supplied.
VocabResult run_vocab(const VocabInputs& in, const RunConfig& cfg, unsigned jobs);

/// Runs tasks on at most `jobs` threads; results keep task order. The first
/// exception by task index is rethrown after all workers finish.
template <typename R>
std::vector<R> run_bounded(const std::vector<std::function<R()>>& tasks, unsigned jobs) {
  std::vector<std::optional<R>> slots(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        slots[i].emplace(tasks[i]());
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::min<std::size_t>(std::max(jobs, 1u), tasks.size());
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace gramlex
