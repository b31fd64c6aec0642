#include "gramlex/pipeline.hpp"

#include "gramlex/error.hpp"
#include "gramlex/morphsum.hpp"
#include "gramlex/text.hpp"

namespace gramlex {

using nlohmann::json;

std::size_t PipelineResult::rule_count() const {
  std::size_t n = 0;
  for (const auto& p : points) n += p.rules.size();
  return n;
}

std::string with_language(const std::string& question, const std::string& language) {
  if (language.empty() || question.empty() || question.back() != '?') return question;
  return question.substr(0, question.size() - 1) + " in " + language + "?";
}

std::optional<std::pair<GrammarPoint, LearnedQuestion>> learn_point(
    const std::string& language, Aspect aspect, const std::string& type,
    const std::string& question, const std::vector<Instance>& instances, json payload,
    const RunConfig& cfg, const ExampleResolver& resolve, std::string& warning) {
  if (instances.empty()) {
    warning = type + ": no instances";
    return std::nullopt;
  }
  DatasetSplit split = split_dataset(instances, cfg.split, cfg.seed);
  if (split.train.empty() || split.test.empty()) {
    warning = type + ": too few sentences for a held-out evaluation (" +
              std::to_string(instances.size()) + " instances)";
    return std::nullopt;
  }
  LearnerConfig learner = cfg.learner;
  learner.seed = cfg.seed;
  DecisionTree tree = train_tree(split.train, learner);
  std::vector<Rule> rules = extract_rules(tree);
  for (auto& r : rules) r = attach_examples(std::move(r), split.train, resolve, cfg.thresholds.examples_per_rule);
  Metrics m = evaluate(tree, split.train, split.test);

  const std::string q = with_language(question, language);
  const std::string id = grammar_point_id(language, aspect, q);
  payload["split"] = {{"train", split.train.size()}, {"dev", split.dev.size()}, {"test", split.test.size()}};
  payload["tree_file"] = "trees/" + id + ".json";
  GrammarPoint p = build_grammar_point(language, aspect, type, q, &tree, std::move(rules), m,
                                       std::move(payload));
  LearnedQuestion lq{p.id, std::move(tree), std::move(split.train), std::move(split.test)};
  return std::make_pair(std::move(p), std::move(lq));
}

namespace {

struct TaskResult {
  std::optional<GrammarPoint> point;
  std::optional<LearnedQuestion> learned;
  std::vector<GrammarPoint> extra_points;
  std::size_t instances = 0;
  std::string warning;
};

ExampleResolver treebank_resolver(const Treebank& tb) {
  return [&tb](const Instance& inst) -> std::optional<ExampleRef> {
    const Sentence* s = tb.find(inst.provenance.sent_id);
    if (s == nullptr) return std::nullopt;
    std::vector<int> hl;
    if (inst.provenance.head_id > 0) hl.push_back(inst.provenance.head_id);
    if (inst.provenance.dep_id > 0) hl.push_back(inst.provenance.dep_id);
    return make_example(*s, std::move(hl));
  };
}

json stats_json(const ExtractionStats& s) {
  return {{"candidate_edges", s.candidate_edges},
          {"matched", s.matched},
          {"skipped", s.skipped},
          {"excluded_sentences", s.excluded_sentences}};
}

TaskResult finish(std::optional<std::pair<GrammarPoint, LearnedQuestion>> learned,
                  std::size_t instances, std::string warning) {
  TaskResult r;
  r.instances = instances;
  r.warning = std::move(warning);
  if (learned) {
    r.point = std::move(learned->first);
    r.learned = std::move(learned->second);
  }
  return r;
}

std::string plural_word_class(const std::string& upos) {
  static const std::map<std::string, std::string> names{
      {"NOUN", "nouns"},      {"VERB", "verbs"},         {"ADJ", "adjectives"},
      {"ADV", "adverbs"},     {"PRON", "pronouns"},      {"PROPN", "proper nouns"},
      {"NUM", "numerals"},    {"AUX", "auxiliaries"},    {"ADP", "adpositions"},
      {"DET", "determiners"}, {"PART", "particles"},     {"SCONJ", "subordinating conjunctions"},
      {"CCONJ", "conjunctions"}};
  const auto it = names.find(upos);
  return it == names.end() ? upos + " words" : it->second;
}

PipelineResult collect(std::vector<TaskResult> results, std::size_t sentences) {
  PipelineResult out;
  out.sentences = sentences;
  for (auto& r : results) {
    out.instances += r.instances;
    if (!r.warning.empty()) out.warnings.push_back(std::move(r.warning));
    if (r.point) out.points.push_back(std::move(*r.point));
    if (r.learned) out.learned.push_back(std::move(*r.learned));
    for (auto& p : r.extra_points) out.points.push_back(std::move(p));
  }
  return out;
}

}  // namespace

std::vector<GrammarPoint> summarize_points(const Treebank& tb, const std::string& language,
                                           std::size_t top_n) {
  std::vector<GrammarPoint> points;
  for (const auto& fs : summarize_features(tb, top_n)) {
    json values = json::array();
    std::size_t total = 0;
    for (const auto& v : fs.values) {
      json by_upos = json::array();
      for (const auto& [upos, n] : v.by_upos) by_upos.push_back({{"upos", upos}, {"count", n}});
      json forms = json::array();
      for (const auto& f : v.example_forms) {
        forms.push_back({{"form", f.form}, {"lemma", f.lemma}, {"count", f.count}, {"example", to_json(f.example)}});
      }
      values.push_back({{"value", v.value}, {"total_count", v.total_count}, {"by_upos", by_upos},
                        {"example_forms", forms}});
      total += v.total_count;
    }
    json payload = {{"kind", "features"}, {"attribute", fs.attribute}, {"values", values}};
    const std::string q = with_language("Which " + fs.attribute + " values are marked, and on which words?", language);
    GrammarPoint p = build_grammar_point(language, Aspect::General, fs.attribute, q, nullptr, {},
                                         std::nullopt, std::move(payload));
    if (!fs.values.empty() && total > 0) {
      p.dominant_label = fs.values.front().value;
      p.dominant_fraction = static_cast<double>(fs.values.front().total_count) / static_cast<double>(total);
    }
    points.push_back(std::move(p));
  }
  return points;
}

PipelineResult run_extract(const Treebank& tb, const RunConfig& cfg,
                           const std::set<std::string>& questions, unsigned jobs) {
  for (const auto& q : questions) {
    if (!known_questions().contains(q)) throw Error("unknown question '" + q + "'");
  }
  const std::string& lang = cfg.language.empty() ? tb.language : cfg.language;
  const ExampleResolver resolve = treebank_resolver(tb);
  std::vector<std::function<TaskResult()>> tasks;

  if (questions.contains("word_order")) {
    for (const auto& spec : cfg.relations) {
      tasks.emplace_back([&tb, &cfg, &lang, &resolve, spec] {
        Dataset ds = extract_order_instances(tb, spec, cfg.features);
        json payload = {{"relation", spec.name},
                        {"deprels", spec.dependent_deprels},
                        {"stats", stats_json(ds.stats)}};
        const std::string q = spec.question.empty()
                                  ? "Where does the " + spec.name + " dependent go relative to its head?"
                                  : spec.question;
        std::string warning;
        auto learned = learn_point(lang, Aspect::WordOrder, spec.name, q, ds.instances,
                                   std::move(payload), cfg, resolve, warning);
        return finish(std::move(learned), ds.instances.size(), std::move(warning));
      });
    }
  }
  if (questions.contains("agreement")) {
    for (const auto& attr : cfg.agreement_attributes) {
      tasks.emplace_back([&tb, &cfg, &lang, &resolve, attr] {
        Dataset ds = extract_agreement_instances(tb, attr, cfg.features);
        json payload = {{"attribute", attr}, {"stats", stats_json(ds.stats)}};
        const std::string q = "Do some words need to agree on " + text::fold_case(attr) + "?";
        std::string warning;
        auto learned = learn_point(lang, Aspect::Agreement, attr, q, ds.instances,
                                   std::move(payload), cfg, resolve, warning);
        return finish(std::move(learned), ds.instances.size(), std::move(warning));
      });
    }
  }
  if (questions.contains("suffix")) {
    for (const auto& upos : cfg.suffix_upos) {
      tasks.emplace_back([&tb, &cfg, &lang, &resolve, upos] {
        SuffixDataset ds = extract_suffix_instances(tb, upos, cfg.features, cfg.thresholds.min_suffix_count);
        std::vector<std::pair<std::string, std::size_t>> inv(ds.inventory.begin(), ds.inventory.end());
        std::stable_sort(inv.begin(), inv.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        json inventory = json::array();
        for (const auto& [suffix, n] : inv) inventory.push_back({{"suffix", suffix}, {"count", n}});
        json sandhi = json::array();
        for (const auto& [a, b] : ds.sandhi_candidates) sandhi.push_back({a, b});
        json payload = {{"upos", upos},
                        {"inventory", inventory},
                        {"sandhi_candidates", sandhi},
                        {"unsegmented", ds.unsegmented},
                        {"rare_relabelled", ds.rare_relabelled}};
        const std::string q = "Which suffixes do " + plural_word_class(upos) + " take, and when?";
        std::string warning;
        auto learned = learn_point(lang, Aspect::Suffix, upos, q, ds.instances, std::move(payload),
                                   cfg, resolve, warning);
        return finish(std::move(learned), ds.instances.size(), std::move(warning));
      });
    }
  }
  if (questions.contains("general")) {
    tasks.emplace_back([&tb, &cfg, &lang] {
      TaskResult r;
      r.extra_points = summarize_points(tb, lang, cfg.thresholds.summary_examples);
      return r;
    });
  }
  return collect(run_bounded(tasks, jobs), tb.sentences.size());
}

namespace {

json translations_json(const std::vector<std::pair<std::string, std::size_t>>& t) {
  json a = json::array();
  for (const auto& [l2, n] : t) a.push_back({{"l2", l2}, {"count", n}});
  return a;
}

json examples_json(const std::vector<ExampleRef>& v) {
  json a = json::array();
  for (const auto& e : v) a.push_back(to_json(e));
  return a;
}

constexpr std::size_t kMaxPairIds = 20;

}  // namespace

VocabResult run_vocab(const VocabInputs& in, const RunConfig& cfg, unsigned jobs) {
  if (in.bitext == nullptr || in.alignments == nullptr || in.table == nullptr) {
    throw Error("vocabulary: bitext, alignments and translation table are required");
  }
  const Bitext& bt = *in.bitext;
  const std::string lang = cfg.language.empty() ? "L2" : cfg.language;
  const auto& filter = cfg.thresholds.divergence;

  VocabResult out;
  out.all_sets = extract_translation_sets(bt, *in.alignments, in.lemmas);
  out.divergent = filter_divergent_pairs(out.all_sets, filter, *in.table);

  const ExampleResolver resolve = [&bt](const Instance& inst) -> std::optional<ExampleRef> {
    const SentencePair* pair = bt.find(inst.provenance.sent_id);
    if (pair == nullptr) return std::nullopt;
    return bitext_example(*pair, {inst.provenance.dep_id});
  };

  std::vector<std::function<TaskResult()>> tasks;
  for (const auto& ts : out.divergent) {
    tasks.emplace_back([&, ts] {
      auto instances = build_selection_instances(ts, bt, *in.alignments, in.lemmas, filter.stoplist);
      json candidates = json::array();
      for (const auto& [l2, n] : ts.candidates) {
        const auto& ids = ts.example_pair_ids.at(l2);
        std::vector<std::string> shown(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(std::min(ids.size(), kMaxPairIds)));
        candidates.push_back({{"l2", l2}, {"count", n}, {"pair_ids", shown}});
      }
      json payload = {{"kind", "selection"}, {"english", ts.english_lemma}, {"candidates", candidates}};
      const std::string q = "How do you say \"" + ts.english_lemma + "\"?";
      std::string warning;
      auto learned = learn_point(lang, Aspect::Vocabulary, ts.english_lemma, q, instances,
                                 std::move(payload), cfg, resolve, warning);
      return finish(std::move(learned), instances.size(), std::move(warning));
    });
  }

  if (in.lexicon != nullptr) {
    const CategoryConfig cats = in.categories ? *in.categories : CategoryConfig::defaults();
    tasks.emplace_back([&, cats] {
      auto grouped = categorize_vocabulary(in.english, bt, *in.alignments, *in.lexicon, cats,
                                           out.all_sets, filter.stoplist, cfg.thresholds.vocab_min_freq,
                                           cfg.thresholds.vocab_examples);
      json by_cat = json::object();
      for (const auto& [name, words] : grouped) {
        json list = json::array();
        for (const auto& w : words) {
          list.push_back({{"english", w.english},
                          {"frequency", w.frequency},
                          {"translations", translations_json(w.translations)},
                          {"examples", examples_json(w.examples)}});
        }
        by_cat[name] = list;
      }
      TaskResult r;
      json payload = {{"kind", "categories"}, {"categories", by_cat}};
      r.point = build_grammar_point(lang, Aspect::Vocabulary, "categories",
                                    with_language("Which everyday words belong to each category?", lang),
                                    nullptr, {}, std::nullopt, std::move(payload));
      return r;
    });
    tasks.emplace_back([&] {
      auto adjs = adjective_sets(in.english, bt, *in.alignments, *in.lexicon, out.all_sets,
                                 cfg.thresholds.vocab_min_freq, cfg.thresholds.vocab_examples);
      json list = json::array();
      for (const auto& a : adjs) {
        list.push_back({{"adjective", a.adjective},
                        {"frequency", a.frequency},
                        {"gloss", a.gloss},
                        {"synonyms", a.synonyms},
                        {"antonyms", a.antonyms},
                        {"translations", translations_json(a.translations)},
                        {"examples", examples_json(a.examples)}});
      }
      TaskResult r;
      json payload = {{"kind", "adjectives"}, {"adjectives", list}};
      r.point = build_grammar_point(lang, Aspect::Vocabulary, "adjectives",
                                    with_language("Which adjectives are common, and what are their opposites?", lang),
                                    nullptr, {}, std::nullopt, std::move(payload));
      return r;
    });
  }
  out.pipeline = collect(run_bounded(tasks, jobs), bt.pairs.size());
  return out;
}

}  // namespace gramlex
