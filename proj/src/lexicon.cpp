#include "gramlex/lexicon.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gramlex/error.hpp"
#include "gramlex/text.hpp"

namespace gramlex {

TargetLemmas target_lemmas_from_treebank(const Bitext& bt, const Treebank& target_tb) {
  TargetLemmas out;
  for (const auto& p : bt.pairs) {
    const std::size_t line = std::stoul(p.pair_id);
    if (line == 0 || line > target_tb.sentences.size()) continue;
    const Sentence& s = target_tb.sentences[line - 1];
    if (s.tokens.size() != p.target.size()) continue;
    std::vector<std::string> lemmas;
    lemmas.reserve(s.tokens.size());
    for (const auto& t : s.tokens) lemmas.push_back(t.lemma.empty() ? t.form : t.lemma);
    out.emplace(p.pair_id, std::move(lemmas));
  }
  return out;
}

std::size_t TranslationSet::total() const {
  std::size_t n = 0;
  for (const auto& [k, c] : candidates) n += c;
  return n;
}

std::string l2_key(const SentencePair& pair, std::size_t j, const TargetLemmas* lemmas) {
  if (lemmas) {
    auto it = lemmas->find(pair.pair_id);
    if (it != lemmas->end() && j < it->second.size()) return it->second[j];
  }
  return pair.target[j];
}

std::vector<TranslationSet> extract_translation_sets(const Bitext& bt,
                                                     const std::vector<Alignment>& alignments,
                                                     const TargetLemmas* lemmas) {
  if (alignments.size() != bt.pairs.size()) {
    throw Error("extract_translation_sets: alignment count does not match bitext");
  }
  std::map<std::string, TranslationSet> sets;
  for (std::size_t k = 0; k < bt.pairs.size(); ++k) {
    const SentencePair& p = bt.pairs[k];
    for (const auto& [i, j] : alignments[k]) {
      if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= p.source.size() ||
          static_cast<std::size_t>(j) >= p.target.size()) {
        throw Error("alignment link out of bounds in pair " + p.pair_id);
      }
      const std::string english = text::fold_case(p.source[static_cast<std::size_t>(i)]);
      const std::string key = l2_key(p, static_cast<std::size_t>(j), lemmas);
      TranslationSet& ts = sets[english];
      ts.english_lemma = english;
      ++ts.candidates[key];
      auto& ids = ts.example_pair_ids[key];
      if (ids.empty() || ids.back() != p.pair_id) ids.push_back(p.pair_id);
      ts.surface_forms[key].insert(p.target[static_cast<std::size_t>(j)]);
    }
  }
  std::vector<TranslationSet> out;
  out.reserve(sets.size());
  for (auto& [w, ts] : sets) out.push_back(std::move(ts));
  return out;
}

std::set<std::string> default_stoplist() {
  return {"the",  "of",   "and",  "a",     "to",    "in",   "is",   "you",  "that", "it",
          "he",   "was",  "for",  "on",    "are",   "as",   "with", "his",  "they", "i",
          "at",   "be",   "this", "have",  "from",  "or",   "had",  "by",   "but",  "not",
          "what", "all",  "were", "we",    "when",  "your", "can",  "there", "an",  "which",
          "she",  "do",   "their", "if",   "will",  "her",  "my",   "so",   "been", "has"};
}

std::vector<TranslationSet> filter_divergent_pairs(const std::vector<TranslationSet>& sets,
                                                   const DivergenceFilter& filter,
                                                   const TranslationTable& table) {
  std::vector<TranslationSet> out;
  for (const auto& ts : sets) {
    if (filter.stoplist.contains(ts.english_lemma)) continue;
    TranslationSet kept;
    kept.english_lemma = ts.english_lemma;
    for (const auto& [key, count] : ts.candidates) {
      if (count < filter.min_count) continue;
      double p = 0.0;
      if (auto forms = ts.surface_forms.find(key); forms != ts.surface_forms.end()) {
        for (const auto& form : forms->second) p += table.prob(ts.english_lemma, form);
      }
      if (p < filter.min_prob) continue;
      kept.candidates.emplace(key, count);
      if (auto ids = ts.example_pair_ids.find(key); ids != ts.example_pair_ids.end()) {
        kept.example_pair_ids.emplace(key, ids->second);
      }
      if (auto forms = ts.surface_forms.find(key); forms != ts.surface_forms.end()) {
        kept.surface_forms.emplace(key, forms->second);
      }
    }
    if (kept.candidates.size() >= filter.min_candidates && !kept.candidates.empty()) {
      out.push_back(std::move(kept));
    }
  }
  return out;
}

std::vector<Instance> build_selection_instances(const TranslationSet& ts, const Bitext& bt,
                                                const std::vector<Alignment>& alignments,
                                                const TargetLemmas* lemmas,
                                                const std::set<std::string>& stoplist) {
  struct Occurrence {
    const SentencePair* pair;
    int i;
    int j;
    std::string key;
  };
  std::vector<Occurrence> occurrences;
  for (std::size_t k = 0; k < bt.pairs.size() && k < alignments.size(); ++k) {
    const SentencePair& p = bt.pairs[k];
    for (const auto& [i, j] : alignments[k]) {
      if (p.source[static_cast<std::size_t>(i)] != ts.english_lemma) continue;
      std::string key = l2_key(p, static_cast<std::size_t>(j), lemmas);
      if (!ts.candidates.contains(key)) continue;
      occurrences.push_back({&p, i, j, std::move(key)});
    }
  }

  // Bag-of-words vocabulary: the 20 most frequent content words co-occurring
  // with the English word (counted once per occurrence).
  std::map<std::string, std::size_t> cooc;
  for (const auto& occ : occurrences) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < occ.pair->source.size(); ++i) {
      const std::string& w = occ.pair->source[i];
      if (static_cast<int>(i) == occ.i || w == ts.english_lemma || stoplist.contains(w)) continue;
      if (seen.insert(w).second) ++cooc[w];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(cooc.begin(), cooc.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::set<std::string> bow;
  for (std::size_t i = 0; i < ranked.size() && i < 20; ++i) bow.insert(ranked[i].first);

  std::vector<Instance> out;
  out.reserve(occurrences.size());
  for (const auto& occ : occurrences) {
    Instance inst;
    const auto& src = occ.pair->source;
    for (int off = -2; off <= 2; ++off) {
      if (off == 0) continue;
      const int pos = occ.i + off;
      if (pos < 0 || static_cast<std::size_t>(pos) >= src.size()) continue;
      inst.features.emplace("ctx-" + std::string(off > 0 ? "+" : "") + std::to_string(off),
                            src[static_cast<std::size_t>(pos)]);
    }
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (static_cast<int>(i) != occ.i && bow.contains(src[i])) {
        inst.features.emplace("ctx-bow-" + src[i], "yes");
      }
    }
    inst.label = occ.key;
    inst.provenance = {occ.pair->pair_id, occ.i + 1, occ.j + 1};
    out.push_back(std::move(inst));
  }
  return out;
}

ExampleRef bitext_example(const SentencePair& pair, std::vector<int> target_highlight) {
  ExampleRef ex;
  ex.sent_id = pair.pair_id;
  ex.tokens = pair.target;
  std::sort(target_highlight.begin(), target_highlight.end());
  target_highlight.erase(std::unique(target_highlight.begin(), target_highlight.end()),
                         target_highlight.end());
  ex.highlight = std::move(target_highlight);
  ex.translation = text::join(pair.source, " ");
  return ex;
}

namespace {

std::vector<std::string> split_list(const std::string& field) {
  std::vector<std::string> out;
  for (const auto& item : text::split(field, ',')) {
    std::string t = text::trim(item);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

SenseLexicon SenseLexicon::parse(std::string_view tsv) {
  SenseLexicon lex;
  std::size_t line_no = 0;
  for (auto line : text::split(tsv, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line[0] == '#') continue;
    auto cols = text::split(line, '\t');
    if (cols.size() != 6) {
      throw ParseError("sense lexicon: expected 6 tab-separated columns, found " +
                           std::to_string(cols.size()),
                       line_no);
    }
    Synset s;
    s.id = text::trim(cols[0]);
    s.pos = normalize_pos(text::trim(cols[1]));
    s.lemmas = split_list(cols[2]);
    s.hypernyms = split_list(cols[3]);
    s.antonyms = split_list(cols[4]);
    s.gloss = text::trim(cols[5]);
    if (s.id.empty() || s.pos.empty()) throw ParseError("sense lexicon: empty synset id or pos", line_no);
    if (lex.synsets_.contains(s.id)) throw ParseError("sense lexicon: duplicate synset " + s.id, line_no);
    for (const auto& lemma : s.lemmas) lex.lemma_index_[{lemma, s.pos}].push_back(s.id);
    lex.synsets_.emplace(s.id, std::move(s));
  }

  for (const auto& [id, s] : lex.synsets_) {
    for (const auto* refs : {&s.hypernyms, &s.antonyms}) {
      for (const auto& r : *refs) {
        if (!lex.synsets_.contains(r)) {
          throw Error("sense lexicon: dangling synset reference " + r + " from " + id);
        }
      }
    }
  }

  // Hypernym cycle check: iterative three-colour DFS.
  std::map<std::string, int> colour;  // 0 white, 1 on stack, 2 done
  for (const auto& [start, unused] : lex.synsets_) {
    if (colour[start] != 0) continue;
    std::vector<std::pair<std::string, std::size_t>> stack{{start, 0}};
    colour[start] = 1;
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      const auto& hypers = lex.synsets_.at(id).hypernyms;
      if (next < hypers.size()) {
        const std::string h = hypers[next++];
        if (colour[h] == 1) throw Error("sense lexicon: hypernym cycle through " + h);
        if (colour[h] == 0) {
          colour[h] = 1;
          stack.emplace_back(h, 0);
        }
      } else {
        colour[id] = 2;
        stack.pop_back();
      }
    }
  }
  return lex;
}

SenseLexicon SenseLexicon::load(const std::string& path) {
  try {
    return parse(text::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

const Synset* SenseLexicon::find(std::string_view id) const {
  auto it = synsets_.find(std::string(id));
  return it == synsets_.end() ? nullptr : &it->second;
}

const std::vector<std::string>* SenseLexicon::senses(const std::string& lemma,
                                                     const std::string& pos) const {
  auto it = lemma_index_.find({lemma, normalize_pos(pos)});
  return it == lemma_index_.end() ? nullptr : &it->second;
}

bool SenseLexicon::has_pos(const std::string& lemma, const std::string& pos) const {
  return senses(lemma, pos) != nullptr;
}

std::string normalize_pos(std::string_view pos) {
  if (pos == "NOUN" || pos == "PROPN" || pos == "n") return "n";
  if (pos == "VERB" || pos == "v") return "v";
  if (pos == "ADJ" || pos == "a" || pos == "s") return "a";
  if (pos == "ADV" || pos == "r") return "r";
  return std::string(pos);
}

CategoryConfig CategoryConfig::defaults() {
  CategoryConfig c;
  c.categories = {
      {"animals", {"animal.n.01"}},
      {"body parts", {"body_part.n.01"}},
      {"clothing", {"clothing.n.01"}},
      {"colors", {"color.n.01", "chromatic_color.n.01"}},
      {"elements", {"chemical_element.n.01"}},
      {"food", {"food.n.01", "food.n.02"}},
      {"fruits", {"edible_fruit.n.01", "fruit.n.01"}},
      {"furniture", {"furniture.n.01"}},
      {"relationships", {"relative.n.01"}},
      {"time", {"time_period.n.01", "time_unit.n.01"}},
      {"vehicle", {"vehicle.n.01"}},
  };
  return c;
}

CategoryConfig CategoryConfig::parse(std::string_view text_in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(text_in)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(std::string("category config: ") + e.message(), e.line());
  }
  CategoryConfig c;
  auto add = [&c](const std::string& name, std::string value) {
    for (char& ch : value) {
      if (ch == '[' || ch == ']' || ch == '"' || ch == '\'') ch = ' ';
    }
    auto ids = split_list(value);
    c.categories[name].insert(ids.begin(), ids.end());
  };
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      add(key, node.data());
    } else {
      for (const auto& [name, leaf] : node) add(name, leaf.data());
    }
  }
  return c;
}

CategoryConfig CategoryConfig::load(const std::string& path) { return parse(text::read_file(path)); }

std::optional<std::string> assign_category(const std::string& lemma, const std::string& pos,
                                           const SenseLexicon& lex, const CategoryConfig& cats) {
  const auto* ranked = lex.senses(lemma, pos);
  if (ranked == nullptr || ranked->empty()) return std::nullopt;

  std::set<std::string> visited{ranked->front()};
  std::vector<std::string> frontier{ranked->front()};
  while (!frontier.empty()) {
    for (const auto& [name, ids] : cats.categories) {
      for (const auto& id : frontier) {
        if (ids.contains(id)) return name;
      }
    }
    std::vector<std::string> next;
    for (const auto& id : frontier) {
      for (const auto& h : lex.find(id)->hypernyms) {
        if (visited.insert(h).second) next.push_back(h);
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

EnglishAnalyses english_analyses(const Treebank& tb_english) {
  std::map<std::string, std::map<std::pair<std::string, std::string>, std::size_t>> counts;
  for (const auto& s : tb_english.sentences) {
    for (const auto& t : s.tokens) {
      if (t.form.empty()) continue;
      const std::string lemma = t.lemma.empty() ? t.form : t.lemma;
      ++counts[text::fold_case(t.form)][{text::fold_case(lemma), t.upos}];
    }
  }
  EnglishAnalyses out;
  for (const auto& [form, analyses] : counts) {
    const std::pair<std::string, std::string>* best = nullptr;
    std::size_t best_n = 0;
    for (const auto& [a, n] : analyses) {
      if (n > best_n) {
        best = &a;
        best_n = n;
      }
    }
    out.emplace(form, *best);
  }
  return out;
}

namespace {

std::map<std::string, std::size_t> source_frequencies(const Bitext& bt) {
  std::map<std::string, std::size_t> freq;
  for (const auto& p : bt.pairs) {
    for (const auto& w : p.source) ++freq[w];
  }
  return freq;
}

std::vector<std::pair<std::string, std::size_t>> ranked_translations(
    const std::vector<TranslationSet>& sets, const std::string& english) {
  std::vector<std::pair<std::string, std::size_t>> out;
  auto it = std::lower_bound(sets.begin(), sets.end(), english,
                             [](const TranslationSet& ts, const std::string& w) {
                               return ts.english_lemma < w;
                             });
  if (it == sets.end() || it->english_lemma != english) return out;
  out.assign(it->candidates.begin(), it->candidates.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

// Up to k pairs containing `word` on the source side, shortest target first;
// target tokens linked to the word are highlighted.
std::vector<ExampleRef> word_examples(const Bitext& bt, const std::vector<Alignment>& alignments,
                                      const std::string& word, std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> hits;  // (target length, pair index)
  for (std::size_t p = 0; p < bt.pairs.size(); ++p) {
    const auto& src = bt.pairs[p].source;
    if (std::find(src.begin(), src.end(), word) != src.end()) {
      hits.emplace_back(bt.pairs[p].target.size(), p);
    }
  }
  std::stable_sort(hits.begin(), hits.end());
  std::vector<ExampleRef> out;
  for (std::size_t h = 0; h < hits.size() && out.size() < k; ++h) {
    const auto& pair = bt.pairs[hits[h].second];
    std::vector<int> hl;
    if (hits[h].second < alignments.size()) {
      for (const auto& [i, j] : alignments[hits[h].second]) {
        if (pair.source[static_cast<std::size_t>(i)] == word) hl.push_back(j + 1);
      }
    }
    out.push_back(bitext_example(pair, std::move(hl)));
  }
  return out;
}

std::pair<std::string, std::string> analyse(const EnglishAnalyses* english, const std::string& w) {
  if (english) {
    if (auto it = english->find(w); it != english->end()) return it->second;
  }
  return {w, ""};
}

}  // namespace

std::vector<AdjectiveEntry> adjective_sets(const EnglishAnalyses* english, const Bitext& bt,
                                           const std::vector<Alignment>& alignments,
                                           const SenseLexicon& lex,
                                           const std::vector<TranslationSet>& sets,
                                           std::size_t min_freq, std::size_t k) {
  std::vector<AdjectiveEntry> out;
  for (const auto& [word, freq] : source_frequencies(bt)) {
    if (freq < min_freq) continue;
    const auto [lemma, upos] = analyse(english, word);
    if (english && !upos.empty() && upos != "ADJ") continue;
    const auto* ranked = lex.senses(lemma, "a");
    if (ranked == nullptr || ranked->empty()) continue;
    const Synset* first = lex.find(ranked->front());

    AdjectiveEntry e;
    e.adjective = word;
    e.frequency = freq;
    e.gloss = first->gloss;
    for (const auto& l : first->lemmas) {
      if (l != lemma && l != word) e.synonyms.push_back(l);
    }
    for (const auto& a : first->antonyms) {
      for (const auto& l : lex.find(a)->lemmas) e.antonyms.push_back(l);
    }
    e.translations = ranked_translations(sets, word);
    e.examples = word_examples(bt, alignments, word, k);
    out.push_back(std::move(e));
  }
  std::stable_sort(out.begin(), out.end(), [](const AdjectiveEntry& a, const AdjectiveEntry& b) {
    return a.frequency > b.frequency;
  });
  return out;
}

std::map<std::string, std::vector<CategoryWord>> categorize_vocabulary(
    const EnglishAnalyses* english, const Bitext& bt, const std::vector<Alignment>& alignments,
    const SenseLexicon& lex, const CategoryConfig& cats, const std::vector<TranslationSet>& sets,
    const std::set<std::string>& stoplist, std::size_t min_freq, std::size_t k) {
  std::map<std::string, std::vector<CategoryWord>> out;
  for (const auto& [word, freq] : source_frequencies(bt)) {
    if (freq < min_freq || stoplist.contains(word)) continue;
    const auto [lemma, upos] = analyse(english, word);
    std::optional<std::string> group;
    if (upos.empty() || upos == "NOUN" || upos == "PROPN") {
      group = assign_category(lemma, "n", lex, cats);
    }
    if (!group) {
      const bool verb = upos.empty() ? (lex.has_pos(lemma, "v") && !lex.has_pos(lemma, "n"))
                                     : upos == "VERB";
      if (verb && lex.has_pos(lemma, "v")) group = "verbs";
    }
    if (!group) continue;
    CategoryWord cw;
    cw.english = word;
    cw.frequency = freq;
    cw.translations = ranked_translations(sets, word);
    cw.examples = word_examples(bt, alignments, word, k);
    out[*group].push_back(std::move(cw));
  }
  for (auto& [name, words] : out) {
    std::stable_sort(words.begin(), words.end(), [](const CategoryWord& a, const CategoryWord& b) {
      return a.frequency > b.frequency;
    });
  }
  return out;
}

std::string translation_sets_tsv(const std::vector<TranslationSet>& sets) {
  std::string out;
  for (const auto& ts : sets) {
    for (const auto& [key, count] : ts.candidates) {
      out += ts.english_lemma + "\t" + key + "\t" + std::to_string(count) + "\t";
      if (auto ids = ts.example_pair_ids.find(key); ids != ts.example_pair_ids.end()) {
        out += text::join(ids->second, ",");
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace gramlex
