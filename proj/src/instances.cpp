#include "gramlex/instances.hpp"

#include <algorithm>
#include <unordered_map>

#include "gramlex/text.hpp"

namespace gramlex {

namespace {

std::string_view universal_part(std::string_view deprel) {
  const auto colon = deprel.find(':');
  return colon == std::string_view::npos ? deprel : deprel.substr(0, colon);
}

std::string offset_label(int offset) {
  return (offset > 0 ? "+" : "") + std::to_string(offset);
}

void put(FeatureMap& f, std::string key, const std::string& value) {
  if (!value.empty() && value != kMissing) f.emplace(std::move(key), value);
}

std::string bucket(const std::string& lemma, const std::set<std::string>& vocab) {
  if (lemma.empty()) return {};
  return vocab.contains(lemma) ? lemma : std::string(kOtherBucket);
}

}  // namespace

bool RelationSpec::matches(const Token& head, const Token& dep) const {
  const bool rel = dependent_deprels.contains(dep.deprel) ||
                   dependent_deprels.contains(std::string(universal_part(dep.deprel)));
  if (!rel) return false;
  if (!head_upos.empty() && !head_upos.contains(head.upos)) return false;
  if (!dependent_upos.empty() && !dependent_upos.contains(dep.upos)) return false;
  return true;
}

std::vector<RelationSpec> default_relation_specs() {
  return {
      {"subject-verb", {"nsubj"}, {"VERB"}, {"NOUN", "PROPN", "PRON"},
       "Are subjects before or after verbs?"},
      {"object-verb", {"obj"}, {"VERB"}, {"NOUN", "PROPN", "PRON"},
       "Are objects before or after verbs?"},
      {"adjective-noun", {"amod"}, {"NOUN", "PROPN"}, {"ADJ"},
       "Are adjectives before or after nouns?"},
      {"numeral-noun", {"nummod"}, {"NOUN", "PROPN"}, {"NUM"},
       "Are numerals before or after nouns?"},
      {"noun-adposition", {"case"}, {"NOUN", "PROPN", "PRON"}, {"ADP"},
       "Are adpositions before or after nouns?"},
  };
}

std::set<std::string> build_lemma_vocab(const Treebank& tb, std::size_t k) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& s : tb.sentences) {
    for (const auto& t : s.tokens) {
      if (!t.lemma.empty()) ++counts[t.lemma];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::set<std::string> vocab;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) vocab.insert(ranked[i].first);
  return vocab;
}

FeatureMap featurize(const Sentence& sentence, int head_id, int dep_id, const FeatureConfig& cfg,
                     const std::set<std::string>& lemma_vocab) {
  FeatureMap f;
  const Token* head = sentence.token(head_id);
  const Token* dep = sentence.token(dep_id);
  if (dep == nullptr) return f;

  if (head != nullptr) {
    put(f, "head-lemma", bucket(head->lemma, lemma_vocab));
    put(f, "head-upos", head->upos);
  }
  put(f, "dep-lemma", bucket(dep->lemma, lemma_vocab));
  put(f, "dep-upos", dep->upos);
  put(f, "deprel", dep->deprel);

  if (cfg.include_morph_feats) {
    if (head != nullptr) {
      for (const auto& [k, v] : head->feats) put(f, "head-" + k, v);
    }
    for (const auto& [k, v] : dep->feats) put(f, "dep-" + k, v);
  }

  if (cfg.include_neighbor_pos) {
    for (int off = -cfg.neighbor_window; off <= cfg.neighbor_window; ++off) {
      if (off == 0) continue;
      if (const Token* n = sentence.token(dep_id + off)) {
        put(f, "nbr-" + offset_label(off) + "-upos", n->upos);
      }
    }
  }

  if (cfg.include_sibling_deprels && head != nullptr) {
    for (const auto& t : sentence.tokens) {
      if (t.head == head_id && t.id != dep_id && !t.deprel.empty()) {
        f.emplace("sib-" + t.deprel, "yes");
      }
    }
  }
  return f;
}

Dataset extract_order_instances(const Treebank& tb, const RelationSpec& spec,
                                const FeatureConfig& cfg) {
  Dataset out;
  const auto vocab = build_lemma_vocab(tb, cfg.lemma_vocab_size);
  for (const auto& s : tb.sentences) {
    if (!is_well_formed(s)) {
      ++out.stats.excluded_sentences;
      continue;
    }
    for (const auto& dep : s.tokens) {
      if (dep.head == 0) continue;
      ++out.stats.candidate_edges;
      const Token* head = s.token(dep.head);
      if (head == nullptr || !spec.matches(*head, dep)) {
        ++out.stats.skipped;
        continue;
      }
      ++out.stats.matched;
      Instance inst;
      inst.features = featurize(s, head->id, dep.id, cfg, vocab);
      inst.label = std::string(dep.id < head->id ? kBefore : kAfter);
      inst.provenance = {s.sent_id, head->id, dep.id};
      out.instances.push_back(std::move(inst));
    }
  }
  return out;
}

Dataset extract_agreement_instances(const Treebank& tb, const std::string& attribute,
                                    const FeatureConfig& cfg) {
  Dataset out;
  const auto vocab = build_lemma_vocab(tb, cfg.lemma_vocab_size);
  const std::string head_key = "head-" + attribute;
  const std::string dep_key = "dep-" + attribute;
  for (const auto& s : tb.sentences) {
    if (!is_well_formed(s)) {
      ++out.stats.excluded_sentences;
      continue;
    }
    for (const auto& dep : s.tokens) {
      if (dep.head == 0) continue;
      ++out.stats.candidate_edges;
      const Token* head = s.token(dep.head);
      const std::string* hv = head ? head->feat(attribute) : nullptr;
      const std::string* dv = dep.feat(attribute);
      if (hv == nullptr || dv == nullptr) {
        ++out.stats.skipped;
        continue;
      }
      ++out.stats.matched;
      Instance inst;
      inst.features = featurize(s, head->id, dep.id, cfg, vocab);
      inst.features.erase(head_key);
      inst.features.erase(dep_key);
      inst.label = std::string(*hv == *dv ? kAgree : kDisagree);
      inst.provenance = {s.sent_id, head->id, dep.id};
      out.instances.push_back(std::move(inst));
    }
  }
  return out;
}

Segmentation segment_suffix(std::string_view form, std::string_view lemma) {
  const std::u32string f = text::decode_utf8(text::fold_case(form));
  const std::u32string l = text::decode_utf8(text::fold_case(lemma));
  std::size_t n = 0;
  while (n < f.size() && n < l.size() && f[n] == l[n]) ++n;
  Segmentation seg;
  if (n < 2 || 2 * n < l.size()) return seg;
  seg.stem = text::encode_utf8(f.substr(0, n));
  seg.suffix = text::encode_utf8(f.substr(n));
  seg.confident = true;
  return seg;
}

SuffixDataset extract_suffix_instances(const Treebank& tb, const std::string& upos,
                                       const FeatureConfig& cfg, std::size_t min_suffix_count) {
  SuffixDataset out;
  const auto vocab = build_lemma_vocab(tb, cfg.lemma_vocab_size);

  struct Pending {
    const Sentence* sentence;
    const Token* token;
    std::string suffix;
  };
  std::vector<Pending> pending;
  std::map<std::string, std::size_t> counts;
  for (const auto& s : tb.sentences) {
    if (!is_well_formed(s)) continue;
    for (const auto& t : s.tokens) {
      if (t.upos != upos || t.form.empty() || t.lemma.empty()) continue;
      auto seg = segment_suffix(t.form, t.lemma);
      if (!seg.confident) {
        ++out.unsegmented;
        continue;
      }
      if (!seg.suffix.empty()) ++counts[seg.suffix];
      pending.push_back({&s, &t, std::move(seg.suffix)});
    }
  }
  for (const auto& [suffix, n] : counts) {
    if (n >= min_suffix_count) out.inventory.emplace(suffix, n);
  }

  for (const auto& p : pending) {
    const Token& t = *p.token;
    Instance inst;
    if (p.suffix.empty()) {
      inst.label = std::string(kNoSuffix);
    } else if (out.inventory.contains(p.suffix)) {
      inst.label = p.suffix;
    } else {
      inst.label = std::string(kOtherBucket);
      ++out.rare_relabelled;
    }
    if (cfg.include_morph_feats) {
      for (const auto& [k, v] : t.feats) put(inst.features, "dep-" + k, v);
    }
    put(inst.features, "deprel", t.deprel);
    if (const Token* head = p.sentence->token(t.head)) {
      put(inst.features, "head-upos", head->upos);
      put(inst.features, "head-lemma", bucket(head->lemma, vocab));
    }
    inst.provenance = {p.sentence->sent_id, t.head, t.id};
    out.instances.push_back(std::move(inst));
  }

  for (const auto& [shorter, n1] : out.inventory) {
    for (const auto& [longer, n2] : out.inventory) {
      const std::u32string a = text::decode_utf8(shorter);
      const std::u32string b = text::decode_utf8(longer);
      if (b.size() == a.size() + 1 && b.substr(1) == a) out.sandhi_candidates.emplace_back(shorter, longer);
    }
  }
  return out;
}

std::string dump_tsv(const std::vector<Instance>& instances) {
  std::string out;
  for (const auto& inst : instances) {
    bool first = true;
    for (const auto& [k, v] : inst.features) {
      if (!first) out += ' ';
      out += k + "=" + v;
      first = false;
    }
    out += '\t';
    out += inst.label;
    out += '\n';
  }
  return out;
}

}  // namespace gramlex
