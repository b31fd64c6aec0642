#include <map>
#include <set>
#include <string>

#include "doctest.h"

#include "gramlex/instances.hpp"
#include "gramlex/text.hpp"
#include "gramlex/treebank.hpp"
#include "synth.hpp"

using namespace gramlex;

namespace {

RelationSpec subject_verb() { return default_relation_specs().at(0); }

RelationSpec object_verb() { return default_relation_specs().at(1); }

Treebank one(const std::string& rows) { return parse_conllu(rows + "\n", "xx"); }

}  // namespace

TEST_CASE("default relation specs") {
  const auto specs = default_relation_specs();
  REQUIRE(specs.size() == 5);
  std::set<std::string> names;
  for (const auto& s : specs) {
    names.insert(s.name);
    CHECK_FALSE(s.dependent_deprels.empty());
  }
  CHECK(names == std::set<std::string>{"subject-verb", "object-verb", "adjective-noun",
                                       "numeral-noun", "noun-adposition"});
}

TEST_CASE("subject before verb") {
  const Treebank tb = one(
      "1\tdog\tdog\tNOUN\t_\t_\t2\tnsubj\t_\t_\n"
      "2\tbarks\tbark\tVERB\t_\t_\t0\troot\t_\t_\n");
  const Dataset d = extract_order_instances(tb, subject_verb(), {});
  REQUIRE(d.instances.size() == 1);
  CHECK(d.instances[0].label == "before");
  CHECK(d.instances[0].provenance == Provenance{"s1", 2, 1});
}

TEST_CASE("object after verb") {
  const Treebank tb = one(
      "1\tI\tI\tPRON\t_\t_\t2\tnsubj\t_\t_\n"
      "2\tsee\tsee\tVERB\t_\t_\t0\troot\t_\t_\n"
      "3\tdogs\tdog\tNOUN\t_\t_\t2\tobj\t_\t_\n");
  const Dataset d = extract_order_instances(tb, object_verb(), {});
  REQUIRE(d.instances.size() == 1);
  CHECK(d.instances[0].label == "after");
}

TEST_CASE("deprel subtypes match by universal part") {
  const Treebank tb = one(
      "1\tit\tit\tPRON\t_\t_\t2\tnsubj:pass\t_\t_\n"
      "2\twas\tbe\tVERB\t_\t_\t0\troot\t_\t_\n");
  CHECK(extract_order_instances(tb, subject_verb(), {}).instances.size() == 1);
}

TEST_CASE("order counts are conserved") {
  const Treebank tb = parse_conllu(synth::ud_style_treebank(60, 9), "xx");
  std::size_t edges = 0;
  for (const auto& s : tb.sentences) {
    for (const auto& t : s.tokens) edges += t.head != 0;
  }
  for (const auto& spec : default_relation_specs()) {
    const Dataset d = extract_order_instances(tb, spec, {});
    CHECK(d.stats.matched == d.instances.size());
    CHECK(d.stats.matched + d.stats.skipped == d.stats.candidate_edges);
    CHECK(d.stats.candidate_edges == edges);
    // Independent count of matching edges.
    std::size_t expected = 0;
    for (const auto& s : tb.sentences) {
      for (const auto& t : s.tokens) {
        if (t.head != 0 && spec.matches(*s.token(t.head), t)) ++expected;
      }
    }
    CHECK(d.instances.size() == expected);
  }
}

TEST_CASE("malformed sentences are excluded from extraction") {
  const Treebank tb = one(
      "1\tdog\tdog\tNOUN\t_\t_\t0\tnsubj\t_\t_\n"
      "2\tbarks\tbark\tVERB\t_\t_\t0\troot\t_\t_\n");
  const Dataset d = extract_order_instances(tb, subject_verb(), {});
  CHECK(d.instances.empty());
  CHECK(d.stats.excluded_sentences == 1);
}

TEST_CASE("agreement labels and skips") {
  const Treebank tb = one(
      "1\tmotha\tmotha\tADJ\t_\tGender=Fem\t2\tamod\t_\t_\n"
      "2\tghar\tghar\tNOUN\t_\tGender=Fem\t4\tnsubj\t_\t_\n"
      "3\tlahan\tlahan\tADJ\t_\t_\t2\tamod\t_\t_\n"
      "4\tpadla\tpad\tVERB\t_\tGender=Masc|Tense=Past\t0\troot\t_\t_\n");
  const Dataset d = extract_agreement_instances(tb, "Gender", {});
  REQUIRE(d.instances.size() == 2);
  CHECK(d.instances[0].label == "agree");
  CHECK(d.instances[1].label == "disagree");
  CHECK(d.stats.skipped == 1);
  for (const auto& inst : d.instances) {
    CHECK_FALSE(inst.features.contains("head-Gender"));
    CHECK_FALSE(inst.features.contains("dep-Gender"));
  }
  CHECK(d.instances[1].features.at("head-Tense") == "Past");
}

TEST_CASE("agreement features never leak the label") {
  const Treebank tb = parse_conllu(synth::ud_style_treebank(80, 4), "xx");
  for (const std::string attr : {"Gender", "Number", "Case", "Person"}) {
    const Dataset d = extract_agreement_instances(tb, attr, {});
    for (const auto& inst : d.instances) {
      CHECK_FALSE(inst.features.contains("head-" + attr));
      CHECK_FALSE(inst.features.contains("dep-" + attr));
    }
    CHECK(d.stats.matched + d.stats.skipped == d.stats.candidate_edges);
  }
}

TEST_CASE("segment_suffix") {
  Segmentation s = segment_suffix("deshaala", "desh");
  CHECK(s.confident);
  CHECK(s.stem == "desh");
  CHECK(s.suffix == "aala");
  s = segment_suffix("dog", "dog");
  CHECK(s.stem == "dog");
  CHECK(s.suffix.empty());
  s = segment_suffix("ran", "run");
  CHECK_FALSE(s.confident);
  CHECK(s.suffix.empty());
  s = segment_suffix("Deshaat", "desh");
  CHECK(s.suffix == "aat");
  s = segment_suffix("abcx", "abcdefgh");  // 3 < half of 8
  CHECK_FALSE(s.confident);
  s = segment_suffix("घराला", "घर");
  CHECK(s.stem == "घर");
  CHECK(s.suffix == "ाला");
}

TEST_CASE("segmentation reconstructs the folded form") {
  synth::Rng rng(21);
  const std::vector<std::string> letters{"a", "b", "c", "\xC3\xA9", "\xC3\x89", "\xE0\xA4\x98"};
  for (int round = 0; round < 500; ++round) {
    std::string lemma, form;
    const std::size_t nl = 1 + rng.below(6);
    for (std::size_t i = 0; i < nl; ++i) lemma += rng.pick(letters);
    const std::size_t keep = rng.below(nl + 1);
    const auto cps = text::decode_utf8(lemma);
    form = text::encode_utf8(cps.substr(0, keep));
    const std::size_t tail = rng.below(4);
    for (std::size_t i = 0; i < tail; ++i) form += rng.pick(letters);
    const Segmentation s = segment_suffix(form, lemma);
    if (s.confident) {
      CHECK(s.stem + s.suffix == text::fold_case(form));
      CHECK(text::decode_utf8(s.stem).size() >= 2);
    } else {
      CHECK(s.stem.empty());
      CHECK(s.suffix.empty());
    }
  }
}

TEST_CASE("suffix inventory and rare relabelling") {
  std::string rows;
  int sid = 0;
  auto add = [&](const std::string& form, const std::string& lemma, const std::string& feats) {
    rows += "# sent_id = t" + std::to_string(++sid) + "\n";
    rows += "1\t" + form + "\t" + lemma + "\tNOUN\t_\t" + feats + "\t2\tobj\t_\t_\n";
    rows += "2\tpahila\tpah\tVERB\t_\t_\t0\troot\t_\t_\n\n";
  };
  for (int i = 0; i < 6; ++i) add("deshlaa", "desh", "Case=Acc");
  for (int i = 0; i < 3; ++i) add("deshmadhe", "desh", "Case=Loc");
  for (int i = 0; i < 4; ++i) add("desh", "desh", "Case=Nom");
  const Treebank tb = parse_conllu(rows, "mr");
  const SuffixDataset d = extract_suffix_instances(tb, "NOUN", {}, 5);
  CHECK(d.inventory == std::map<std::string, std::size_t>{{"laa", 6}});
  CHECK(d.rare_relabelled == 3);
  std::map<std::string, std::size_t> labels;
  for (const auto& inst : d.instances) ++labels[inst.label];
  CHECK(labels == std::map<std::string, std::size_t>{{"NONE", 4}, {"OTHER", 3}, {"laa", 6}});
  CHECK(d.instances[0].features.at("dep-Case") == "Acc");
  CHECK(d.instances[0].features.at("head-upos") == "VERB");
  CHECK(d.instances[0].features.at("deprel") == "obj");

  const SuffixDataset none = extract_suffix_instances(tb, "ADJ", {}, 5);
  CHECK(none.inventory.empty());
  CHECK(none.instances.empty());
}

TEST_CASE("planted suffix is deterministic per case value") {
  const Treebank tb = parse_conllu(synth::suffix_corpus(300, 2), "mr");
  const SuffixDataset d = extract_suffix_instances(tb, "NOUN", {}, 5);
  REQUIRE(d.inventory.contains("laa"));
  // Brute-force label distribution per Case value.
  std::map<std::string, std::set<std::string>> by_case;
  for (const auto& inst : d.instances) by_case[inst.features.at("dep-Case")].insert(inst.label);
  CHECK(by_case.at("Acc") == std::set<std::string>{"laa"});
  CHECK_FALSE(by_case.at("Loc").contains("laa"));
  CHECK_FALSE(by_case.at("Nom").contains("laa"));
}

TEST_CASE("sandhi candidates pair suffixes differing by one leading character") {
  std::string rows;
  int sid = 0;
  auto add = [&](const std::string& form, int n) {
    for (int i = 0; i < n; ++i) {
      rows += "# sent_id = t" + std::to_string(++sid) + "\n1\t" + form +
              "\tdesh\tNOUN\t_\t_\t0\troot\t_\t_\n\n";
    }
  };
  add("deshlaa", 5);
  add("deshalaa", 5);
  const SuffixDataset d = extract_suffix_instances(parse_conllu(rows, "mr"), "NOUN", {}, 5);
  CHECK(d.sandhi_candidates ==
        std::vector<std::pair<std::string, std::string>>{{"laa", "alaa"}});
}

TEST_CASE("featurize direct construction") {
  const Treebank tb = one(
      "1\tmulga\tmulga\tNOUN\t_\tCase=Acc\t2\tobj\t_\t_\n"
      "2\tpahila\tpah\tVERB\t_\tTense=Past\t0\troot\t_\t_\n");
  FeatureConfig cfg;
  cfg.neighbor_window = 0;
  cfg.include_sibling_deprels = false;
  const FeatureMap f = featurize(tb.sentences[0], 2, 1, cfg, {"pah"});
  CHECK(f == FeatureMap{{"head-upos", "VERB"},
                        {"dep-upos", "NOUN"},
                        {"deprel", "obj"},
                        {"head-Tense", "Past"},
                        {"dep-Case", "Acc"},
                        {"head-lemma", "pah"},
                        {"dep-lemma", "OTHER"}});
}

TEST_CASE("featurize neighbours and siblings") {
  const Treebank tb = one(
      "1\tthe\tthe\tDET\t_\t_\t2\tdet\t_\t_\n"
      "2\tdog\tdog\tNOUN\t_\t_\t3\tnsubj\t_\t_\n"
      "3\tsaw\tsee\tVERB\t_\t_\t0\troot\t_\t_\n"
      "4\tme\tI\tPRON\t_\t_\t3\tobj\t_\t_\n");
  FeatureMap f = featurize(tb.sentences[0], 3, 4, {}, {});
  CHECK(f.at("nbr--1-upos") == "VERB");
  CHECK_FALSE(f.contains("nbr-+1-upos"));
  CHECK(f.at("sib-nsubj") == "yes");
  CHECK_FALSE(f.contains("sib-obj"));
  CHECK_FALSE(f.contains("sib-det"));
  f = featurize(tb.sentences[0], 3, 2, {}, {});
  CHECK(f.at("nbr--1-upos") == "DET");
  CHECK(f.at("nbr-+1-upos") == "VERB");
}

TEST_CASE("lemma vocabulary ranks by frequency then name") {
  const Treebank tb = one(
      "1\tb\tb\tX\t_\t_\t0\troot\t_\t_\n"
      "2\ta\ta\tX\t_\t_\t1\tdep\t_\t_\n"
      "3\tc\tc\tX\t_\t_\t1\tdep\t_\t_\n"
      "4\tc\tc\tX\t_\t_\t1\tdep\t_\t_\n");
  CHECK(build_lemma_vocab(tb, 2) == std::set<std::string>{"a", "c"});
  CHECK(build_lemma_vocab(tb, 0).empty());
}

TEST_CASE("extraction is deterministic and never stores the missing marker") {
  const Treebank tb = parse_conllu(synth::ud_style_treebank(50, 13), "xx");
  for (const auto& spec : default_relation_specs()) {
    const auto a = extract_order_instances(tb, spec, {});
    const auto b = extract_order_instances(tb, spec, {});
    CHECK(a.instances == b.instances);
    for (const auto& inst : a.instances) {
      CHECK_FALSE(inst.label.empty());
      for (const auto& [k, v] : inst.features) CHECK(v != kMissing);
    }
  }
}

TEST_CASE("dump_tsv") {
  Instance inst{{{"a", "1"}, {"b", "x"}}, "before", {}};
  CHECK(dump_tsv({inst}) == "a=1 b=x\tbefore\n");
}
