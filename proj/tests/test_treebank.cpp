#include <string>

#include "doctest.h"

#include "gramlex/error.hpp"
#include "gramlex/text.hpp"
#include "gramlex/treebank.hpp"
#include "synth.hpp"

using namespace gramlex;

namespace {

const char* kDogBarks =
    "1\tdog\tdog\tNOUN\t_\tNumber=Sing\t2\tnsubj\t_\t_\n"
    "2\tbarks\tbark\tVERB\t_\t_\t0\troot\t_\t_\n\n";

}  // namespace

TEST_CASE("two-token sentence maps columns directly") {
  const Treebank tb = parse_conllu(kDogBarks, "en");
  REQUIRE(tb.sentences.size() == 1);
  const Sentence& s = tb.sentences[0];
  REQUIRE(s.tokens.size() == 2);
  CHECK(s.tokens[0].feats == Feats{{"Number", "Sing"}});
  CHECK(*s.tokens[0].feat("Number") == "Sing");
  CHECK(s.tokens[0].feat("Case") == nullptr);
  CHECK(s.tokens[0].xpos.empty());
  CHECK(s.tokens[1].head == 0);
  CHECK(s.text() == "dog barks");
  CHECK(validate(tb).empty());
  CHECK(is_well_formed(s));
  CHECK(tb.language == "en");
}

TEST_CASE("dangling head is a violation, not a parse error") {
  const Treebank tb = parse_conllu(
      "1\tdog\tdog\tNOUN\t_\t_\t9\tnsubj\t_\t_\n"
      "2\tbarks\tbark\tVERB\t_\t_\t0\troot\t_\t_\n\n",
      "en");
  const auto v = validate(tb);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == Violation::Kind::DanglingHead);
  CHECK(to_string(v[0].kind) == "dangling-head");
}

TEST_CASE("head beyond a three-token sentence") {
  const Treebank tb = parse_conllu(
      "1\ta\ta\tX\t_\t_\t7\tdep\t_\t_\n"
      "2\tb\tb\tX\t_\t_\t0\troot\t_\t_\n"
      "3\tc\tc\tX\t_\t_\t2\tdep\t_\t_\n\n",
      "xx");
  const auto v = validate(tb);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == Violation::Kind::DanglingHead);
}

TEST_CASE("two roots give one multi-root violation") {
  const Treebank tb = parse_conllu(
      "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n"
      "2\tb\tb\tX\t_\t_\t0\troot\t_\t_\n\n",
      "xx");
  const auto v = validate(tb);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == Violation::Kind::MultiRoot);
  CHECK_FALSE(is_well_formed(tb.sentences[0]));
}

TEST_CASE("zero roots and self heads") {
  const Treebank tb = parse_conllu(
      "1\ta\ta\tX\t_\t_\t1\tdep\t_\t_\n"
      "2\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n\n",
      "xx");
  const auto v = validate(tb);
  bool self = false, zero = false;
  for (const auto& x : v) {
    self |= x.kind == Violation::Kind::SelfHead;
    zero |= x.kind == Violation::Kind::ZeroRoots;
  }
  CHECK(self);
  CHECK(zero);
}

TEST_CASE("non-contiguous ids") {
  const Treebank tb = parse_conllu(
      "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n"
      "3\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n\n",
      "xx");
  bool found = false;
  for (const auto& x : validate(tb)) found |= x.kind == Violation::Kind::NonContiguousIds;
  CHECK(found);
}

TEST_CASE("multiword ranges and empty nodes are dropped and counted") {
  const Treebank tb = parse_conllu(
      "# sent_id = mw\n"
      "1\tI\tI\tPRON\t_\t_\t2\tnsubj\t_\t_\n"
      "2-3\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "2\tdo\tdo\tAUX\t_\t_\t0\troot\t_\t_\n"
      "3\tn't\tnot\tPART\t_\t_\t2\tadvmod\t_\t_\n"
      "3.1\tgo\tgo\tVERB\t_\t_\t_\t_\t2:conj\t_\n\n",
      "en");
  REQUIRE(tb.sentences.size() == 1);
  CHECK(tb.sentences[0].tokens.size() == 3);
  CHECK(tb.sentences[0].tokens[2].form == "n't");
  CHECK(tb.stats.multiword_ranges_dropped == 1);
  CHECK(tb.stats.empty_nodes_dropped == 1);
  CHECK(validate(tb).empty());
}

TEST_CASE("malformed input reports the offending line") {
  try {
    parse_conllu("# c\n1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n2\tb\tb\n\n", "xx");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  try {
    parse_conllu("1\ta\ta\tX\t_\t_\tzero\troot\t_\t_\n\n", "xx");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  CHECK_THROWS_AS(parse_conllu("1\ta\ta\tX\t_\tBroken\t0\troot\t_\t_\n\n", "xx"), ParseError);
  CHECK_THROWS_AS(parse_conllu("1\ta\xFF\ta\tX\t_\t_\t0\troot\t_\t_\n\n", "xx"), EncodingError);
}

TEST_CASE("feats are alphabetised on output") {
  const Treebank tb = parse_conllu(
      "1\tmulgi\tmulgi\tNOUN\t_\tNumber=Sing|Gender=Fem\t0\troot\t_\t_\n\n", "mr");
  CHECK(tb.sentences[0].tokens[0].feats.front().first == "Number");
  CHECK(serialize_conllu(tb) == "1\tmulgi\tmulgi\tNOUN\t_\tGender=Fem|Number=Sing\t0\troot\t_\t_\n\n");
}

TEST_CASE("empty treebank serializes to nothing") {
  CHECK(serialize_conllu(Treebank{}).empty());
  CHECK(parse_conllu("", "xx").sentences.empty());
}

TEST_CASE("translation comment") {
  const Treebank tb = parse_conllu(text::read_file(GRAMLEX_TEST_DATA "/canonical.conllu"), "mr");
  REQUIRE(tb.sentences.size() == 3);
  CHECK(tb.sentences[0].translation == std::optional<std::string>("The boy went home."));
  CHECK_FALSE(tb.sentences[1].translation.has_value());
  CHECK(tb.find("x-3") != nullptr);
  CHECK(tb.find("missing") == nullptr);
  CHECK(tb.token_count() == 10);
}

TEST_CASE("canonical fixture round trips byte for byte") {
  const std::string x = text::read_file(GRAMLEX_TEST_DATA "/canonical.conllu");
  CHECK(serialize_conllu(parse_conllu(x, "mr")) == x);
}

TEST_CASE("generated treebanks round trip") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const std::string x = synth::ud_style_treebank(40, seed);
    const Treebank tb = parse_conllu(x, "xx");
    CHECK(serialize_conllu(tb) == x);
    CHECK(validate(tb).empty());
  }
}

TEST_CASE("duplicate sent_ids get a deterministic suffix") {
  const std::string one = "# sent_id = a\n" + std::string(kDogBarks);
  Treebank tb = parse_conllu(one + one, "en");
  CHECK(tb.sentences[0].sent_id == "a");
  CHECK(tb.sentences[1].sent_id == "a-2");
  CHECK(tb.stats.renamed_sent_ids == 1);
  tb.append(parse_conllu(one, "en"));
  CHECK(tb.sentences[2].sent_id == "a-3");
  CHECK(tb.find("a-3") == &tb.sentences[2]);
}

TEST_CASE("validation never mutates") {
  const Treebank tb = parse_conllu(synth::ud_style_treebank(10, 5), "xx");
  const std::string before = serialize_conllu(tb);
  (void)validate(tb);
  CHECK(serialize_conllu(tb) == before);
}

TEST_CASE("examples carry forms, highlights and gloss") {
  const Treebank tb = parse_conllu(text::read_file(GRAMLEX_TEST_DATA "/canonical.conllu"), "mr");
  const ExampleRef e = make_example(tb.sentences[0], {1, 3});
  CHECK(e.sent_id == "mr-1");
  CHECK(e.tokens.size() == 4);
  CHECK(e.highlight == std::vector<int>{1, 3});
  CHECK(e.translation == "The boy went home.");
}
