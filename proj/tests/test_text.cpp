#include <string>
#include <vector>

#include "doctest.h"

#include "gramlex/error.hpp"
#include "gramlex/text.hpp"
#include "synth.hpp"

using namespace gramlex;

TEST_CASE("utf8 validity") {
  CHECK(text::is_valid_utf8("plain ascii"));
  CHECK(text::is_valid_utf8("\xE0\xA4\xAE\xE0\xA4\xB0"));  // Devanagari
  CHECK(text::is_valid_utf8("\xF0\x9F\x98\x80"));
  CHECK_FALSE(text::is_valid_utf8("\xC0\xAF"));          // overlong '/'
  CHECK_FALSE(text::is_valid_utf8("\xED\xA0\x80"));      // surrogate
  CHECK_FALSE(text::is_valid_utf8("\xE0\xA4"));          // truncated
  CHECK_FALSE(text::is_valid_utf8("\xF4\x90\x80\x80"));  // above U+10FFFF
  CHECK_FALSE(text::is_valid_utf8("\x80"));
  CHECK_THROWS_AS(text::decode_utf8("\xFF"), EncodingError);
}

TEST_CASE("utf8 decode and encode are inverse on random code points") {
  synth::Rng rng(7);
  for (int round = 0; round < 200; ++round) {
    std::u32string s;
    const std::size_t n = rng.below(12);
    for (std::size_t i = 0; i < n; ++i) {
      char32_t c;
      do {
        c = static_cast<char32_t>(rng.below(0x110000));
      } while (c >= 0xD800 && c <= 0xDFFF);
      s.push_back(c);
    }
    const std::string bytes = text::encode_utf8(s);
    REQUIRE(text::is_valid_utf8(bytes));
    CHECK(text::decode_utf8(bytes) == s);
  }
}

TEST_CASE("case folding") {
  CHECK(text::fold_case("Rice AND Dog") == "rice and dog");
  CHECK(text::fold_case("\xC3\x89t\xC3\xA9") == "\xC3\xA9t\xC3\xA9");  // Été
  CHECK(text::fold_case(U'×') == U'×');                      // multiplication sign
  CHECK(text::fold_case(U'Δ') == U'δ');
  CHECK(text::fold_case(U'Ж') == U'ж');
  CHECK(text::fold_case(U'Ё') == U'ё');
  CHECK(text::fold_case(U'म') == U'म');
}

TEST_CASE("case folding is idempotent") {
  synth::Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto c = static_cast<char32_t>(rng.below(0x500));
    CHECK(text::fold_case(text::fold_case(c)) == text::fold_case(c));
  }
}

TEST_CASE("split keeps empty fields, split_whitespace drops them") {
  CHECK(text::split("a\t\tb", '\t') == std::vector<std::string>{"a", "", "b"});
  CHECK(text::split("", ',') == std::vector<std::string>{""});
  CHECK(text::split_whitespace("  a \t b\n") == std::vector<std::string>{"a", "b"});
  CHECK(text::split_whitespace("   ").empty());
  CHECK(text::join({"x", "y", "z"}, ", ") == "x, y, z");
  CHECK(text::join({}, ",").empty());
  CHECK(text::trim("\t a b \n") == "a b");
  CHECK(text::starts_with("sent_id", "sent"));
  CHECK_FALSE(text::starts_with("se", "sent"));
}

TEST_CASE("split and join round trip") {
  synth::Rng rng(3);
  const std::vector<std::string> alphabet{"a", "bb", "", "c d"};
  for (int round = 0; round < 100; ++round) {
    std::vector<std::string> parts;
    const std::size_t n = 1 + rng.below(6);
    for (std::size_t i = 0; i < n; ++i) parts.push_back(rng.pick(alphabet));
    CHECK(text::split(text::join(parts, "|"), '|') == parts);
  }
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(text::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(text::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(text::fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(text::hex64(0xabcULL) == "0000000000000abc");
  CHECK(text::fnv1a64("x", 1) != text::fnv1a64("x"));
}

TEST_CASE("slugify") {
  CHECK(text::slugify("Are subjects before verbs?") == "are-subjects-before-verbs");
  CHECK(text::slugify("  A--B  ") == "a-b");
}
