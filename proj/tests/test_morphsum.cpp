#include <map>
#include <string>

#include "doctest.h"

#include "gramlex/morphsum.hpp"
#include "gramlex/treebank.hpp"
#include "synth.hpp"

using namespace gramlex;

TEST_CASE("gender counts by value and word class") {
  const Treebank tb = parse_conllu(
      "# sent_id = a\n"
      "1\tmulgi\tmulgi\tNOUN\t_\tGender=Fem\t3\tnsubj\t_\t_\n"
      "2\tchhan\tchhan\tADJ\t_\tGender=Fem\t1\tamod\t_\t_\n"
      "3\tgeli\tja\tVERB\t_\t_\t0\troot\t_\t_\n\n"
      "# sent_id = b\n"
      "1\tbai\tbai\tNOUN\t_\tGender=Fem\t2\tnsubj\t_\t_\n"
      "2\tmulga\tmulga\tNOUN\t_\tGender=Masc\t0\troot\t_\t_\n\n",
      "mr");
  const auto s = summarize_features(tb, 5);
  REQUIRE(s.size() == 1);
  CHECK(s[0].attribute == "Gender");
  REQUIRE(s[0].values.size() == 2);
  CHECK(s[0].values[0].value == "Fem");
  CHECK(s[0].values[0].total_count == 3);
  CHECK(s[0].values[0].by_upos ==
        std::vector<std::pair<std::string, std::size_t>>{{"NOUN", 2}, {"ADJ", 1}});
  CHECK(s[0].values[1].value == "Masc");
  CHECK(s[0].values[1].by_upos == std::vector<std::pair<std::string, std::size_t>>{{"NOUN", 1}});
}

TEST_CASE("no feats gives an empty summary") {
  const Treebank tb = parse_conllu("1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n\n", "xx");
  CHECK(summarize_features(tb, 5).empty());
  CHECK(summarize_features(Treebank{}, 5).empty());
}

TEST_CASE("example forms are truncated to the most frequent") {
  std::string rows;
  const std::map<std::string, int> freq{{"a1", 1}, {"a2", 4}, {"a3", 2}, {"a4", 5}, {"a5", 3}};
  int sid = 0;
  for (const auto& [form, n] : freq) {
    for (int i = 0; i < n; ++i) {
      rows += "# sent_id = s" + std::to_string(++sid) + "\n1\t" + form + "\t" + form +
              "\tNOUN\t_\tGender=Fem\t0\troot\t_\t_\n\n";
    }
  }
  const auto s = summarize_features(parse_conllu(rows, "xx"), 2);
  REQUIRE(s[0].values[0].example_forms.size() == 2);
  CHECK(s[0].values[0].example_forms[0].form == "a4");
  CHECK(s[0].values[0].example_forms[0].count == 5);
  CHECK(s[0].values[0].example_forms[1].form == "a2");
}

TEST_CASE("each example form uses its shortest sentence") {
  const Treebank tb = parse_conllu(
      "# sent_id = long\n"
      "1\tx\tx\tX\t_\t_\t2\tdep\t_\t_\n"
      "2\tghar\tghar\tNOUN\t_\tCase=Nom\t0\troot\t_\t_\n"
      "3\ty\ty\tX\t_\t_\t2\tdep\t_\t_\n\n"
      "# sent_id = short\n"
      "1\tghar\tghar\tNOUN\t_\tCase=Nom\t0\troot\t_\t_\n\n",
      "mr");
  const auto s = summarize_features(tb, 3);
  const auto& ex = s[0].values[0].example_forms[0].example;
  CHECK(ex.sent_id == "short");
  CHECK(ex.highlight == std::vector<int>{1});
}

TEST_CASE("summary totals match a direct count") {
  const Treebank tb = parse_conllu(synth::ud_style_treebank(120, 31), "xx");
  std::map<std::pair<std::string, std::string>, std::size_t> direct;
  for (const auto& sent : tb.sentences) {
    for (const auto& t : sent.tokens) {
      for (const auto& kv : t.feats) ++direct[kv];
    }
  }
  std::map<std::pair<std::string, std::string>, std::size_t> summed;
  for (const auto& f : summarize_features(tb, 3)) {
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      const auto& v = f.values[i];
      if (i > 0) CHECK(f.values[i - 1].total_count >= v.total_count);
      std::size_t by = 0;
      for (std::size_t j = 0; j < v.by_upos.size(); ++j) {
        by += v.by_upos[j].second;
        if (j > 0) CHECK(v.by_upos[j - 1].second >= v.by_upos[j].second);
      }
      CHECK(by == v.total_count);
      CHECK(v.example_forms.size() <= 3);
      summed[{f.attribute, v.value}] = v.total_count;
    }
  }
  CHECK(summed == direct);
}
