#include "gramlex/morphsum.hpp"

#include <algorithm>
#include <map>

namespace gramlex {

namespace {

struct FormStats {
  std::size_t count = 0;
  const Sentence* shortest = nullptr;
  int token_id = 0;
};

struct ValueStats {
  std::size_t total = 0;
  std::map<std::string, std::size_t> by_upos;
  std::map<std::pair<std::string, std::string>, FormStats> forms;  // (form, lemma)
};

template <typename K>
std::vector<std::pair<K, std::size_t>> by_count(const std::map<K, std::size_t>& m) {
  std::vector<std::pair<K, std::size_t>> v(m.begin(), m.end());
  std::stable_sort(v.begin(), v.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return v;
}

}  // namespace

std::vector<FeatureSummary> summarize_features(const Treebank& tb, std::size_t top_n_examples) {
  std::map<std::string, std::map<std::string, ValueStats>> stats;
  for (const auto& s : tb.sentences) {
    for (const auto& t : s.tokens) {
      for (const auto& [attr, value] : t.feats) {
        ValueStats& vs = stats[attr][value];
        ++vs.total;
        ++vs.by_upos[t.upos.empty() ? std::string("_") : t.upos];
        FormStats& fs = vs.forms[{t.form, t.lemma}];
        ++fs.count;
        if (fs.shortest == nullptr || s.tokens.size() < fs.shortest->tokens.size()) {
          fs.shortest = &s;
          fs.token_id = t.id;
        }
      }
    }
  }

  std::vector<FeatureSummary> out;
  for (const auto& [attr, values] : stats) {
    FeatureSummary fsum;
    fsum.attribute = attr;
    for (const auto& [value, vs] : values) {
      ValueSummary v;
      v.value = value;
      v.total_count = vs.total;
      v.by_upos = by_count(vs.by_upos);
      std::vector<std::pair<std::pair<std::string, std::string>, const FormStats*>> forms;
      for (const auto& [key, f] : vs.forms) forms.emplace_back(key, &f);
      std::stable_sort(forms.begin(), forms.end(), [](const auto& a, const auto& b) {
        return a.second->count > b.second->count;
      });
      for (std::size_t i = 0; i < forms.size() && i < top_n_examples; ++i) {
        const auto& [key, f] = forms[i];
        v.example_forms.push_back(
            {key.first, key.second, f->count, make_example(*f->shortest, {f->token_id})});
      }
      fsum.values.push_back(std::move(v));
    }
    std::stable_sort(fsum.values.begin(), fsum.values.end(),
                     [](const ValueSummary& a, const ValueSummary& b) {
                       return a.total_count > b.total_count;
                     });
    out.push_back(std::move(fsum));
  }
  auto carriers = [](const FeatureSummary& f) {
    std::size_t n = 0;
    for (const auto& v : f.values) n += v.total_count;
    return n;
  };
  std::stable_sort(out.begin(), out.end(), [&](const FeatureSummary& a, const FeatureSummary& b) {
    return carriers(a) > carriers(b);
  });
  return out;
}

}  // namespace gramlex
