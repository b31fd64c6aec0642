#include "gramlex/html.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "gramlex/error.hpp"
#include "gramlex/text.hpp"

namespace gramlex {

using nlohmann::json;

Transliterator Transliterator::parse(std::string_view tsv) {
  Transliterator t;
  std::size_t line_no = 0;
  for (auto line : text::split(tsv, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cols = text::split(line, '\t');
    if (cols.size() != 2 || cols[0].empty()) {
      throw ParseError("transliteration map: expected 'script<TAB>roman'", line_no);
    }
    std::u32string key = text::decode_utf8(cols[0]);
    t.longest_ = std::max(t.longest_, key.size());
    t.table_[std::move(key)] = cols[1];
  }
  return t;
}

Transliterator Transliterator::load(const std::string& path) { return parse(text::read_file(path)); }

std::string Transliterator::apply(std::string_view s) const {
  if (table_.empty()) return std::string(s);
  const std::u32string cps = text::decode_utf8(s);
  std::string out;
  std::size_t i = 0;
  while (i < cps.size()) {
    bool hit = false;
    for (std::size_t len = std::min(longest_, cps.size() - i); len > 0; --len) {
      auto it = table_.find(cps.substr(i, len));
      if (it != table_.end()) {
        out += it->second;
        i += len;
        hit = true;
        break;
      }
    }
    if (!hit) {
      out += text::encode_utf8(cps.substr(i, 1));
      ++i;
    }
  }
  return out;
}

std::string html_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string describe_feature(std::string_view f) {
  const std::string s(f);
  if (s == "head-upos") return "head word class";
  if (s == "dep-upos") return "word class";
  if (s == "head-lemma") return "head lemma";
  if (s == "dep-lemma") return "lemma";
  if (s == "deprel") return "relation to head";
  if (text::starts_with(s, "ctx-bow-")) return "\"" + s.substr(8) + "\" occurs in the sentence";
  if (text::starts_with(s, "ctx-")) {
    const std::string off = s.substr(4);
    const bool after = !off.empty() && off[0] == '+';
    const std::string n = off.substr(1);
    return "English word " + n + (n == "1" ? " position " : " positions ") + (after ? "after" : "before");
  }
  if (text::starts_with(s, "nbr-") && s.size() > 9) {
    const std::string off = s.substr(4, s.size() - 9);
    const bool after = !off.empty() && off[0] == '+';
    const std::string n = off.substr(1);
    return "word class " + n + (n == "1" ? " word " : " words ") + (after ? "after" : "before");
  }
  if (text::starts_with(s, "sib-")) return "head also has a " + s.substr(4) + " dependent";
  if (text::starts_with(s, "head-")) return "head " + s.substr(5);
  if (text::starts_with(s, "dep-")) return s.substr(4);
  return s;
}

namespace {

constexpr const char* kStyle = R"css(
body{font-family:Georgia,serif;max-width:60rem;margin:0 auto;padding:1rem;line-height:1.45;color:#222}
nav a{margin-right:1rem}
table{border-collapse:collapse;margin:0.5rem 0 1rem}
th,td{border:1px solid #bbb;padding:0.25rem 0.5rem;text-align:left;vertical-align:top}
th{background:#f2f2f2}
tr.exception{background:#fff6dd}
.tag{font-size:0.8em;background:#e8a400;color:#fff;padding:0 0.3em;border-radius:3px}
em.hl{font-style:normal;font-weight:bold;background:#ffe98a}
.translit{color:#555;font-style:italic}
.gloss{color:#225}
abbr{text-decoration:underline dotted}
section{border-top:2px solid #ddd;margin-top:1.5rem}
)css";

struct Glossed {
  const char* term;
  const char* meaning;
};

constexpr Glossed kGlossary[] = {
    {"lemma", "dictionary form of a word"},
    {"word class", "part of speech, e.g. noun or verb"},
    {"relation", "grammatical role of a word relative to the word it attaches to, e.g. subject"},
    {"head", "the word another word attaches to, e.g. the verb of a subject"},
    {"suffix", "ending added to the dictionary form"},
    {"agreement", "two related words showing the same value, e.g. both feminine"},
    {"support", "number of training examples the rule covers"},
    {"precision", "share of covered examples that follow the rule"},
    {"baseline", "accuracy of always answering with the most common pattern"},
};

std::string abbr(std::string_view term) {
  for (const auto& g : kGlossary) {
    if (term == g.term) {
      return "<abbr title=\"" + html_escape(g.meaning) + "\">" + html_escape(term) + "</abbr>";
    }
  }
  return html_escape(term);
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

std::string page_name(Aspect a) { return std::string(to_string(a)) + ".html"; }

std::string aspect_title(Aspect a) {
  switch (a) {
    case Aspect::WordOrder: return "Word order";
    case Aspect::Agreement: return "Agreement";
    case Aspect::Suffix: return "Suffix usage";
    case Aspect::Vocabulary: return "Vocabulary";
    case Aspect::General: return "General information";
  }
  return "";
}

class Renderer {
 public:
  Renderer(const Report& report, const Transliterator* translit)
      : report_(report), translit_(translit) {
    for (const auto& p : report.points) present_.insert(p.aspect);
    if (!report.points.empty()) language_ = report.points.front().language;
  }

  const std::set<Aspect>& present() const { return present_; }

  std::string index() const {
    std::ostringstream o;
    head(o, "Grammar materials");
    o << "<h1>Grammar materials" << (language_.empty() ? "" : ": " + html_escape(language_))
      << "</h1>\n";
    if (report_.points.empty()) o << "<p>No material was extracted.</p>\n";
    for (Aspect a : kAllAspects) {
      if (!present_.contains(a)) continue;
      o << "<h2><a href=\"" << page_name(a) << "\">" << aspect_title(a) << "</a></h2>\n<ul>\n";
      for (const auto& p : report_.points) {
        if (p.aspect != a) continue;
        o << "<li><a href=\"" << page_name(a) << "#" << p.id << "\">" << html_escape(p.question)
          << "</a></li>\n";
      }
      o << "</ul>\n";
    }
    bool any_metrics = false;
    for (const auto& p : report_.points) any_metrics = any_metrics || p.metrics.has_value();
    if (any_metrics) {
      o << "<h2>How well do the rules predict unseen sentences?</h2>\n<table>\n<thead><tr>"
        << "<th>Grammar concept</th><th>Type</th><th>Rules</th><th>" << abbr("baseline")
        << "</th></tr></thead>\n<tbody>\n";
      for (Aspect a : kAllAspects) {
        for (const auto& p : report_.points) {
          if (p.aspect != a || !p.metrics) continue;
          o << "<tr><td>" << concept_name(a) << "</td><td><a href=\"" << page_name(a) << "#"
            << p.id << "\">" << html_escape(p.type) << "</a></td><td>"
            << pct(p.metrics->tree_accuracy) << "</td><td>" << pct(p.metrics->baseline_accuracy)
            << "</td></tr>\n";
        }
      }
      o << "</tbody>\n</table>\n";
    }
    o << "<h2>Terms used</h2>\n<dl>\n";
    for (const auto& g : kGlossary) {
      o << "<dt>" << html_escape(g.term) << "</dt><dd>" << html_escape(g.meaning) << "</dd>\n";
    }
    o << "</dl>\n";
    tail(o);
    return o.str();
  }

  std::string aspect_page(Aspect a) const {
    std::ostringstream o;
    head(o, aspect_title(a));
    o << "<h1>" << aspect_title(a) << "</h1>\n";
    for (const auto& p : report_.points) {
      if (p.aspect != a) continue;
      o << "<section id=\"" << p.id << "\">\n<h2>" << html_escape(p.question) << "</h2>\n";
      switch (a) {
        case Aspect::WordOrder:
        case Aspect::Agreement: rule_point(o, p); break;
        case Aspect::Suffix: suffix_point(o, p); break;
        case Aspect::Vocabulary: vocabulary_point(o, p); break;
        case Aspect::General: general_point(o, p); break;
      }
      o << "</section>\n";
    }
    tail(o);
    return o.str();
  }

 private:
  void head(std::ostringstream& o, const std::string& title) const {
    o << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>"
      << html_escape(title) << "</title>\n<style>" << kStyle << "</style>\n</head>\n<body>\n<nav>"
      << "<a href=\"index.html\">Contents</a>";
    for (Aspect a : kAllAspects) {
      if (present_.contains(a)) o << "<a href=\"" << page_name(a) << "\">" << aspect_title(a) << "</a>";
    }
    o << "</nav>\n<main>\n";
  }

  static void tail(std::ostringstream& o) { o << "</main>\n</body>\n</html>\n"; }

  std::string l2(const std::string& s) const {
    std::string out = html_escape(s);
    if (translit_ && !translit_->empty()) {
      const std::string r = translit_->apply(s);
      if (r != s) out += " <span class=\"translit\">(" + html_escape(r) + ")</span>";
    }
    return out;
  }

  std::string example(const ExampleRef& e) const {
    std::set<int> hl(e.highlight.begin(), e.highlight.end());
    std::string line, roman;
    for (std::size_t i = 0; i < e.tokens.size(); ++i) {
      const std::string tok = html_escape(e.tokens[i]);
      const bool mark = hl.contains(static_cast<int>(i) + 1);
      if (i) line += ' ';
      line += mark ? "<em class=\"hl\">" + tok + "</em>" : tok;
      if (translit_ && !translit_->empty()) {
        const std::string r = html_escape(translit_->apply(e.tokens[i]));
        if (i) roman += ' ';
        roman += mark ? "<em class=\"hl\">" + r + "</em>" : r;
      }
    }
    std::string out = "<li><span class=\"l2\">" + line + "</span>";
    if (!roman.empty()) out += "<br><span class=\"translit\">" + roman + "</span>";
    if (!e.translation.empty()) out += "<br><span class=\"gloss\">&ldquo;" + html_escape(e.translation) + "&rdquo;</span>";
    out += " <small>[" + html_escape(e.sent_id) + "]</small></li>\n";
    return out;
  }

  std::string examples_from_json(const json& arr) const {
    std::string out;
    for (const auto& e : arr) out += example(example_from_json(e));
    return out;
  }

  std::string label_text(const GrammarPoint& p, const std::string& label) const {
    if (p.aspect == Aspect::WordOrder) {
      const auto dash = p.type.find('-');
      if (dash != std::string::npos) {
        return html_escape(p.type.substr(0, dash) + " " + label + " " + p.type.substr(dash + 1));
      }
    }
    if (p.aspect == Aspect::Suffix) {
      if (label == "NONE") return "no suffix";
      if (label == "OTHER") return "another (rare) suffix";
      return "-" + l2(label);
    }
    if (p.aspect == Aspect::Vocabulary) return l2(label);
    return html_escape(label);
  }

  std::string condition(const Condition& c) const {
    return "<span title=\"" + html_escape(c.feature) + "\">" + html_escape(describe_feature(c.feature)) +
           "</span> " + (c.is ? "is" : "is not") + " <b>" + html_escape(c.value) + "</b>";
  }

  void summary(std::ostringstream& o, const GrammarPoint& p) const {
    if (!p.dominant_label.empty()) {
      o << "<p>Most common pattern: <b>" << label_text(p, p.dominant_label) << "</b> ("
        << pct(p.dominant_fraction) << " of training examples).</p>\n";
    }
    if (p.metrics) {
      o << "<p>On held-out sentences the rules are right " << pct(p.metrics->tree_accuracy)
        << " of the time; always answering the most common pattern (the " << abbr("baseline")
        << ") is right " << pct(p.metrics->baseline_accuracy) << ". Trained on "
        << p.metrics->train_size << " and tested on " << p.metrics->test_size << " examples.</p>\n";
    }
  }

  void rules_table(std::ostringstream& o, const GrammarPoint& p, const std::vector<std::size_t>& which,
                   const std::string& anchor_prefix) const {
    o << "<table class=\"rules\">\n<thead><tr><th>#</th><th>If</th><th>Then</th><th>"
      << abbr("support") << "</th><th>" << abbr("precision") << "</th><th>Examples</th></tr></thead>\n<tbody>\n";
    for (std::size_t k : which) {
      const Rule& r = p.rules[k];
      std::string conds;
      for (std::size_t c = 0; c < r.conditions.size(); ++c) {
        if (c) conds += " <i>and</i> ";
        conds += condition(r.conditions[c]);
      }
      if (conds.empty()) conds = "<i>always</i>";
      o << "<tr" << (r.exception ? " class=\"exception\"" : "") << "><td>" << k + 1 << "</td><td>"
        << conds << "</td><td>" << label_text(p, r.prediction)
        << (r.exception ? " <span class=\"tag\">exception</span>" : "") << "</td><td>" << r.support
        << "</td><td>" << pct(r.precision) << "</td><td>";
      if (!r.examples.empty() || !r.counterexamples.empty()) {
        o << "<a href=\"#" << anchor_prefix << "-rule-" << k + 1 << "\">" << r.examples.size()
          << " examples, " << r.counterexamples.size() << " exceptions</a>";
      }
      o << "</td></tr>\n";
    }
    o << "</tbody>\n</table>\n";
    for (std::size_t k : which) {
      const Rule& r = p.rules[k];
      if (r.examples.empty() && r.counterexamples.empty()) continue;
      o << "<div id=\"" << anchor_prefix << "-rule-" << k + 1 << "\">\n<h4>Rule " << k + 1
        << ": " << label_text(p, r.prediction) << "</h4>\n";
      if (!r.examples.empty()) {
        o << "<ol>\n";
        for (const auto& e : r.examples) o << example(e);
        o << "</ol>\n";
      }
      if (!r.counterexamples.empty()) {
        o << "<p>Examples that do not follow this rule:</p>\n<ol>\n";
        for (const auto& e : r.counterexamples) o << example(e);
        o << "</ol>\n";
      }
      o << "</div>\n";
    }
  }

  static std::vector<std::size_t> all_rules(const GrammarPoint& p) {
    std::vector<std::size_t> v(p.rules.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
    return v;
  }

  void rule_point(std::ostringstream& o, const GrammarPoint& p) const {
    summary(o, p);
    if (!p.rules.empty()) rules_table(o, p, all_rules(p), p.id);
  }

  void suffix_point(std::ostringstream& o, const GrammarPoint& p) const {
    summary(o, p);
    const json& inv = p.payload.value("inventory", json::array());
    if (!inv.empty()) {
      o << "<h3>Common " << abbr("suffix") << "es</h3>\n<table>\n<thead><tr><th>Suffix</th><th>Count</th></tr></thead>\n<tbody>\n";
      for (const auto& row : inv) {
        o << "<tr><td>-" << l2(row.at("suffix").get<std::string>()) << "</td><td>"
          << row.at("count").get<std::size_t>() << "</td></tr>\n";
      }
      o << "</tbody>\n</table>\n";
    }
    const json& sandhi = p.payload.value("sandhi_candidates", json::array());
    if (!sandhi.empty()) {
      o << "<p>These suffixes differ only by their first letter and may be spelling variants of one another: ";
      bool first = true;
      for (const auto& pair : sandhi) {
        if (!first) o << "; ";
        o << "-" << l2(pair.at(0).get<std::string>()) << " / -" << l2(pair.at(1).get<std::string>());
        first = false;
      }
      o << ".</p>\n";
    }
    // One table per predicted suffix.
    std::map<std::string, std::vector<std::size_t>> by_suffix;
    for (std::size_t k = 0; k < p.rules.size(); ++k) by_suffix[p.rules[k].prediction].push_back(k);
    for (const auto& [suffix, which] : by_suffix) {
      o << "<h3>When is " << label_text(p, suffix) << " used?</h3>\n";
      rules_table(o, p, which, p.id);
    }
  }

  void translations_cell(std::ostringstream& o, const json& translations) const {
    bool first = true;
    for (const auto& t : translations) {
      if (!first) o << ", ";
      o << l2(t.at("l2").get<std::string>()) << " (" << t.at("count").get<std::size_t>() << ")";
      first = false;
    }
  }

  void vocabulary_point(std::ostringstream& o, const GrammarPoint& p) const {
    const std::string kind = p.payload.value("kind", "");
    if (kind == "selection") {
      o << "<p>\"" << html_escape(p.payload.value("english", "")) << "\" has several translations: ";
      translations_cell(o, p.payload.value("candidates", json::array()));
      o << ".</p>\n";
      rule_point(o, p);
    } else if (kind == "categories") {
      std::size_t n = 0;
      for (const auto& [cat, words] : p.payload.value("categories", json::object()).items()) {
        o << "<h3>" << html_escape(cat) << "</h3>\n<table>\n<thead><tr><th>English</th><th>Translations</th><th>Examples</th></tr></thead>\n<tbody>\n";
        const std::size_t start = n;
        for (const auto& w : words) {
          ++n;
          o << "<tr><td>" << html_escape(w.at("english").get<std::string>()) << "</td><td>";
          translations_cell(o, w.at("translations"));
          o << "</td><td>";
          if (!w.at("examples").empty()) o << "<a href=\"#" << p.id << "-word-" << n << "\">examples</a>";
          o << "</td></tr>\n";
        }
        o << "</tbody>\n</table>\n";
        n = start;
        for (const auto& w : words) {
          ++n;
          if (w.at("examples").empty()) continue;
          o << "<div id=\"" << p.id << "-word-" << n << "\">\n<h4>" << html_escape(w.at("english").get<std::string>())
            << "</h4>\n<ol>\n" << examples_from_json(w.at("examples")) << "</ol>\n</div>\n";
        }
      }
    } else if (kind == "adjectives") {
      o << "<table>\n<thead><tr><th>Adjective</th><th>Meaning</th><th>Synonyms</th><th>Antonyms</th><th>Translations</th><th>Examples</th></tr></thead>\n<tbody>\n";
      std::size_t n = 0;
      const json& adjs = p.payload.value("adjectives", json::array());
      for (const auto& a : adjs) {
        ++n;
        o << "<tr><td>" << html_escape(a.at("adjective").get<std::string>()) << "</td><td>"
          << html_escape(a.at("gloss").get<std::string>()) << "</td><td>"
          << html_escape(text::join(a.at("synonyms").get<std::vector<std::string>>(), ", "))
          << "</td><td>" << html_escape(text::join(a.at("antonyms").get<std::vector<std::string>>(), ", "))
          << "</td><td>";
        translations_cell(o, a.at("translations"));
        o << "</td><td>";
        if (!a.at("examples").empty()) o << "<a href=\"#" << p.id << "-adj-" << n << "\">examples</a>";
        o << "</td></tr>\n";
      }
      o << "</tbody>\n</table>\n";
      n = 0;
      for (const auto& a : adjs) {
        ++n;
        if (a.at("examples").empty()) continue;
        o << "<div id=\"" << p.id << "-adj-" << n << "\">\n<h4>" << html_escape(a.at("adjective").get<std::string>())
          << "</h4>\n<ol>\n" << examples_from_json(a.at("examples")) << "</ol>\n</div>\n";
      }
    } else {
      rule_point(o, p);
    }
  }

  void general_point(std::ostringstream& o, const GrammarPoint& p) const {
    const json& values = p.payload.value("values", json::array());
    o << "<table>\n<thead><tr><th>Value</th><th>Count</th><th>Which " << abbr("word class")
      << "es show it</th><th>Frequent words</th></tr></thead>\n<tbody>\n";
    std::size_t n = 0;
    for (const auto& v : values) {
      o << "<tr><td>" << html_escape(v.at("value").get<std::string>()) << "</td><td>"
        << v.at("total_count").get<std::size_t>() << "</td><td>";
      bool first = true;
      for (const auto& u : v.at("by_upos")) {
        if (!first) o << ", ";
        o << html_escape(u.at("upos").get<std::string>()) << " (" << u.at("count").get<std::size_t>() << ")";
        first = false;
      }
      o << "</td><td>";
      first = true;
      for (const auto& f : v.at("example_forms")) {
        ++n;
        if (!first) o << ", ";
        o << "<a href=\"#" << p.id << "-form-" << n << "\">" << l2(f.at("form").get<std::string>())
          << "</a> (" << f.at("count").get<std::size_t>() << ")";
        first = false;
      }
      o << "</td></tr>\n";
    }
    o << "</tbody>\n</table>\n<ol>\n";
    n = 0;
    for (const auto& v : values) {
      for (const auto& f : v.at("example_forms")) {
        ++n;
        o << "<li id=\"" << p.id << "-form-" << n << "\"><b>" << l2(f.at("form").get<std::string>())
          << "</b> (" << abbr("lemma") << " " << l2(f.at("lemma").get<std::string>()) << ", "
          << html_escape(v.at("value").get<std::string>()) << ")<ul>\n"
          << example(example_from_json(f.at("example"))) << "</ul></li>\n";
      }
    }
    o << "</ol>\n";
  }

  const Report& report_;
  const Transliterator* translit_;
  std::set<Aspect> present_;
  std::string language_;
};

}  // namespace

std::vector<std::string> emit_html(const Report& report, const std::filesystem::path& out_dir,
                                   const Transliterator* translit) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw IoError("cannot create output directory " + out_dir.string());
  }
  Renderer r(report, translit);
  std::vector<std::string> written;
  text::write_file(out_dir / "index.html", r.index());
  written.emplace_back("index.html");
  for (Aspect a : kAllAspects) {
    const auto path = out_dir / page_name(a);
    if (r.present().contains(a)) {
      text::write_file(path, r.aspect_page(a));
      written.push_back(page_name(a));
    } else {
      std::filesystem::remove(path, ec);  // stale page from an earlier run
    }
  }
  return written;
}

}  // namespace gramlex
