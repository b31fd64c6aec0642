#include "gramlex/treebank.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "gramlex/error.hpp"
#include "gramlex/text.hpp"

namespace gramlex {

const std::string* Token::feat(std::string_view attribute) const {
  for (const auto& [name, value] : feats) {
    if (name == attribute) return &value;
  }
  return nullptr;
}

const Token* Sentence::token(int id) const {
  if (id < 1 || static_cast<std::size_t>(id) > tokens.size()) return nullptr;
  const Token& t = tokens[static_cast<std::size_t>(id) - 1];
  return t.id == id ? &t : nullptr;
}

std::string Sentence::text() const {
  for (const auto& c : comments) {
    if (text::starts_with(c, "# text =")) return text::trim(std::string_view(c).substr(8));
  }
  return text::join(forms(), " ");
}

std::vector<std::string> Sentence::forms() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.form);
  return out;
}

const Sentence* Treebank::find(std::string_view sent_id) const {
  auto it = index_.find(std::string(sent_id));
  return it == index_.end() ? nullptr : &sentences[it->second];
}

std::size_t Treebank::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.tokens.size();
  return n;
}

void Treebank::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    auto& s = sentences[i];
    if (index_.contains(s.sent_id)) {
      const std::string base = s.sent_id;
      for (int n = 2;; ++n) {
        std::string candidate = base + "-" + std::to_string(n);
        if (!index_.contains(candidate)) {
          s.sent_id = std::move(candidate);
          ++stats.renamed_sent_ids;
          break;
        }
      }
    }
    index_.emplace(s.sent_id, i);
  }
}

void Treebank::append(Treebank other) {
  for (auto& s : other.sentences) sentences.push_back(std::move(s));
  for (auto& p : other.source_paths) source_paths.push_back(std::move(p));
  stats.sentences += other.stats.sentences;
  stats.tokens += other.stats.tokens;
  stats.multiword_ranges_dropped += other.stats.multiword_ranges_dropped;
  stats.empty_nodes_dropped += other.stats.empty_nodes_dropped;
  stats.renamed_sent_ids += other.stats.renamed_sent_ids;
  reindex();
}

ExampleRef make_example(const Sentence& s, std::vector<int> highlight) {
  ExampleRef ex;
  ex.sent_id = s.sent_id;
  ex.tokens = s.forms();
  std::sort(highlight.begin(), highlight.end());
  highlight.erase(std::unique(highlight.begin(), highlight.end()), highlight.end());
  ex.highlight = std::move(highlight);
  ex.translation = s.translation.value_or("");
  return ex;
}

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::DanglingHead: return "dangling-head";
    case Violation::Kind::SelfHead: return "self-head";
    case Violation::Kind::ZeroRoots: return "zero-roots";
    case Violation::Kind::MultiRoot: return "multi-root";
    case Violation::Kind::NonContiguousIds: return "non-contiguous-ids";
  }
  return "unknown";
}

namespace {

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string unless_underscore(const std::string& s) { return s == "_" ? std::string() : s; }

Feats parse_feats(const std::string& column, std::size_t line_no) {
  Feats feats;
  if (column == "_" || column.empty()) return feats;
  std::set<std::string> seen;
  for (const auto& item : text::split(column, '|')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw ParseError("malformed FEATS item '" + item + "'", line_no);
    }
    std::string name = item.substr(0, eq);
    if (!seen.insert(name).second) {
      throw ParseError("duplicate FEATS attribute '" + name + "'", line_no);
    }
    feats.emplace_back(std::move(name), item.substr(eq + 1));
  }
  return feats;
}

std::string comment_value(const std::string& comment, std::string_view key) {
  // "# key = value"
  std::string_view rest(comment);
  rest.remove_prefix(1);
  const std::string trimmed = text::trim(rest);
  if (!text::starts_with(trimmed, key)) return {};
  std::string_view after = std::string_view(trimmed).substr(key.size());
  const std::string t = text::trim(after);
  if (t.empty() || t[0] != '=') return {};
  return text::trim(std::string_view(t).substr(1));
}

bool is_key(const std::string& comment, std::string_view key) {
  std::string_view rest(comment);
  rest.remove_prefix(1);
  const std::string trimmed = text::trim(rest);
  if (!text::starts_with(trimmed, key)) return false;
  const std::string after = text::trim(std::string_view(trimmed).substr(key.size()));
  return !after.empty() && after[0] == '=';
}

}  // namespace

Treebank parse_conllu(std::string_view input, std::string language) {
  Treebank tb;
  tb.language = std::move(language);

  Sentence current;
  bool in_sentence = false;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (!in_sentence) return;
    if (!current.tokens.empty()) {
      for (const auto& c : current.comments) {
        if (is_key(c, "sent_id")) current.sent_id = comment_value(c, "sent_id");
        if (is_key(c, "text_en")) current.translation = comment_value(c, "text_en");
      }
      if (current.sent_id.empty()) current.sent_id = "s" + std::to_string(tb.sentences.size() + 1);
      tb.stats.tokens += current.tokens.size();
      tb.sentences.push_back(std::move(current));
    }
    current = Sentence{};
    in_sentence = false;
  };

  std::size_t pos = 0;
  while (pos <= input.size()) {
    std::size_t end = input.find('\n', pos);
    if (end == std::string_view::npos) end = input.size();
    std::string_view line = input.substr(pos, end - pos);
    const bool last = end == input.size();
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!text::is_valid_utf8(line)) {
      throw EncodingError("line " + std::to_string(line_no) + ": invalid UTF-8");
    }

    if (text::trim(line).empty()) {
      flush();
      if (last) break;
      continue;
    }
    in_sentence = true;
    if (line[0] == '#') {
      current.comments.emplace_back(line);
      if (last) break;
      continue;
    }

    auto cols = text::split(line, '\t');
    if (cols.size() != 10) {
      throw ParseError("expected 10 tab-separated columns, found " + std::to_string(cols.size()),
                       line_no);
    }
    const std::string& id_col = cols[0];
    if (id_col.find('-') != std::string::npos) {
      ++tb.stats.multiword_ranges_dropped;
      if (last) break;
      continue;
    }
    if (id_col.find('.') != std::string::npos) {
      ++tb.stats.empty_nodes_dropped;
      if (last) break;
      continue;
    }
    const auto id = parse_int(id_col);
    if (!id || *id < 1) throw ParseError("invalid token id '" + id_col + "'", line_no);
    const auto head = parse_int(cols[6]);
    if (!head || *head < 0) throw ParseError("non-integer head '" + cols[6] + "'", line_no);

    Token t;
    t.id = *id;
    t.form = unless_underscore(cols[1]);
    t.lemma = unless_underscore(cols[2]);
    t.upos = unless_underscore(cols[3]);
    t.xpos = unless_underscore(cols[4]);
    t.feats = parse_feats(cols[5], line_no);
    t.head = *head;
    t.deprel = unless_underscore(cols[7]);
    t.deps = unless_underscore(cols[8]);
    t.misc = unless_underscore(cols[9]);
    current.tokens.push_back(std::move(t));
    if (last) break;
  }
  flush();
  tb.stats.sentences = tb.sentences.size();
  tb.reindex();
  return tb;
}

Treebank read_conllu_file(const std::string& path, std::string language) {
  Treebank tb;
  try {
    tb = parse_conllu(text::read_file(path), std::move(language));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  } catch (const EncodingError& e) {
    throw EncodingError(path + ": " + e.what());
  }
  tb.source_paths.push_back(path);
  return tb;
}

namespace {

const std::string& or_underscore(const std::string& s) {
  static const std::string kUnderscore = "_";
  return s.empty() ? kUnderscore : s;
}

}  // namespace

std::string serialize_conllu(const Treebank& tb) {
  std::string out;
  for (const auto& s : tb.sentences) {
    for (const auto& c : s.comments) {
      out += c;
      out += '\n';
    }
    for (const auto& t : s.tokens) {
      Feats sorted = t.feats;
      std::sort(sorted.begin(), sorted.end());
      std::string feats;
      for (const auto& [k, v] : sorted) {
        if (!feats.empty()) feats += '|';
        feats += k + "=" + v;
      }
      out += std::to_string(t.id);
      const std::string* cols[] = {&t.form, &t.lemma, &t.upos, &t.xpos, &feats};
      for (const std::string* col : cols) {
        out += '\t';
        out += or_underscore(*col);
      }
      out += '\t';
      out += std::to_string(t.head);
      for (const std::string* col : {&t.deprel, &t.deps, &t.misc}) {
        out += '\t';
        out += or_underscore(*col);
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

std::vector<Violation> validate(const Sentence& s) {
  std::vector<Violation> out;
  const int n = static_cast<int>(s.tokens.size());
  for (int i = 0; i < n; ++i) {
    if (s.tokens[i].id != i + 1) {
      out.push_back({Violation::Kind::NonContiguousIds, s.sent_id,
                     "token at position " + std::to_string(i + 1) + " has id " +
                         std::to_string(s.tokens[i].id)});
      break;
    }
  }
  int roots = 0;
  for (const auto& t : s.tokens) {
    if (t.head == 0) {
      ++roots;
    } else if (t.head == t.id) {
      out.push_back({Violation::Kind::SelfHead, s.sent_id, "token " + std::to_string(t.id)});
    } else if (t.head > n) {
      out.push_back({Violation::Kind::DanglingHead, s.sent_id,
                     "token " + std::to_string(t.id) + " has head " + std::to_string(t.head)});
    }
  }
  if (roots == 0) {
    out.push_back({Violation::Kind::ZeroRoots, s.sent_id, "no token has head 0"});
  } else if (roots > 1) {
    out.push_back({Violation::Kind::MultiRoot, s.sent_id, std::to_string(roots) + " roots"});
  }
  return out;
}

std::vector<Violation> validate(const Treebank& tb) {
  std::vector<Violation> out;
  for (const auto& s : tb.sentences) {
    auto v = validate(s);
    out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  }
  return out;
}

bool is_well_formed(const Sentence& s) { return validate(s).empty(); }

}  // namespace gramlex
