#include "gramlex/bitext.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "gramlex/error.hpp"
#include "gramlex/text.hpp"

namespace gramlex {

const SentencePair* Bitext::find(std::string_view pair_id) const {
  // pair ids are line numbers, usually dense; fall back to a scan
  if (pairs.empty()) return nullptr;
  int n = 0;
  auto [ptr, ec] = std::from_chars(pair_id.data(), pair_id.data() + pair_id.size(), n);
  if (ec == std::errc() && n >= 1) {
    const auto guess = std::min(pairs.size(), static_cast<std::size_t>(n)) - 1;
    for (std::size_t i = guess + 1; i-- > 0;) {
      if (pairs[i].pair_id == pair_id) return &pairs[i];
    }
  }
  for (const auto& p : pairs) {
    if (p.pair_id == pair_id) return &p;
  }
  return nullptr;
}

Bitext make_bitext(const std::vector<std::string>& source_lines,
                   const std::vector<std::string>& target_lines, const BitextOptions& opts) {
  if (source_lines.size() != target_lines.size()) {
    throw Error("line count mismatch: " + std::to_string(source_lines.size()) + " source vs " +
                std::to_string(target_lines.size()) + " target");
  }
  Bitext bt;
  for (std::size_t i = 0; i < source_lines.size(); ++i) {
    SentencePair p;
    p.source = text::split_whitespace(opts.lowercase_source ? text::fold_case(source_lines[i])
                                                            : source_lines[i]);
    p.target = text::split_whitespace(target_lines[i]);
    p.pair_id = std::to_string(i + 1);
    if (p.source.empty() || p.target.empty()) {
      ++bt.dropped_empty;
    } else if (p.source.size() > opts.max_len || p.target.size() > opts.max_len) {
      ++bt.dropped_long;
    } else {
      bt.pairs.push_back(std::move(p));
    }
  }
  return bt;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  const std::string content = text::read_file(path);
  if (!text::is_valid_utf8(content)) throw EncodingError(path + ": invalid UTF-8");
  std::vector<std::string> lines = text::split(content, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
  }
  return lines;
}

}  // namespace

Bitext load_bitext(const std::string& source_path, const std::string& target_path,
                   const BitextOptions& opts) {
  return make_bitext(read_lines(source_path), read_lines(target_path), opts);
}

double TranslationTable::prob(std::string_view source, std::string_view target) const {
  auto s = src_index_.find(std::string(source));
  auto t = tgt_index_.find(std::string(target));
  if (s == src_index_.end() || t == tgt_index_.end()) return 0.0;
  const auto& row = rows_[static_cast<std::size_t>(s->second)];
  auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(t->second, 0.0),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  return (it != row.end() && it->first == t->second) ? it->second : 0.0;
}

std::vector<std::pair<std::string, double>> TranslationTable::row(std::string_view source) const {
  std::vector<std::pair<std::string, double>> out;
  auto s = src_index_.find(std::string(source));
  if (s == src_index_.end()) return out;
  for (const auto& [t, p] : rows_[static_cast<std::size_t>(s->second)]) {
    out.emplace_back(tgt_vocab_[static_cast<std::size_t>(t)], p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> TranslationTable::sources() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < src_vocab_.size(); ++i) {
    if (!rows_[i].empty()) out.push_back(src_vocab_[i]);
  }
  return out;
}

bool TranslationTable::has_target(std::string_view target) const {
  return tgt_index_.contains(std::string(target));
}

double TranslationTable::max_row_error() const {
  double worst = 0.0;
  for (const auto& row : rows_) {
    if (row.empty()) continue;
    double sum = 0.0;
    for (const auto& [t, p] : row) sum += p;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

std::string TranslationTable::to_tsv(double min_prob) const {
  std::vector<std::tuple<std::string, std::string, double>> entries;
  for (std::size_t s = 0; s < rows_.size(); ++s) {
    for (const auto& [t, p] : rows_[s]) {
      if (p >= min_prob) entries.emplace_back(src_vocab_[s], tgt_vocab_[static_cast<std::size_t>(t)], p);
    }
  }
  std::sort(entries.begin(), entries.end());
  std::ostringstream out;
  out << std::setprecision(6);
  for (const auto& [s, t, p] : entries) out << s << '\t' << t << '\t' << p << '\n';
  return out.str();
}

// Builds the co-occurrence cells once; EM then touches only flat arrays.
class Ibm1Trainer {
 public:
  Ibm1Trainer(const Bitext& bt, const Ibm1Options& opts) : opts_(opts) {
    table_.src_vocab_.emplace_back(TranslationTable::kNull);
    table_.src_index_.emplace(std::string(TranslationTable::kNull), 0);
    for (const auto& p : bt.pairs) {
      PairCells pc;
      std::vector<int> src;
      if (opts.use_null) src.push_back(0);
      for (const auto& w : p.source) src.push_back(intern(table_.src_vocab_, table_.src_index_, w));
      for (const auto& w : p.target) {
        const int f = intern(table_.tgt_vocab_, table_.tgt_index_, w);
        for (int s : src) pc.cells.push_back(cell(s, f));
      }
      pc.src_count = src.size();
      pc.tgt_count = p.target.size();
      pairs_.push_back(std::move(pc));
    }
    // Uniform start: t(f|s) = 1 / |{f : (s, f) co-occur}|.
    std::vector<std::size_t> fanout(table_.src_vocab_.size(), 0);
    for (int s : cell_src_) ++fanout[static_cast<std::size_t>(s)];
    prob_.resize(cell_src_.size());
    for (std::size_t c = 0; c < prob_.size(); ++c) {
      prob_[c] = 1.0 / static_cast<double>(fanout[static_cast<std::size_t>(cell_src_[c])]);
    }
  }

  TranslationTable run(Ibm1Trace* trace) {
    std::vector<double> counts(prob_.size());
    std::vector<double> totals(table_.src_vocab_.size());
    for (int it = 0; it < opts_.iterations; ++it) {
      std::fill(counts.begin(), counts.end(), 0.0);
      std::fill(totals.begin(), totals.end(), 0.0);
      double ll = 0.0;
      for (const auto& pc : pairs_) {
        const double norm = std::log(static_cast<double>(pc.src_count));
        for (std::size_t j = 0; j < pc.tgt_count; ++j) {
          const int* cells = &pc.cells[j * pc.src_count];
          double denom = 0.0;
          for (std::size_t i = 0; i < pc.src_count; ++i) denom += prob_[static_cast<std::size_t>(cells[i])];
          ll += std::log(denom) - norm;
          for (std::size_t i = 0; i < pc.src_count; ++i) {
            const auto c = static_cast<std::size_t>(cells[i]);
            const double share = prob_[c] / denom;
            counts[c] += share;
            totals[static_cast<std::size_t>(cell_src_[c])] += share;
          }
        }
      }
      if (trace) trace->log_likelihood.push_back(ll);
      for (std::size_t c = 0; c < prob_.size(); ++c) {
        const double total = totals[static_cast<std::size_t>(cell_src_[c])];
        prob_[c] = total > 0.0 ? counts[c] / total : 0.0;
      }
      if (trace) {
        publish();
        trace->row_error.push_back(table_.max_row_error());
      }
    }
    if (trace) trace->log_likelihood.push_back(log_likelihood());
    publish();
    return std::move(table_);
  }

 private:
  struct PairCells {
    std::vector<int> cells;  // target-major: cells[j * src_count + i]
    std::size_t src_count = 0;
    std::size_t tgt_count = 0;
  };

  static int intern(std::vector<std::string>& vocab, std::unordered_map<std::string, int>& index,
                    const std::string& w) {
    auto [it, inserted] = index.emplace(w, static_cast<int>(vocab.size()));
    if (inserted) vocab.push_back(w);
    return it->second;
  }

  int cell(int s, int f) {
    const auto key = (static_cast<std::uint64_t>(s) << 32) | static_cast<std::uint32_t>(f);
    auto [it, inserted] = cell_index_.emplace(key, static_cast<int>(cell_src_.size()));
    if (inserted) {
      cell_src_.push_back(s);
      cell_tgt_.push_back(f);
    }
    return it->second;
  }

  double log_likelihood() const {
    double ll = 0.0;
    for (const auto& pc : pairs_) {
      const double norm = std::log(static_cast<double>(pc.src_count));
      for (std::size_t j = 0; j < pc.tgt_count; ++j) {
        double denom = 0.0;
        for (std::size_t i = 0; i < pc.src_count; ++i) {
          denom += prob_[static_cast<std::size_t>(pc.cells[j * pc.src_count + i])];
        }
        ll += std::log(denom) - norm;
      }
    }
    return ll;
  }

  void publish() {
    table_.rows_.assign(table_.src_vocab_.size(), {});
    for (std::size_t c = 0; c < prob_.size(); ++c) {
      table_.rows_[static_cast<std::size_t>(cell_src_[c])].emplace_back(cell_tgt_[c], prob_[c]);
    }
    for (auto& row : table_.rows_) std::sort(row.begin(), row.end());
  }

  const Ibm1Options& opts_;
  TranslationTable table_;
  std::vector<PairCells> pairs_;
  std::unordered_map<std::uint64_t, int> cell_index_;
  std::vector<int> cell_src_;
  std::vector<int> cell_tgt_;
  std::vector<double> prob_;
};

TranslationTable train_ibm1(const Bitext& bt, const Ibm1Options& opts, Ibm1Trace* trace) {
  if (bt.pairs.empty()) throw Error("train_ibm1: empty bitext");
  if (opts.iterations < 1) throw Error("train_ibm1: iterations must be >= 1");
  return Ibm1Trainer(bt, opts).run(trace);
}

Bitext reversed(const Bitext& bt) {
  Bitext out = bt;
  for (auto& p : out.pairs) std::swap(p.source, p.target);
  return out;
}

Alignment align(const SentencePair& pair, const TranslationTable& table, bool use_null) {
  Alignment links;
  for (std::size_t j = 0; j < pair.target.size(); ++j) {
    const std::string& f = pair.target[j];
    if (!table.has_target(f)) continue;
    int best = -1;
    double best_p = 0.0;
    for (std::size_t i = 0; i < pair.source.size(); ++i) {
      const double p = table.prob(pair.source[i], f);
      if (p > best_p) {
        best_p = p;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) continue;
    if (use_null && table.prob(TranslationTable::kNull, f) > best_p) continue;
    links.emplace(best, static_cast<int>(j));
  }
  return links;
}

Alignment symmetrize(const Alignment& forward, const Alignment& reverse_transposed) {
  Alignment out;
  std::set_intersection(forward.begin(), forward.end(), reverse_transposed.begin(),
                        reverse_transposed.end(), std::inserter(out, out.end()));
  return out;
}

std::vector<Alignment> align_bitext(const Bitext& bt, const Ibm1Options& opts,
                                    TranslationTable* forward_table) {
  TranslationTable fwd = train_ibm1(bt, opts);
  const Bitext rev_bt = reversed(bt);
  const TranslationTable rev = train_ibm1(rev_bt, opts);
  std::vector<Alignment> out;
  out.reserve(bt.pairs.size());
  for (std::size_t k = 0; k < bt.pairs.size(); ++k) {
    out.push_back(symmetrize(align(bt.pairs[k], fwd, opts.use_null),
                             transpose(align(rev_bt.pairs[k], rev, opts.use_null))));
  }
  if (forward_table) *forward_table = std::move(fwd);
  return out;
}

std::string to_pharaoh(const Alignment& a) {
  std::string out;
  for (const auto& [i, j] : a) {
    if (!out.empty()) out += ' ';
    out += std::to_string(i) + "-" + std::to_string(j);
  }
  return out;
}

Alignment parse_pharaoh(std::string_view line) {
  Alignment a;
  for (const auto& tok : text::split_whitespace(line)) {
    const auto dash = tok.find('-');
    int i = 0, j = 0;
    const char* b = tok.data();
    const char* e = b + tok.size();
    if (dash == std::string::npos ||
        std::from_chars(b, b + dash, i).ec != std::errc() ||
        std::from_chars(b + dash + 1, e, j).ec != std::errc()) {
      throw ParseError("malformed alignment link '" + tok + "'", 0);
    }
    a.emplace(i, j);
  }
  return a;
}

}  // namespace gramlex
