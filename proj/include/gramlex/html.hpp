#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gramlex/report.hpp"

namespace gramlex {

/// Script-to-Roman mapping applied longest-match-first; unmapped code points
/// are copied through.
class Transliterator {
 public:
  Transliterator() = default;
  /// TSV lines: script characters, TAB, roman string. '#' starts a comment.
  static Transliterator parse(std::string_view tsv);
  static Transliterator load(const std::string& path);

  std::string apply(std::string_view s) const;
  bool empty() const { return table_.empty(); }

 private:
  std::map<std::u32string, std::string> table_;
  std::size_t longest_ = 0;
};

std::string html_escape(std::string_view s);

/// Plain-language reading of a feature name ("dep-upos" -> "dependent's word class").
std::string describe_feature(std::string_view feature);

/// Writes index.html plus one page per aspect present in the report
/// (word_order.html, agreement.html, suffix.html, vocabulary.html,
/// general.html). Returns the written file names in order. Output bytes are
/// a pure function of (report, transliterator). Throws IoError.
std::vector<std::string> emit_html(const Report& report, const std::filesystem::path& out_dir,
                                   const Transliterator* translit = nullptr);

}  // namespace gramlex
