#include "fixtures.hpp"

#include <map>
#include <regex>
#include <set>

#include "gramlex/bitext.hpp"
#include "gramlex/config.hpp"
#include "gramlex/lexicon.hpp"
#include "gramlex/pipeline.hpp"
#include "gramlex/text.hpp"
#include "gramlex/treebank.hpp"
#include "synth.hpp"

namespace fixtures {

using namespace gramlex;

Report sample_report() {
  RunConfig cfg;
  cfg.language = "xx";
  cfg.learner.min_leaf = 5;
  cfg.agreement_attributes = {"Gender"};
  const Treebank tb = parse_conllu(synth::ud_style_treebank(200, 3), "xx");
  PipelineResult extract =
      run_extract(tb, cfg, {"word_order", "agreement", "suffix", "general"}, 2);

  const auto pc = synth::rice_bitext(200, 4);
  const Bitext bt = make_bitext(pc.source, pc.target);
  TranslationTable table;
  const auto links = align_bitext(bt, {}, &table);
  const SenseLexicon lex = SenseLexicon::parse(synth::fixture_lexicon());
  const CategoryConfig cats = CategoryConfig::parse(synth::fixture_categories());
  VocabInputs in;
  in.bitext = &bt;
  in.alignments = &links;
  in.table = &table;
  in.lexicon = &lex;
  in.categories = &cats;
  VocabResult vocab = run_vocab(in, cfg, 2);

  Report r;
  r.config_digest = cfg.digest();
  r.metadata["methods"] = method_metadata();
  r.points = std::move(extract.points);
  for (auto& p : vocab.pipeline.points) r.points.push_back(std::move(p));
  return r;
}

std::vector<std::string> site_problems(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::map<std::string, std::set<std::string>> anchors;
  std::map<std::string, std::string> pages;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".html") continue;
    const std::string name = entry.path().filename().string();
    pages[name] = text::read_file(entry.path());
    static const std::regex id_re(R"re(\sid="([^"]+)")re");
    auto& ids = anchors[name];
    for (std::sregex_iterator it(pages[name].begin(), pages[name].end(), id_re), end; it != end; ++it) {
      ids.insert((*it)[1]);
    }
  }
  std::vector<std::string> problems;
  static const std::regex ref_re(R"re(\s(?:href|src)="([^"]*)")re");
  for (const auto& [name, html] : pages) {
    if (html.find("<script") != std::string::npos) problems.push_back(name + ": script tag");
    for (std::sregex_iterator it(html.begin(), html.end(), ref_re), end; it != end; ++it) {
      const std::string target = (*it)[1];
      if (target.find("://") != std::string::npos || text::starts_with(target, "//")) {
        problems.push_back(name + ": external reference " + target);
        continue;
      }
      const auto hash = target.find('#');
      const std::string file = hash == 0 ? name : target.substr(0, hash);
      if (!pages.contains(file)) {
        problems.push_back(name + ": missing page " + target);
        continue;
      }
      if (hash != std::string::npos && !anchors[file].contains(target.substr(hash + 1))) {
        problems.push_back(name + ": missing anchor " + target);
      }
    }
  }
  return problems;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gramlex_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
