#include "gramlex/cli.hpp"

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gramlex/config.hpp"
#include "gramlex/error.hpp"
#include "gramlex/html.hpp"
#include "gramlex/pipeline.hpp"
#include "gramlex/report.hpp"
#include "gramlex/schema.hpp"
#include "gramlex/text.hpp"

namespace gramlex::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::vector<std::string> treebanks;
  std::string bitext_src;
  std::string bitext_tgt;
  std::string lexicon;
  std::string categories;
  std::string out = "out";
  std::string translit;
  std::string config;
  std::string language;
  std::string created;
  std::string questions = "word_order,agreement,suffix";
  std::string format = "tsv";
  std::vector<std::string> inputs;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::optional<std::size_t> min_support;
  std::optional<int> max_depth;
  std::optional<std::size_t> min_count;
  std::optional<double> min_prob;
};

RunConfig make_config(const Options& o) {
  RunConfig cfg;
  if (!o.config.empty()) apply_config_file(cfg, o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.min_support) cfg.learner.min_leaf = *o.min_support;
  if (o.max_depth) cfg.learner.max_depth = *o.max_depth;
  if (o.min_count) cfg.thresholds.divergence.min_count = *o.min_count;
  if (o.min_prob) cfg.thresholds.divergence.min_prob = *o.min_prob;
  if (!o.language.empty()) cfg.language = o.language;
  check_config(cfg);
  cfg.treebanks = o.treebanks;
  cfg.bitext_src = o.bitext_src;
  cfg.bitext_tgt = o.bitext_tgt;
  cfg.lexicon = o.lexicon;
  cfg.categories = o.categories;
  cfg.out_dir = o.out;
  cfg.translit = o.translit;
  return cfg;
}

unsigned job_count(const Options& o) {
  if (o.jobs) return std::max(*o.jobs, 1u);
  return std::max(std::thread::hardware_concurrency(), 1u);
}

std::string created_stamp(const Options& o) {
  if (!o.created.empty()) return o.created;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long long secs = std::strtoll(env, &end, 10);
    if (end != nullptr && *end == '\0' && secs >= 0) {
      const std::time_t t = static_cast<std::time_t>(secs);
      std::tm tm{};
      gmtime_r(&t, &tm);
      char buf[32];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
      return buf;
    }
  }
  return Report{}.created;
}

/// "mr_ufal-ud-train.conllu" -> "mr", "train.kn" -> "kn".
std::string language_guess(const std::string& path) {
  const fs::path p(path);
  std::string ext = p.extension().string();
  if (!ext.empty()) ext.erase(0, 1);
  if (!ext.empty() && ext != "conllu" && ext != "txt" && ext != "tsv" && ext.size() <= 3) return ext;
  const std::string stem = p.stem().string();
  return stem.substr(0, stem.find_first_of("_-."));
}

Treebank load_treebanks(const RunConfig& cfg) {
  const std::string lang = cfg.language.empty() ? language_guess(cfg.treebanks.front()) : cfg.language;
  Treebank tb;
  tb.language = lang;
  for (const auto& path : cfg.treebanks) tb.append(read_conllu_file(path, lang));
  return tb;
}

json fingerprints(const std::vector<std::string>& paths) {
  json a = json::array();
  for (const auto& p : paths) {
    if (p.empty()) continue;
    a.push_back({{"file", fs::path(p).filename().string()},
                 {"fnv1a64", text::hex64(text::fnv1a64(text::read_file(p)))}});
  }
  return a;
}

fs::path report_path(const std::string& in) {
  const fs::path p(in);
  return fs::is_directory(p) ? p / "report.json" : p;
}

struct Stage {
  std::string name;
  std::vector<GrammarPoint> points;
  std::vector<LearnedQuestion> learned;
  json meta = json::object();
  std::vector<std::string> warnings;
  std::size_t sentences = 0;
  std::size_t instances = 0;
};

void write_site(const Report& rep, const fs::path& dir, const std::string& translit_path) {
  std::optional<Transliterator> tr;
  if (!translit_path.empty()) tr = Transliterator::load(translit_path);
  emit_html(rep, dir, tr ? &*tr : nullptr);
}

void check_schema(const Report& rep) {
  const auto errs = schema::validate_report(to_json(rep));
  if (!errs.empty()) throw Error("report does not match its schema: " + errs.front());
}

void write_stage(const RunConfig& cfg, const Options& o, Stage st, std::ostream& err) {
  const fs::path out(cfg.out_dir);
  const fs::path rp = out / "report.json";
  Report rep;
  if (fs::exists(rp)) rep = read_report(rp.string());
  rep.created = created_stamp(o);
  rep.metadata["methods"] = method_metadata();
  st.meta["sentences"] = st.sentences;
  st.meta["instances"] = st.instances;
  st.meta["warnings"] = st.warnings;
  rep.metadata["stages"][st.name] = st.meta;
  std::string digests;
  for (const auto& [name, meta] : rep.metadata["stages"].items()) {
    digests += name + "=" + meta.value("config_digest", "") + "\n";
  }
  rep.config_digest = text::hex64(text::fnv1a64(digests));

  std::size_t rules = 0;
  for (const auto& p : st.points) rules += p.rules.size();
  const std::size_t n_points = st.points.size();
  upsert_points(rep, st.points);
  check_schema(rep);

  text::write_file(rp, emit_json(rep));
  for (const auto& lq : st.learned) {
    text::write_file(out / "trees" / (lq.point_id + ".json"), lq.tree.to_json().dump(2) + "\n");
  }
  write_site(rep, out / "site", cfg.translit);

  for (const auto& w : st.warnings) err << "warning: " << w << "\n";
  err << st.name << " sentences=" << st.sentences << " instances=" << st.instances
      << " points=" << n_points << " rules=" << rules << " warnings=" << st.warnings.size() << "\n";
}

json stats_json(const ParseStats& s) {
  return {{"sentences", s.sentences},
          {"tokens", s.tokens},
          {"multiword_ranges_dropped", s.multiword_ranges_dropped},
          {"empty_nodes_dropped", s.empty_nodes_dropped},
          {"renamed_sent_ids", s.renamed_sent_ids}};
}

int do_extract(const Options& o, std::ostream& err) {
  RunConfig cfg = make_config(o);
  std::set<std::string> questions;
  for (const auto& q : text::split(o.questions, ',')) {
    const std::string t = text::trim(q);
    if (t.empty()) continue;
    if (!known_questions().contains(t)) {
      err << "error: unknown question '" << t << "' (expected word_order, agreement, suffix, general)\n";
      return kExitUsage;
    }
    questions.insert(t);
  }
  const Treebank tb = load_treebanks(cfg);
  if (cfg.language.empty()) cfg.language = tb.language;
  PipelineResult r = run_extract(tb, cfg, questions, job_count(o));

  Stage st;
  st.name = "extract";
  st.points = std::move(r.points);
  st.learned = std::move(r.learned);
  st.warnings = std::move(r.warnings);
  st.sentences = r.sentences;
  st.instances = r.instances;
  st.meta = {{"config_digest", cfg.digest()},
             {"settings", cfg.settings_json()},
             {"questions", questions},
             {"inputs", fingerprints(cfg.treebanks)},
             {"treebank", stats_json(tb.stats)}};
  write_stage(cfg, o, std::move(st), err);
  return kExitOk;
}

int do_summarize(const Options& o, std::ostream& err) {
  RunConfig cfg = make_config(o);
  const Treebank tb = load_treebanks(cfg);
  if (cfg.language.empty()) cfg.language = tb.language;
  Stage st;
  st.name = "summarize";
  st.points = summarize_points(tb, cfg.language, cfg.thresholds.summary_examples);
  st.sentences = tb.sentences.size();
  st.meta = {{"config_digest", cfg.digest()},
             {"inputs", fingerprints(cfg.treebanks)},
             {"treebank", stats_json(tb.stats)}};
  write_stage(cfg, o, std::move(st), err);
  return kExitOk;
}

int do_vocab(const Options& o, std::ostream& err) {
  RunConfig cfg = make_config(o);
  if (cfg.language.empty()) {
    const fs::path rp = fs::path(cfg.out_dir) / "report.json";
    if (fs::exists(rp)) {
      const Report existing = read_report(rp.string());
      if (!existing.points.empty()) cfg.language = existing.points.front().language;
    }
    if (cfg.language.empty()) cfg.language = language_guess(cfg.bitext_tgt);
  }
  const Bitext bt = load_bitext(cfg.bitext_src, cfg.bitext_tgt,
                                BitextOptions{cfg.thresholds.max_sentence_len, true});
  if (bt.pairs.empty()) throw Error("bitext has no usable sentence pairs");

  TranslationTable table;
  const auto alignments = align_bitext(bt, Ibm1Options{cfg.thresholds.em_iterations, true}, &table);

  std::optional<TargetLemmas> lemmas;
  if (!cfg.treebanks.empty() && cfg.thresholds.merge_lemmas) {
    lemmas = target_lemmas_from_treebank(bt, load_treebanks(cfg));
  }
  std::optional<SenseLexicon> lex;
  if (!cfg.lexicon.empty()) lex = SenseLexicon::load(cfg.lexicon);
  std::optional<CategoryConfig> cats;
  std::string cat_text;
  if (!cfg.categories.empty()) {
    cat_text = text::read_file(cfg.categories);
    cats = CategoryConfig::parse(cat_text);
  }

  VocabInputs in;
  in.bitext = &bt;
  in.alignments = &alignments;
  in.table = &table;
  in.lemmas = lemmas ? &*lemmas : nullptr;
  in.lexicon = lex ? &*lex : nullptr;
  in.categories = cats ? &*cats : nullptr;
  VocabResult vr = run_vocab(in, cfg, job_count(o));

  const fs::path out(cfg.out_dir);
  std::string links;
  for (std::size_t k = 0; k < bt.pairs.size(); ++k) {
    links += bt.pairs[k].pair_id + "\t" + to_pharaoh(alignments[k]) + "\n";
  }
  text::write_file(out / "alignments.txt", links);
  text::write_file(out / "ttable.tsv", table.to_tsv());
  text::write_file(out / "translation_sets.tsv", translation_sets_tsv(vr.all_sets));

  Stage st;
  st.name = "vocab";
  st.points = std::move(vr.pipeline.points);
  st.learned = std::move(vr.pipeline.learned);
  st.warnings = std::move(vr.pipeline.warnings);
  st.sentences = bt.pairs.size();
  st.instances = vr.pipeline.instances;
  std::vector<std::string> inputs{cfg.bitext_src, cfg.bitext_tgt, cfg.lexicon, cfg.categories};
  inputs.insert(inputs.end(), cfg.treebanks.begin(), cfg.treebanks.end());
  json divergent = json::array();
  for (const auto& ts : vr.divergent) divergent.push_back(ts.english_lemma);
  st.meta = {{"config_digest", cfg.digest(cat_text)},
             {"settings", cfg.settings_json()},
             {"inputs", fingerprints(inputs)},
             {"bitext",
              {{"pairs", bt.pairs.size()},
               {"dropped_empty", bt.dropped_empty},
               {"dropped_long", bt.dropped_long}}},
             {"translation_sets", vr.all_sets.size()},
             {"divergent", divergent}};
  write_stage(cfg, o, std::move(st), err);
  return kExitOk;
}

int do_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  const Report rep = read_report(report_path(o.inputs.front()).string());
  std::size_t rows = 0;
  if (o.format == "json") {
    json a = json::array();
    for (const auto& line : text::split(evaluation_tsv(rep), '\n')) {
      const auto cols = text::split(line, '\t');
      if (cols.size() != 4 || cols[0] == "concept") continue;
      a.push_back({{"concept", cols[0]}, {"type", cols[1]}, {"autolex", std::stod(cols[2])},
                   {"baseline", std::stod(cols[3])}});
    }
    rows = a.size();
    out << a.dump(2) << "\n";
  } else {
    const std::string tsv = evaluation_tsv(rep);
    for (char c : tsv) rows += c == '\n';
    rows -= 1;
    out << tsv;
  }
  err << "evaluate points=" << rep.points.size() << " rows=" << rows << "\n";
  return kExitOk;
}

int do_report(const Options& o, std::ostream& err) {
  std::vector<std::string> paths;
  for (const auto& in : o.inputs) paths.push_back(report_path(in).string());
  Report rep = merge_report_files(paths);
  check_schema(rep);
  const fs::path out(o.out);
  text::write_file(out / "report.json", emit_json(rep));
  write_site(rep, out / "site", o.translit);
  std::size_t rules = 0;
  for (const auto& p : rep.points) rules += p.rules.size();
  err << "report inputs=" << paths.size() << " points=" << rep.points.size() << " rules=" << rules << "\n";
  return kExitOk;
}

int do_validate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.inputs.empty() && o.treebanks.empty()) {
    err << "error: validate needs --in and/or --treebank\n";
    return kExitUsage;
  }
  std::size_t problems = 0;
  for (const auto& in : o.inputs) {
    const fs::path p = report_path(in);
    json doc;
    try {
      doc = json::parse(text::read_file(p));
    } catch (const json::exception& e) {
      out << p.string() << ": invalid JSON: " << e.what() << "\n";
      ++problems;
      continue;
    }
    for (const auto& e : schema::validate_report(doc)) {
      out << p.string() << ": " << e << "\n";
      ++problems;
    }
  }
  std::size_t sentences = 0;
  for (const auto& path : o.treebanks) {
    const Treebank tb = read_conllu_file(path, language_guess(path));
    sentences += tb.sentences.size();
    for (const auto& v : validate(tb)) {
      out << path << ": " << v.sent_id << ": " << to_string(v.kind) << ": " << v.detail << "\n";
      ++problems;
    }
  }
  err << "validate reports=" << o.inputs.size() << " treebanks=" << o.treebanks.size()
      << " sentences=" << sentences << " problems=" << problems << "\n";
  return problems == 0 ? kExitOk : kExitData;
}

void add_run_flags(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "Output directory")->capture_default_str();
  sub->add_option("--config", o.config, "INI/TOML file overriding defaults")->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "Seed for the train/dev/test split (default 42)");
  sub->add_option("--jobs", o.jobs, "Worker threads (default: logical CPUs)");
  sub->add_option("--language", o.language, "Language name shown in questions");
  sub->add_option("--translit", o.translit, "Transliteration map for the HTML site")->check(CLI::ExistingFile);
  sub->add_option("--created", o.created, "Timestamp recorded in report.json");
  sub->add_option("--min-support", o.min_support, "Minimum training instances per rule");
  sub->add_option("--max-depth", o.max_depth, "Maximum decision tree depth");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Turns treebanks and bitexts into teachable grammar and vocabulary material.", "gramlex"};
  app.require_subcommand(1);

  auto* extract = app.add_subcommand("extract", "Word order, agreement and suffix rules from treebanks");
  extract->add_option("--treebank", o.treebanks, "CoNLL-U file (repeatable)")->required()->check(CLI::ExistingFile);
  extract->add_option("--questions", o.questions, "Comma-separated: word_order, agreement, suffix, general")
      ->capture_default_str();
  add_run_flags(extract, o);

  auto* vocab = app.add_subcommand("vocab", "Translation divergences and word lists from a bitext");
  vocab->add_option("--bitext-src", o.bitext_src, "English side, one sentence per line")->required()->check(CLI::ExistingFile);
  vocab->add_option("--bitext-tgt", o.bitext_tgt, "L2 side, one sentence per line")->required()->check(CLI::ExistingFile);
  vocab->add_option("--lexicon", o.lexicon, "Sense lexicon TSV")->check(CLI::ExistingFile);
  vocab->add_option("--categories", o.categories, "Category config (INI/TOML)")->check(CLI::ExistingFile);
  vocab->add_option("--treebank", o.treebanks, "L2-side CoNLL-U aligned with the bitext, for lemma keys")
      ->check(CLI::ExistingFile);
  vocab->add_option("--min-count", o.min_count, "Minimum links for a translation candidate");
  vocab->add_option("--min-prob", o.min_prob, "Minimum translation probability for a candidate");
  add_run_flags(vocab, o);

  auto* summarize = app.add_subcommand("summarize", "Morphological feature inventory");
  summarize->add_option("--treebank", o.treebanks, "CoNLL-U file (repeatable)")->required()->check(CLI::ExistingFile);
  add_run_flags(summarize, o);

  auto* evaluate = app.add_subcommand("evaluate", "Accuracy table: concept, type, autolex, baseline");
  evaluate->add_option("--in", o.inputs, "Report file or output directory")->required()->expected(1);
  evaluate->add_option("--format", o.format, "tsv or json")
      ->check(CLI::IsMember({"tsv", "json"}))
      ->capture_default_str();

  auto* report = app.add_subcommand("report", "Merge reports and render the HTML site");
  report->add_option("--in", o.inputs, "Report file or output directory (repeatable)")->required();
  report->add_option("--out", o.out, "Output directory")->capture_default_str();
  report->add_option("--translit", o.translit, "Transliteration map")->check(CLI::ExistingFile);

  auto* validate_cmd = app.add_subcommand("validate", "Check reports against the schema and treebanks for defects");
  validate_cmd->add_option("--in", o.inputs, "Report file or output directory (repeatable)");
  validate_cmd->add_option("--treebank", o.treebanks, "CoNLL-U file (repeatable)")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e, out, err);
    }
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    if (extract->parsed()) return do_extract(o, err);
    if (vocab->parsed()) return do_vocab(o, err);
    if (summarize->parsed()) return do_summarize(o, err);
    if (evaluate->parsed()) return do_evaluate(o, out, err);
    if (report->parsed()) return do_report(o, err);
    if (validate_cmd->parsed()) return do_validate(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace gramlex::cli
