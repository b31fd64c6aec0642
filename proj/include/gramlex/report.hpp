#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gramlex/rules.hpp"
#include "gramlex/tree.hpp"

namespace gramlex {

enum class Aspect { WordOrder, Agreement, Suffix, Vocabulary, General };

std::string_view to_string(Aspect a);  // "word_order", ...
Aspect aspect_from_string(std::string_view s);
/// Human heading used in evaluation tables ("Word Order", "Suffix Usage", ...).
std::string_view concept_name(Aspect a);
inline constexpr Aspect kAllAspects[] = {Aspect::WordOrder, Aspect::Agreement, Aspect::Suffix,
                                         Aspect::Vocabulary, Aspect::General};

/// The answer to one teachable question.
struct GrammarPoint {
  std::string id;
  std::string language;
  Aspect aspect = Aspect::General;
  std::string type;  // relation name, attribute, POS tag, English word, ...
  std::string question;
  std::string dominant_label;
  double dominant_fraction = 0.0;
  std::optional<Metrics> metrics;
  std::vector<Rule> rules;
  nlohmann::json payload = nlohmann::json::object();

  bool operator==(const GrammarPoint&) const = default;
};

inline constexpr const char* kReportSchemaVersion = "1.0";

struct Report {
  std::string schema_version = kReportSchemaVersion;
  std::string created = "1970-01-01T00:00:00Z";
  std::string config_digest;
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<GrammarPoint> points;

  bool operator==(const Report&) const = default;
};

/// Fixed description of the methods behind every point.
nlohmann::json method_metadata();

std::string grammar_point_id(std::string_view language, Aspect aspect, std::string_view question);

/// Assembles a point. When a tree is given, `rules` must be exactly the
/// rules extracted from it (one per leaf with matching prediction and
/// support); otherwise gramlex::Error("inconsistent rule/tree pairing").
/// Exception rules are moved first.
GrammarPoint build_grammar_point(std::string language, Aspect aspect, std::string type,
                                 std::string question, const DecisionTree* tree,
                                 std::vector<Rule> rules, std::optional<Metrics> metrics,
                                 nlohmann::json payload);

nlohmann::json to_json(const ExampleRef& e);
ExampleRef example_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Rule& r);
nlohmann::json to_json(const Metrics& m);
nlohmann::json to_json(const GrammarPoint& p);
nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

/// Canonical bytes: sorted keys, two-space indent, UTF-8, trailing newline.
std::string emit_json(const Report& report);
Report read_report(const std::string& path);

/// Concatenates points. Inputs must share schema_version and language;
/// duplicate point ids are rejected.
Report merge_reports(const std::vector<Report>& reports);
Report merge_report_files(const std::vector<std::string>& paths);

/// Replaces points with matching ids and appends the rest.
void upsert_points(Report& into, const std::vector<GrammarPoint>& points);

/// Table-style evaluation rows (concept, type, model accuracy, baseline) in
/// percent, for every point with metrics. Vocabulary points are preceded by a
/// pooled "Semantic Subdivisions" row weighted by test size.
std::string evaluation_tsv(const Report& report);

}  // namespace gramlex
