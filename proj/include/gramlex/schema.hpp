#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace gramlex::schema {

/// The report schema document shipped with the library.
const nlohmann::json& report_schema();
std::string_view report_schema_text();

/// Validates `doc` against a JSON Schema (draft-07 subset: type, enum,
/// properties, required, additionalProperties, items, minItems, minLength,
/// minimum, maximum, anyOf, local "#/definitions/..." refs). Returns one
/// message per violation, prefixed by a JSON pointer.
std::vector<std::string> validate(const nlohmann::json& doc, const nlohmann::json& schema);

inline std::vector<std::string> validate_report(const nlohmann::json& doc) {
  return validate(doc, report_schema());
}

}  // namespace gramlex::schema
