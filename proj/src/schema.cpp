#include "gramlex/schema.hpp"

#include <algorithm>

#include "gramlex/error.hpp"
#include "gramlex/text.hpp"

namespace gramlex::schema {

namespace detail {
extern const std::string_view kReportSchemaText;
}

using nlohmann::json;

std::string_view report_schema_text() { return detail::kReportSchemaText; }

const json& report_schema() {
  static const json doc = json::parse(detail::kReportSchemaText);
  return doc;
}

namespace {

bool type_matches(const json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "number") return v.is_number();
  if (type == "integer") {
    if (v.is_number_integer()) return true;
    if (v.is_number_float()) {
      const double d = v.get<double>();
      return d == static_cast<double>(static_cast<long long>(d));
    }
    return false;
  }
  throw Error("schema: unsupported type '" + type + "'");
}

std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

class Validator {
 public:
  explicit Validator(const json& root) : root_(root) {}

  void check(const json& v, const json& s, const std::string& at, std::vector<std::string>& errs) const {
    if (s.is_boolean()) {
      if (!s.get<bool>()) errs.push_back(at + ": not allowed");
      return;
    }
    if (auto ref = s.find("$ref"); ref != s.end()) {
      check(v, resolve(ref->get<std::string>()), at, errs);
      return;
    }
    if (auto t = s.find("type"); t != s.end()) {
      bool ok = false;
      if (t->is_array()) {
        for (const auto& each : *t) ok = ok || type_matches(v, each.get<std::string>());
      } else {
        ok = type_matches(v, t->get<std::string>());
      }
      if (!ok) {
        errs.push_back(at + ": expected type " + t->dump() + ", got " + v.type_name());
        return;
      }
    }
    if (auto e = s.find("enum"); e != s.end()) {
      if (std::find(e->begin(), e->end(), v) == e->end()) {
        errs.push_back(at + ": value " + v.dump() + " not in enum");
      }
    }
    if (auto any = s.find("anyOf"); any != s.end()) {
      bool ok = false;
      for (const auto& alt : *any) {
        std::vector<std::string> sub;
        check(v, alt, at, sub);
        ok = ok || sub.empty();
      }
      if (!ok) errs.push_back(at + ": matches no anyOf alternative");
    }
    if (v.is_number()) {
      const double d = v.get<double>();
      if (auto m = s.find("minimum"); m != s.end() && d < m->get<double>()) {
        errs.push_back(at + ": " + v.dump() + " < minimum " + m->dump());
      }
      if (auto m = s.find("maximum"); m != s.end() && d > m->get<double>()) {
        errs.push_back(at + ": " + v.dump() + " > maximum " + m->dump());
      }
    }
    if (v.is_string()) {
      if (auto m = s.find("minLength"); m != s.end()) {
        const auto len = text::decode_utf8(v.get<std::string>()).size();
        if (len < m->get<std::size_t>()) errs.push_back(at + ": string shorter than minLength");
      }
    }
    if (v.is_array()) {
      if (auto m = s.find("minItems"); m != s.end() && v.size() < m->get<std::size_t>()) {
        errs.push_back(at + ": fewer than minItems");
      }
      if (auto items = s.find("items"); items != s.end()) {
        for (std::size_t i = 0; i < v.size(); ++i) check(v[i], *items, at + "/" + std::to_string(i), errs);
      }
    }
    if (v.is_object()) {
      if (auto req = s.find("required"); req != s.end()) {
        for (const auto& name : *req) {
          if (!v.contains(name.get<std::string>())) {
            errs.push_back(at + ": missing required property '" + name.get<std::string>() + "'");
          }
        }
      }
      const auto props = s.find("properties");
      const auto extra = s.find("additionalProperties");
      for (const auto& [key, value] : v.items()) {
        const std::string child = at + "/" + escape_pointer(key);
        if (props != s.end() && props->contains(key)) {
          check(value, props->at(key), child, errs);
        } else if (extra != s.end()) {
          check(value, *extra, child, errs);
        }
      }
    }
  }

 private:
  const json& resolve(const std::string& ref) const {
    if (!text::starts_with(ref, "#/")) throw Error("schema: only local refs supported: " + ref);
    return root_.at(json::json_pointer(ref.substr(1)));
  }

  const json& root_;
};

}  // namespace

std::vector<std::string> validate(const json& doc, const json& schema) {
  std::vector<std::string> errs;
  Validator(schema).check(doc, schema, "", errs);
  return errs;
}

}  // namespace gramlex::schema
