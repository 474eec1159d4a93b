#include "stable_exit/report.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace stable_exit {

using nlohmann::json;

double VerificationCase::error() const {
  const double diff = std::abs(lhs - rhs);
  if (comparison == Comparison::Absolute) return diff;
  return diff / std::abs(rhs);
}

VerificationCase make_case(std::string name, std::map<std::string, double> params, double lhs,
                           double rhs, double tolerance, Comparison comparison, std::string note) {
  VerificationCase c;
  c.name = std::move(name);
  c.params = std::move(params);
  c.lhs = lhs;
  c.rhs = rhs;
  c.tolerance = tolerance;
  c.comparison = comparison;
  c.note = std::move(note);
  const double e = c.error();
  c.pass = std::isfinite(e) && e <= tolerance;
  return c;
}

bool VerificationReport::overall() const {
  if (cases.empty()) return false;
  for (const auto& c : cases) {
    if (!c.pass) return false;
  }
  return true;
}

void VerificationReport::append(const VerificationReport& other) {
  cases.insert(cases.end(), other.cases.begin(), other.cases.end());
}

namespace {

json number(double v) {
  // JSON has no inf/nan; keep them readable.
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  throw std::invalid_argument("report: bad number '" + s + "'");
}

}  // namespace

std::string to_json(const VerificationReport& report, int indent) {
  json cases = json::array();
  for (const auto& c : report.cases) {
    json params = json::object();
    for (const auto& [k, v] : c.params) params[k] = number(v);
    json jc = {{"name", c.name},
               {"params", params},
               {"lhs", number(c.lhs)},
               {"rhs", number(c.rhs)},
               {"tolerance", number(c.tolerance)},
               {"comparison", c.comparison == Comparison::Absolute ? "absolute" : "relative"},
               {"error", number(c.error())},
               {"pass", c.pass}};
    if (!c.note.empty()) jc["note"] = c.note;
    cases.push_back(std::move(jc));
  }
  json j = {{"schema", kReportSchema},
            {"suite", report.suite},
            {"cases", cases},
            {"overall", report.overall()}};
  return j.dump(indent);
}

VerificationReport report_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("report: ") + e.what());
  }
  if (!j.contains("schema") || j["schema"] != kReportSchema) {
    throw std::invalid_argument("report: unsupported schema");
  }
  VerificationReport r;
  try {
    r.suite = j.at("suite").get<std::string>();
    for (const auto& jc : j.at("cases")) {
      VerificationCase c;
      c.name = jc.at("name").get<std::string>();
      for (const auto& [k, v] : jc.at("params").items()) c.params[k] = read_number(v);
      c.lhs = read_number(jc.at("lhs"));
      c.rhs = read_number(jc.at("rhs"));
      c.tolerance = read_number(jc.at("tolerance"));
      c.comparison =
          jc.at("comparison").get<std::string>() == "absolute" ? Comparison::Absolute : Comparison::Relative;
      c.pass = jc.at("pass").get<bool>();
      if (jc.contains("note")) c.note = jc["note"].get<std::string>();
      r.cases.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("report: ") + e.what());
  }
  return r;
}

}  // namespace stable_exit
