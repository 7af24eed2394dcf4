// dwarp - report emission

#include "dwarp/emit.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace dwarp {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json point_json(const Point& p) {
  ordered_json out = ordered_json::object();
  for (const auto& [coord, value] : p.values) out[coord] = value;
  return out;
}

std::string format_residual(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3e", v);
  return buffer;
}

std::string format_value(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.10g", v);
  return buffer;
}

}  // namespace

std::string emit_json(const RunReport& report) {
  ordered_json root;
  root["scenario"] = report.scenario;
  root["engine_version"] = report.engine_version;
  root["seed"] = report.seed;
  root["tol"] = report.tol;
  root["samples"] = report.samples;
  root["all_expected_matched"] = report.all_expected_matched;
  root["checks"] = ordered_json::array();
  for (const auto& check : report.checks) {
    ordered_json c;
    c["name"] = check.name;
    c["kind"] = check.kind;
    c["verdict"] = check.verdict;
    c["pass"] = check.pass;
    c["expected"] = check.expected;
    c["matched"] = check.matched;
    c["worst_residual"] = check.worst_residual;
    c["witness"] = point_json(check.witness);
    ordered_json derived = ordered_json::object();
    for (const auto& [key, value] : check.derived) derived[key] = value;
    c["derived"] = derived;
    c["notes"] = check.notes;
    root["checks"].push_back(std::move(c));
  }
  return root.dump(2) + "\n";
}

std::string emit_text(const RunReport& report) {
  std::ostringstream os;
  os << "scenario: " << report.scenario << "  (engine " << report.engine_version
     << ", seed " << report.seed << ")\n";
  for (const auto& check : report.checks) {
    os << "  [" << (check.matched ? (check.pass ? "PASS" : "FAIL") : "MISMATCH") << "] "
       << check.name << " (" << check.kind << "): " << check.verdict
       << "  worst_residual=" << format_residual(check.worst_residual);
    if (!check.expected.empty()) os << "  expected=" << check.expected;
    os << "\n";
    for (const auto& [key, value] : check.derived)
      os << "        " << key << " = " << format_value(value) << "\n";
    if (!check.witness.values.empty()) {
      os << "        witness:";
      for (const auto& [coord, value] : check.witness.values)
        os << " " << coord << "=" << format_value(value);
      os << "\n";
    }
    for (const auto& note : check.notes) os << "        " << note << "\n";
  }
  os << (report.all_expected_matched ? "all expected verdicts matched"
                                     : "EXPECTED VERDICT MISMATCH") << "\n";
  return os.str();
}

std::string emit(const RunReport& report, const std::string& format) {
  if (format == "json") return emit_json(report);
  if (format == "text") return emit_text(report);
  throw std::invalid_argument("unknown report format '" + format + "' (use text or json)");
}

}  // namespace dwarp
