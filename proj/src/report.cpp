#include "ellex/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ellex/complex.hpp"
#include "ellex/errors.hpp"

namespace ellex {

const char* version() { return "0.3.0"; }

void CheckResult::decide() {
  pass = skipped ||
         (std::isfinite(max_error) && max_error <= tolerance && max_error >= lower_bound);
}

void merge_into(CheckResult& agg, const CheckResult& point) {
  if (std::isnan(point.max_error) || std::isnan(agg.max_error)) {
    agg.max_error = std::nan("");
  } else {
    agg.max_error = std::max(agg.max_error, point.max_error);
  }
  agg.points += point.points;
  agg.wall_time_ms += point.wall_time_ms;
  if (agg.note.empty() && !point.note.empty()) agg.note = point.note;
  agg.decide();
}

bool VerificationReport::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

Json check_to_json(const CheckResult& c, bool with_timings) {
  Json j;
  j["suite"] = c.suite;
  j["id"] = c.id;
  j["params"] = c.params;
  if (std::isfinite(c.max_error)) {
    j["max_error"] = c.max_error;
  } else {
    j["max_error"] = format_double(c.max_error);
  }
  j["tolerance"] = c.tolerance;
  if (std::isfinite(c.lower_bound)) j["lower_bound"] = c.lower_bound;
  j["metric"] = c.metric;
  j["points"] = c.points;
  j["skipped"] = c.skipped;
  j["pass"] = c.pass;
  if (!c.note.empty()) j["note"] = c.note;
  if (with_timings) j["wall_time_ms"] = c.wall_time_ms;
  return j;
}

Json VerificationReport::to_json(bool with_timings) const {
  Json j;
  j["schema"] = kSchema;
  j["tool"] = tool;
  j["version"] = version;
  j["suite"] = suite;
  j["config"] = config;
  Json arr = Json::array();
  for (const auto& c : checks) arr.push_back(check_to_json(c, with_timings));
  j["checks"] = std::move(arr);
  j["pass"] = pass();
  return j;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string VerificationReport::to_csv() const {
  std::ostringstream os;
  os << "suite,check_id,params,max_error,tolerance,metric,points,skipped,pass\n";
  for (const auto& c : checks) {
    os << csv_field(c.suite) << ',' << csv_field(c.id) << ',' << csv_field(c.params.dump())
       << ',' << format_double(c.max_error) << ',' << format_double(c.tolerance) << ','
       << c.metric << ',' << c.points << ',' << (c.skipped ? "true" : "false") << ','
       << (c.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  os << tool << ' ' << version << " suite=" << suite << '\n';
  for (const auto& c : checks) {
    os << (c.skipped ? "[SKIP] " : c.pass ? "[PASS] " : "[FAIL] ") << c.suite << '/' << c.id
       << "  max_error=" << format_double(c.max_error) << " tol=" << format_double(c.tolerance)
       << " (" << c.metric << ", " << c.points << " pts)";
    if (!c.note.empty()) os << "  " << c.note;
    os << '\n';
  }
  os << (pass() ? "ALL PASS" : "FAILURES PRESENT") << '\n';
  return os.str();
}

std::string VerificationReport::render(const std::string& format, bool with_timings) const {
  if (format == "json") return to_json(with_timings).dump(2) + "\n";
  if (format == "csv") return to_csv();
  if (format == "text") return to_text();
  throw DomainError("unknown output format '" + format + "'");
}

}  // namespace ellex
