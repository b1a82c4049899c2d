#pragma once

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

namespace ellex {

using Json = nlohmann::ordered_json;

/// Outcome of one named identity check, possibly aggregated over a grid.
struct CheckResult {
  std::string suite;
  std::string id;
  Json params = Json::object();
  double max_error = 0.0;
  double tolerance = 0.0;
  /// Checks that bound a quantity from both sides (convergence ratios) set
  /// this; pass then needs lower_bound <= max_error <= tolerance.
  double lower_bound = -std::numeric_limits<double>::infinity();
  std::string metric = "rel";  ///< "rel", "abs" or "ratio"
  bool pass = false;
  bool skipped = false;        ///< domain guard declined to run; counts as pass
  std::string note;
  int points = 1;
  double wall_time_ms = 0.0;   ///< serialized only when timings are requested

  /// Sets pass from lower_bound <= max_error <= tolerance (NaN fails).
  void decide();
};

/// Folds `point` into `agg`: max error, point count, first failing note.
void merge_into(CheckResult& agg, const CheckResult& point);

struct VerificationReport {
  static constexpr int kSchema = 1;
  std::string tool = "ellex";
  std::string version;
  std::string suite;
  Json config = Json::object();
  std::vector<CheckResult> checks;

  /// True iff every check passes.
  bool pass() const;

  Json to_json(bool with_timings = false) const;
  std::string to_csv() const;
  std::string to_text() const;

  /// Renders in "json", "csv" or "text"; throws DomainError otherwise.
  std::string render(const std::string& format, bool with_timings = false) const;
};

Json check_to_json(const CheckResult& c, bool with_timings);

/// Library version string.
const char* version();

}  // namespace ellex
