#pragma once

// Command layer behind the ellex executable. Everything here is a pure
// function of RunConfig, so two runs with the same config render the same bytes.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ellex/complex.hpp"
#include "ellex/qseries.hpp"
#include "ellex/report.hpp"

namespace ellex {

struct RunConfig {
  std::string command;
  std::string suite = "all";
  std::string fn;
  std::string format = "json";

  // Nome entry is kept as text: "q^N" (or "q^N-exact") is resolved against q
  // by integer powering so special points are hit exactly.
  std::optional<std::string> p_text;
  std::optional<std::string> q_text;
  std::optional<std::string> a_text;
  std::optional<int> m;
  std::optional<int> k;
  std::vector<Complex> xs;
  std::vector<double> betas;

  int annulus = 0;
  int l_min = -8;
  int l_max = 8;
  int nodes = 0;
  int cutoff = 4;
  std::vector<std::pair<int, int>> pairs;

  int points = 0;  ///< grid size per check; 0 keeps each suite's default
  std::uint64_t seed = 1;
  int jobs = 1;
  TruncationPolicy policy;
  bool timings = false;

  Complex q() const;  ///< default 0.5
  Complex p() const;  ///< default 0.2
  Complex a() const;  ///< theta base, defaults to p

  /// Checks ranges that do not depend on the command; throws DomainError.
  void validate() const;
  Json to_json() const;
};

/// "q^N" / "q^N-exact" as q^N, anything else via parse_complex.
Complex resolve_nome_text(const std::string& text, Complex q);

struct SuiteInfo {
  std::string name;
  std::string identity;
};

/// Every verify suite and the identity it exercises, in run order.
const std::vector<SuiteInfo>& suite_catalog();

VerificationReport run_verify(const RunConfig& config);
VerificationReport run_limit(const RunConfig& config);

/// Rendered output of eval (values with truncation-error estimates).
std::string run_eval(const RunConfig& config);
/// Rendered Laurent table and mode brackets.
std::string run_modes(const RunConfig& config);

}  // namespace ellex
