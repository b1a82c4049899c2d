#pragma once

// Classical (beta -> 0) limits of the exchange algebra and the mode brackets
// they induce.
//
// The structure function of {t(z), t(w)}_k / (t(z) t(w)) is a prefactor times
//   g(x) = x^2/(1-x^2) - x^-2/(1-x^-2)
//        + sum_{n>=0} [ -2x^2 q^{4n}/(1-x^2 q^{4n}) + 2x^2 q^{4n+2}/(1-x^2 q^{4n+2})
//                       + 2x^-2 q^{4n}/(1-x^-2 q^{4n}) - 2x^-2 q^{4n+2}/(1-x^-2 q^{4n+2}) ]
// with x = w/z. g has simple poles on every circle |x| = |q|^j, so a Laurent
// expansion (and hence a mode bracket) is labelled by the annulus it is taken in.

#include <map>
#include <string>
#include <vector>

#include "ellex/complex.hpp"
#include "ellex/qseries.hpp"
#include "ellex/report.hpp"

namespace ellex {

/// beta-deformed commuting point: q^{2k} = p^{1 - beta/2}.
struct BetaLimitRequest {
  int m = 1;
  int k = 1;
  double beta = 1e-3;
  Complex q{0.5, 0.0};

  void validate() const;
  /// p = q^{4k/(2 - beta)} on the principal branch of log q.
  Complex nome_p() const;
};

/// Annulus |q|^n < |x| < |q|^{n-1}.
struct AnnulusLabel {
  int n = 0;

  /// Contour radius |q|^{n - 1/2}, the geometric mean of the bounding circles.
  double radius(Complex q) const;
};

enum class StructureKind { theorem7, ps1 };

/// Laurent coefficients g_l of a structure function in one annulus;
/// {t_n, t_m} = sum_l g_l t_{n+l} t_{m-l}.
struct ModeBracketTable {
  StructureKind kind = StructureKind::theorem7;
  Complex q;
  AnnulusLabel annulus;
  int nodes = 0;
  std::map<int, Complex> coefficients;

  /// max_l |g_l + g_{-l}| over the stored range.
  double antisymmetry_defect() const;
};

/// The series g(x); throws NearSingularity within 1e-8 of a pole x = +-q^j.
Complex poisson_series_g(Complex x, Complex q, const TruncationPolicy& policy = {});

/// 2km ln q (k odd) or -2km(2m-1) ln q (k even).
Complex poisson_prefactor(int m, int k, Complex q);

/// poisson_prefactor(m, k, q) * g(x).
Complex poisson_structure(int m, int k, Complex x, Complex q, const TruncationPolicy& policy = {});

/// -(ln q) [ h(x) - h(1/x) ] with h(y) = y d/dy ln tau(q^{1/2} y), evaluated
/// through theta log-derivatives.
Complex ps1_structure(Complex x, Complex q, const TruncationPolicy& policy = {});

/// D(beta) = ln Y(m, x) / beta with p = p(beta), against poisson_structure.
struct BetaLimitPoint {
  double beta = 0.0;
  Complex estimate;
  double error = 0.0;
};

/// Evaluates D at beta and beta/10. max_error is the error at beta, and the
/// check passes when error(beta)/error(beta/10) lies in [5, 20] (first order).
CheckResult beta_limit_check(const BetaLimitRequest& req, Complex x,
                             const TruncationPolicy& policy = {});

/// D(beta) for a single beta; throws DomainError for beta = 0.
BetaLimitPoint beta_limit_point(const BetaLimitRequest& req, Complex x,
                                const TruncationPolicy& policy = {});

/// Contour-extracted coefficients g_l = (1/2 pi i) \oint x^{-l-1} g(x) dx on the
/// circle of radius annulus.radius(q), trapezoidal rule with `nodes` points
/// (rounded up to a power of two, at least 4 (max|l| + 1)). Throws
/// AnnulusContainsPole if a pole circle is within 1e-6 of the radius and
/// QuadratureUnresolved if doubling the nodes moves any g_l by more than
/// 1e-9 max(1, max|g| r^-l).
ModeBracketTable laurent_modes(StructureKind kind, Complex q, AnnulusLabel annulus, int l_min,
                               int l_max, int nodes = 0, const TruncationPolicy& policy = {});

/// g_l in the annulus from expanding each series term geometrically on the
/// side of its pole the annulus lies (zero for odd l).
Complex series_laurent_coefficient(Complex q, AnnulusLabel annulus, int l);

/// g^{(n)}_l - g^{(n+1)}_l: residue of x^{-l-1} g(x) summed over the poles
/// x = +-q^n that separate the two annuli.
Complex annulus_crossing_jump(Complex q, int n, int l);

/// Node count that resolves the annulus to double precision for this q.
int recommended_nodes(Complex q, int l_max);

struct BracketTerm {
  int left = 0;   ///< t_left t_right with left <= right
  int right = 0;
  Complex coefficient;
  bool cancelled = false;  ///< nonzero contributions that sum to zero
};

/// Monomials of {t_n, t_m} = sum_{|l| <= cutoff} g_l t_{n+l} t_{m-l}, with
/// commuting t-symbols merged and coefficients below 1e-12 suppressed.
std::vector<BracketTerm> mode_bracket_terms(const ModeBracketTable& table, int n, int m,
                                            int cutoff);

/// One-line text rendering of mode_bracket_terms.
std::string format_mode_bracket(const ModeBracketTable& table, int n, int m, int cutoff);

/// JSON rendering of mode_bracket_terms.
Json mode_bracket_json(const ModeBracketTable& table, int n, int m, int cutoff);

std::string to_string(StructureKind kind);
StructureKind parse_structure_kind(const std::string& name);

}  // namespace ellex
