#pragma once

// Exchange functions of the trace generator t(z) on the surface p^m = q^{c+2}.
//
// F(m, x) multiplies L(w) when moved through t(z) (x = w/z); Y(m, x) is the
// scalar in t(z) t(w) = Y(w/z) t(w) t(z). Both depend on x only through x^2
// and are finite products of theta_{q^4}, so they stay well defined for any
// nonzero p (only |q| < 1 is needed). That is what lets negative k in
// p = q^{2k} be evaluated at all.

#include "ellex/complex.hpp"
#include "ellex/elliptic.hpp"
#include "ellex/qseries.hpp"
#include "ellex/report.hpp"
#include "ellex/rmatrix.hpp"

namespace ellex {

/// Integer level m != 0 together with the nome pair; c is derived, never set.
struct LevelParams {
  int m = 1;
  NomeParams nome;
  CentralCharge c;

  /// Throws DomainError on m = 0, p = 0, or |q| outside (0,1).
  static LevelParams make(int m, const NomeParams& nome);

  /// |q^{c+2} - p^m| computed through the principal logarithm.
  double constraint_residual() const;
};

/// p = q^{2k}, k != 0.
struct CommutingPoint {
  int k = 1;

  bool odd() const { return k % 2 != 0; }
  /// The nome pair (q^{2k}, q) by exact integer power.
  NomeParams nome(Complex q) const;
};

/// The four-tau product F(x) of the p-shift R21(xp) = F(x)^-1 R21(x), written
/// out as q^-2 times eight theta_{q^4} factors in X = x^2.
Complex shift_factor_F(Complex x, const NomeParams& nome, const TruncationPolicy& policy = {});

/// Closed theta form of F(m, x): the product over s = 1..2m for m > 0, or over
/// s = 0..2|m|-1 for m < 0.
Complex exchange_F(const LevelParams& level, Complex x, const TruncationPolicy& policy = {});

/// F(m, x) as prod_{s=1}^{m} F(x p^-s) (m > 0) or prod_{s=0}^{|m|-1} F(x p^s)^-1 (m < 0).
Complex exchange_F_iterated(const LevelParams& level, Complex x,
                            const TruncationPolicy& policy = {});

/// For m < 0: F(|m|, x^-1 p^{1/2})^-1, evaluated through the m > 0 closed form.
Complex exchange_F_reflected(const LevelParams& level, Complex x,
                             const TruncationPolicy& policy = {});

/// Closed form of Y_{p,q,m}(x): the square of prod x^2 theta ratios over
/// s = 1..2m-1 (m > 0) or s = 1..2|m| (m < 0).
Complex exchange_Y(const LevelParams& level, Complex x, const TruncationPolicy& policy = {});

/// Y as F(m, q^c x) / F(m, -p^{1/2} x).
Complex exchange_Y_ratio(const LevelParams& level, Complex x,
                         const TruncationPolicy& policy = {});

/// Theorem-level reference at p = q^{2k}: 1 for odd k, otherwise
/// q^{-2m} x^{4m} [theta_{q^4}(x^2 q^2) / theta_{q^4}(x^2)]^{4m}.
Complex commuting_F(int m, const CommutingPoint& cp, Complex x, Complex q,
                    const TruncationPolicy& policy = {});

enum class ExchangeFunction { F, Y };

/// Relative change of F (or Y) under p -> p q^4. Skipped with a note when
/// |p q^4| >= 1. Tolerance 1e-10.
CheckResult check_p_periodicity(const LevelParams& level, Complex x,
                                ExchangeFunction which = ExchangeFunction::F,
                                const TruncationPolicy& policy = {});

/// Smallest relative distance from any theta_{q^4} argument used by F, Y,
/// their F-ratio form and the iterated product to a zero of theta_{q^4}.
/// Grid generators reject points below 1e-6.
double exchange_singular_distance(int m, Complex x, const NomeParams& nome);

}  // namespace ellex
