#pragma once

// Multi-base q-Pochhammer products and the Jacobi theta function
//   theta_a(x) = (x;a)_inf (a/x;a)_inf (a;a)_inf
// with a certified truncation rule: a product stops once every factor not yet
// multiplied in differs from 1 by less than the policy's tail tolerance.

#include <optional>
#include <span>
#include <vector>

#include "ellex/complex.hpp"

namespace ellex {

struct TruncationPolicy {
  int max_terms = 512;     ///< cap on the enumeration depth (total degree)
  double tail_tol = 1e-15; ///< bound on |factor - 1| for every dropped factor

  /// Throws DomainError unless max_terms >= 1 and 0 < tail_tol < 1.
  void validate() const;

  /// Same policy with tail_tol divided by `factor`.
  TruncationPolicy tightened(double factor = 10.0) const;

  /// Default policy, with tail_tol taken from ELLEX_DEFAULT_TOL when set.
  static TruncationPolicy from_environment();
};

/// Ordered list of product bases, each with 0 < |b| < 1.
class BaseSet {
 public:
  /// Throws NonConvergentBase if some |b| >= 1 and DomainError if some b = 0.
  explicit BaseSet(std::vector<Complex> bases);
  BaseSet(std::initializer_list<Complex> bases) : BaseSet(std::vector<Complex>(bases)) {}

  std::span<const Complex> bases() const { return bases_; }
  std::size_t size() const { return bases_.size(); }
  double max_modulus() const { return max_modulus_; }

 private:
  std::vector<Complex> bases_;
  double max_modulus_ = 0.0;
};

/// (x; b_1, ..., b_m)_inf = prod over n_i >= 0 of (1 - x b_1^{n_1} ... b_m^{n_m}).
///
/// Multi-indices are enumerated by total degree d; the product stops before
/// degree d once (1 + |x|) max|b|^d < tail_tol, and throws TruncationExceeded
/// if that has not happened after max_terms degrees.
Complex qpochhammer(Complex x, const BaseSet& bases, const TruncationPolicy& policy = {});

/// Single-base shorthand for qpochhammer(x, BaseSet{base}, policy).
Complex qpochhammer(Complex x, Complex base, const TruncationPolicy& policy = {});

/// Jacobi theta function theta_a(x); requires 0 < |a| < 1 and x != 0.
Complex theta(Complex a, Complex x, const TruncationPolicy& policy = {});

/// theta_a(a^s x) / theta_a(x) = (-1)^s a^{-s(s-1)/2} x^{-s}.
///
/// s(s-1) is always even, so every exponent is an integer and no square-root
/// branch is involved.
Complex theta_shift_factor(Complex a, int s, Complex x);

/// x d/dx ln theta_a(x), summed as
///   sum_{n>=0} [ -x a^n / (1 - x a^n) + (a^{n+1}/x) / (1 - a^{n+1}/x) ].
/// Throws NearSingularity when x is within 1e-8 of a zero a^n.
Complex log_deriv_theta(Complex a, Complex x, const TruncationPolicy& policy = {});

/// min over integers n of |x a^{-n} - 1|, restricted to the n for which
/// |a|^n lies in [|x|/2, 2|x|]; returns +inf when that range is empty.
double theta_zero_distance(Complex a, Complex x);

/// The integer n with |x a^{-n} - 1| < tol, if any.
std::optional<int> theta_zero_index(Complex a, Complex x, double tol = 1e-8);

}  // namespace ellex
