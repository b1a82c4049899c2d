#pragma once

// Jacobi-elliptic parametrization of the eight-vertex weights.
//
//   p = exp(-pi K'/K),  q = -exp(-pi lambda / 2K),  x = exp(pi u / 2K)
//
// snh(u) = -i sn(iu) is evaluated as a theta quotient in the nome p:
//   snh(u) = p^{1/4} k^{-1/2} x theta_{p^2}(x^-2) / theta_{p^2}(p x^-2),
// which makes every weight a meromorphic function of the multiplicative
// variable x with quasi-period p.

#include "ellex/complex.hpp"
#include "ellex/qseries.hpp"

namespace ellex {

struct EllipticParams {
  double modulus = 0.5;  ///< elliptic modulus k, 0 < k < 1
  double lambda = 1.0;   ///< crossing parameter, > 0
  double u = 0.0;        ///< spectral parameter

  void validate() const;
};

/// The nome pair (p, q). Both must lie strictly inside the unit disk wherever
/// an infinite product in p is formed.
struct NomeParams {
  Complex p;
  Complex q;

  /// Throws NonConvergentBase unless 0 < |p| < 1 and 0 < |q| < 1.
  void validate() const;
};

/// Complete elliptic integral K(k) by the arithmetic-geometric mean.
double complete_K(double modulus);

/// K' = K(sqrt(1 - k^2)).
double complete_K_prime(double modulus);

/// exp(-pi K'/K).
double nome_from_modulus(double modulus);

/// k = theta_2(0,p)^2 / theta_3(0,p)^2 for a real nome 0 < p < 1.
double modulus_from_nome(double p, const TruncationPolicy& policy = {});

/// K = (pi/2) theta_3(0,p)^2 for a real nome 0 < p < 1.
double complete_K_from_nome(double p, const TruncationPolicy& policy = {});

/// snh(u) = -i sn(iu | k); odd in u, real for real u.
/// Throws NearSingularity within 1e-10 of a pole (u = +-K', +-3K', ...).
double jacobi_snh(double u, double modulus, const TruncationPolicy& policy = {});

struct ParamPoint {
  NomeParams nome;
  Complex x;
};

/// (k, lambda, u) -> (p, q, x). q comes out negative real.
ParamPoint param_map(const EllipticParams& ep);

/// Inverse of param_map for real 0 < p < 1, real -1 < q < 0 and real x > 0.
EllipticParams inverse_param_map(const NomeParams& nome, Complex x,
                                 const TruncationPolicy& policy = {});

/// The four distinct eight-vertex weights before normalization.
struct BaxterWeights {
  Complex a, b, c, d;
};

/// a = snh(lambda-u)/snh(lambda), b = snh(u)/snh(lambda), c = 1,
/// d = k snh(lambda-u) snh(u).
BaxterWeights baxter_entries(const EllipticParams& ep, const TruncationPolicy& policy = {});

/// The same weights written in the multiplicative variables: snh(lambda)
/// corresponds to x_lambda = -1/q and snh(lambda - u) to x_lambda / x. Accepts
/// complex x and q (analytic continuation); p must be real in (0,1).
BaxterWeights baxter_entries(Complex x, const NomeParams& nome,
                             const TruncationPolicy& policy = {});

}  // namespace ellex
