#include "ellex/elliptic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ellex/errors.hpp"

namespace ellex {

namespace {

constexpr double kPoleTol = 1e-10;

void check_modulus(double k) {
  if (!(k > 0.0 && k < 1.0)) {
    throw DomainError("elliptic modulus " + format_double(k) + " must lie in (0,1)");
  }
}

double agm(double a, double b) {
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return 0.5 * (a + b);
}

bool is_real(Complex z) { return z.imag() == 0.0; }

// y theta_{p^2}(y^-2) / theta_{p^2}(p y^-2); snh is this times p^{1/4}/sqrt(k).
Complex sigma(Complex y, double p, const TruncationPolicy& policy) {
  const Complex w = 1.0 / (y * y);
  const double a = p * p;
  if (theta_zero_distance(a, p * w) < kPoleTol) {
    throw NearSingularity("snh evaluated at a pole (x = " + format_complex(y) + ")");
  }
  return y * theta(a, w, policy) / theta(a, p * w, policy);
}

}  // namespace

void EllipticParams::validate() const {
  check_modulus(modulus);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("lambda must be a finite positive number");
  }
  if (!std::isfinite(u)) throw DomainError("u must be finite");
}

void NomeParams::validate() const {
  require_finite(p, "p");
  require_finite(q, "q");
  const double ap = std::abs(p);
  const double aq = std::abs(q);
  if (ap == 0.0 || aq == 0.0) throw DomainError("nome parameters must be nonzero");
  if (ap >= 1.0) throw NonConvergentBase("|p| = " + format_double(ap) + " is not < 1");
  if (aq >= 1.0) throw NonConvergentBase("|q| = " + format_double(aq) + " is not < 1");
}

double complete_K(double modulus) {
  check_modulus(modulus);
  const double kp = std::sqrt((1.0 - modulus) * (1.0 + modulus));
  return std::numbers::pi / (2.0 * agm(1.0, kp));
}

double complete_K_prime(double modulus) {
  check_modulus(modulus);
  return std::numbers::pi / (2.0 * agm(1.0, modulus));
}

double nome_from_modulus(double modulus) {
  return std::exp(-std::numbers::pi * complete_K_prime(modulus) / complete_K(modulus));
}

namespace {

void check_real_nome(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("real nome " + format_double(p) + " must lie in (0,1)");
  }
}

// theta_2(0,p) / (2 p^{1/4}) and theta_3(0,p)
double theta2_reduced(double p, const TruncationPolicy& policy) {
  const double a = p * p;
  const Complex r = qpochhammer(a, a, policy) * std::pow(qpochhammer(-a, a, policy), 2);
  return r.real();
}

double theta3(double p, const TruncationPolicy& policy) {
  const double a = p * p;
  const Complex r = qpochhammer(a, a, policy) * std::pow(qpochhammer(-p, a, policy), 2);
  return r.real();
}

}  // namespace

double modulus_from_nome(double p, const TruncationPolicy& policy) {
  check_real_nome(p);
  const double ratio = 2.0 * std::pow(p, 0.25) * theta2_reduced(p, policy) / theta3(p, policy);
  return ratio * ratio;
}

double complete_K_from_nome(double p, const TruncationPolicy& policy) {
  check_real_nome(p);
  const double t3 = theta3(p, policy);
  return 0.5 * std::numbers::pi * t3 * t3;
}

double jacobi_snh(double u, double modulus, const TruncationPolicy& policy) {
  check_modulus(modulus);
  if (!std::isfinite(u)) throw DomainError("u must be finite");
  if (u == 0.0) return 0.0;
  const double K = complete_K(modulus);
  const double p = std::exp(-std::numbers::pi * complete_K_prime(modulus) / K);
  const double x = std::exp(std::numbers::pi * u / (2.0 * K));
  return (std::pow(p, 0.25) / std::sqrt(modulus) * sigma(x, p, policy)).real();
}

ParamPoint param_map(const EllipticParams& ep) {
  ep.validate();
  const double K = complete_K(ep.modulus);
  const double Kp = complete_K_prime(ep.modulus);
  ParamPoint out;
  out.nome.p = std::exp(-std::numbers::pi * Kp / K);
  out.nome.q = -std::exp(-std::numbers::pi * ep.lambda / (2.0 * K));
  out.x = std::exp(std::numbers::pi * ep.u / (2.0 * K));
  return out;
}

EllipticParams inverse_param_map(const NomeParams& nome, Complex x,
                                 const TruncationPolicy& policy) {
  nome.validate();
  if (!is_real(nome.p) || !is_real(nome.q) || !is_real(x)) {
    throw DomainError("inverse parameter map needs real p, q and x");
  }
  if (nome.q.real() >= 0.0) throw DomainError("inverse parameter map needs q < 0");
  if (x.real() <= 0.0) throw DomainError("inverse parameter map needs x > 0");
  const double p = nome.p.real();
  EllipticParams ep;
  ep.modulus = modulus_from_nome(p, policy);
  const double K = complete_K_from_nome(p, policy);
  ep.lambda = -2.0 * K / std::numbers::pi * std::log(-nome.q.real());
  ep.u = 2.0 * K / std::numbers::pi * std::log(x.real());
  return ep;
}

BaxterWeights baxter_entries(const EllipticParams& ep, const TruncationPolicy& policy) {
  ep.validate();
  const double s_lambda = jacobi_snh(ep.lambda, ep.modulus, policy);
  if (std::abs(s_lambda) < kPoleTol) {
    throw NearSingularity("snh(lambda) vanishes; weights undefined");
  }
  const double s_lu = jacobi_snh(ep.lambda - ep.u, ep.modulus, policy);
  const double s_u = jacobi_snh(ep.u, ep.modulus, policy);
  return {s_lu / s_lambda, s_u / s_lambda, 1.0, ep.modulus * s_lu * s_u};
}

BaxterWeights baxter_entries(Complex x, const NomeParams& nome, const TruncationPolicy& policy) {
  nome.validate();
  require_finite(x, "x");
  if (!is_real(nome.p) || nome.p.real() <= 0.0) {
    throw DomainError("eight-vertex weights need a real nome 0 < p < 1");
  }
  if (x == Complex{}) throw DomainError("x must be nonzero");
  const double p = nome.p.real();
  const Complex x_lambda = -1.0 / nome.q;
  const Complex s_lambda = sigma(x_lambda, p, policy);
  if (std::abs(s_lambda) < kPoleTol) {
    throw NearSingularity("snh(lambda) vanishes; weights undefined");
  }
  // theta_{p^2}(1) = 0 exactly, so x = 1 gives b = d = 0 with no rounding
  const Complex s_lu = sigma(x_lambda / x, p, policy);
  const Complex s_u = sigma(x, p, policy);
  return {s_lu / s_lambda, s_u / s_lambda, 1.0, std::sqrt(p) * s_lu * s_u};
}

}  // namespace ellex
