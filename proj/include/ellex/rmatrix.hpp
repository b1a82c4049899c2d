#pragma once

// Normalized eight-vertex R-matrix
//
//   R+(x) = tau(q^{1/2} x^{-1}) mu(x)^{-1} [[a,0,0,d],[0,b,c,0],[0,c,b,0],[d,0,0,a]]
//
// in the basis ++, +-, -+, -- (index 2*e1 + e2 with + -> 0, - -> 1).
// q^{1/2} is the principal square root; it only enters through an overall
// constant, which drops out of every matrix identity checked here.

#include <array>

#include "ellex/complex.hpp"
#include "ellex/elliptic.hpp"
#include "ellex/qseries.hpp"
#include "ellex/report.hpp"

namespace ellex {

class RMatrix4 {
 public:
  RMatrix4() { m_.fill(Complex{}); }

  static RMatrix4 identity();
  /// Eight-vertex layout: a at (0,0),(3,3); b at (1,1),(2,2); c at (1,2),(2,1);
  /// d at (0,3),(3,0); zeros elsewhere.
  static RMatrix4 eight_vertex(Complex a, Complex b, Complex c, Complex d);

  Complex& operator()(int row, int col) { return m_[4 * row + col]; }
  Complex operator()(int row, int col) const { return m_[4 * row + col]; }

  /// True when the eight off-pattern entries are exactly zero.
  bool has_eight_vertex_sparsity() const;

  double max_abs() const;

  friend RMatrix4 operator*(const RMatrix4& a, const RMatrix4& b);
  friend RMatrix4 operator-(const RMatrix4& a, const RMatrix4& b);
  friend RMatrix4 operator*(Complex s, const RMatrix4& m);

 private:
  std::array<Complex, 16> m_;
};

enum class Slot { first = 1, second = 2 };

/// Transposition in one tensor factor of C^2 (x) C^2.
RMatrix4 partial_transpose(const RMatrix4& m, Slot slot);
RMatrix4 transpose(const RMatrix4& m);

/// P m P with P the flip of the two tensor factors (R_12 -> R_21).
RMatrix4 swap_slots(const RMatrix4& m);

struct Inversion {
  RMatrix4 inverse;
  double condition = 0.0;  ///< ||m||_1 ||m^-1||_1
};

/// Gaussian elimination with partial pivoting; throws SingularMatrix when a
/// pivot vanishes or the 1-norm condition number exceeds 1e12.
Inversion invert(const RMatrix4& m);

/// Central charge c with q^{c+2} = p^m under the principal logarithm.
struct CentralCharge {
  Complex value;

  static CentralCharge from_level(int m, const NomeParams& nome);

  /// p q^{-2c}.
  Complex starred_nome(const NomeParams& nome) const;
};

/// tau(x) = x^-1 theta_{q^4}(x^2 q) / theta_{q^4}(x^-2 q).
Complex tau_fn(Complex x, Complex q, const TruncationPolicy& policy = {});

/// tau(x) = x^-1 (q x^2;q^4)(q^3 x^-2;q^4) / ((q x^-2;q^4)(q^3 x^2;q^4)).
Complex tau_fn_pochhammer(Complex x, Complex q, const TruncationPolicy& policy = {});

/// 1/kappa(x2) as the ratio of eight double products with bases {p, q^4}.
Complex kappa_inv(Complex x2, const NomeParams& nome, const TruncationPolicy& policy = {});

/// 1/mu(x) = kappa_inv(x^2) (p^2;p^2)/(p;p)^2 theta_{p^2}(p x^2) theta_{p^2}(q^2)
///           / theta_{p^2}(q^2 x^2).
Complex mu_inv(Complex x, const NomeParams& nome, const TruncationPolicy& policy = {});

/// Scalar normalization tau(q^{1/2}/x) / mu(x).
Complex r_plus_prefactor(Complex x, const NomeParams& nome, const TruncationPolicy& policy = {});

/// R+(x) with weights from the multiplicative theta form; p real in (0,1).
RMatrix4 r_plus(Complex x, const NomeParams& nome, const TruncationPolicy& policy = {});

/// R+ at the point (p, q, x) = param_map(ep).
RMatrix4 r_plus(const EllipticParams& ep, const TruncationPolicy& policy = {});

/// R+ evaluated with p replaced by p q^{-2c}. Throws NonConvergentBase when
/// |p q^{-2c}| >= 1.
RMatrix4 r_plus_star(Complex x, const NomeParams& nome, const CentralCharge& c,
                     const TruncationPolicy& policy = {});

/// tau(x q^{1/2}) tau(x^-1 q^{1/2}) tau(x q^{1/2} p^{1/2}) tau(x^-1 q^{1/2} p^{-1/2}).
Complex pshift_factor(Complex x, const NomeParams& nome, const TruncationPolicy& policy = {});

/// Residual of (R21(x)^-1)^{t1} = (R21(x q^-2)^{t1})^-1, entrywise, relative to
/// max(1, max entry). Tolerance 1e-9.
CheckResult check_crossing(Complex x, const NomeParams& nome, const TruncationPolicy& policy = {});

/// Residual of R21(x p) = R21(x) / F(x) with F = pshift_factor. Tolerance 1e-9.
CheckResult check_pshift(Complex x, const NomeParams& nome, const TruncationPolicy& policy = {});

/// Residual of R12(x) R13(xy) R23(y) = R23(y) R13(xy) R12(x) on C^2 (x) C^2 (x) C^2
/// with slot-major basis ordering (slot 1 slowest). Tolerance 1e-9.
CheckResult check_ybe(Complex x, Complex y, const NomeParams& nome,
                      const TruncationPolicy& policy = {});

}  // namespace ellex
