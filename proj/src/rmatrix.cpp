#include "ellex/rmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ellex/errors.hpp"

namespace ellex {

namespace {

constexpr double kPoleTol = 1e-10;
constexpr double kIdentityTol = 1e-9;

Json point_params(Complex x, const NomeParams& nome) {
  return Json{{"x", format_complex(x)}, {"p", format_complex(nome.p)},
              {"q", format_complex(nome.q)}};
}

// max |a - b| / max(1, max |b|)
double relative_residual(const RMatrix4& a, const RMatrix4& b) {
  return (a - b).max_abs() / std::max(1.0, b.max_abs());
}

Complex checked_ratio(Complex num, Complex den, const char* what) {
  if (den == Complex{} || !is_finite(num / den)) {
    throw NearSingularity(std::string(what) + ": denominator vanishes");
  }
  return num / den;
}

}  // namespace

RMatrix4 RMatrix4::identity() {
  RMatrix4 m;
  for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
  return m;
}

RMatrix4 RMatrix4::eight_vertex(Complex a, Complex b, Complex c, Complex d) {
  RMatrix4 m;
  m(0, 0) = a;
  m(3, 3) = a;
  m(1, 1) = b;
  m(2, 2) = b;
  m(1, 2) = c;
  m(2, 1) = c;
  m(0, 3) = d;
  m(3, 0) = d;
  return m;
}

bool RMatrix4::has_eight_vertex_sparsity() const {
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const bool on_pattern = (r == c) || (r + c == 3);
      if (!on_pattern && (*this)(r, c) != Complex{}) return false;
    }
  }
  return true;
}

double RMatrix4::max_abs() const {
  double best = 0.0;
  for (Complex z : m_) best = std::max(best, std::abs(z));
  return best;
}

RMatrix4 operator*(const RMatrix4& a, const RMatrix4& b) {
  RMatrix4 out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      Complex s{};
      for (int k = 0; k < 4; ++k) s += a(r, k) * b(k, c);
      out(r, c) = s;
    }
  }
  return out;
}

RMatrix4 operator-(const RMatrix4& a, const RMatrix4& b) {
  RMatrix4 out;
  for (int i = 0; i < 16; ++i) out.m_[i] = a.m_[i] - b.m_[i];
  return out;
}

RMatrix4 operator*(Complex s, const RMatrix4& m) {
  RMatrix4 out;
  for (int i = 0; i < 16; ++i) out.m_[i] = s * m.m_[i];
  return out;
}

RMatrix4 partial_transpose(const RMatrix4& m, Slot slot) {
  RMatrix4 out;
  for (int i1 = 0; i1 < 2; ++i1) {
    for (int i2 = 0; i2 < 2; ++i2) {
      for (int j1 = 0; j1 < 2; ++j1) {
        for (int j2 = 0; j2 < 2; ++j2) {
          const Complex v = (slot == Slot::first) ? m(2 * j1 + i2, 2 * i1 + j2)
                                                  : m(2 * i1 + j2, 2 * j1 + i2);
          out(2 * i1 + i2, 2 * j1 + j2) = v;
        }
      }
    }
  }
  return out;
}

RMatrix4 transpose(const RMatrix4& m) {
  RMatrix4 out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out(r, c) = m(c, r);
  }
  return out;
}

RMatrix4 swap_slots(const RMatrix4& m) {
  constexpr int flip[4] = {0, 2, 1, 3};
  RMatrix4 out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out(r, c) = m(flip[r], flip[c]);
  }
  return out;
}

namespace {

double norm1(const RMatrix4& m) {
  double best = 0.0;
  for (int c = 0; c < 4; ++c) {
    double s = 0.0;
    for (int r = 0; r < 4; ++r) s += std::abs(m(r, c));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

Inversion invert(const RMatrix4& m) {
  RMatrix4 a = m;
  RMatrix4 inv = RMatrix4::identity();
  const double scale = m.max_abs();
  if (scale == 0.0 || !std::isfinite(scale)) throw SingularMatrix("matrix is zero or non-finite");
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    }
    if (std::abs(a(piv, col)) <= 1e-14 * scale) throw SingularMatrix("zero pivot in 4x4 inversion");
    if (piv != col) {
      for (int c = 0; c < 4; ++c) {
        std::swap(a(piv, c), a(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
    }
    const Complex d = a(col, col);
    for (int c = 0; c < 4; ++c) {
      a(col, c) /= d;
      inv(col, c) /= d;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const Complex f = a(r, col);
      if (f == Complex{}) continue;
      for (int c = 0; c < 4; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  Inversion out{inv, norm1(m) * norm1(inv)};
  if (!(out.condition < 1e12)) {
    throw SingularMatrix("4x4 matrix is numerically singular (condition " +
                         format_double(out.condition) + ")");
  }
  return out;
}

CentralCharge CentralCharge::from_level(int m, const NomeParams& nome) {
  if (m == 0) throw DomainError("level m must be nonzero");
  if (nome.p == Complex{} || nome.q == Complex{}) throw DomainError("p and q must be nonzero");
  return {static_cast<double>(m) * std::log(nome.p) / std::log(nome.q) - 2.0};
}

Complex CentralCharge::starred_nome(const NomeParams& nome) const {
  Complex ps = nome.p * std::exp(-2.0 * value * std::log(nome.q));
  // real p, q give a real starred nome; drop the rounding residue of the logs
  if (nome.p.imag() == 0.0 && nome.q.imag() == 0.0 &&
      std::abs(ps.imag()) <= 1e-12 * std::abs(ps)) {
    ps = {ps.real(), 0.0};
  }
  return ps;
}

Complex tau_fn(Complex x, Complex q, const TruncationPolicy& policy) {
  require_finite(x, "x");
  if (x == Complex{}) throw DomainError("tau: x must be nonzero");
  const Complex a = ipow(q, 4);
  const Complex x2 = x * x;
  if (theta_zero_distance(a, q / x2) < kPoleTol) {
    throw NearSingularity("tau: theta_{q^4}(x^-2 q) vanishes at x = " + format_complex(x));
  }
  return theta(a, x2 * q, policy) / (x * theta(a, q / x2, policy));
}

Complex tau_fn_pochhammer(Complex x, Complex q, const TruncationPolicy& policy) {
  require_finite(x, "x");
  if (x == Complex{}) throw DomainError("tau: x must be nonzero");
  const Complex a = ipow(q, 4);
  const Complex q3 = ipow(q, 3);
  const Complex x2 = x * x;
  const Complex num = qpochhammer(q * x2, a, policy) * qpochhammer(q3 / x2, a, policy);
  const Complex den = qpochhammer(q / x2, a, policy) * qpochhammer(q3 * x2, a, policy);
  return checked_ratio(num, x * den, "tau");
}

Complex kappa_inv(Complex x2, const NomeParams& nome, const TruncationPolicy& policy) {
  nome.validate();
  require_finite(x2, "x^2");
  if (x2 == Complex{}) throw DomainError("kappa: x^2 must be nonzero");
  const Complex p = nome.p;
  const Complex q2 = nome.q * nome.q;
  const Complex q4 = q2 * q2;
  const BaseSet bases{p, q4};
  auto P = [&](Complex z) { return qpochhammer(z, bases, policy); };
  const Complex num = P(q4 / x2) * P(q2 * x2) * P(p / x2) * P(p * q2 * x2);
  const Complex den = P(q4 * x2) * P(q2 / x2) * P(p * x2) * P(p * q2 / x2);
  return checked_ratio(num, den, "kappa");
}

Complex mu_inv(Complex x, const NomeParams& nome, const TruncationPolicy& policy) {
  nome.validate();
  require_finite(x, "x");
  if (x == Complex{}) throw DomainError("mu: x must be nonzero");
  const Complex p = nome.p;
  const Complex p2 = p * p;
  const Complex q2 = nome.q * nome.q;
  const Complex x2 = x * x;
  if (theta_zero_distance(p2, q2 * x2) < kPoleTol) {
    throw NearSingularity("mu: theta_{p^2}(q^2 x^2) vanishes at x = " + format_complex(x));
  }
  const Complex pp = qpochhammer(p, p, policy);
  const Complex ratio = qpochhammer(p2, p2, policy) / (pp * pp);
  return kappa_inv(x2, nome, policy) * ratio * theta(p2, p * x2, policy) *
         theta(p2, q2, policy) / theta(p2, q2 * x2, policy);
}

Complex r_plus_prefactor(Complex x, const NomeParams& nome, const TruncationPolicy& policy) {
  return tau_fn(std::sqrt(nome.q) / x, nome.q, policy) * mu_inv(x, nome, policy);
}

RMatrix4 r_plus(Complex x, const NomeParams& nome, const TruncationPolicy& policy) {
  const BaxterWeights w = baxter_entries(x, nome, policy);
  const Complex pre = r_plus_prefactor(x, nome, policy);
  return RMatrix4::eight_vertex(pre * w.a, pre * w.b, pre * w.c, pre * w.d);
}

RMatrix4 r_plus(const EllipticParams& ep, const TruncationPolicy& policy) {
  const ParamPoint pt = param_map(ep);
  const BaxterWeights w = baxter_entries(ep, policy);
  const Complex pre = r_plus_prefactor(pt.x, pt.nome, policy);
  return RMatrix4::eight_vertex(pre * w.a, pre * w.b, pre * w.c, pre * w.d);
}

RMatrix4 r_plus_star(Complex x, const NomeParams& nome, const CentralCharge& c,
                     const TruncationPolicy& policy) {
  nome.validate();
  const Complex ps = c.starred_nome(nome);
  if (!(std::abs(ps) < 1.0)) {
    throw NonConvergentBase("starred nome p q^{-2c} = " + format_complex(ps) +
                            " lies outside the unit disk");
  }
  return r_plus(x, NomeParams{ps, nome.q}, policy);
}

Complex pshift_factor(Complex x, const NomeParams& nome, const TruncationPolicy& policy) {
  const Complex sq = std::sqrt(nome.q);
  const Complex sp = std::sqrt(nome.p);
  const Complex q = nome.q;
  return tau_fn(x * sq, q, policy) * tau_fn(sq / x, q, policy) * tau_fn(x * sq * sp, q, policy) *
         tau_fn(sq / (x * sp), q, policy);
}

CheckResult check_crossing(Complex x, const NomeParams& nome, const TruncationPolicy& policy) {
  CheckResult r;
  r.suite = "rmatrix";
  r.id = "crossing";
  r.params = point_params(x, nome);
  r.tolerance = kIdentityTol;
  const Complex shifted = x / (nome.q * nome.q);
  const RMatrix4 lhs = partial_transpose(invert(swap_slots(r_plus(x, nome, policy))).inverse,
                                         Slot::first);
  const RMatrix4 rhs =
      invert(partial_transpose(swap_slots(r_plus(shifted, nome, policy)), Slot::first)).inverse;
  r.max_error = relative_residual(lhs, rhs);
  r.decide();
  return r;
}

CheckResult check_pshift(Complex x, const NomeParams& nome, const TruncationPolicy& policy) {
  CheckResult r;
  r.suite = "rmatrix";
  r.id = "p-shift";
  r.params = point_params(x, nome);
  r.tolerance = kIdentityTol;
  const RMatrix4 lhs = swap_slots(r_plus(x * nome.p, nome, policy));
  const Complex f = pshift_factor(x, nome, policy);
  const RMatrix4 rhs = (1.0 / f) * swap_slots(r_plus(x, nome, policy));
  r.max_error = relative_residual(lhs, rhs);
  r.decide();
  return r;
}

namespace {

using Mat8 = std::array<Complex, 64>;

// R acting on tensor slots (s, t) of C^2 (x) C^2 (x) C^2, slot-major ordering
Mat8 embed(const RMatrix4& m, int s, int t) {
  Mat8 out{};
  const int other = 3 - s - t;
  for (int I = 0; I < 8; ++I) {
    for (int J = 0; J < 8; ++J) {
      const int ib[3] = {(I >> 2) & 1, (I >> 1) & 1, I & 1};
      const int jb[3] = {(J >> 2) & 1, (J >> 1) & 1, J & 1};
      if (ib[other] != jb[other]) continue;
      out[8 * I + J] = m(2 * ib[s] + ib[t], 2 * jb[s] + jb[t]);
    }
  }
  return out;
}

Mat8 mul(const Mat8& a, const Mat8& b) {
  Mat8 out{};
  for (int r = 0; r < 8; ++r) {
    for (int k = 0; k < 8; ++k) {
      const Complex f = a[8 * r + k];
      if (f == Complex{}) continue;
      for (int c = 0; c < 8; ++c) out[8 * r + c] += f * b[8 * k + c];
    }
  }
  return out;
}

}  // namespace

CheckResult check_ybe(Complex x, Complex y, const NomeParams& nome,
                      const TruncationPolicy& policy) {
  CheckResult r;
  r.suite = "rmatrix";
  r.id = "yang-baxter";
  r.params = point_params(x, nome);
  r.params["y"] = format_complex(y);
  r.tolerance = kIdentityTol;
  const Mat8 r12 = embed(r_plus(x, nome, policy), 0, 1);
  const Mat8 r13 = embed(r_plus(x * y, nome, policy), 0, 2);
  const Mat8 r23 = embed(r_plus(y, nome, policy), 1, 2);
  const Mat8 lhs = mul(mul(r12, r13), r23);
  const Mat8 rhs = mul(mul(r23, r13), r12);
  double diff = 0.0;
  double scale = 1.0;
  for (int i = 0; i < 64; ++i) {
    diff = std::max(diff, std::abs(lhs[i] - rhs[i]));
    scale = std::max(scale, std::abs(rhs[i]));
  }
  r.max_error = diff / scale;
  r.decide();
  return r;
}

}  // namespace ellex
