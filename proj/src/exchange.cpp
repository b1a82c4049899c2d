#include "ellex/exchange.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "ellex/errors.hpp"

namespace ellex {

namespace {

constexpr double kPoleTol = 1e-10;

void validate_exchange_nome(const NomeParams& nome) {
  require_finite(nome.p, "p");
  require_finite(nome.q, "q");
  if (nome.p == Complex{}) throw DomainError("p must be nonzero");
  const double aq = std::abs(nome.q);
  if (aq == 0.0) throw DomainError("q must be nonzero");
  if (aq >= 1.0) throw NonConvergentBase("|q| = " + format_double(aq) + " is not < 1");
}

// theta_{q^4}(num1) theta_{q^4}(num2) / (theta_{q^4}(den1) theta_{q^4}(den2))
Complex theta_ratio(Complex a, Complex n1, Complex n2, Complex d1, Complex d2,
                    const TruncationPolicy& policy) {
  if (theta_zero_distance(a, d1) < kPoleTol || theta_zero_distance(a, d2) < kPoleTol) {
    throw NearSingularity("exchange function evaluated on a pole spiral");
  }
  return theta(a, n1, policy) * theta(a, n2, policy) /
         (theta(a, d1, policy) * theta(a, d2, policy));
}

// Closed form of F(m, x) as a function of X = x^2.
Complex closed_F_sq(int m, Complex X, Complex p, Complex q, const TruncationPolicy& policy) {
  const Complex a = ipow(q, 4);
  const Complex q2 = q * q;
  const Complex Xi = 1.0 / X;
  Complex acc{1.0, 0.0};
  if (m > 0) {
    for (int s = 1; s <= 2 * m; ++s) {
      const Complex ps = ipow(p, s);
      acc *= theta_ratio(a, X * q2 / ps, Xi * q2 * ps, Xi * ps, X / ps, policy) / q;
    }
  } else {
    for (int s = 0; s <= 2 * std::abs(m) - 1; ++s) {
      const Complex ps = ipow(p, s);
      acc *= q * theta_ratio(a, X * ps, Xi / ps, X * q2 * ps, Xi * q2 / ps, policy);
    }
  }
  return acc;
}

Complex closed_Y_sq(int m, Complex X, Complex p, Complex q, const TruncationPolicy& policy) {
  const Complex a = ipow(q, 4);
  const Complex q2 = q * q;
  const Complex Xi = 1.0 / X;
  const int upper = m > 0 ? 2 * m - 1 : 2 * std::abs(m);
  Complex acc{1.0, 0.0};
  for (int s = 1; s <= upper; ++s) {
    const Complex ps = ipow(p, s);
    acc *= X * theta_ratio(a, Xi * ps, X * q2 * ps, X * ps, Xi * q2 * ps, policy);
  }
  return acc * acc;
}

}  // namespace

LevelParams LevelParams::make(int m, const NomeParams& nome) {
  if (m == 0) throw DomainError("level m = 0 is excluded");
  validate_exchange_nome(nome);
  return {m, nome, CentralCharge::from_level(m, nome)};
}

double LevelParams::constraint_residual() const {
  const Complex lhs = std::exp((c.value + 2.0) * std::log(nome.q));
  return std::abs(lhs - ipow(nome.p, m));
}

NomeParams CommutingPoint::nome(Complex q) const {
  if (k == 0) throw DomainError("k = 0 is excluded (p = 1)");
  return {ipow(q, 2LL * k), q};
}

Complex shift_factor_F(Complex x, const NomeParams& nome, const TruncationPolicy& policy) {
  validate_exchange_nome(nome);
  require_finite(x, "x");
  if (x == Complex{}) throw DomainError("x must be nonzero");
  const Complex p = nome.p;
  const Complex q = nome.q;
  const Complex a = ipow(q, 4);
  const Complex q2 = q * q;
  const Complex X = x * x;
  const Complex Xi = 1.0 / X;
  return theta_ratio(a, X * q2, Xi * q2, Xi, X, policy) *
         theta_ratio(a, X * q2 * p, Xi * q2 / p, Xi / p, X * p, policy) / q2;
}

Complex exchange_F(const LevelParams& level, Complex x, const TruncationPolicy& policy) {
  require_finite(x, "x");
  if (x == Complex{}) throw DomainError("x must be nonzero");
  return closed_F_sq(level.m, x * x, level.nome.p, level.nome.q, policy);
}

Complex exchange_F_iterated(const LevelParams& level, Complex x, const TruncationPolicy& policy) {
  const Complex p = level.nome.p;
  Complex acc{1.0, 0.0};
  if (level.m > 0) {
    for (int s = 1; s <= level.m; ++s) acc *= shift_factor_F(x / ipow(p, s), level.nome, policy);
  } else {
    for (int s = 0; s < -level.m; ++s) acc /= shift_factor_F(x * ipow(p, s), level.nome, policy);
  }
  return acc;
}

Complex exchange_F_reflected(const LevelParams& level, Complex x, const TruncationPolicy& policy) {
  if (level.m > 0) throw DomainError("reflected form of F applies to m < 0 only");
  require_finite(x, "x");
  if (x == Complex{}) throw DomainError("x must be nonzero");
  const Complex p = level.nome.p;
  // (x^-1 p^{1/2})^2 = p / x^2
  return 1.0 / closed_F_sq(-level.m, p / (x * x), p, level.nome.q, policy);
}

Complex exchange_Y(const LevelParams& level, Complex x, const TruncationPolicy& policy) {
  require_finite(x, "x");
  if (x == Complex{}) throw DomainError("x must be nonzero");
  return closed_Y_sq(level.m, x * x, level.nome.p, level.nome.q, policy);
}

Complex exchange_Y_ratio(const LevelParams& level, Complex x, const TruncationPolicy& policy) {
  require_finite(x, "x");
  if (x == Complex{}) throw DomainError("x must be nonzero");
  const Complex qc = std::exp(level.c.value * std::log(level.nome.q));
  const Complex shifted = -std::sqrt(level.nome.p) * x;
  return exchange_F(level, qc * x, policy) / exchange_F(level, shifted, policy);
}

Complex commuting_F(int m, const CommutingPoint& cp, Complex x, Complex q,
                    const TruncationPolicy& policy) {
  if (m == 0) throw DomainError("level m = 0 is excluded");
  if (cp.k == 0) throw DomainError("k = 0 is excluded (p = 1)");
  validate_exchange_nome({q, q});
  require_finite(x, "x");
  if (x == Complex{}) throw DomainError("x must be nonzero");
  if (cp.odd()) return {1.0, 0.0};
  const Complex a = ipow(q, 4);
  const Complex X = x * x;
  if (theta_zero_distance(a, X) < kPoleTol) {
    throw NearSingularity("theta_{q^4}(x^2) vanishes at x = " + format_complex(x));
  }
  const Complex ratio = theta(a, X * q * q, policy) / theta(a, X, policy);
  return ipow(q, -2LL * m) * ipow(X, 2LL * m) * ipow(ratio, 4LL * m);
}

CheckResult check_p_periodicity(const LevelParams& level, Complex x, ExchangeFunction which,
                                const TruncationPolicy& policy) {
  CheckResult r;
  r.suite = "periodicity";
  r.id = which == ExchangeFunction::F ? "F(p)=F(pq^4)" : "Y(p)=Y(pq^4)";
  r.params = Json{{"m", level.m}, {"x", format_complex(x)}, {"p", format_complex(level.nome.p)},
                  {"q", format_complex(level.nome.q)}};
  r.tolerance = 1e-10;
  const Complex shifted_p = level.nome.p * ipow(level.nome.q, 4);
  if (!(std::abs(shifted_p) < 1.0)) {
    r.skipped = true;
    r.note = "|p q^4| >= 1: shifted nome outside the unit disk";
    r.decide();
    return r;
  }
  const LevelParams shifted = LevelParams::make(level.m, {shifted_p, level.nome.q});
  Complex before;
  Complex after;
  if (which == ExchangeFunction::F) {
    before = exchange_F(level, x, policy);
    after = exchange_F(shifted, x, policy);
  } else {
    before = exchange_Y(level, x, policy);
    after = exchange_Y(shifted, x, policy);
  }
  r.max_error = std::abs(after - before) / std::max(1.0, std::abs(before));
  r.decide();
  return r;
}

double exchange_singular_distance(int m, Complex x, const NomeParams& nome) {
  const Complex a = ipow(nome.q, 4);
  const Complex q2 = nome.q * nome.q;
  const Complex X = x * x;
  const int span = 4 * std::abs(m) + 2;
  double best = std::numeric_limits<double>::infinity();
  for (int s = -span; s <= span; ++s) {
    const Complex ps = ipow(nome.p, s);
    for (Complex base : {X, 1.0 / X}) {
      best = std::min(best, theta_zero_distance(a, base * ps));
      best = std::min(best, theta_zero_distance(a, base * q2 * ps));
    }
  }
  return best;
}

}  // namespace ellex
