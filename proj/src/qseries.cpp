#include "ellex/qseries.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "ellex/errors.hpp"

namespace ellex {

void TruncationPolicy::validate() const {
  if (max_terms < 1) throw DomainError("truncation policy: max_terms must be >= 1");
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
    throw DomainError("truncation policy: tail_tol must lie in (0, 1)");
  }
}

TruncationPolicy TruncationPolicy::tightened(double factor) const {
  TruncationPolicy p = *this;
  p.tail_tol /= factor;
  return p;
}

TruncationPolicy TruncationPolicy::from_environment() {
  TruncationPolicy p;
  if (const char* env = std::getenv("ELLEX_DEFAULT_TOL"); env && *env) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end == env || *end != '\0') {
      throw DomainError(std::string("ELLEX_DEFAULT_TOL is not a number: ") + env);
    }
    p.tail_tol = v;
  }
  p.validate();
  return p;
}

BaseSet::BaseSet(std::vector<Complex> bases) : bases_(std::move(bases)) {
  if (bases_.empty()) throw DomainError("base set is empty");
  for (Complex b : bases_) {
    require_finite(b, "product base");
    double r = std::abs(b);
    if (r == 0.0) throw DomainError("product base is zero");
    if (r >= 1.0) {
      throw NonConvergentBase("product base " + format_complex(b) + " has modulus >= 1");
    }
    max_modulus_ = std::max(max_modulus_, r);
  }
}

namespace {

// Multiplies in every factor (1 - x * monomial) whose exponents sum to `degree`.
void multiply_degree(Complex x, std::span<const std::vector<Complex>> powers,
                     std::size_t slot, int degree, Complex monomial, Complex& acc) {
  if (slot + 1 == powers.size()) {
    acc *= 1.0 - x * (monomial * powers[slot][degree]);
    return;
  }
  for (int e = 0; e <= degree; ++e) {
    multiply_degree(x, powers, slot + 1, degree - e, monomial * powers[slot][e], acc);
  }
}

}  // namespace

Complex qpochhammer(Complex x, const BaseSet& bases, const TruncationPolicy& policy) {
  policy.validate();
  require_finite(x, "q-Pochhammer argument");
  if (bases.size() == 1) return qpochhammer(x, bases.bases()[0], policy);

  const double scale = 1.0 + std::abs(x);
  const double rmax = bases.max_modulus();
  std::vector<std::vector<Complex>> powers(bases.size());
  for (std::size_t i = 0; i < bases.size(); ++i) powers[i].push_back({1.0, 0.0});

  Complex acc{1.0, 0.0};
  double bound = scale;
  for (int degree = 0; degree < policy.max_terms; ++degree) {
    if (bound < policy.tail_tol) return acc;
    if (degree > 0) {
      for (std::size_t i = 0; i < bases.size(); ++i) {
        powers[i].push_back(powers[i].back() * bases.bases()[i]);
      }
    }
    multiply_degree(x, powers, 0, degree, {1.0, 0.0}, acc);
    bound *= rmax;
  }
  if (bound < policy.tail_tol) return acc;
  throw TruncationExceeded("q-Pochhammer product did not reach tail tolerance within " +
                           std::to_string(policy.max_terms) + " degrees");
}

Complex qpochhammer(Complex x, Complex base, const TruncationPolicy& policy) {
  policy.validate();
  require_finite(x, "q-Pochhammer argument");
  require_finite(base, "q-Pochhammer base");
  const double r = std::abs(base);
  if (r == 0.0) throw DomainError("product base is zero");
  if (r >= 1.0) {
    throw NonConvergentBase("product base " + format_complex(base) + " has modulus >= 1");
  }
  Complex acc{1.0, 0.0};
  Complex term = x;  // x * base^n
  double bound = 1.0 + std::abs(x);
  for (int n = 0; n < policy.max_terms; ++n) {
    if (bound < policy.tail_tol) return acc;
    acc *= 1.0 - term;
    term *= base;
    bound *= r;
  }
  if (bound < policy.tail_tol) return acc;
  throw TruncationExceeded("q-Pochhammer product did not reach tail tolerance within " +
                           std::to_string(policy.max_terms) + " factors");
}

namespace {

void check_theta_args(Complex a, Complex x) {
  require_finite(a, "theta nome");
  require_finite(x, "theta argument");
  const double r = std::abs(a);
  if (r == 0.0) throw DomainError("theta nome is zero");
  if (!(r < 1.0)) {
    throw NonConvergentBase("theta nome " + format_complex(a) + " must satisfy |a| < 1");
  }
  if (x == Complex{}) throw DomainError("theta argument is zero");
}

}  // namespace

Complex theta(Complex a, Complex x, const TruncationPolicy& policy) {
  check_theta_args(a, x);
  return qpochhammer(x, a, policy) * qpochhammer(a / x, a, policy) * qpochhammer(a, a, policy);
}

Complex theta_shift_factor(Complex a, int s, Complex x) {
  require_finite(a, "theta nome");
  require_finite(x, "theta argument");
  if (x == Complex{}) throw DomainError("theta argument is zero");
  if (s == 0) return {1.0, 0.0};
  if (a == Complex{}) throw DomainError("theta nome is zero");
  const long long ss = s;
  const double sign = (s % 2 == 0) ? 1.0 : -1.0;
  return sign * ipow(a, -ss * (ss - 1) / 2) * ipow(x, -ss);
}

double theta_zero_distance(Complex a, Complex x) {
  const double la = std::log(std::abs(a));
  const double lx = std::log(std::abs(x));
  // |a|^n in [|x|/2, 2|x|]  <=>  n log|a| in [lx - ln2, lx + ln2]; log|a| < 0
  const double lo = std::ceil((lx + std::log(2.0)) / la);
  const double hi = std::floor((lx - std::log(2.0)) / la);
  double best = std::numeric_limits<double>::infinity();
  for (double n = lo; n <= hi; n += 1.0) {
    best = std::min(best, std::abs(x * ipow(a, -static_cast<long long>(n)) - 1.0));
  }
  return best;
}

std::optional<int> theta_zero_index(Complex a, Complex x, double tol) {
  const double la = std::log(std::abs(a));
  const double lx = std::log(std::abs(x));
  const long long lo = static_cast<long long>(std::ceil((lx + std::log(2.0)) / la));
  const long long hi = static_cast<long long>(std::floor((lx - std::log(2.0)) / la));
  for (long long n = lo; n <= hi; ++n) {
    if (std::abs(x * ipow(a, -n) - 1.0) < tol) return static_cast<int>(n);
  }
  return std::nullopt;
}

Complex log_deriv_theta(Complex a, Complex x, const TruncationPolicy& policy) {
  policy.validate();
  check_theta_args(a, x);
  if (auto n = theta_zero_index(a, x)) {
    throw NearSingularity("log-derivative of theta evaluated at the zero x = a^" +
                          std::to_string(*n));
  }
  const double r = std::abs(a);
  const Complex inv = 1.0 / x;
  Complex sum{};
  Complex up = x;       // x a^n
  Complex down = a * inv; // a^{n+1} / x
  double bound = std::abs(x) + std::abs(inv);
  for (int n = 0; n < policy.max_terms; ++n) {
    // every remaining term is below bound/(1 - r) once both geometric parts are small
    if (n > 0 && bound < policy.tail_tol * (1.0 - r) && std::abs(up) < 0.5 &&
        std::abs(down) < 0.5) {
      return sum;
    }
    sum += -up / (1.0 - up) + down / (1.0 - down);
    up *= a;
    down *= a;
    bound *= r;
  }
  throw TruncationExceeded("theta log-derivative series did not converge within " +
                           std::to_string(policy.max_terms) + " terms");
}

}  // namespace ellex
