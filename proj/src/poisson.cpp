#include "ellex/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>

#include "ellex/errors.hpp"
#include "ellex/exchange.hpp"

namespace ellex {

namespace {

constexpr double kPoleTol = 1e-8;
constexpr double kSuppress = 1e-12;

void check_q(Complex q) {
  require_finite(q, "q");
  const double aq = std::abs(q);
  if (!(aq > 0.0 && aq < 1.0)) {
    throw DomainError("q = " + format_complex(q) + " must satisfy 0 < |q| < 1");
  }
}

// Poles of g sit at x^2 = q^{2j}, i.e. on the zero set of theta_{q^2}.
void check_pole(Complex x, Complex q) {
  require_finite(x, "x");
  if (x == Complex{}) throw DomainError("x must be nonzero");
  if (auto j = theta_zero_index(q * q, x * x, kPoleTol)) {
    throw NearSingularity("structure function evaluated at the pole x^2 = q^" +
                          std::to_string(2 * *j));
  }
}

}  // namespace

void BetaLimitRequest::validate() const {
  if (m == 0) throw DomainError("level m = 0 is excluded");
  if (k == 0) throw DomainError("k = 0 is excluded (p = 1)");
  check_q(q);
  if (beta == 0.0) throw DomainError("beta = 0 leaves ln Y / beta undefined (Y = 1)");
  if (!(beta > 0.0 && beta < 2.0)) throw DomainError("beta must lie in (0, 2)");
}

Complex BetaLimitRequest::nome_p() const {
  return std::exp(4.0 * k / (2.0 - beta) * std::log(q));
}

double AnnulusLabel::radius(Complex q) const { return std::pow(std::abs(q), n - 0.5); }

double ModeBracketTable::antisymmetry_defect() const {
  double worst = 0.0;
  for (const auto& [l, g] : coefficients) {
    auto it = coefficients.find(-l);
    if (it != coefficients.end()) worst = std::max(worst, std::abs(g + it->second));
  }
  return worst;
}

Complex poisson_series_g(Complex x, Complex q, const TruncationPolicy& policy) {
  policy.validate();
  check_q(q);
  check_pole(x, q);
  const Complex X = x * x;
  const Complex Xi = 1.0 / X;
  const Complex q2 = q * q;
  const Complex q4 = q2 * q2;
  const double r4 = std::abs(q4);
  Complex sum = X / (1.0 - X) - Xi / (1.0 - Xi);
  Complex up = X;    // X q^{4n}
  Complex down = Xi; // X^-1 q^{4n}
  double bound = std::abs(X) + std::abs(Xi);
  for (int n = 0; n < policy.max_terms; ++n) {
    if (n > 0 && std::abs(up) < 0.5 && std::abs(down) < 0.5 &&
        8.0 * bound / (1.0 - r4) < policy.tail_tol) {
      return sum;
    }
    const Complex up2 = up * q2;
    const Complex down2 = down * q2;
    sum += -2.0 * up / (1.0 - up) + 2.0 * up2 / (1.0 - up2) + 2.0 * down / (1.0 - down) -
           2.0 * down2 / (1.0 - down2);
    up *= q4;
    down *= q4;
    bound *= r4;
  }
  throw TruncationExceeded("structure series did not converge within " +
                           std::to_string(policy.max_terms) + " terms");
}

Complex poisson_prefactor(int m, int k, Complex q) {
  if (m == 0) throw DomainError("level m = 0 is excluded");
  if (k == 0) throw DomainError("k = 0 is excluded (p = 1)");
  check_q(q);
  const double km = static_cast<double>(k) * m;
  if (k % 2 != 0) return 2.0 * km * std::log(q);
  return -2.0 * km * (2.0 * m - 1.0) * std::log(q);
}

Complex poisson_structure(int m, int k, Complex x, Complex q, const TruncationPolicy& policy) {
  return poisson_prefactor(m, k, q) * poisson_series_g(x, q, policy);
}

Complex ps1_structure(Complex x, Complex q, const TruncationPolicy& policy) {
  check_q(q);
  check_pole(x, q);
  const Complex a = ipow(q, 4);
  const Complex q2 = q * q;
  const Complex X = x * x;
  const Complex Xi = 1.0 / X;
  auto L = [&](Complex z) { return log_deriv_theta(a, z, policy); };
  // h(y) = y d/dy ln tau(q^{1/2} y) = -1 + 2 L(q^2 y^2) + 2 L(y^-2)
  const Complex h_x = -1.0 + 2.0 * L(q2 * X) + 2.0 * L(Xi);
  const Complex h_inv = -1.0 + 2.0 * L(q2 * Xi) + 2.0 * L(X);
  return -std::log(q) * (h_x - h_inv);
}

BetaLimitPoint beta_limit_point(const BetaLimitRequest& req, Complex x,
                                const TruncationPolicy& policy) {
  req.validate();
  const LevelParams level = LevelParams::make(req.m, {req.nome_p(), req.q});
  const Complex y = exchange_Y(level, x, policy);
  BetaLimitPoint out;
  out.beta = req.beta;
  out.estimate = std::log(y) / req.beta;
  out.error = std::abs(out.estimate - poisson_structure(req.m, req.k, x, req.q, policy));
  return out;
}

CheckResult beta_limit_check(const BetaLimitRequest& req, Complex x,
                             const TruncationPolicy& policy) {
  req.validate();
  if (req.beta > 0.1) throw DomainError("beta limit check needs beta in (0, 0.1]");
  CheckResult r;
  r.suite = "theorem7";
  r.id = "beta-limit order";
  r.metric = "ratio";
  r.lower_bound = 5.0;
  r.tolerance = 20.0;
  BetaLimitRequest fine = req;
  fine.beta = req.beta / 10.0;
  const BetaLimitPoint coarse_pt = beta_limit_point(req, x, policy);
  const BetaLimitPoint fine_pt = beta_limit_point(fine, x, policy);
  r.max_error = coarse_pt.error / fine_pt.error;
  r.params = Json{{"m", req.m},
                  {"k", req.k},
                  {"q", format_complex(req.q)},
                  {"x", format_complex(x)},
                  {"beta", req.beta},
                  {"error_beta", coarse_pt.error},
                  {"error_beta_over_10", fine_pt.error}};
  r.decide();
  return r;
}

namespace {

// One term c * Y / (1 - Y) of g, with Y = s X (direct) or Y = s / X.
struct SeriesTerm {
  double c;
  bool direct;
  int q_power;  // s = q^q_power
};

// Terms with s = q^{4n}, q^{4n+2} for n < count, plus the rational part.
std::vector<SeriesTerm> series_terms(int count) {
  std::vector<SeriesTerm> out{{1.0, true, 0}, {-1.0, false, 0}};
  for (int n = 0; n < count; ++n) {
    out.push_back({-2.0, true, 4 * n});
    out.push_back({2.0, true, 4 * n + 2});
    out.push_back({2.0, false, 4 * n});
    out.push_back({-2.0, false, 4 * n + 2});
  }
  return out;
}

}  // namespace

Complex series_laurent_coefficient(Complex q, AnnulusLabel annulus, int l) {
  check_q(q);
  if (l % 2 != 0) return {};
  const int i = l / 2;  // coefficient of X^i, X = x^2
  const double aq = std::abs(q);
  // representative |X| on the contour, in units of powers of |q|
  const int x_power = 2 * annulus.n - 1;
  // enough terms that q^{4n |i|} (or q^{4n} for i = 0 bookkeeping) is negligible
  // and every term whose pole lies outside the contour is included
  const int count = 8 + std::abs(x_power) / 4 +
                    static_cast<int>(std::ceil(std::log(1e-18) / (4.0 * std::log(aq))));
  Complex sum{};
  for (const SeriesTerm& t : series_terms(count)) {
    const Complex s = ipow(q, t.q_power);
    // |Y| < 1 on the contour iff the power of |q| in Y is positive
    const int y_power = t.direct ? t.q_power + x_power : t.q_power - x_power;
    const bool inside = y_power > 0;
    if (t.direct) {
      // Y/(1-Y) = sum_{j>=1} s^j X^j, or -1 - sum_{j>=1} s^-j X^-j
      if (inside && i >= 1) sum += t.c * ipow(s, i);
      if (!inside && i == 0) sum -= t.c;
      if (!inside && i <= -1) sum -= t.c * ipow(s, i);
    } else {
      if (inside && i <= -1) sum += t.c * ipow(s, -i);
      if (!inside && i == 0) sum -= t.c;
      if (!inside && i >= 1) sum -= t.c * ipow(s, -i);
    }
  }
  return sum;
}

Complex annulus_crossing_jump(Complex q, int n, int l) {
  check_q(q);
  if (l % 2 != 0) return {};
  const Complex X0 = ipow(q, 2LL * n);
  // residue in X of c Y/(1-Y) at Y = 1: -c X0 (Y = s X) or +c X0 (Y = s/X)
  Complex rho{};
  for (const SeriesTerm& t : series_terms(std::abs(n) + 1)) {
    if (t.direct && t.q_power == -2 * n) rho -= t.c * X0;
    if (!t.direct && t.q_power == 2 * n) rho += t.c * X0;
  }
  return rho * ipow(q, -2LL * n * (l / 2 + 1));
}

int recommended_nodes(Complex q, int l_max) {
  const double aq = std::abs(q);
  // aliasing decays like |q|^{N/2}; aim below 1e-17
  const double need = 2.0 * std::log(1e-17) / std::log(aq);
  int n = 64;
  while (n < need || n < 4 * (std::abs(l_max) + 1)) n *= 2;
  return n;
}

namespace {

int round_up_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

Complex structure_value(StructureKind kind, Complex x, Complex q, const TruncationPolicy& policy) {
  return kind == StructureKind::theorem7 ? poisson_series_g(x, q, policy)
                                         : ps1_structure(x, q, policy);
}

// Trapezoidal coefficients from samples on N equispaced nodes (stride picks a subset).
Complex trapezoid_coefficient(const std::vector<Complex>& samples, int stride, double r, int l) {
  const int total = static_cast<int>(samples.size());
  const int count = total / stride;
  Complex acc{};
  for (int j = 0; j < count; ++j) {
    const long long idx = static_cast<long long>(j) * l % count;
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(idx) / count;
    acc += samples[static_cast<std::size_t>(j * stride)] * std::polar(1.0, angle);
  }
  return acc / static_cast<double>(count) * std::pow(r, -l);
}

}  // namespace

ModeBracketTable laurent_modes(StructureKind kind, Complex q, AnnulusLabel annulus, int l_min,
                               int l_max, int nodes, const TruncationPolicy& policy) {
  check_q(q);
  if (l_min > l_max) throw DomainError("empty l range");
  const int lmax_abs = std::max(std::abs(l_min), std::abs(l_max));
  const double aq = std::abs(q);
  const double r = annulus.radius(q);
  for (int j = annulus.n - 1; j <= annulus.n; ++j) {
    if (std::abs(r / std::pow(aq, j) - 1.0) < 1e-6) {
      throw AnnulusContainsPole("pole circle |x| = |q|^" + std::to_string(j) +
                                " touches the contour");
    }
  }
  int n_nodes = nodes > 0 ? nodes : recommended_nodes(q, lmax_abs);
  n_nodes = round_up_pow2(std::max(n_nodes, 4 * (lmax_abs + 1)));

  // 2N samples; the even ones are the N-point rule
  const int fine = 2 * n_nodes;
  std::vector<Complex> samples(static_cast<std::size_t>(fine));
  for (int j = 0; j < fine; ++j) {
    const Complex x = std::polar(r, 2.0 * std::numbers::pi * j / fine);
    samples[static_cast<std::size_t>(j)] = structure_value(kind, x, q, policy);
  }

  double peak = 0.0;
  for (const Complex& v : samples) peak = std::max(peak, std::abs(v));

  ModeBracketTable table;
  table.kind = kind;
  table.q = q;
  table.annulus = annulus;
  table.nodes = n_nodes;
  for (int l = l_min; l <= l_max; ++l) {
    const Complex coarse = trapezoid_coefficient(samples, 2, r, l);
    const Complex refined = trapezoid_coefficient(samples, 1, r, l);
    // measured against the Cauchy scale max|g| r^-l, below which roundoff lives
    const double scale = std::max(1.0, peak * std::pow(r, -l));
    if (std::abs(coarse - refined) > 1e-9 * scale) {
      throw QuadratureUnresolved("g_" + std::to_string(l) + " moved by " +
                                 format_double(std::abs(coarse - refined)) + " when doubling " +
                                 std::to_string(n_nodes) + " nodes");
    }
    table.coefficients[l] = coarse;
  }
  return table;
}

std::vector<BracketTerm> mode_bracket_terms(const ModeBracketTable& table, int n, int m,
                                            int cutoff) {
  struct Acc {
    Complex sum;
    bool nonzero_part = false;
  };
  std::map<std::pair<int, int>, Acc> merged;
  for (const auto& [l, g] : table.coefficients) {
    if (std::abs(l) > cutoff) continue;
    int a = n + l;
    int b = m - l;
    if (a > b) std::swap(a, b);
    Acc& acc = merged[{a, b}];
    acc.sum += g;
    if (std::abs(g) >= kSuppress) acc.nonzero_part = true;
  }
  std::vector<BracketTerm> out;
  for (const auto& [key, acc] : merged) {
    if (!acc.nonzero_part) continue;
    BracketTerm t;
    t.left = key.first;
    t.right = key.second;
    t.cancelled = std::abs(acc.sum) < kSuppress;
    t.coefficient = t.cancelled ? Complex{} : acc.sum;
    out.push_back(t);
  }
  return out;
}

namespace {

std::string coefficient_text(Complex z) {
  // quadrature noise below the suppression threshold is not printed
  if (std::abs(z.imag()) < kSuppress) z.imag(0.0);
  if (std::abs(z.real()) < kSuppress) z.real(0.0);
  char buf[64];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.12g", z.real());
  } else {
    std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real(), z.imag());
  }
  return buf;
}

std::string monomial_text(const BracketTerm& t) {
  return "t_" + std::to_string(t.left) + " t_" + std::to_string(t.right);
}

}  // namespace

std::string format_mode_bracket(const ModeBracketTable& table, int n, int m, int cutoff) {
  const auto terms = mode_bracket_terms(table, n, m, cutoff);
  std::ostringstream os;
  os << "{t_" << n << ",t_" << m << "} =";
  bool any = false;
  std::vector<std::string> cancelled;
  for (const auto& t : terms) {
    if (t.cancelled) {
      cancelled.push_back(monomial_text(t));
      continue;
    }
    os << (any ? " + " : " ") << '(' << coefficient_text(t.coefficient) << ") "
       << monomial_text(t);
    any = true;
  }
  if (!any) os << " 0";
  if (!cancelled.empty()) {
    os << " [cancelled:";
    for (std::size_t i = 0; i < cancelled.size(); ++i) os << (i ? ", " : " ") << cancelled[i];
    os << ']';
  }
  return os.str();
}

Json mode_bracket_json(const ModeBracketTable& table, int n, int m, int cutoff) {
  Json terms = Json::array();
  for (const auto& t : mode_bracket_terms(table, n, m, cutoff)) {
    terms.push_back(Json{{"monomial", {t.left, t.right}},
                         {"re", t.coefficient.real()},
                         {"im", t.coefficient.imag()},
                         {"cancelled", t.cancelled}});
  }
  return Json{{"n", n}, {"m", m}, {"cutoff", cutoff}, {"terms", terms},
              {"text", format_mode_bracket(table, n, m, cutoff)}};
}

std::string to_string(StructureKind kind) {
  return kind == StructureKind::theorem7 ? "theorem7" : "ps1";
}

StructureKind parse_structure_kind(const std::string& name) {
  if (name == "theorem7" || name == "g") return StructureKind::theorem7;
  if (name == "ps1") return StructureKind::ps1;
  throw DomainError("unknown structure function '" + name + "' (theorem7|ps1)");
}

}  // namespace ellex
