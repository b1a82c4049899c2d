#include <doctest.h>

#include <numbers>

#include "ellex/errors.hpp"
#include "ellex/exchange.hpp"
#include "ellex/poisson.hpp"
#include "ellex/rmatrix.hpp"
#include "oracles.hpp"

using namespace ellex;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// g_l by a plain trapezoid rule over the brute-force series, long double nodes.
Complex oracle_mode(Complex q, int n, int l, int nodes = 512) {
  const double r = std::pow(std::abs(q), n - 0.5);
  Complex sum = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double t = 2.0 * std::numbers::pi * j / nodes;
    const Complex x = std::polar(r, t);
    sum += oracle::series_g(x, q, 200) * std::pow(x, -l);
  }
  return sum / static_cast<double>(nodes);
}

}  // namespace

TEST_CASE("structure series against brute force") {
  const Complex q = 0.4;
  CHECK(rel(poisson_series_g(1.5, q), oracle::series_g(1.5, q, 10000)) < 1e-12);
  const Complex x{0.9, 0.55};
  CHECK(rel(poisson_series_g(x, q), oracle::series_g(x, q, 400)) < 1e-12);
  const Complex qc{0.3, 0.2};
  CHECK(rel(poisson_series_g(x, qc), oracle::series_g(x, qc, 400)) < 1e-12);
}

TEST_CASE("structure series symmetries") {
  const Complex q = 0.45;
  const Complex x{1.2, 0.4};
  CHECK(std::abs(poisson_series_g(1.0 / x, q) + poisson_series_g(x, q)) < 1e-12);
  CHECK(std::abs(poisson_series_g(-x, q) - poisson_series_g(x, q)) < 1e-12);
  // x = i is fixed by x -> -1/x, so g(i) = -g(i) = 0
  CHECK(std::abs(poisson_series_g(Complex{0.0, 1.0}, q)) < 1e-13);
  CHECK_THROWS_AS(poisson_series_g(1.0, q), NearSingularity);
  CHECK_THROWS_AS(poisson_series_g(q, q), NearSingularity);
  CHECK_THROWS_AS(poisson_series_g(x, 1.0), DomainError);
}

TEST_CASE("prefactors") {
  const Complex q = 0.5;
  const double lq = std::log(0.5);
  CHECK(std::abs(poisson_prefactor(1, 1, q) - 2.0 * lq) < 1e-15);
  CHECK(std::abs(poisson_prefactor(2, 3, q) - 12.0 * lq) < 1e-14);
  CHECK(std::abs(poisson_prefactor(2, 2, q) + 2.0 * 2 * 2 * 3 * lq) < 1e-14);
  CHECK(std::abs(poisson_prefactor(-1, 2, q) + 2.0 * 2 * -1 * -3 * lq) < 1e-14);
  const Complex x{1.3, 0.2};
  CHECK(std::abs(poisson_structure(2, 3, x, q) - 12.0 * lq * poisson_series_g(x, q)) < 1e-13);
}

TEST_CASE("ps1 against a finite difference of ln tau") {
  const Complex q = 0.5;
  const double h = 1e-5;
  auto hfun = [&](Complex y) {
    const Complex s = std::sqrt(q);
    return y * (std::log(tau_fn(s * y * (1.0 + h), q)) - std::log(tau_fn(s * y * (1.0 - h), q))) /
           (2.0 * h * y);
  };
  const Complex x = 1.35;
  const Complex fd = -std::log(q) * (hfun(x) - hfun(1.0 / x));
  CHECK(std::abs(ps1_structure(x, q) - fd) < 1e-7);
}

TEST_CASE("ps1 is 2 ln q times g") {
  for (Complex q : {Complex{0.5}, Complex{0.3, 0.1}}) {
    for (Complex x : {Complex{1.35}, Complex{0.8, 0.6}, Complex{-1.7, 0.3}}) {
      CHECK(std::abs(ps1_structure(x, q) - 2.0 * std::log(q) * poisson_series_g(x, q)) <
            1e-11 * std::max(1.0, std::abs(ps1_structure(x, q))));
    }
  }
}

TEST_CASE("beta limit") {
  BetaLimitRequest req;
  req.m = 1;
  req.k = 1;
  req.beta = 1e-3;
  req.q = 0.5;
  CHECK(std::abs(req.nome_p() - std::pow(0.5, 4.0 / (2.0 - 1e-3))) < 1e-15);
  const CheckResult c = beta_limit_check(req, 1.4);
  CHECK(c.pass);
  CHECK(c.max_error == doctest::Approx(10.0).epsilon(0.3));

  const BetaLimitPoint pt = beta_limit_point(req, 1.4);
  const Complex target = poisson_structure(1, 1, 1.4, req.q);
  CHECK(std::abs(pt.estimate - target) < 1e-2 * std::abs(target));

  req.beta = 0.0;
  CHECK_THROWS_AS(beta_limit_point(req, 1.4), DomainError);
  req.beta = 2.5;
  CHECK_THROWS_AS(req.validate(), DomainError);
  req.beta = 1e-3;
  req.m = 0;
  CHECK_THROWS_AS(req.validate(), DomainError);
}

TEST_CASE("Laurent modes against the geometric expansion") {
  const Complex q = 0.5;
  for (int n : {-1, 0, 1, 2}) {
    const ModeBracketTable t = laurent_modes(StructureKind::theorem7, q, {n}, -8, 8);
    CHECK(t.nodes >= 64);
    for (const auto& [l, g] : t.coefficients) {
      const Complex ref = series_laurent_coefficient(q, {n}, l);
      CHECK(std::abs(g - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
      if (l % 2 != 0) CHECK(std::abs(g) < 1e-8);
    }
  }
}

TEST_CASE("Laurent modes against a brute-force contour") {
  const Complex q = 0.5;
  const ModeBracketTable t = laurent_modes(StructureKind::theorem7, q, {1}, -4, 4);
  for (int l : {-4, -2, 0, 2, 4}) {
    const Complex ref = oracle_mode(q, 1, l);
    CHECK(std::abs(t.coefficients.at(l) - ref) < 1e-9 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("annulus crossing picks up the pole residues") {
  const Complex q = 0.5;
  const ModeBracketTable a = laurent_modes(StructureKind::theorem7, q, {1}, -6, 6);
  const ModeBracketTable b = laurent_modes(StructureKind::theorem7, q, {2}, -6, 6);
  for (int l = -6; l <= 6; l += 2) {
    const Complex jump = a.coefficients.at(l) - b.coefficients.at(l);
    const Complex ref = annulus_crossing_jump(q, 1, l);
    CHECK(std::abs(jump - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("reflection pairs annulus n with 1-n") {
  const Complex q = 0.5;
  for (int n : {0, 1, 2}) {
    const ModeBracketTable a = laurent_modes(StructureKind::theorem7, q, {n}, -6, 6);
    const ModeBracketTable b = laurent_modes(StructureKind::theorem7, q, {1 - n}, -6, 6);
    for (int l = -6; l <= 6; ++l) {
      CHECK(std::abs(a.coefficients.at(l) + b.coefficients.at(-l)) <
            1e-10 * std::max(1.0, std::abs(a.coefficients.at(l))));
    }
  }
}

TEST_CASE("ps1 modes scale with 2 ln q") {
  const Complex q = 0.5;
  const ModeBracketTable g = laurent_modes(StructureKind::theorem7, q, {1}, -4, 4);
  const ModeBracketTable p = laurent_modes(StructureKind::ps1, q, {1}, -4, 4);
  for (int l = -4; l <= 4; ++l) {
    const Complex ref = 2.0 * std::log(q) * g.coefficients.at(l);
    CHECK(std::abs(p.coefficients.at(l) - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("Laurent extraction guards") {
  const Complex q = 0.5;
  CHECK_THROWS_AS(laurent_modes(StructureKind::theorem7, q, {1}, 2, -2), DomainError);
  CHECK(recommended_nodes(q, 8) >= 64);
  CHECK((recommended_nodes(0.9, 8) & (recommended_nodes(0.9, 8) - 1)) == 0);
  CHECK(recommended_nodes(0.9, 8) > recommended_nodes(0.3, 8));
}

TEST_CASE("mode bracket assembly") {
  ModeBracketTable t;
  t.q = 0.5;
  CHECK(format_mode_bracket(t, 1, -1, 4) == "{t_1,t_-1} = 0");
  t.coefficients = {{-2, -1.5}, {0, 1.5}, {2, 0.25}, {6, 9.0}};
  // l = 0 and l = -2 both give t_-1 t_1 and cancel; l = 6 is past the cutoff
  CHECK(format_mode_bracket(t, 1, -1, 4) == "{t_1,t_-1} = (0.25) t_-3 t_3 [cancelled: t_-1 t_1]");
  const auto terms = mode_bracket_terms(t, 1, -1, 4);
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].cancelled == false);
  CHECK(terms[1].cancelled);

  t.coefficients = {{0, Complex{2.0, -0.5}}, {1, 1e-14}};
  CHECK(format_mode_bracket(t, 2, 3, 4) == "{t_2,t_3} = (2-0.5i) t_2 t_3");
  const Json j = mode_bracket_json(t, 2, 3, 4);
  CHECK(j["terms"].size() == 1);
  CHECK(j["terms"][0]["monomial"][1] == 3);

  // a real table: {t_1, t_1} = sum_l g_l t_{1+l} t_{1-l} merges l with -l
  const ModeBracketTable real = laurent_modes(StructureKind::theorem7, 0.5, {1}, -4, 4);
  for (const auto& term : mode_bracket_terms(real, 1, 1, 4)) {
    const int l = term.right - 1;
    const Complex sum = l == 0 ? real.coefficients.at(0)
                               : real.coefficients.at(l) + real.coefficients.at(-l);
    CHECK(std::abs(term.coefficient - sum) < 1e-12);
  }
}

TEST_CASE("structure kind names") {
  CHECK(parse_structure_kind("g") == StructureKind::theorem7);
  CHECK(parse_structure_kind(to_string(StructureKind::ps1)) == StructureKind::ps1);
  CHECK_THROWS_AS(parse_structure_kind("h"), DomainError);
}
