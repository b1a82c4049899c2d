#include <doctest.h>

#include "ellex/errors.hpp"
#include "ellex/exchange.hpp"
#include "oracles.hpp"

using namespace ellex;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// F(m, x) for m > 0 assembled from the bilateral theta sum instead of products.
Complex closed_F_by_sums(int m, Complex x, Complex p, Complex q) {
  const Complex a = ipow(q, 4);
  const Complex q2 = q * q;
  const Complex X = x * x;
  const Complex Xi = 1.0 / X;
  auto th = [&](Complex z) { return oracle::theta_sum(a, z, 60); };
  Complex acc = 1.0;
  for (int s = 1; s <= 2 * m; ++s) {
    const Complex ps = ipow(p, s);
    acc *= th(X * q2 / ps) * th(Xi * q2 * ps) / (th(Xi * ps) * th(X / ps)) / q;
  }
  return acc;
}

const NomeParams kNome{0.2, 0.45};
const Complex kX{1.25, 0.3};

}  // namespace

TEST_CASE("level parameters") {
  const LevelParams lv = LevelParams::make(2, kNome);
  CHECK(lv.constraint_residual() < 1e-12);
  CHECK_THROWS_AS(LevelParams::make(0, kNome), DomainError);
  CHECK_THROWS_AS(LevelParams::make(1, {0.2, 1.1}), NonConvergentBase);
  const NomeParams at = CommutingPoint{3}.nome(0.5);
  CHECK(at.p == ipow(Complex{0.5}, 6));
  CHECK_THROWS_AS(CommutingPoint{0}.nome(0.5), DomainError);
}

TEST_CASE("closed F against an independent theta-sum assembly") {
  for (int m : {1, 2}) {
    const LevelParams lv = LevelParams::make(m, kNome);
    CHECK(rel(exchange_F(lv, kX), closed_F_by_sums(m, kX, kNome.p, kNome.q)) < 1e-11);
  }
}

TEST_CASE("F two paths") {
  for (int m : {-3, -2, -1, 1, 2, 3}) {
    const LevelParams lv = LevelParams::make(m, kNome);
    CHECK(rel(exchange_F(lv, kX), exchange_F_iterated(lv, kX)) < 1e-10);
    if (m < 0) CHECK(rel(exchange_F(lv, kX), exchange_F_reflected(lv, kX)) < 1e-10);
  }
  CHECK_THROWS_AS(exchange_F_reflected(LevelParams::make(1, kNome), kX), DomainError);
}

TEST_CASE("shift factor identities") {
  // F depends on x^2 only, and p -> p q^4 acts through theta quasi-periodicity
  CHECK(rel(shift_factor_F(-kX, kNome), shift_factor_F(kX, kNome)) < 1e-14);
  const NomeParams shifted{kNome.p * ipow(kNome.q, 4), kNome.q};
  const Complex a = ipow(kNome.q, 4);
  const Complex q2 = kNome.q * kNome.q;
  const Complex X = kX * kX;
  const Complex Xi = 1.0 / X;
  const Complex p = kNome.p;
  // second theta ratio picks up one shift factor per argument
  const Complex expected = shift_factor_F(kX, kNome) * theta_shift_factor(a, 1, X * q2 * p) *
                           theta_shift_factor(a, -1, Xi * q2 / p) /
                           (theta_shift_factor(a, -1, Xi / p) * theta_shift_factor(a, 1, X * p));
  CHECK(rel(shift_factor_F(kX, shifted), expected) < 1e-12);
  // x^2 q = 1: tau(x q^{1/2}) degenerates but F stays finite
  const Complex x_special = 1.0 / std::sqrt(kNome.q);
  CHECK(is_finite(shift_factor_F(x_special, kNome)));
}

TEST_CASE("Y closed form against the F ratio") {
  for (int m : {-2, -1, 1, 2, 3}) {
    const LevelParams lv = LevelParams::make(m, kNome);
    CHECK(rel(exchange_Y(lv, kX), exchange_Y_ratio(lv, kX)) < 1e-9);
  }
}

TEST_CASE("Feigin-Frenkel identities") {
  const Complex q = kNome.q;
  for (int m : {-1, 1, 2}) {
    const LevelParams lv = LevelParams::make(m, kNome);
    const Complex y = exchange_Y(lv, kX);
    CHECK(std::abs(exchange_Y(lv, kX * q * q) - y) < 1e-10 * std::max(1.0, std::abs(y)));
    CHECK(std::abs(exchange_Y(lv, kX * q) - exchange_Y(lv, 1.0 / kX)) <
          1e-10 * std::max(1.0, std::abs(y)));
  }
}

TEST_CASE("commuting points") {
  const Complex q = 0.5;
  for (int k : {1, 3, -1, -3}) {
    const CommutingPoint cp{k};
    for (int m : {1, 2, -1}) {
      const LevelParams lv = LevelParams::make(m, cp.nome(q));
      CHECK(std::abs(exchange_F(lv, 1.1) - 1.0) < 1e-10);
      CHECK(commuting_F(m, cp, 1.1, q) == Complex{1.0, 0.0});
      CHECK(std::abs(exchange_Y(lv, kX) - 1.0) < 1e-10);
    }
  }
  // k = 2: q^{-2m} x^{4m} [theta(x^2 q^2)/theta(x^2)]^{4m}
  const CommutingPoint two{2};
  const Complex x = 1.3;
  for (int m : {1, -1, 2}) {
    const Complex a = ipow(q, 4);
    const Complex X = x * x;
    const Complex expected = ipow(q, -2 * m) * ipow(X, 2 * m) *
                             ipow(oracle::theta_sum(a, X * q * q) / oracle::theta_sum(a, X), 4 * m);
    CHECK(rel(commuting_F(m, two, x, q), expected) < 1e-12);
  }
  const Complex q6 = 0.6;
  const LevelParams lv = LevelParams::make(-1, two.nome(q6));
  CHECK(rel(exchange_F(lv, 1.3), commuting_F(-1, two, 1.3, q6)) < 1e-10);
  CHECK_THROWS_AS(commuting_F(1, two, 1.0, q), NearSingularity);
  CHECK_THROWS_AS(commuting_F(1, CommutingPoint{0}, 1.1, q), DomainError);
}

TEST_CASE("p -> p q^4 periodicity") {
  const NomeParams nome{0.1, 0.5};
  for (int m : {-1, 1, 2}) {
    const LevelParams lv = LevelParams::make(m, nome);
    const CheckResult f = check_p_periodicity(lv, kX);
    CHECK(f.pass);
    CHECK(f.max_error < 1e-10);
    CHECK(check_p_periodicity(lv, kX, ExchangeFunction::Y).pass);
  }
  // |p q^4| >= 1 is declined, not failed
  const LevelParams far = LevelParams::make(1, {40.0, 0.5});
  const CheckResult skipped = check_p_periodicity(far, kX);
  CHECK(skipped.skipped);
  CHECK(skipped.pass);
  CHECK_FALSE(skipped.note.empty());
}

TEST_CASE("singular distance sees the pole spirals") {
  const Complex x_pole = std::sqrt(kNome.p);  // X = p is a zero of theta(X/p)
  CHECK(exchange_singular_distance(1, x_pole, kNome) < 1e-12);
  CHECK(exchange_singular_distance(1, kX, kNome) > 1e-3);
  CHECK_THROWS_AS(exchange_F(LevelParams::make(1, kNome), x_pole), NearSingularity);
}
