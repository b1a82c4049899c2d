#include <doctest.h>

#include <numbers>

#include "ellex/elliptic.hpp"
#include "ellex/errors.hpp"
#include "oracles.hpp"

using namespace ellex;

namespace {
const double kRoot2 = std::sqrt(0.5);
}

TEST_CASE("complete K") {
  CHECK(complete_K(1e-9) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
  CHECK(complete_K(kRoot2) == doctest::Approx(complete_K_prime(kRoot2)).epsilon(1e-12));
  // tabulated K(1/sqrt 2) = Gamma(1/4)^2 / (4 sqrt(pi))
  CHECK(complete_K(kRoot2) == doctest::Approx(1.8540746773013719).epsilon(1e-14));
  for (double k : {0.1, 0.5, 0.8}) {
    CHECK(complete_K(k) == doctest::Approx(oracle::complete_K_series(k)).epsilon(1e-13));
  }
  CHECK(complete_K_prime(0.6) == doctest::Approx(complete_K(0.8)).epsilon(1e-14));
  CHECK_THROWS_AS(complete_K(1.0), DomainError);
  CHECK_THROWS_AS(complete_K(0.0), DomainError);
}

TEST_CASE("nome and modulus round trip") {
  CHECK(nome_from_modulus(kRoot2) == doctest::Approx(std::exp(-std::numbers::pi)).epsilon(1e-14));
  for (double k : {0.05, 0.3, 0.6, 0.95}) {
    const double p = nome_from_modulus(k);
    CHECK(modulus_from_nome(p) == doctest::Approx(k).epsilon(1e-12));
    CHECK(complete_K_from_nome(p) == doctest::Approx(complete_K(k)).epsilon(1e-12));
  }
}

TEST_CASE("snh against the Landen oracle") {
  CHECK(jacobi_snh(0.0, 0.6) == 0.0);
  CHECK(jacobi_snh(0.4, 0.6) == doctest::Approx(oracle::snh(0.4, 0.6)).epsilon(1e-10));
  for (double k : {0.2, 0.6, 0.9}) {
    for (double u : {-1.1, -0.3, 0.05, 0.7, 1.4}) {
      CHECK(jacobi_snh(u, k) == doctest::Approx(oracle::snh(u, k)).epsilon(1e-10));
      CHECK(std::abs(jacobi_snh(-u, k) + jacobi_snh(u, k)) < 1e-12);
    }
  }
}

TEST_CASE("snh pole") {
  // sc(u, k') has its pole at u = K(k')
  const double k = 0.6;
  CHECK_THROWS_AS(jacobi_snh(complete_K_prime(k), k), NearSingularity);
}

TEST_CASE("parameter map") {
  EllipticParams ep{0.5, 1.2, 0.0};
  CHECK(param_map(ep).x == Complex{1.0, 0.0});
  ep = {kRoot2, 0.7, 0.2};
  CHECK(param_map(ep).nome.p.real() == doctest::Approx(std::exp(-std::numbers::pi)));

  ep = {0.5, 1.2, 0.3};
  const ParamPoint pt = param_map(ep);
  const double K = oracle::complete_K_series(0.5);
  const double Kp = oracle::complete_K_series(std::sqrt(0.75));
  CHECK(pt.nome.p.real() == doctest::Approx(std::exp(-std::numbers::pi * Kp / K)).epsilon(1e-12));
  CHECK(pt.nome.q.real() == doctest::Approx(-std::exp(-std::numbers::pi * 1.2 / (2 * K))));
  CHECK(pt.x.real() == doctest::Approx(std::exp(std::numbers::pi * 0.3 / (2 * K))));
  CHECK(pt.nome.q.real() < 0.0);

  const EllipticParams back = inverse_param_map(pt.nome, pt.x);
  CHECK(back.modulus == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(back.lambda == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(back.u == doctest::Approx(0.3).epsilon(1e-12));
  CHECK_THROWS_AS(inverse_param_map({0.2, 0.5}, 1.0), DomainError);
}

TEST_CASE("Baxter weights") {
  BaxterWeights w = baxter_entries(EllipticParams{0.6, 1.0, 0.0});
  CHECK(std::abs(w.a - 1.0) < 1e-14);
  CHECK(std::abs(w.b) < 1e-14);
  CHECK(w.c == Complex{1.0, 0.0});
  CHECK(std::abs(w.d) < 1e-14);

  w = baxter_entries(EllipticParams{0.6, 1.0, 1.0});
  CHECK(std::abs(w.a) < 1e-14);
  CHECK(std::abs(w.d) < 1e-14);

  // entries from the Landen sc against the theta-quotient route
  const EllipticParams ep{0.6, 1.0, 0.35};
  w = baxter_entries(ep);
  const double sl = oracle::snh(1.0, 0.6);
  CHECK(w.a.real() == doctest::Approx(oracle::snh(0.65, 0.6) / sl).epsilon(1e-10));
  CHECK(w.b.real() == doctest::Approx(oracle::snh(0.35, 0.6) / sl).epsilon(1e-10));
  CHECK(w.d.real() ==
        doctest::Approx(0.6 * oracle::snh(0.65, 0.6) * oracle::snh(0.35, 0.6)).epsilon(1e-10));

  CHECK(w.a.real() * sl == doctest::Approx(oracle::snh(0.65, 0.6)).epsilon(1e-10));

  // the addition theorem of sn makes Baxter's Delta and Gamma independent of u
  auto invariants = [](double u) {
    const BaxterWeights v = baxter_entries(EllipticParams{0.6, 1.0, u});
    const Complex delta = (v.a * v.a + v.b * v.b - v.c * v.c - v.d * v.d) /
                          (2.0 * (v.a * v.b + v.c * v.d));
    const Complex gamma = (v.a * v.b - v.c * v.d) / (v.a * v.b + v.c * v.d);
    return std::pair{delta, gamma};
  };
  const auto [d0, g0] = invariants(0.35);
  for (double u : {0.1, 0.55, 0.8, 1.7}) {
    const auto [d, g] = invariants(u);
    CHECK(std::abs(d - d0) < 1e-10);
    CHECK(std::abs(g - g0) < 1e-10);
  }

  // multiplicative route agrees with the elliptic one
  const ParamPoint pt = param_map(ep);
  const BaxterWeights wm = baxter_entries(pt.x, pt.nome);
  CHECK(std::abs(wm.a - w.a) < 1e-12);
  CHECK(std::abs(wm.b - w.b) < 1e-12);
  CHECK(std::abs(wm.d - w.d) < 1e-12);
  CHECK_THROWS_AS(baxter_entries(1.1, NomeParams{Complex{0.1, 0.1}, 0.5}), DomainError);
}
