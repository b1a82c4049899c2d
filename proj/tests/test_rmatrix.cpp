#include <doctest.h>

#include "ellex/errors.hpp"
#include "ellex/exchange.hpp"
#include "ellex/rmatrix.hpp"
#include "oracles.hpp"

using namespace ellex;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

RMatrix4 sample_matrix() {
  RMatrix4 m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m(r, c) = Complex(std::cos(1.3 * r + 0.7 * c), std::sin(r * c + 0.5));
    m(r, r) += 3.0;
  }
  return m;
}

}  // namespace

TEST_CASE("matrix plumbing") {
  const RMatrix4 m = sample_matrix();
  CHECK((partial_transpose(partial_transpose(m, Slot::first), Slot::first) - m).max_abs() == 0.0);
  CHECK((partial_transpose(partial_transpose(m, Slot::second), Slot::second) - m).max_abs() ==
        0.0);
  CHECK((partial_transpose(partial_transpose(m, Slot::first), Slot::second) - transpose(m))
            .max_abs() == 0.0);
  CHECK((swap_slots(swap_slots(m)) - m).max_abs() == 0.0);
  const Inversion inv = invert(m);
  CHECK((inv.inverse * m - RMatrix4::identity()).max_abs() < 1e-13);
  CHECK(inv.condition >= 1.0);

  RMatrix4 singular = m;
  for (int c = 0; c < 4; ++c) singular(3, c) = singular(2, c);
  CHECK_THROWS_AS(invert(singular), SingularMatrix);
  CHECK_THROWS_AS(invert(RMatrix4{}), SingularMatrix);
}

TEST_CASE("eight-vertex layout") {
  const RMatrix4 m = RMatrix4::eight_vertex(1.0, 2.0, 3.0, 4.0);
  CHECK(m.has_eight_vertex_sparsity());
  CHECK(m(0, 0) == Complex{1.0});
  CHECK(m(3, 3) == Complex{1.0});
  CHECK(m(1, 1) == Complex{2.0});
  CHECK(m(2, 1) == Complex{3.0});
  CHECK(m(3, 0) == Complex{4.0});
  CHECK_FALSE(sample_matrix().has_eight_vertex_sparsity());
}

TEST_CASE("tau representations and special values") {
  CHECK(std::abs(tau_fn(1.0, 0.4) - 1.0) < 1e-15);
  CHECK(std::abs(tau_fn(-1.0, 0.4) + 1.0) < 1e-15);
  CHECK(std::abs(tau_fn(1.3, 0.4) * tau_fn(1.0 / 1.3, 0.4) - 1.0) < 1e-11);
  const Complex x{0.8, 0.1};
  CHECK(rel(tau_fn(x, 0.35), tau_fn_pochhammer(x, 0.35)) < 1e-12);
  // the Pochhammer form against long products
  const Complex q = 0.35;
  const Complex a = ipow(q, 4);
  const Complex x2 = x * x;
  const Complex ref = oracle::long_product(q * x2, a, 200) * oracle::long_product(q * q * q / x2, a, 200) /
                      (x * oracle::long_product(q / x2, a, 200) *
                       oracle::long_product(q * q * q * x2, a, 200));
  CHECK(rel(tau_fn(x, q), ref) < 1e-13);
}

TEST_CASE("kappa and mu") {
  const NomeParams nome{0.2, 0.4};
  const Complex x2 = 1.21;
  CHECK(std::abs(kappa_inv(x2, nome) * kappa_inv(1.0 / x2, nome) - 1.0) < 1e-10);
  // kappa^-1 from nested long products
  const Complex p = nome.p;
  const Complex q2 = nome.q * nome.q;
  const Complex q4 = q2 * q2;
  auto P = [&](Complex z) { return oracle::long_product2(z, p, q4, 80); };
  const Complex ref = P(q4 / x2) * P(q2 * x2) * P(p / x2) * P(p * q2 * x2) /
                      (P(q4 * x2) * P(q2 / x2) * P(p * x2) * P(p * q2 / x2));
  CHECK(rel(kappa_inv(x2, nome), ref) < 1e-12);
  for (double r : {0.5, 0.8, 1.3, 2.0}) {
    const Complex mu = mu_inv(std::polar(r, 0.4), nome);
    CHECK(is_finite(mu));
    CHECK(std::abs(mu) > 0.0);
  }
}

TEST_CASE("R matrix structure") {
  const NomeParams nome{0.2, 0.4};
  const RMatrix4 r = r_plus(Complex{1.1, 0.2}, nome);
  CHECK(r.has_eight_vertex_sparsity());
  CHECK(std::abs(r(0, 0) - r(3, 3)) < 1e-14 * std::abs(r(0, 0)));
}

TEST_CASE("R matrix from elliptic parameters matches the multiplicative route") {
  const EllipticParams ep{0.6, 1.0, 0.3};
  const ParamPoint pt = param_map(ep);
  const RMatrix4 a = r_plus(ep);
  const RMatrix4 b = r_plus(pt.x, pt.nome);
  CHECK((a - b).max_abs() / b.max_abs() < 1e-10);
}

TEST_CASE("starred R matrix") {
  const NomeParams nome{0.2, 0.5};
  const Complex x{1.2, -0.1};
  CHECK((r_plus_star(x, nome, CentralCharge{0.0}) - r_plus(x, nome)).max_abs() == 0.0);
  // c = -2: p q^4
  const CentralCharge c{-2.0};
  CHECK(std::abs(c.starred_nome(nome) - 0.2 * 0.0625) < 1e-15);
  CHECK(r_plus_star(x, nome, c).has_eight_vertex_sparsity());
  // m = 1 fixes q^{c+2} = p
  const CentralCharge c1 = CentralCharge::from_level(1, nome);
  CHECK(std::abs(std::exp((c1.value + 2.0) * std::log(nome.q)) - nome.p) < 1e-12);
  const Complex ps = nome.p * std::pow(nome.q.real(), -2.0 * c1.value.real());
  CHECK((r_plus_star(x, nome, c1) - r_plus(x, {ps, nome.q})).max_abs() < 1e-12);
  CHECK_THROWS_AS(r_plus_star(x, nome, CentralCharge{3.0}), NonConvergentBase);
}

TEST_CASE("crossing, p-shift and Yang-Baxter") {
  const NomeParams nome{0.2, 0.4};
  for (Complex x : {Complex{1.3, 0.2}, Complex{0.7, -0.4}, Complex{-1.1, 0.5}}) {
    CHECK(check_crossing(x, nome).pass);
    CHECK(check_pshift(x, nome).pass);
    CHECK(check_ybe(x, Complex{0.9, 0.35}, nome).pass);
  }
  // through the elliptic parametrization (q < 0)
  const ParamPoint pt = param_map({0.6, 1.0, 0.3});
  CHECK(check_crossing(pt.x, pt.nome).max_error < 1e-9);
  CHECK(check_ybe(pt.x, 0.9, pt.nome).max_error < 1e-9);
  // complex q
  const NomeParams cq{0.3, Complex{0.2, 0.5}};
  CHECK(check_crossing(Complex{1.1, 0.3}, cq).pass);
  CHECK(check_pshift(Complex{1.1, 0.3}, cq).pass);
}

TEST_CASE("crossing residual is stable under a tighter tail") {
  const NomeParams nome{0.2, 0.4};
  TruncationPolicy tight;
  tight.tail_tol = 1e-16;
  const double loose_res = check_crossing(Complex{1.3, 0.2}, nome).max_error;
  const double tight_res = check_crossing(Complex{1.3, 0.2}, nome, tight).max_error;
  CHECK(std::abs(loose_res - tight_res) < 1e-12);
  TruncationPolicy coarse;
  coarse.tail_tol = 1e-6;
  CHECK(check_ybe(Complex{1.3, 0.2}, 0.9, nome, coarse).max_error < 1e-5);
}

TEST_CASE("crossing next to a singular point") {
  // x = -1/q is a zero of the mu normalization
  const NomeParams nome{0.2, 0.4};
  CHECK_THROWS_AS(check_crossing(-1.0 / nome.q, nome), NearSingularity);
}

TEST_CASE("p-shift factor is consistent with the exchange shift factor") {
  const NomeParams nome{0.2, 0.4};
  const Complex x{1.3, 0.2};
  const Complex f = pshift_factor(x, nome);
  CHECK(std::abs(f * (1.0 / f) - 1.0) < 1e-12);
  // the exchange factor is the same four-tau product written in theta functions
  CHECK(rel(shift_factor_F(x, nome), f) < 1e-12);
}
