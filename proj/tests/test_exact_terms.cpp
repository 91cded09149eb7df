#include <catch2/catch_amalgamated.hpp>

#include "poincare/exact_terms.hpp"

#include <cmath>
#include <complex>

using namespace poincare::exact;
using Catch::Approx;
using cplx = std::complex<double>;

namespace {

bool equal(const TermSum& a, const TermSum& b) { return a.minus(b).is_zero(); }

Coefficient four_pi_n_pow(int n_abs, int e) {
  return Coefficient(rational_pow(Rational(4 * n_abs), e), 0, e);
}

} // namespace

TEST_CASE("constructors store the stated term data") {
  const auto phi = make_phi(4, 0, 1);
  REQUIRE(phi.weight == 4);
  REQUIRE(phi.expr.terms().size() == 1);
  const auto& t = phi.expr.terms()[0];
  CHECK(t.y_exp == 0);
  CHECK(t.freq == 1);
  CHECK(t.decay == 1);
  CHECK(!t.gamma);

  const auto phid = make_phi(4, 2, 1);
  CHECK(phid.expr.terms()[0].y_exp == -2);

  const auto pst = make_psi_tilde(-2, -1);
  REQUIRE(pst.expr.terms()[0].gamma.has_value());
  CHECK(pst.expr.terms()[0].gamma->s == 3);
  CHECK(pst.expr.terms()[0].gamma->g == 1);
  CHECK(pst.expr.terms()[0].freq == -1);
  CHECK(pst.expr.terms()[0].decay == -1);

  const auto pst2 = make_psi_tilde(0, -2);
  CHECK(pst2.expr.terms()[0].gamma->s == 1);
  CHECK(pst2.expr.terms()[0].gamma->g == 2);

  const auto pht = make_phi_tilde(-4, -1);
  CHECK(pht.expr.terms()[0].y_exp == 4);
  CHECK(pht.expr.terms()[0].freq == 1);
  CHECK(pht.expr.terms()[0].decay == -1);

  const auto ps = make_psi(2, 1);
  CHECK(ps.expr.terms()[0].y_exp == -2);
  CHECK(ps.expr.terms()[0].gamma->s == 3);
  CHECK(ps.expr.terms()[0].gamma->g == 1);
  CHECK(ps.expr.terms()[0].freq == 1);
  CHECK(ps.expr.terms()[0].decay == -1);
}

TEST_CASE("constructor preconditions are enforced") {
  CHECK_THROWS_AS(make_phi(4, 0, 0), std::domain_error);
  CHECK_THROWS_AS(make_phi(4, 0, -2), std::domain_error);
  CHECK_THROWS_AS(make_psi_tilde(2, -1), std::domain_error);
  CHECK_THROWS_AS(make_psi_tilde(-2, 1), std::domain_error);
  CHECK_THROWS_AS(make_phi_tilde(0, -1), std::domain_error);
  CHECK_THROWS_AS(make_phi_tilde(-2, 1), std::domain_error);
  CHECK_THROWS_AS(make_psi(-2, 1), std::domain_error);
  CHECK_THROWS_AS(make_psi(2, -1), std::domain_error);
}

TEST_CASE("psi_0 reduces to the holomorphic term") {
  // Gamma(1, 4 pi y) = e^{-4 pi y} collapses psi_0(n) onto phi(n)
  const auto ps0 = make_psi(0, 1);
  CHECK(equal(ps0.expr.expand_gammas(), make_phi(0, 0, 1).expr));
  const cplx v = evaluate(ps0, {0.3, 0.8});
  const cplx w = evaluate(make_phi(0, 0, 1), {0.3, 0.8});
  CHECK(std::abs(v - w) <= 1e-15);
}

TEST_CASE("lowering annihilates holomorphic terms and shifts weight") {
  for (int k : {-6, 0, 4, 10})
    for (int n : {1, 3}) {
      const auto l = lower(make_phi(k, 0, n));
      CHECK(l.expr.is_zero());
      CHECK(l.weight == k - 2);
    }
}

TEST_CASE("lowering and raising act on y powers as s y^{s+1} and (s+k) y^{s-1}") {
  const WeightedFunction y3{TermSum::y_power(3), 0};
  const auto l = lower(y3);
  CHECK(equal(l.expr, TermSum::y_power(4, Coefficient::integer(3))));
  CHECK(l.weight == -2);

  const auto r = raise(y3);
  CHECK(equal(r.expr, TermSum::y_power(2, Coefficient::integer(3))));
  CHECK(r.weight == 2);

  // R_k (y^{-k}) = 0
  for (int k : {2, 6}) {
    const WeightedFunction ymk{TermSum::y_power(-k), k};
    CHECK(raise(ymk).expr.is_zero());
  }
}

TEST_CASE("lowering maps psi~ onto the phi~ line with scalar -(4 pi |n|)^{1-k}") {
  for (int k = -10; k <= 0; k += 2)
    for (int n = -5; n <= -1; ++n) {
      const auto l = lower(make_psi_tilde(k, n));
      REQUIRE(l.weight == k - 2);
      const TermSum target = phi_tilde_expr(k - 2, -n).scale(-four_pi_n_pow(-n, 1 - k));
      CHECK(equal(l.expr, target));
    }
}

TEST_CASE("raise then lower kills psi_k") {
  for (int k = 0; k <= 10; k += 2)
    for (int n : {1, 2, 5}) {
      const auto lr = lower(raise(make_psi(k, n)));
      CHECK(lr.expr.is_zero());
      CHECK(lr.weight == k);
    }
}

TEST_CASE("products collapse to p(1/y) times a holomorphic exponential") {
  const int k = 4, ell = 6, n = 1, m = 2;
  const auto prod = multiply(make_psi(k, n), make_phi(ell, 0, m));
  CHECK(prod.weight == k + ell);
  const auto [lo, hi] = prod.expr.y_exp_range_expanded();
  CHECK(lo == -k);
  CHECK(hi == 0);
  for (const auto& t : prod.expr.terms()) {
    CHECK(!t.gamma);
    CHECK(t.freq == n + m);
    CHECK(t.decay == n + m);
  }
}

TEST_CASE("multiply identities") {
  const auto f = multiply(make_psi(2, 1), make_phi(8, 0, 1));
  const WeightedFunction one{TermSum::one(), 0};
  CHECK(equal(multiply(f, one).expr, f.expr));
  CHECK(multiply(f, one).weight == f.weight);

  const auto g = multiply(make_phi(4, 2, 1), make_phi(6, 0, 2));
  REQUIRE(g.expr.terms().size() == 1);
  CHECK(g.expr.terms()[0].y_exp == -2);
  CHECK(g.expr.terms()[0].freq == 3);
  CHECK(g.expr.terms()[0].decay == 3);
  CHECK(g.weight == 10);
}

TEST_CASE("a pair of unexpandable gamma factors is reported as non-closure") {
  ExactTerm t;
  t.coeff = Coefficient::one();
  t.gamma = GammaFactor{0, 1};  // Gamma(0, 4 pi y): not expandable
  const TermSum s = TermSum::from_term(t);
  CHECK_THROWS_AS(s.times(s), std::domain_error);
  // one unexpandable factor stays in the algebra
  const TermSum p = s.times(TermSum::y_power(2));
  REQUIRE(p.terms().size() == 1);
  CHECK(p.terms()[0].gamma.has_value());
}

TEST_CASE("xi maps psi~ to a nonzero holomorphic-type term and kills phi") {
  const int k = -2, n = -1;
  const auto x = xi(make_psi_tilde(k, n));
  CHECK(x.weight == 2 - k);
  REQUIRE(!x.expr.is_zero());
  for (const auto& t : x.expr.expand_gammas().terms()) CHECK(t.freq == t.decay);
  // xi at tau = i against the conjugated-derivative definition, numerically
  const auto f = make_psi_tilde(k, n);
  const cplx tau{0.2, 0.9};
  const double h = 1e-6;
  auto ev = [&](cplx t) { return f.expr.evaluate(t); };
  const cplx fx = (ev(tau + h) - ev(tau - h)) / (2.0 * h);
  const cplx fy = (ev(tau + cplx(0, h)) - ev(tau - cplx(0, h))) / (2.0 * h);
  const cplx dbar = 0.5 * (fx + cplx(0, 1) * fy);
  const cplx xi_num = 2.0 * cplx(0, 1) * std::pow(tau.imag(), k) * std::conj(dbar);
  const cplx xi_sym = x.expr.evaluate(tau);
  CHECK(std::abs(xi_num - xi_sym) / std::abs(xi_sym) < 1e-7);

  CHECK(xi(make_phi(4, 0, 2)).expr.is_zero());
  // the xi image is holomorphic, so xi kills it again
  CHECK(xi(x).expr.is_zero());
}

TEST_CASE("almost holomorphic depth") {
  CHECK(almost_holomorphic_depth(make_phi(8, 3, 2), 10) == 3);
  CHECK(almost_holomorphic_depth(make_phi(8, 0, 1), 10) == 0);
  for (int k : {0, 2, 6})
    CHECK(almost_holomorphic_depth(make_psi(k, 1), 12) == k);
  CHECK(almost_holomorphic_depth(multiply(make_psi(4, 1), make_phi(8, 0, 2)), 10) == 4);
  CHECK(almost_holomorphic_depth(multiply(make_phi(6, 2, 1), make_phi(4, 0, 1)), 10) == 2);
  CHECK(!almost_holomorphic_depth(make_psi_tilde(-2, -1), 10).has_value());
  CHECK(!almost_holomorphic_depth(make_psi_tilde(-6, -3), 10).has_value());
}

TEST_CASE("evaluate matches closed forms") {
  CHECK(evaluate(make_phi(4, 0, 1), {0, 1}).real() == Approx(std::exp(-2 * M_PI)).epsilon(1e-12));
  const WeightedFunction y3{TermSum::y_power(3), 0};
  CHECK(evaluate(y3, {0, 2}).real() == Approx(8.0).epsilon(1e-14));
  // psi_2(1; i) = Gamma(3, 4 pi) e^{2 pi}; the conjugate exponential grows
  const double expect =
      poincare::specfun::upper_gamma_integer(3, 4 * M_PI) * std::exp(2 * M_PI);
  CHECK(evaluate(make_psi(2, 1), {0, 1}).real() == Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(evaluate(y3, {0, -1}), std::domain_error);
}

TEST_CASE("commutator [L, R] acts as -k on y-power terms") {
  for (int k : {-4, -2, 0, 2, 6})
    for (int s : {-2, 0, 1, 3}) {
      const WeightedFunction ys{TermSum::y_power(s), k};
      const TermSum comm = lower(raise(ys)).expr.minus(raise(lower(ys)).expr);
      CHECK(equal(comm, ys.expr.scale(Coefficient::integer(-k))));
    }
  // pinned instance: s = 0, k = 0 commutes exactly
  const WeightedFunction c{TermSum::y_power(0), 0};
  CHECK(lower(raise(c)).expr.minus(raise(lower(c)).expr).is_zero());
}

TEST_CASE("normalization merges terms and removes cancellations") {
  const auto phi = make_phi(6, 1, 2);
  const TermSum twice = phi.expr.plus(phi.expr);
  REQUIRE(twice.terms().size() == 1);
  CHECK(twice.terms()[0].coeff.re == Rational(2));
  CHECK(phi.expr.minus(phi.expr).is_zero());
  // mixed expanded/unexpanded presentations of the same function cancel
  const auto ps = make_psi(4, 1);
  CHECK(ps.expr.minus(ps.expr.expand_gammas()).is_zero());
}

TEST_CASE("canonical JSON serialization round trips and is sorted") {
  const auto prod = multiply(make_psi(4, 1), make_phi(6, 0, 2));
  const auto js = prod.expr.to_json();
  REQUIRE(js.is_array());
  REQUIRE(js.size() == prod.expr.terms().size());
  // deterministic term order: ascending y_exp for this product
  for (std::size_t i = 1; i < js.size(); ++i)
    CHECK(js[i - 1]["y_exp"].get<int>() <= js[i]["y_exp"].get<int>());
  CHECK(js[0]["coeff"].contains("pi_pow"));
  const TermSum back = TermSum::from_json(js);
  CHECK(equal(back, prod.expr));
}

TEST_CASE("central differences agree with the exact operators") {
  // property version of the acceptance check, on a fixed small sample
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> xr(-0.4, 0.4), yr(0.7, 1.9);
  for (int trial = 0; trial < 25; ++trial) {
    WeightedFunction f;
    switch (trial % 4) {
      case 0: f = make_phi(6, trial % 3, 1 + trial % 2); break;
      case 1: f = make_psi(2 * (trial % 3), 1 + trial % 3); break;
      case 2: f = make_psi_tilde(-2 * (trial % 3), -1 - trial % 2); break;
      default: f = make_phi_tilde(-4, -2); break;
    }
    const cplx tau(xr(rng), yr(rng));
    const double h = 1e-5 * std::min(1.0, tau.imag());
    auto ev = [&](cplx t) { return f.expr.evaluate(t); };
    const cplx fx = (ev(tau + h) - ev(tau - h)) / (2.0 * h);
    const cplx fy = (ev(tau + cplx(0, h)) - ev(tau - cplx(0, h))) / (2.0 * h);
    const cplx l_num = cplx(0, -2) * tau.imag() * tau.imag() * 0.5 * (fx + cplx(0, 1) * fy);
    const cplx l_sym = lower(f).expr.evaluate(tau);
    const double scale = std::max({std::abs(l_sym), std::abs(ev(tau)), 1e-10});
    CHECK(std::abs(l_num - l_sym) / scale < 1e-6);
  }
}
