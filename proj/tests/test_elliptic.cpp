#include <catch2/catch_amalgamated.hpp>

#include "poincare/elliptic.hpp"
#include "oracles.hpp"

#include <cmath>
#include <complex>
#include <set>

using namespace poincare;
using namespace poincare::elliptic;
using poincare::exact::make_phi;
using poincare::exact::make_psi;
using poincare::exact::multiply;
using Catch::Approx;

TEST_CASE("coset enumeration matches the brute-force oracle") {
  for (long H : {1L, 2L, 3L}) {
    const auto reps = enumerate_sl2_cosets(H);
    const auto expect = oracles::brute_force_sl2_classes(H);
    REQUIRE(reps.size() == expect.size());
    std::set<std::pair<long, long>> got;
    for (const auto& g : reps) {
      CHECK(g.a * g.d - g.b * g.c == 1);
      got.insert({g.c, g.d});
    }
    CHECK(got == expect);
  }
  CHECK(enumerate_sl2_cosets(1).size() == 4);
  CHECK(enumerate_sl2_cosets(2).size() == 8);
}

TEST_CASE("single-coset restriction returns the seed value") {
  const auto f = multiply(make_phi(10, 0, 1), make_phi(4, 0, 1));
  const cplx tau{0.1, 1.4};
  const std::vector<Sl2CosetRep> identity_only = {{1, 0, 0, 1}};
  const auto v = eval_series_over(identity_only, [&](cplx t) { return f.expr.evaluate(t); },
                                  f.weight, tau, 1, 1.0);
  CHECK(std::abs(v.value - f.expr.evaluate(tau)) < 1e-15);
}

TEST_CASE("partial sums stabilize within the reported tail") {
  const auto f = multiply(make_phi(10, 0, 1), make_phi(4, 0, 1));
  const cplx tau{0.0, 2.0};
  const auto v40 = eval_elliptic_poincare(f, tau, 40);
  const auto v80 = eval_elliptic_poincare(f, tau, 80);
  CHECK(std::abs(v40.value - v80.value) <= std::max(v40.tail_estimate, 1e-16));
  CHECK(v40.tail_estimate < 1e-8 * std::abs(v40.value));
}

TEST_CASE("modular invariance up to truncation") {
  const auto f = multiply(make_phi(10, 0, 1), make_phi(4, 0, 1));
  const int w = f.weight;
  const cplx tau{0.13, 0.9};
  const long H = 60;
  const auto base = eval_elliptic_poincare(f, tau, H);
  // gamma0 of height <= 2
  for (const auto& g : std::vector<std::array<long, 4>>{{0, -1, 1, 0}, {1, 0, 1, 1}, {2, 1, 1, 1}}) {
    const cplx den = static_cast<double>(g[2]) * tau + static_cast<double>(g[3]);
    const cplx gt = (static_cast<double>(g[0]) * tau + static_cast<double>(g[1])) / den;
    const auto moved = eval_elliptic_poincare(f, gt, H);
    const cplx pulled = moved.value * std::pow(den, -w);
    CHECK(std::abs(pulled - base.value) <=
          2.0 * (base.tail_estimate + moved.tail_estimate) + 1e-14);
  }
}

TEST_CASE("convergence margin reproduces the printed thresholds") {
  using poincare::exact::make_phi_tilde;
  using poincare::exact::make_psi_tilde;
  // phi_{k[d]} phi_l converges iff k + l > 2 + 2d
  CHECK(convergence_margin(multiply(make_phi(10, 0, 1), make_phi(4, 0, 1))) == 12.0);
  CHECK(convergence_margin(multiply(make_phi(4, 2, 1), make_phi(2, 0, 1))) == Approx(0.0));
  // psi~_k phi_l converges iff k + l > 2
  CHECK(convergence_margin(multiply(make_psi_tilde(-2, -1), make_phi(8, 0, 2))) == 4.0);
  // psi_k phi_l converges iff l - k > 2
  CHECK(convergence_margin(multiply(make_psi(2, 1), make_phi(8, 0, 1))) == 4.0);
  CHECK(convergence_margin(multiply(make_psi(4, 1), make_phi(6, 0, 1))) == Approx(0.0));
  // the antiholomorphic seed: positive y powers help convergence
  const auto lowered = poincare::exact::lower(make_psi_tilde(-2, -1));
  CHECK(convergence_margin(multiply(lowered, make_phi(8, 0, 2))) == 8.0);
  CHECK_THROWS_AS(eval_elliptic_poincare(multiply(make_psi(4, 1), make_phi(6, 0, 1)), {0, 1}, 5),
                  std::domain_error);
}

TEST_CASE("below the threshold the partial sums grow") {
  // weight set 2 below threshold: k + l = 2 + 2d
  const auto f = multiply(make_phi(4, 1, 1), make_phi(2, 0, 1));
  REQUIRE(convergence_margin(f) == Approx(0.0));
  const cplx tau{0.21, 1.1};
  double prev_shell = 0.0;
  bool growing = false;
  for (long H : {8L, 16L, 32L}) {
    const auto v = eval_elliptic_poincare(f, tau, H, false);
    // shell sums (difference of consecutive partial sums) do not die away
    const auto v2 = eval_elliptic_poincare(f, tau, 2 * H, false);
    const double shell = std::abs(v2.value - v.value);
    if (shell >= 0.5 * prev_shell && prev_shell > 0) growing = true;
    prev_shell = shell;
  }
  CHECK(growing);
}

TEST_CASE("numeric lowering commutes with the truncated series") {
  // L applied numerically to the series equals the series of the lowered seed
  const auto f = multiply(make_phi(10, 1, 1), make_phi(4, 0, 1));
  const auto lf = poincare::exact::lower(f);
  const cplx tau{0.05, 1.2};
  const long H = 50;
  const double h = 1e-5 * std::min(1.0, tau.imag());
  auto series = [&](cplx t) { return eval_elliptic_poincare(f, t, H).value; };
  const cplx fx = (series(tau + h) - series(tau - h)) / (2.0 * h);
  const cplx fy = (series(tau + cplx(0, h)) - series(tau - cplx(0, h))) / (2.0 * h);
  const cplx l_num = cplx(0, -2) * tau.imag() * tau.imag() * 0.5 * (fx + cplx(0, 1) * fy);
  const auto l_series = eval_elliptic_poincare(lf, tau, H, false);
  CHECK(std::abs(l_num - l_series.value) / std::abs(l_series.value) < 1e-6);
}

TEST_CASE("the psi phi series is numerically almost holomorphic") {
  // depth k + 1 = 3 at k = 2: three numeric lowerings drive the truncated
  // series to a small residual
  const auto f = multiply(make_psi(2, 1), make_phi(8, 0, 1));
  const cplx tau{0.0, 1.0};
  const long H = 25;
  std::function<cplx(cplx)> level0 = [&](cplx t) { return eval_elliptic_poincare(f, t, H).value; };
  std::function<cplx(cplx)> cur = level0;
  // nested numeric lowering via lambda chaining (small steps, three levels)
  auto lower_num = [](const std::function<cplx(cplx)>& g, double step) {
    return [g, step](cplx t) {
      const cplx fx = (g(t + step) - g(t - step)) / (2.0 * step);
      const cplx fy = (g(t + cplx(0, step)) - g(t - cplx(0, step))) / (2.0 * step);
      return cplx(0, -2) * t.imag() * t.imag() * 0.5 * (fx + cplx(0, 1) * fy);
    };
  };
  const double step = 1e-2;
  std::function<cplx(cplx)> l1 = lower_num(level0, step);
  std::function<cplx(cplx)> l2 = lower_num(l1, step);
  std::function<cplx(cplx)> l3 = lower_num(l2, step);
  const double base = std::abs(level0(tau));
  CHECK(std::abs(l3(tau)) / base < 1e-4);
}

TEST_CASE("selberg-type numeric seed path") {
  const cplx s{0.7, 0.3};
  const auto seed = selberg_seed(s, 1);
  const cplx tau{0.3, 1.7};
  const auto v = eval_elliptic_poincare_numeric(seed, 12, tau, 20);
  CHECK(std::isfinite(v.value.real()));
  const std::vector<Sl2CosetRep> identity_only = {{1, 0, 0, 1}};
  const auto single = eval_series_over(identity_only, seed, 12, tau, 1, 1.0);
  CHECK(std::abs(single.value - seed(tau)) < 1e-15);
}

TEST_CASE("spectral pairing identity against the gamma product") {
  const auto r1 = spectral_pairing_check(-2, 8, 0.75, 1, 2);
  CHECK(r1.rel_err <= 1e-8);
  const auto r2 = spectral_pairing_check(-4, 10, 0.6, -1, 1);
  CHECK(r2.rel_err <= 1e-8);
}

TEST_CASE("spectral pairing scaling in m - n") {
  // doubling m - n rescales the integral by the predicted power (4 pi (m-n))^{1-l}
  const int k = -2, ell = 8;
  const double s = 0.75;
  const auto a = spectral_pairing_check(k, ell, s, 1, 2);   // m - n = 1
  const auto b = spectral_pairing_check(k, ell, s, 1, 3);   // m - n = 2
  CHECK(b.lhs / a.lhs == Approx(std::pow(2.0, 1 - ell)).epsilon(1e-8));
}

TEST_CASE("spectral pairing parameter domain") {
  CHECK_THROWS_AS(spectral_pairing_check(2, 8, 0.75, 1, 2), std::domain_error);   // k > 0
  CHECK_THROWS_AS(spectral_pairing_check(-2, 8, 0.75, 2, 1), std::domain_error);  // m <= n
  CHECK_THROWS_AS(spectral_pairing_check(-2, 2, 0.75, 1, 2), std::domain_error);  // k + l <= 2
  CHECK_THROWS_AS(spectral_pairing_check(-2, 8, 5.5, 1, 2), std::domain_error);   // (l-k)/2 <= s
}
