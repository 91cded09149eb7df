#include <catch2/catch_amalgamated.hpp>

#include "poincare/p2.hpp"

#include <cmath>

using namespace poincare;
using namespace poincare::p2;
using siegel::SiegelPoint;
using siegel::SymMat2;
using siegel::cplx;
using Catch::Approx;

namespace {

struct Fixture {
  std::vector<sp2::SymplecticRep> reps1 = sp2::enumerate_delta_cosets(1);
  HSurrogate table;
  HSource hs;
  quad::QuadratureSpec q;

  Fixture() {
    q.rel_tol = 1e-12;
    const SiegelPoint z = SiegelPoint::scaled_i(1.4);
    const auto [lo, hi] = eigen_range_over_cosets(reps1, z);
    table = HSurrogate::build(4, lo * 0.5, hi * 2.0, 64, 2);
    hs.table = &table;
    hs.quadrature = q;
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

} // namespace

TEST_CASE("p2 parameter validation") {
  P2Params p;
  p.k = 3;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
  p.k = 4;
  p.T = SymMat2{1, 0.3, 1};  // not half-integral
  CHECK_THROWS_AS(p.validate(), std::domain_error);
  p.T = SymMat2::identity();
  p.height = 0;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
  p.height = 2;
  CHECK_NOTHROW(p.validate());
  CHECK(p.below_convergence_threshold(8.0));
  CHECK(!p.below_convergence_threshold(1.0));
}

TEST_CASE("surrogate table reproduces the direct cone integral") {
  auto& f = fixture();
  for (auto [l1, l2] : {std::pair{0.8, 1.3}, {0.3, 2.2}, {1.4, 1.4}}) {
    const double direct =
        siegel::h_integral(5, 1, SymMat2::identity(), SymMat2::diag(l1, l2), f.q).value;
    CHECK(std::abs(f.table.eval_eigen(l1, l2) - direct) / direct < 1e-10);
    // symmetric in the eigenvalues
    CHECK(f.table.eval_eigen(l1, l2) == Approx(f.table.eval_eigen(l2, l1)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(f.table.eval_eigen(1e-9, 1.0), std::domain_error);
}

TEST_CASE("single-coset restriction of the series is the bare product") {
  auto& f = fixture();
  P2Params p;
  p.k = 4;
  p.ell = 16;
  p.height = 1;
  const SiegelPoint Z({0.1, 0.05, -0.04}, {1.5, 0.1, 1.3});
  const std::vector<sp2::SymplecticRep> identity_only = {sp2::sp2_identity()};
  const auto v = eval_p2(p, Z, f.hs, 0.0, 1, &identity_only);
  const cplx expect =
      siegel::psi(4, p.T, Z, f.q) * siegel::phi(16, p.Tp, Z);
  CHECK(std::abs(v.total - expect) / std::abs(expect) < 1e-10);
  CHECK(v.cneq0_subtotal == cplx(0, 0));
}

TEST_CASE("stratum decomposition is exact") {
  auto& f = fixture();
  P2Params p;
  p.k = 4;
  p.ell = 16;
  p.height = 1;
  const SiegelPoint Z = SiegelPoint::scaled_i(1.4);
  const auto v = eval_p2(p, Z, f.hs, 4.0, 2, &f.reps1);
  CHECK(v.total == v.c0_subtotal + v.cneq0_subtotal);
  CHECK(v.n_cosets == f.reps1.size());
  // C = 0 subtotal is real and positive at Z = i y I
  CHECK(v.c0_subtotal.real() > 0.0);
  CHECK(std::abs(v.c0_subtotal.imag()) < 1e-16 * v.c0_subtotal.real());
}

TEST_CASE("majorant dominates every summand") {
  auto& f = fixture();
  quad::QuadratureSpec qf;
  const auto fit = siegel::shimura_fit(4, SymMat2::identity(), qf, 5, 5e-2, 4.0);
  P2Params p;
  p.k = 4;
  p.ell = 16;
  p.height = 1;
  const SiegelPoint Z = SiegelPoint::scaled_i(1.4);
  const auto seeds = coset_seeds(p, f.reps1, Z, f.hs, fit.b, 2);
  const int w = p.k + p.ell;
  for (const auto& s : seeds) {
    const double lhs = std::abs(s.seed * siegel::pow_int(s.det_czd, -w));
    const double rhs = fit.c * s.majorant_scale * std::pow(std::abs(s.det_czd), -w);
    CHECK(lhs <= rhs * (1.0 + 1e-9));
  }
}

TEST_CASE("height growth stays within the reported shell tail") {
  auto& f = fixture();
  P2Params p1;
  p1.k = 4;
  p1.ell = 16;
  p1.height = 1;
  P2Params p2 = p1;
  p2.height = 2;
  static const auto reps2 = sp2::enumerate_delta_cosets(2);
  const SiegelPoint Z = SiegelPoint::scaled_i(1.4);
  quad::QuadratureSpec qf;
  const auto fit = siegel::shimura_fit(4, SymMat2::identity(), qf, 5, 5e-2, 4.0);
  HSurrogate wide;
  const auto [lo, hi] = eigen_range_over_cosets(reps2, Z);
  wide = HSurrogate::build(4, lo * 0.5, hi * 2.0, 80, 2);
  HSource hws;
  hws.table = &wide;
  hws.quadrature = f.q;
  const auto v1 = eval_p2(p1, Z, hws, fit.b, 2, &f.reps1);
  const auto v2 = eval_p2(p2, Z, hws, fit.b, 2, &reps2);
  // the step from height 1 to height 2 is bounded by the (very conservative)
  // majorant continuation of the height-1 shell, scaled by the fitted constant
  CHECK(std::abs(v2.total - v1.total) <= fit.c * v1.tail_estimate);
}

TEST_CASE("kst certificate on the small rep list") {
  auto& f = fixture();
  const auto r = kst_y0_search(f.reps1, {1.1, 1.5, 2.0, 3.0});
  REQUIRE(r.found);
  CHECK(r.margin > 0.0);
  CHECK(r.y0 <= 3.0);
  // C = I, D = 0: |det(i y I)| = y^2 > 1 already at the first grid value
  sp2::SymplecticRep m{};
  m.C = sp2::mat2(1, 0, 0, 1);
  m.B = sp2::mat2(-1, 0, 0, -1);
  REQUIRE(m.is_symplectic());
  const auto only = std::vector<sp2::SymplecticRep>{m};
  const auto r2 = kst_y0_search(only, {1.1});
  CHECK(r2.found);
  CHECK(r2.margin == Approx(1.1 * 1.1 - 1.0));
}

TEST_CASE("nonvanishing scan rows are consistent with direct evaluation") {
  auto& f = fixture();
  const double y0 = 2.0;
  const auto scan = nonvanishing_scan(4, SymMat2::identity(), SymMat2::identity(), y0,
                                      {10, 12}, f.reps1, f.hs, 4.0, 2);
  REQUIRE(scan.rows.size() == 2);
  for (const auto& row : scan.rows) {
    P2Params p;
    p.k = 4;
    p.ell = row.ell;
    p.height = 1;
    const auto direct = eval_p2(p, SiegelPoint::scaled_i(y0), f.hs, 4.0, 2, &f.reps1);
    CHECK(row.total == Approx(direct.total.real()).epsilon(1e-12));
    CHECK(row.c0 == Approx(direct.c0_subtotal.real()).epsilon(1e-12));
    CHECK(row.cneq0_abs == Approx(std::abs(direct.cneq0_subtotal)).epsilon(1e-12));
  }
  // the C = 0 stratum does not depend on l
  CHECK(scan.rows[0].c0 == scan.rows[1].c0);
}

TEST_CASE("depth probe on an exactly almost-holomorphic field hits the floor") {
  // f(Z) = det(Y) e^{2 pi i tr(Z)}: one lowering leaves det(Y)-derivative
  // terms, a few more annihilate it exactly; ratios must collapse
  auto field = [](const SiegelPoint& Z) -> cplx {
    const double tr = Z.X.m11 + Z.X.m22;
    return Z.Y.det() * std::exp(cplx(-2 * M_PI * Z.Y.trace(), 2 * M_PI * tr));
  };
  const SiegelPoint Z0 = SiegelPoint::scaled_i(1.2);
  const auto pr = depth_probe_field(field, {Z0}, 4, 0.01, 0.0);
  REQUIRE(pr.ratios.size() == 4);
  CHECK(pr.ratios[0] > 1e-3);          // L f is genuinely nonzero
  CHECK(pr.ratios[2] < 1e-6);          // L^3 f = 0 up to differencing noise
  CHECK(pr.ratios[3] < 1e-6);
}

TEST_CASE("depth probe of the bare product stays away from its floor") {
  auto& f = fixture();
  P2Params p;
  p.k = 4;
  p.ell = 16;
  p.height = 1;
  const SiegelPoint Z0 = SiegelPoint::scaled_i(1.4);
  const auto bare = bare_product_field(p, Z0);
  const auto pr = depth_probe_field(bare, {Z0}, 3, 0.005, 0.0);
  for (double r : pr.ratios) CHECK(r > 10.0 * pr.noise_floor);
  CHECK(pr.assumption == "GRC-conditional");
}

TEST_CASE("depth probe of the height-1 series decreases") {
  auto& f = fixture();
  P2Params p;
  p.k = 4;
  p.ell = 16;
  p.height = 1;
  const SiegelPoint Z0 = SiegelPoint::scaled_i(1.4);
  const auto pr = lowering_depth_probe(p, {Z0}, 3, f.reps1, f.hs, 4.0, 0.02, 1e-10, 2);
  REQUIRE(pr.ratios.size() == 3);
  CHECK(pr.ratios[1] < pr.ratios[0]);
  CHECK(pr.ratios[2] < pr.ratios[1]);
}
