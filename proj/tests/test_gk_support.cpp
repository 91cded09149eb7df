#include <catch2/catch_amalgamated.hpp>

#include "poincare/gk_support.hpp"
#include "poincare/verify.hpp"

#include <random>

using namespace poincare::gk;

TEST_CASE("canonical SL2 supports match the module diagrams") {
  const auto phi = canonical_sl2_support(Sl2Kind::phi_kd, 10, 2);
  REQUIRE(phi.min_occupied().has_value());
  CHECK(*phi.min_occupied() == 6);  // k - 2d
  REQUIRE(phi.solid_wall.has_value());
  CHECK(phi.solid_wall->position == 6);
  CHECK(phi.solid_wall->direction == WallDir::right);
  CHECK(phi.dashed_wall == -6);

  const auto psi = canonical_sl2_support(Sl2Kind::psi, 4, 0);
  CHECK(*psi.min_occupied() == -4);
  CHECK(psi.solid_wall->position == 6);   // k + 2
  CHECK(psi.dashed_wall == -6);           // -k - 2

  const auto pht = canonical_sl2_support(Sl2Kind::phi_tilde, -4, 0);
  CHECK(*pht.max_occupied() == -4);
  CHECK(pht.solid_wall->position == -4);
  CHECK(pht.solid_wall->direction == WallDir::left);
  CHECK(pht.dashed_wall == 4);

  const auto pst = canonical_sl2_support(Sl2Kind::psi_tilde, -2, 0);
  CHECK(*pst.max_occupied() == 2);        // -k
  CHECK(pst.solid_wall->position == -4);  // k - 2
  CHECK(pst.dashed_wall == 4);            // -k + 2
}

TEST_CASE("canonical support parameter validation") {
  CHECK_THROWS_AS(canonical_sl2_support(Sl2Kind::phi_kd, 5, 0), std::invalid_argument);
  CHECK_THROWS_AS(canonical_sl2_support(Sl2Kind::psi, -2, 0), std::invalid_argument);
  CHECK_THROWS_AS(canonical_sl2_support(Sl2Kind::phi_tilde, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(canonical_sl2_support(Sl2Kind::psi_tilde, 4, 0), std::invalid_argument);
}

TEST_CASE("support agrees with the symbolic lowering depth") {
  // weight of L^d phi_{k[d]} is k - 2d and L^{d+1} kills it; the diagram wall
  // sits exactly there
  const int k = 8, d = 3;
  const auto s = canonical_sl2_support(Sl2Kind::phi_kd, k, d);
  auto f = poincare::exact::make_phi(k, d, 1);
  for (int i = 0; i < d; ++i) f = poincare::exact::lower(f);
  CHECK(!f.expr.is_zero());
  CHECK(f.weight == *s.min_occupied());
  CHECK(poincare::exact::lower(f).expr.is_zero());
}

TEST_CASE("tensor of supports takes Minkowski sums and adds right walls") {
  const auto s1 = canonical_sl2_support(Sl2Kind::phi_kd, 10, 2);
  const auto s2 = canonical_sl2_support(Sl2Kind::phi_kd, 4, 0);
  const auto prod = tensor_sl2(s1, s2);
  CHECK(*prod.min_occupied() == 10 - 4 + 4);
  REQUIRE(prod.solid_wall.has_value());
  CHECK(prod.solid_wall->position == 10);
  CHECK(has_lowest_weight(prod));
}

TEST_CASE("tensor with the weight-zero singleton is the identity") {
  Sl2Support one;
  one.kind = Sl2Kind::custom;
  one.w_min = 0;
  one.w_max = 0;
  one.occupied = {0};
  const auto s = canonical_sl2_support(Sl2Kind::psi, 2, 0, 5);
  const auto prod = tensor_sl2(s, one);
  CHECK(prod.occupied == s.occupied);
}

TEST_CASE("psi~ x phi fills every weight in the window") {
  const auto s1 = canonical_sl2_support(Sl2Kind::psi_tilde, -2, 0, 10);
  const auto s2 = canonical_sl2_support(Sl2Kind::phi_kd, 8, 0, 10);
  const auto prod = tensor_sl2(s1, s2);
  CHECK(!prod.solid_wall.has_value());
  CHECK(!has_lowest_weight(prod));
  // all weights occupied across the clipped middle window
  for (int w = prod.w_min / 2; w <= prod.w_max / 2; w += 2) CHECK(prod.occupied.count(w) == 1);
}

TEST_CASE("empty support has a lowest weight by convention") {
  Sl2Support s;
  s.w_min = -4;
  s.w_max = 4;
  CHECK(has_lowest_weight(s));
}

TEST_CASE("diagram rendering shows occupancy and walls") {
  const auto s = canonical_sl2_support(Sl2Kind::phi_kd, 6, 1, 4);
  const auto text = render_sl2_diagram(s, 6);
  CHECK(text.find("solid wall at 4 (right)") != std::string::npos);
  CHECK(text.find("dashed wall at -4") != std::string::npos);
  CHECK(text.find('*') != std::string::npos);
  CHECK(text.find('.') != std::string::npos);
}

TEST_CASE("clebsch-gordan small cases") {
  const auto d1 = clebsch_gordan(KType(1, 0), KType(1, 0));
  REQUIRE(d1.size() == 2);
  CHECK(d1[0] == KType(2, 0));
  CHECK(d1[1] == KType(1, 1));

  const auto d2 = clebsch_gordan(KType(3, -1), KType(0, 0));
  REQUIRE(d2.size() == 1);
  CHECK(d2[0] == KType(3, -1));

  const auto d3 = clebsch_gordan(KType(3, 1), KType(2, 0));
  REQUIRE(d3.size() == 3);
  CHECK(d3[0] == KType(5, 1));
  CHECK(d3[1] == KType(4, 2));
  CHECK(d3[2] == KType(3, 3));
}

TEST_CASE("clebsch-gordan dimension identity and constraints") {
  for (int p = 0; p <= 10; ++p)
    for (int q = 0; q <= 10; ++q) {
      const KType t1(p - 1, -1), t2(q + 2, 2);
      const auto dec = clebsch_gordan(t1, t2);
      long dim = 0;
      for (const auto& t : dec) {
        dim += t.a - t.b + 1;
        CHECK(t.a + t.b == t1.a + t1.b + t2.a + t2.b);
        CHECK(t.a - t.b >= std::abs(p - q));
        CHECK(t.a - t.b <= p + q);
      }
      CHECK(dim == static_cast<long>((p + 1)) * (q + 1));
    }
}

TEST_CASE("clebsch-gordan agrees with the character oracle") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> base(-3, 3), diff(0, 5);
  std::uniform_real_distribution<double> ang(0.2, 2.9);
  for (int trial = 0; trial < 10; ++trial) {
    const KType t1(base(rng) + diff(rng), base(rng) - 3);
    const KType t2(base(rng) + diff(rng), base(rng) - 3);
    const auto dec = clebsch_gordan(t1, t2);
    const double a1 = ang(rng), a2 = a1 + ang(rng);
    const auto prod = poincare::verify::oracle::u2_character(t1.a, t1.b, a1, a2) *
                      poincare::verify::oracle::u2_character(t2.a, t2.b, a1, a2);
    std::complex<double> sum = 0.0;
    for (const auto& t : dec) sum += poincare::verify::oracle::u2_character(t.a, t.b, a1, a2);
    CHECK(std::abs(prod - sum) < 1e-9 * std::max(1.0, std::abs(prod)));
  }
}

TEST_CASE("ktype validation") {
  CHECK_THROWS_AS(KType(0, 1), std::invalid_argument);
  CHECK(KType(3, 3).scalar());
  CHECK(!KType(4, 2).scalar());
}

TEST_CASE("tensor of walled supports propagates the wall") {
  KTypeSupport s1, s2;
  s1.insert(KType(5, 3));
  s1.insert(KType(6, 2));
  s1.walls.push_back({WallDir::right, 5});
  s2.insert(KType(4, 2));
  s2.insert(KType(3, 3));
  s2.walls.push_back({WallDir::up, 2});
  const auto prod = tensor_ktype_support(s1, s2);
  REQUIRE(!prod.walls.empty());
  CHECK(prod.walls[0].direction == WallDir::right);
  CHECK(prod.walls[0].threshold == 7);
  for (const auto& [t, m] : prod.occupied) {
    CHECK(t.a >= 7);
    CHECK(m >= 1);
  }
}

TEST_CASE("tensor with the trivial ktype is the identity on occupancy") {
  KTypeSupport one, s2;
  one.insert(KType(0, 0));
  s2.insert(KType(4, 1));
  s2.insert(KType(2, 2));
  const auto prod = tensor_ktype_support(one, s2);
  CHECK(prod.occupied.size() == s2.occupied.size());
  for (const auto& [t, m] : s2.occupied) {
    CHECK(prod.occupied.count(t) == 1);
    CHECK(prod.occupied.at(t) == m);
  }
}

TEST_CASE("scalar ktype detection") {
  KTypeSupport s;
  s.insert(KType(4, 2));
  CHECK(!contains_scalar_ktype(s));
  s.insert(KType(3, 3));
  CHECK(contains_scalar_ktype(s));
  // the module generated by the harmonic term occupies (k + 2a, k): scalar at a = 0
  KTypeSupport psi_mod;
  const int k = 4;
  for (int a = 0; a <= 6; ++a) psi_mod.insert(KType(k + 2 * a, k));
  CHECK(contains_scalar_ktype(psi_mod));
}

TEST_CASE("multiplicities accumulate in tensor supports") {
  KTypeSupport s1, s2;
  s1.insert(KType(2, 0));
  s1.insert(KType(1, 1));
  s2.insert(KType(1, 0));
  const auto prod = tensor_ktype_support(s1, s2);
  // (2,0)x(1,0) -> (3,0),(2,1); (1,1)x(1,0) -> (2,1): multiplicity 2 at (2,1)
  CHECK(prod.occupied.at(KType(2, 1)) == 2);
  CHECK(prod.occupied.at(KType(3, 0)) == 1);
}

TEST_CASE("json dumps carry occupancy and walls") {
  KTypeSupport s;
  s.insert(KType(3, 1));
  s.walls.push_back({WallDir::right, 3});
  const auto j = ktype_support_to_json(s);
  CHECK(j["occupied"].size() == 1);
  CHECK(j["walls"][0]["direction"] == "right");
  const auto sj = sl2_support_to_json(canonical_sl2_support(Sl2Kind::psi, 2, 0, 3));
  CHECK(sj["solid_wall"]["position"] == 4);
}
