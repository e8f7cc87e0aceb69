#include <doctest.h>

#include "fms/errors.hpp"
#include "fms/isometry.hpp"
#include "fms/tower.hpp"
#include "oracles.hpp"

using fms::Isometry;
using fms::Rational;
using oracles::Q;

TEST_CASE("enumerate_isometries: equilateral triangle has all 6 permutations") {
  auto group = fms::enumerate_isometries(oracles::equilateral(3, Q(1)));
  CHECK(group.order() == 6);
}

TEST_CASE("enumerate_isometries: distances 1, 2, 3 leave only the identity") {
  auto space = oracles::make_space(
      {{Q(0), Q(1), Q(3)}, {Q(1), Q(0), Q(2)}, {Q(3), Q(2), Q(0)}});
  auto group = fms::enumerate_isometries(space);
  REQUIRE(group.order() == 1);
  CHECK(group.elements[0] == Isometry::identity(space));
}

TEST_CASE("enumerate_isometries: the rectangle gives the Klein four-group") {
  auto group = fms::enumerate_isometries(oracles::rectangle_space());
  REQUIRE(group.order() == 4);
  // Every element squares to the identity.
  const auto id = Isometry::identity(group.space);
  for (const auto& g : group.elements) CHECK(compose(g, g) == id);
}

TEST_CASE("enumerate_isometries matches the brute-force oracle") {
  std::vector<fms::SpacePtr> corpus = {
      oracles::equilateral(3, Q(1)),     oracles::equilateral(4, Q(1)),
      oracles::rectangle_space(),        oracles::scalene_space(),
      oracles::isoceles_space(),         oracles::line_space({Q(0), Q(1), Q(2), Q(3)}),
      oracles::random_space(6, 101),     oracles::random_space(7, 102),
      oracles::random_space(8, 103)};
  for (const auto& space : corpus) {
    auto expected = oracles::brute_force_isometries(*space);
    auto group = fms::enumerate_isometries(space);
    REQUIRE(group.order() == static_cast<int>(expected.size()));
    for (std::size_t i = 0; i < expected.size(); ++i)
      CHECK(group.elements[i].images() == expected[i]);
  }
}

TEST_CASE("group operations: identities, inverses, Klein table") {
  auto group = fms::enumerate_isometries(oracles::rectangle_space());
  const auto id = Isometry::identity(group.space);
  for (const auto& g : group.elements) {
    CHECK(compose(g, g.inverse()) == id);
    CHECK(compose(id, g) == g);
    CHECK(compose(g, id) == g);
  }
  // Associativity through permutation composition on the whole table.
  for (const auto& a : group.elements)
    for (const auto& b : group.elements)
      for (const auto& c : group.elements)
        CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
}

TEST_CASE("orbit_partition groups equivalent points") {
  auto iso = oracles::isoceles_space();  // apex point 2 is alone in its orbit
  auto orbits = fms::orbit_partition(fms::enumerate_isometries(iso));
  REQUIRE(orbits.size() == 2);
  CHECK(orbits[0] == std::vector<fms::PointId>{0, 1});
  CHECK(orbits[1] == std::vector<fms::PointId>{2});
}

TEST_CASE("extend_to_katetov: identity, Kuratowski equivariance, fixed axials") {
  auto space = oracles::random_space(6, 111);
  auto group = fms::enumerate_isometries(space);
  std::mt19937_64 rng(112);
  auto f = oracles::random_katetov(space, rng);
  CHECK(fms::extensionally_equal(fms::extend_to_katetov(Isometry::identity(space), f), f));
  for (const auto& phi : group.elements) {
    for (fms::PointId x = 0; x < space->size(); ++x)
      CHECK(fms::extensionally_equal(fms::extend_to_katetov(phi, fms::kuratowski(space, x)),
                                     fms::kuratowski(space, phi.apply(x))));
  }

  auto tri = oracles::equilateral(3, Q(1));
  auto axial = fms::axial_map(tri, {0, 1, 2}, Q(2));
  for (const auto& phi : fms::enumerate_isometries(tri).elements)
    CHECK(fms::extensionally_equal(fms::extend_to_katetov(phi, axial), axial));
}

TEST_CASE("extend_to_katetov is an isometric action compatible with composition") {
  auto space = oracles::random_space(5, 113);
  auto group = fms::enumerate_isometries(space);
  std::mt19937_64 rng(114);
  for (int t = 0; t < 5; ++t) {
    auto f = oracles::random_katetov(space, rng);
    auto g = oracles::random_katetov(space, rng);
    for (const auto& phi : group.elements) {
      CHECK(fms::sup_dist(fms::extend_to_katetov(phi, f), fms::extend_to_katetov(phi, g)) ==
            fms::sup_dist(f, g));
      for (const auto& psi : group.elements)
        CHECK(fms::extensionally_equal(
            fms::extend_to_katetov(compose(phi, psi), f),
            fms::extend_to_katetov(phi, fms::extend_to_katetov(psi, f))));
    }
  }
}

namespace {

// A small symmetric tower over the unit equilateral triangle.
fms::Tower symmetric_tower() {
  fms::Tower tower(oracles::equilateral(3, Q(1)));
  fms::TowerConfig cfg;
  cfg.budget = 6;
  cfg.grid = {Q(1, 2), Q(1)};
  tower.build_level(cfg);  // level 1: nothing (no generic maps at depth 0)
  tower.build_level(cfg);  // level 2: generics + axials
  return tower;
}

}  // namespace

TEST_CASE("extend_through_tower: identity extends to the identity") {
  auto tower = symmetric_tower();
  auto ext = fms::extend_through_tower(Isometry::identity(tower.level(0)), tower);
  CHECK(ext == Isometry::identity(tower.top()));
}

TEST_CASE("extend_through_tower restricted to the base is the original") {
  auto tower = symmetric_tower();
  for (const auto& g : fms::enumerate_isometries(tower.level(0)).elements) {
    auto ext = fms::extend_through_tower(g, tower);
    for (fms::PointId x = 0; x < tower.level(0)->size(); ++x) CHECK(ext.apply(x) == g.apply(x));
  }
}

TEST_CASE("extend_through_tower fixes axial points") {
  auto tower = symmetric_tower();
  for (const auto& g : fms::enumerate_isometries(tower.level(0)).elements) {
    auto ext = fms::extend_through_tower(g, tower);
    for (const auto& rec : tower.provenance())
      if (rec.kind == fms::ProvenanceKind::Axial) CHECK(ext.apply(rec.point) == rec.point);
  }
}

TEST_CASE("extend_through_tower is a group monomorphism") {
  auto tower = symmetric_tower();
  auto base = fms::enumerate_isometries(tower.level(0));
  std::vector<Isometry> extended;
  for (const auto& g : base.elements) extended.push_back(fms::extend_through_tower(g, tower));
  for (int a = 0; a < base.order(); ++a) {
    for (int b = 0; b < base.order(); ++b) {
      auto composed = fms::extend_through_tower(compose(base.elements[a], base.elements[b]), tower);
      CHECK(composed == compose(extended[a], extended[b]));
    }
    for (int b = a + 1; b < base.order(); ++b) CHECK(!(extended[a] == extended[b]));
  }
}

TEST_CASE("extend_through_tower reports unrealized orbits on lopsided towers") {
  auto base = oracles::equilateral(3, Q(1));
  fms::Tower tower(base);
  // Adjoin a single asymmetric map: its images under the triangle's
  // rotations are missing, so extension must fail for them.
  fms::KatetovMap f(base, {{0, Q(1, 2)}, {1, Q(1)}, {2, Q(1)}});
  REQUIRE(fms::is_katetov(f).ok);
  tower.append_level({fms::Adjunction{f, fms::ProvenanceKind::FiniteSupport, {}, {}, "lopsided"}});
  auto group = fms::enumerate_isometries(base);
  int failures = 0;
  for (const auto& g : group.elements) {
    try {
      fms::extend_through_tower(g, tower);
    } catch (const fms::OrbitNotRealizedError& e) {
      CHECK(e.level == 0);
      CHECK(e.point == 3);
      ++failures;
    }
  }
  CHECK(failures == 4);  // only the two isometries fixing point 0 extend
}

TEST_CASE("level-preserving top isometries agreeing on the base agree everywhere") {
  auto tower = symmetric_tower();
  auto top_group = fms::enumerate_isometries(tower.top());
  const int n0 = tower.level(0)->size();
  auto preserves_levels = [&](const Isometry& phi) {
    for (int l = 0; l <= tower.depth(); ++l) {
      const int nl = tower.level(l)->size();
      for (fms::PointId x = 0; x < nl; ++x)
        if (phi.apply(x) >= nl) return false;
    }
    return true;
  };
  for (const auto& phi : top_group.elements) {
    if (!preserves_levels(phi)) continue;
    for (const auto& psi : top_group.elements) {
      if (!preserves_levels(psi)) continue;
      bool agree_base = true;
      for (fms::PointId x = 0; x < n0 && agree_base; ++x) agree_base = phi.apply(x) == psi.apply(x);
      if (agree_base) CHECK(phi == psi);
    }
  }
}
