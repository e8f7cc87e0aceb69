#include <doctest.h>

#include "fms/errors.hpp"
#include "fms/katetov.hpp"
#include "oracles.hpp"

using fms::KatetovMap;
using fms::Rational;
using oracles::Q;

namespace {

fms::SpacePtr three_line() { return oracles::line_space({Q(0), Q(1), Q(2)}); }

}  // namespace

TEST_CASE("evaluate: Kuratowski, singleton support, two-branch min") {
  auto line = three_line();
  auto fa = fms::kuratowski(line, 0);
  for (fms::PointId x = 0; x < 3; ++x) CHECK(fa.evaluate(x) == line->dist(0, x));

  KatetovMap g(line, {{0, Q(3)}});
  CHECK(g.evaluate(1) == Q(4));  // c + d(a,b)

  KatetovMap h(line, {{0, Q(2)}, {2, Q(1)}});
  CHECK(h.evaluate(1) == Q(2));  // min(2+1, 1+1)
}

TEST_CASE("is_katetov: Kuratowski yes, zero map no, constant 5 yes") {
  auto two = oracles::make_space({{Q(0), Q(1)}, {Q(1), Q(0)}});
  CHECK(fms::is_katetov(fms::kuratowski(two, 0)).ok);

  KatetovMap zero(two, {{0, Q(0)}, {1, Q(0)}});
  auto check = fms::is_katetov(zero);
  REQUIRE(!check.ok);
  CHECK(check.lower_bound_failed);  // f(0)+f(1) = 0 < 1

  KatetovMap five(two, {{0, Q(5)}, {1, Q(5)}});
  CHECK(fms::is_katetov(five).ok);
}

TEST_CASE("katetov_extension over the identity embedding is the identity") {
  auto line = three_line();
  KatetovMap f(line, {{0, Q(2)}, {2, Q(1)}});
  auto ext = fms::katetov_extension(f, line, {0, 1, 2});
  CHECK(fms::extensionally_equal(f, ext));
}

TEST_CASE("katetov_extension: singleton subspace formula and agreement on Y") {
  auto two = oracles::make_space({{Q(0), Q(1)}, {Q(1), Q(0)}});
  auto y = fms::restrict_space(*two, {0});
  KatetovMap f(y.space, {{0, Q(2)}});
  auto ext = fms::katetov_extension(f, two, y.to_parent);
  CHECK(ext.evaluate(0) == Q(2));
  CHECK(ext.evaluate(1) == Q(3));

  auto big = oracles::random_space(4, 51);
  auto sub = fms::restrict_space(*big, {1, 3});
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    auto g = oracles::random_katetov(sub.space, rng);
    auto gx = fms::katetov_extension(g, big, sub.to_parent);
    for (fms::PointId p = 0; p < 2; ++p) CHECK(gx.evaluate(sub.to_parent[p]) == g.evaluate(p));
  }
}

TEST_CASE("katetov_extension rejects non-isometric index maps") {
  auto line = three_line();
  auto y = fms::restrict_space(*line, {0, 2});  // distance 2
  KatetovMap f(y.space, {{0, Q(2)}, {1, Q(2)}});
  CHECK_THROWS_AS(fms::katetov_extension(f, line, {0, 1}), fms::BadEmbeddingError);
}

TEST_CASE("extension is an isometric embedding and the greatest 1-Lipschitz extension") {
  auto big = oracles::random_space(6, 77);
  auto sub = fms::restrict_space(*big, {0, 2, 4});
  std::mt19937_64 rng(78);
  for (int t = 0; t < 20; ++t) {
    auto f = oracles::random_katetov(sub.space, rng);
    auto g = oracles::random_katetov(sub.space, rng);
    auto fx = fms::katetov_extension(f, big, sub.to_parent);
    auto gx = fms::katetov_extension(g, big, sub.to_parent);
    CHECK(fms::sup_dist(fx, gx) == fms::sup_dist(f, g));

    // Sampled 1-Lipschitz extensions never exceed the Katetov extension: the
    // lower (McShane) extension, and the min of fx with any Katetov map that
    // dominates f on the subspace (such a min still agrees with f there).
    auto other = oracles::random_katetov(big, rng);
    bool dominates_on_y = true;
    for (fms::PointId p = 0; p < sub.space->size(); ++p)
      dominates_on_y = dominates_on_y && other.evaluate(sub.to_parent[p]) >= f.evaluate(p);
    for (fms::PointId x = 0; x < big->size(); ++x) {
      Rational lower(0);
      bool first = true;
      for (fms::PointId p = 0; p < sub.space->size(); ++p) {
        Rational v = f.evaluate(p) - big->dist(x, sub.to_parent[p]);
        if (first || v > lower) {
          lower = std::move(v);
          first = false;
        }
      }
      CHECK(lower <= fx.evaluate(x));
      if (dominates_on_y) {
        const Rational h = fms::min(other.evaluate(x), fx.evaluate(x));
        CHECK(h <= fx.evaluate(x));
        for (fms::PointId p = 0; p < sub.space->size(); ++p) {
          const Rational hy =
              fms::min(other.evaluate(sub.to_parent[p]), fx.evaluate(sub.to_parent[p]));
          CHECK(hy == f.evaluate(p));
        }
      }
    }
  }
}

TEST_CASE("sup_dist identities: zero, Kuratowski isometry, pointed distance") {
  auto space = oracles::random_space(7, 91);
  std::mt19937_64 rng(92);
  auto f = oracles::random_katetov(space, rng);
  CHECK(fms::sup_dist(f, f) == Q(0));
  for (fms::PointId x = 0; x < space->size(); ++x) {
    for (fms::PointId y = 0; y < space->size(); ++y)
      CHECK(fms::sup_dist(fms::kuratowski(space, x), fms::kuratowski(space, y)) ==
            space->dist(x, y));
    CHECK(fms::sup_dist(f, fms::kuratowski(space, x)) == f.evaluate(x));
  }
}

TEST_CASE("kuratowski of a singleton space is the zero map") {
  auto one = oracles::make_space({{Q(0)}});
  auto f = fms::kuratowski(one, 0);
  CHECK(f.evaluate(0) == Q(0));
}

TEST_CASE("minimal_support: Kuratowski maps are controlled by their base point") {
  auto space = oracles::random_space(5, 13);
  for (fms::PointId x = 0; x < space->size(); ++x) {
    auto cert = fms::minimal_support(fms::kuratowski(space, x));
    CHECK(cert.cardinality == 1);
    CHECK(cert.minimal_support == std::vector<fms::PointId>{x});
  }
}

TEST_CASE("minimal_support: a genuine two-point support on a spread line") {
  auto line = oracles::line_space({Q(0), Q(1), Q(10), Q(11)});
  KatetovMap f(line, {{0, Q(6)}, {2, Q(7)}});
  REQUIRE(fms::is_katetov(f).ok);
  auto cert = fms::minimal_support(f);
  CHECK(cert.cardinality == 2);
  CHECK(cert.minimal_support == std::vector<fms::PointId>{0, 2});
}

TEST_CASE("minimal_support: the constant 1/2 on the unit equilateral triangle needs all points") {
  auto tri = oracles::equilateral(3, Q(1));
  KatetovMap f(tri, {{0, Q(1, 2)}, {1, Q(1, 2)}, {2, Q(1, 2)}});
  REQUIRE(fms::is_katetov(f).ok);
  for (fms::PointId x = 0; x < 3; ++x) CHECK(f.evaluate(x) == Q(1, 2));
  auto cert = fms::minimal_support(f);
  CHECK(cert.cardinality == 3);
}

TEST_CASE("monotone supports: any superset of a controlling set controls") {
  auto space = oracles::random_space(6, 14);
  std::mt19937_64 rng(15);
  auto f = oracles::random_katetov(space, rng);
  auto cert = fms::minimal_support(f);
  auto vals = f.values();
  std::vector<fms::PointId> bigger = cert.minimal_support;
  for (fms::PointId extra = 0; extra < space->size(); ++extra) {
    if (std::find(bigger.begin(), bigger.end(), extra) != bigger.end()) continue;
    std::vector<std::pair<fms::PointId, Rational>> support;
    for (fms::PointId s : cert.minimal_support) support.emplace_back(s, vals[s]);
    support.emplace_back(extra, vals[extra]);
    CHECK(fms::extensionally_equal(f, KatetovMap(space, support)));
  }
}

TEST_CASE("tightened is idempotent and extensionally identical") {
  auto space = oracles::random_space(5, 16);
  KatetovMap loose(space, {{0, Q(4)}, {1, Q(9)}});  // 9 may exceed f(1)
  auto tight = loose.tightened();
  CHECK(fms::extensionally_equal(loose, tight));
  auto again = tight.tightened();
  CHECK(tight.support() == again.support());
}

TEST_CASE("axial_map: degenerate cases and the interval isometry") {
  auto line = three_line();
  SUBCASE("d = 0 over a singleton is the Kuratowski map") {
    auto f = fms::axial_map(line, {1}, Q(0));
    CHECK(fms::extensionally_equal(f, fms::kuratowski(line, 1)));
  }
  SUBCASE("d = 2 over the whole space is constant 2 on it") {
    auto f = fms::axial_map(line, {0, 1, 2}, Q(2));
    for (fms::PointId x = 0; x < 3; ++x) CHECK(f.evaluate(x) == Q(2));
  }
  SUBCASE("value below half the subset diameter is rejected") {
    CHECK_THROWS_AS(fms::axial_map(line, {0, 2}, Q(1, 2)), fms::InvalidKatetovMapError);
  }
  SUBCASE("d -> axial(d) is distance preserving") {
    const std::vector<fms::PointId> y = {0, 2};
    for (long long a = 1; a <= 4; ++a)
      for (long long b = 1; b <= 4; ++b)
        CHECK(fms::sup_dist(fms::axial_map(line, y, Q(a)), fms::axial_map(line, y, Q(b))) ==
              (Q(a) - Q(b)).abs());
  }
}

TEST_CASE("evaluate is 1-Lipschitz regardless of support values") {
  auto space = oracles::random_space(6, 17);
  KatetovMap f(space, {{0, Q(1, 3)}, {3, Q(7)}, {5, Q(2)}});
  for (fms::PointId x = 0; x < space->size(); ++x)
    for (fms::PointId y = 0; y < space->size(); ++y)
      CHECK((f.evaluate(x) - f.evaluate(y)).abs() <= space->dist(x, y));
}

// ---------------------------------------------------------------------------
// limit_extract
// ---------------------------------------------------------------------------

TEST_CASE("limit_extract: constant sequences return the map with its certificate") {
  auto space = oracles::random_space(6, 18);
  std::mt19937_64 rng(19);
  auto f = oracles::random_katetov(space, rng);
  std::vector<KatetovMap> seq = {f, f, f};
  auto out = fms::limit_extract(seq, 3, {Q(0), Q(0)});
  CHECK(fms::extensionally_equal(out.limit, f));
  auto oracle = fms::minimal_support(f);
  CHECK(out.certificate.minimal_support == oracle.minimal_support);
}

TEST_CASE("limit_extract: axial sequences converge to the axial limit") {
  auto line = oracles::line_space({Q(0), Q(1), Q(2), Q(4)});
  const std::vector<fms::PointId> y = {0, 3};
  std::vector<KatetovMap> seq;
  for (long long k : {64, 16, 4, 0, 0})
    seq.push_back(fms::axial_map(line, y, Q(3) + Q(k, 16)));
  std::vector<Rational> tol = {Q(3), Q(3, 4), Q(1, 4), Q(0)};
  auto out = fms::limit_extract(seq, 2, tol);
  CHECK(fms::extensionally_equal(out.limit, fms::axial_map(line, y, Q(3))));
  auto oracle = fms::minimal_support(fms::axial_map(line, y, Q(3)));
  CHECK(out.certificate.cardinality == oracle.cardinality);
  CHECK(out.certificate.minimal_support == oracle.minimal_support);
}

TEST_CASE("limit_extract: two clusters split at the minimum and recurse") {
  auto line = oracles::line_space({Q(0), Q(1), Q(10), Q(11)});
  auto at = [&](const Rational& shift) {
    return KatetovMap(line, {{0, Q(6) + shift}, {2, Q(7)}});
  };
  std::vector<KatetovMap> seq = {at(Q(1)), at(Q(1, 4)), at(Q(1, 16)), at(Q(0)), at(Q(0))};
  for (const auto& f : seq) REQUIRE(fms::is_katetov(f).ok);
  std::vector<Rational> tol = {Q(1), Q(1, 4), Q(1, 16), Q(0)};
  auto out = fms::limit_extract(seq, 2, tol);

  KatetovMap expected(line, {{0, Q(6)}, {2, Q(7)}});
  CHECK(fms::extensionally_equal(out.limit, expected));
  auto oracle = fms::minimal_support(expected);
  CHECK(out.certificate.cardinality == oracle.cardinality);
  CHECK(out.certificate.minimal_support == oracle.minimal_support);
  CHECK(out.certificate.cardinality <= 2);

  // The decomposition itself: cluster {0} at the minimum, one residual stage.
  CHECK(out.diagnostics.support_cardinality == 2);
  CHECK(out.diagnostics.cluster_size == 1);
  CHECK(out.diagnostics.cluster_points == std::vector<fms::PointId>{0});
  REQUIRE(out.diagnostics.separation.has_value());
  CHECK(*out.diagnostics.separation == Q(5));  // half of d(0, 10)
  REQUIRE(out.diagnostics.residual_gap.has_value());
  CHECK(*out.diagnostics.residual_gap == Q(1));
  CHECK(out.diagnostics.recursion_depth == 1);
}

TEST_CASE("limit_extract: three supports peel off in two recursive stages") {
  auto line = oracles::line_space({Q(0), Q(1), Q(10), Q(11), Q(30), Q(31)});
  auto at = [&](const Rational& shift) {
    return KatetovMap(line, {{0, Q(15) + shift}, {2, Q(16)}, {4, Q(17)}});
  };
  std::vector<KatetovMap> seq = {at(Q(1, 2)), at(Q(1, 8)), at(Q(0)), at(Q(0))};
  for (const auto& f : seq) REQUIRE(fms::is_katetov(f).ok);
  std::vector<Rational> tol = {Q(1, 2), Q(1, 8), Q(0)};
  auto out = fms::limit_extract(seq, 3, tol);
  KatetovMap expected(line, {{0, Q(15)}, {2, Q(16)}, {4, Q(17)}});
  CHECK(fms::extensionally_equal(out.limit, expected));
  CHECK(out.certificate.cardinality == fms::minimal_support(expected).cardinality);
  CHECK(out.diagnostics.cluster_size == 1);
  CHECK(out.diagnostics.recursion_depth == 2);
}

TEST_CASE("limit_extract rejects non-Cauchy sequences and oversized supports") {
  auto line = oracles::line_space({Q(0), Q(1), Q(10), Q(11)});
  auto f = fms::kuratowski(line, 0);
  auto g = fms::axial_map(line, {0, 2}, Q(6));
  CHECK_THROWS_AS(fms::limit_extract({f, g}, 2, {Q(1, 100)}), fms::NotCauchyError);
  KatetovMap wide(line, {{0, Q(6)}, {2, Q(7)}});
  REQUIRE(fms::minimal_support(wide).cardinality == 2);
  CHECK_THROWS_AS(fms::limit_extract({wide, wide}, 1, {Q(0)}), fms::SupportTooLargeError);
}
