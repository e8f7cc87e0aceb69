#include <doctest.h>

#include "fms/errors.hpp"
#include "fms/io.hpp"
#include "oracles.hpp"

using fms::Rational;
using oracles::Q;

namespace {

const char* kLineFms =
    "fms 1\n"
    "points 3\n"
    "a\n"
    "b\n"
    "c\n"
    "1\n"
    "2 1\n";

}  // namespace

TEST_CASE("parse_fms reads the 3-point line and round-trips") {
  auto result = fms::io::parse_fms_string(kLineFms);
  REQUIRE(result.ok());
  CHECK(result.space->dist(0, 2) == Q(2));
  CHECK(result.space->label(1) == "b");
  CHECK(fms::io::write_fms(*result.space) == kLineFms);
  // parse(write(parse(x))) is the identity
  auto again = fms::io::parse_fms_string(fms::io::write_fms(*result.space));
  REQUIRE(again.ok());
  CHECK(again.space->same_metric(*result.space));
}

TEST_CASE("parse_fms accepts rational tokens and rejects bad ones") {
  const char* good =
      "fms 1\npoints 2\na\nb\n3/2\n";
  auto result = fms::io::parse_fms_string(good);
  REQUIRE(result.ok());
  CHECK(result.space->dist(0, 1) == Q(3, 2));

  CHECK_THROWS_AS(fms::io::parse_fms_string("fms 1\npoints 2\na\nb\n3/-2\n"), fms::ParseError);
  CHECK_THROWS_AS(fms::io::parse_fms_string("fms 1\npoints 2\na\nb\n1/0\n"), fms::ParseError);
  CHECK_THROWS_AS(fms::io::parse_fms_string("fms 1\npoints 2\na\nb\n1 2\n"), fms::ParseError);
  CHECK_THROWS_AS(fms::io::parse_fms_string(std::string(kLineFms) + "garbage\n"), fms::ParseError);
  CHECK_THROWS_AS(fms::io::parse_fms_string("fms 2\npoints 1\na\n"), fms::ParseError);
}

TEST_CASE("parse_fms surfaces metric violations via validate, not parse errors") {
  auto result = fms::io::parse_fms_string("fms 1\npoints 2\na\nb\n-1\n");
  REQUIRE(!result.ok());
  CHECK(result.violations[0].kind == fms::MetricViolationKind::NegativeDistance);
}

TEST_CASE("kat lines round-trip bit-exactly") {
  auto space = oracles::line_space({Q(0), Q(1), Q(2), Q(4)});
  fms::KatetovMap f(space, {{0, Q(1, 2)}, {3, Q(2)}});
  const std::string line = fms::io::write_kat(f);
  CHECK(line == "kat {0: 1/2, 3: 2}");
  auto parsed = fms::io::parse_kat(line, space);
  CHECK(fms::io::write_kat(parsed) == line);
  CHECK(fms::extensionally_equal(parsed, f));
  CHECK_THROWS_AS(fms::io::parse_kat("kat {}", space), fms::ParseError);
  CHECK_THROWS_AS(fms::io::parse_kat("kat {0: x}", space), fms::ParseError);
}

TEST_CASE("iso lines round-trip") {
  auto space = oracles::equilateral(3, Q(1));
  fms::Isometry phi(space, {2, 0, 1});
  const std::string line = fms::io::write_iso(phi);
  CHECK(line == "iso 0->2 1->0 2->1");
  CHECK(fms::io::parse_iso(line, space) == phi);
  CHECK_THROWS_AS(fms::io::parse_iso("iso 0->2 1->0", space), fms::ParseError);
}

TEST_CASE("tower sidecar round-trips through parse_tower") {
  fms::Tower tower(oracles::equilateral(3, Q(1)));
  fms::TowerConfig cfg;
  cfg.budget = 4;
  cfg.grid = {Q(1, 2), Q(1)};
  tower.build_level(cfg);
  tower.build_level(cfg);
  const std::string sidecar = fms::io::write_tower(tower);
  auto rebuilt = fms::io::parse_tower(sidecar, tower.top());
  REQUIRE(rebuilt.depth() == tower.depth());
  for (int l = 0; l <= tower.depth(); ++l)
    CHECK(rebuilt.level(l)->same_metric(*tower.level(l)));
  CHECK(fms::io::write_tower(rebuilt) == sidecar);
}

TEST_CASE("certificates serialize deterministically") {
  fms::PipelineConfig cfg;
  cfg.tower.depth = 2;
  cfg.tower.budget = 4;
  cfg.tower.grid = {Q(1, 2), Q(1)};
  auto cert_a = fms::verify_main_theorem(oracles::scalene_space(), cfg);
  auto cert_b = fms::verify_main_theorem(oracles::scalene_space(), cfg);
  const std::string text_a = fms::io::write_certificate(cert_a);
  const std::string text_b = fms::io::write_certificate(cert_b);
  CHECK(text_a == text_b);
  CHECK(text_a.find("verdict ok") != std::string::npos);
  CHECK(cert_a.lemma.iso_f.order() == 1);
}
