#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fms/isometry.hpp"
#include "fms/katetov.hpp"
#include "fms/metric_space.hpp"

namespace fms {

enum class ProvenanceKind { Base, FiniteSupport, Axial };

// How a tower point came to exist. Base points carry no payload; adjoined
// points record the Katetov map they realize (on the level they were built
// over), and axial points additionally record the level index and value that
// define them.
struct ProvenanceRecord {
  PointId point = -1;
  ProvenanceKind kind = ProvenanceKind::Base;
  int level = 0;  // birth level: the payload lives on level(level)
  std::optional<KatetovMap> payload;
  std::optional<int> axial_level;
  std::optional<Rational> axial_value;
};

struct TowerConfig {
  int depth = 1;                // levels to build with build_level
  int budget = 0;               // generic maps per level (orbits never split)
  std::vector<Rational> grid;   // values for sampled maps and axial points
  int max_levels = 64;          // growth bound; exceeding it is TowerGrowthFailed
};

// One adjunction: a Katetov map on the current top level, plus bookkeeping.
struct Adjunction {
  KatetovMap map;
  ProvenanceKind kind = ProvenanceKind::FiniteSupport;
  std::optional<int> axial_level;
  std::optional<Rational> axial_value;
  std::string label;
};

// A nested sequence of spaces X_0 within X_1 within ... where each level is a
// point-prefix of the next. Every adjoined point realizes its payload: its
// distance to each older point x equals payload(x), and distances between
// points adjoined together equal the sup-distance of their payloads. Payload
// values are capped by twice the diameter of the level they extend.
class Tower {
 public:
  Tower() = default;  // empty shell, only useful as an assignment target
  explicit Tower(SpacePtr base);

  int depth() const { return static_cast<int>(levels_.size()) - 1; }  // top index
  const SpacePtr& level(int i) const { return levels_.at(i); }
  const SpacePtr& top() const { return levels_.back(); }
  const Rational& level_diameter(int i) const { return diameters_.at(i); }

  const std::vector<ProvenanceRecord>& provenance() const { return provenance_; }
  int birth_level(PointId p) const { return provenance_.at(p).level; }

  // Point ids of level i (a prefix of every deeper level).
  std::vector<PointId> level_points(int i) const;

  // Adjoins the given maps as the points of a new top level. Validates the
  // Katetov condition, the payload cap, and extensional distinctness.
  void append_level(std::vector<Adjunction> adjunctions);

  // The paper-shaped level step: generic maps with support size <= i (the
  // current top index) and grid values, deterministically enumerated and
  // closed under the extensions of the base group, up to `budget` of them;
  // then axial points over every earlier level for every admissible grid
  // value. Requires i >= 1 for the generic part; level 1 gets axials only
  // when they exist (there are none, so build_level(0) adds nothing).
  void build_level(const TowerConfig& cfg);

  // Appends one level containing a single axial point over the previous
  // level, with the largest cap-respecting value; doubles the diameter.
  void append_growth_level();

 private:
  std::vector<SpacePtr> levels_;
  std::vector<Rational> diameters_;
  std::vector<ProvenanceRecord> provenance_;
};

// Frontier-only form of the level step: `i` must equal tower.depth().
void build_level(Tower& tower, int i, const TowerConfig& cfg);

// One extra point realizing f; distances to the old points are f's values.
// Rejects maps failing the Katetov condition and maps realizing an existing
// point (those have f(x) = 0 somewhere).
SpacePtr adjoin_point(const SpacePtr& space, const KatetovMap& f, const std::string& label);

struct UnrealizedMap {
  std::vector<PointId> subset;
  std::vector<Rational> values;
};

struct AuditReport {
  long long total = 0;
  long long realized = 0;
  std::vector<UnrealizedMap> unrealized;
  Rational ratio() const { return total == 0 ? Rational(1) : Rational(realized) / Rational(total); }
};

// For every subset K of `scope` (default: all of Z) with |K| <= m and every
// grid-valued Katetov map on K, reports whether some point of Z realizes it
// exactly. Deterministic enumeration order: subsets by cardinality then
// lexicographic, value tuples lexicographic in grid order.
AuditReport finite_injectivity_audit(const SpacePtr& Z, int m, const std::vector<Rational>& grid,
                                     const std::vector<PointId>* scope = nullptr);

}  // namespace fms
