#pragma once

#include <vector>

#include "fms/katetov.hpp"
#include "fms/metric_space.hpp"

namespace fms {

class Tower;

// A distance-preserving permutation of the points of one space. The
// constructor verifies both the bijection and the isometry condition.
class Isometry {
 public:
  Isometry(SpacePtr space, std::vector<PointId> images);

  static Isometry identity(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  const std::vector<PointId>& images() const { return img_; }
  PointId apply(PointId x) const { return img_[x]; }

  Isometry inverse() const;

  friend bool operator==(const Isometry& a, const Isometry& b) { return a.img_ == b.img_; }
  friend bool operator<(const Isometry& a, const Isometry& b) { return a.img_ < b.img_; }

 private:
  SpacePtr space_;
  std::vector<PointId> img_;
};

// compose(f, g) applies g first: x -> f(g(x)).
Isometry compose(const Isometry& f, const Isometry& g);

// The full isometry group as an explicit, lexicographically sorted element
// list. Enumeration verifies the group axioms before returning.
struct IsometryGroup {
  SpacePtr space;
  std::vector<Isometry> elements;

  int order() const { return static_cast<int>(elements.size()); }
  // Index of an element in the sorted list, or -1.
  int index_of(const Isometry& iso) const;
};

// Backtracking search over distance-profile-compatible assignments, points
// processed rarest profile first. Output order is normalized, so the search
// heuristic cannot influence results.
IsometryGroup enumerate_isometries(SpacePtr space);

// Orbits of points under the group, each orbit sorted, orbits sorted by
// their least element.
std::vector<std::vector<PointId>> orbit_partition(const IsometryGroup& group);

// Functorial action on Katetov maps: f -> f o phi^{-1}, i.e. the support is
// relabelled through phi with values unchanged.
KatetovMap extend_to_katetov(const Isometry& phi, const KatetovMap& f);

// The unique level-preserving extension of a base-space isometry to the top
// level of a tower: each realized point maps to the point realizing the
// transported payload. Throws OrbitNotRealized when the tower was truncated
// asymmetrically and the image point does not exist.
Isometry extend_through_tower(const Isometry& base, const Tower& tower);

// Extension stopped at a given level (level 0 returns `base` itself).
Isometry extend_to_level(const Isometry& base, const Tower& tower, int level);

}  // namespace fms
