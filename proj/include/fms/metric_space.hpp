#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fms/rational.hpp"

namespace fms {

// Points are dense indices 0..N-1 within one space. Labels are display-only.
using PointId = int;

// A finite metric space with an exact-rational distance matrix. Immutable
// after construction; the constructor enforces all metric axioms and throws
// ValidationError otherwise. Safe to share across threads.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::vector<std::string> labels, std::vector<Rational> dist_row_major);

  int size() const { return n_; }
  const Rational& dist(PointId x, PointId y) const { return dist_[static_cast<std::size_t>(x) * n_ + y]; }
  const std::string& label(PointId x) const { return labels_[x]; }
  const std::vector<std::string>& labels() const { return labels_; }

  Rational diameter() const;  // 0 for a singleton

  bool same_metric(const FiniteMetricSpace& other) const;

 private:
  int n_;
  std::vector<std::string> labels_;
  std::vector<Rational> dist_;  // row-major n x n
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

// A sorted, duplicate-free, nonempty set of points of a space (the Y of an
// axial map, a tower level viewed inside a deeper level, the witness set F).
struct SubsetRef {
  SpacePtr space;
  std::vector<PointId> members;
};

SubsetRef make_subset(SpacePtr space, std::vector<PointId> members);

enum class MetricViolationKind {
  Asymmetry,
  NegativeDistance,
  NonzeroDiagonal,
  ZeroDistanceDistinctPoints,
  TriangleViolation,
};

struct MetricViolation {
  MetricViolationKind kind;
  PointId x = -1;
  PointId y = -1;
  PointId via = -1;  // the middle point of a triangle violation
  Rational lhs;      // offending value
  Rational rhs;      // the bound it breaks (for triangle violations)
  std::string describe() const;
};

struct ValidationResult {
  SpacePtr space;  // null unless ok()
  std::vector<MetricViolation> violations;
  bool ok() const { return space != nullptr; }
};

// Checks every metric axiom and reports all violations, not just the first.
ValidationResult validate_metric(std::vector<std::string> labels,
                                 const std::vector<std::vector<Rational>>& matrix);

// d'(x,y) = d(x,y) / (1 + d(x,y)); the result has diameter < 1 and exactly
// the same isometries as the input.
SpacePtr rescale_bounded(const FiniteMetricSpace& space);

// min over y in Y of d(x, y); zero iff x is a member of Y.
Rational dist_to_set(const FiniteMetricSpace& space, PointId x, const std::vector<PointId>& members);

struct Restriction {
  SpacePtr space;
  std::vector<PointId> to_parent;  // new index -> index in the parent space
};

// Induced submetric on the given (sorted, nonempty) member set.
Restriction restrict_space(const FiniteMetricSpace& space, const std::vector<PointId>& members);

}  // namespace fms
