#include "fms/metric_space.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "fms/errors.hpp"

namespace fms {

namespace {

std::vector<MetricViolation> find_violations(int n, const std::vector<Rational>& d) {
  std::vector<MetricViolation> out;
  auto at = [&](int x, int y) -> const Rational& { return d[static_cast<std::size_t>(x) * n + y]; };
  for (int x = 0; x < n; ++x) {
    if (!at(x, x).is_zero()) {
      out.push_back({MetricViolationKind::NonzeroDiagonal, x, x, -1, at(x, x), Rational(0)});
    }
  }
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      if (at(x, y) != at(y, x)) {
        out.push_back({MetricViolationKind::Asymmetry, x, y, -1, at(x, y), at(y, x)});
        continue;  // the remaining axioms presuppose symmetry
      }
      if (at(x, y).is_negative()) {
        out.push_back({MetricViolationKind::NegativeDistance, x, y, -1, at(x, y), Rational(0)});
      } else if (at(x, y).is_zero()) {
        out.push_back(
            {MetricViolationKind::ZeroDistanceDistinctPoints, x, y, -1, at(x, y), Rational(0)});
      }
    }
  }
  // One report per unordered pair {x,z} and middle point y.
  for (int x = 0; x < n; ++x) {
    for (int z = x + 1; z < n; ++z) {
      for (int y = 0; y < n; ++y) {
        if (y == x || y == z) continue;
        const Rational bound = at(x, y) + at(y, z);
        if (at(x, z) > bound) {
          out.push_back({MetricViolationKind::TriangleViolation, x, z, y, at(x, z), bound});
        }
      }
    }
  }
  return out;
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels,
                                     std::vector<Rational> dist_row_major)
    : n_(static_cast<int>(labels.size())), labels_(std::move(labels)), dist_(std::move(dist_row_major)) {
  if (n_ == 0) throw ValidationError("a metric space needs at least one point");
  if (dist_.size() != static_cast<std::size_t>(n_) * n_)
    throw std::invalid_argument("distance matrix size does not match label count");
  auto violations = find_violations(n_, dist_);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "metric axioms violated:";
    for (const auto& v : violations) msg << "\n  " << v.describe();
    throw ValidationError(msg.str());
  }
}

Rational FiniteMetricSpace::diameter() const {
  Rational best(0);
  for (int x = 0; x < n_; ++x)
    for (int y = x + 1; y < n_; ++y)
      if (dist(x, y) > best) best = dist(x, y);
  return best;
}

bool FiniteMetricSpace::same_metric(const FiniteMetricSpace& other) const {
  return n_ == other.n_ && dist_ == other.dist_;
}

SubsetRef make_subset(SpacePtr space, std::vector<PointId> members) {
  if (!space) throw std::invalid_argument("make_subset: null space");
  if (members.empty()) throw EmptySubsetError();
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.front() < 0 || members.back() >= space->size())
    throw PointNotInSpaceError(members.back() >= space->size() ? members.back() : members.front());
  return SubsetRef{std::move(space), std::move(members)};
}

std::string MetricViolation::describe() const {
  std::ostringstream s;
  switch (kind) {
    case MetricViolationKind::Asymmetry:
      s << "Asymmetry at (" << x << "," << y << "): " << lhs.str() << " vs " << rhs.str();
      break;
    case MetricViolationKind::NegativeDistance:
      s << "NegativeDistance at (" << x << "," << y << "): " << lhs.str();
      break;
    case MetricViolationKind::NonzeroDiagonal:
      s << "NonzeroDiagonal at " << x << ": " << lhs.str();
      break;
    case MetricViolationKind::ZeroDistanceDistinctPoints:
      s << "ZeroDistanceDistinctPoints at (" << x << "," << y << ")";
      break;
    case MetricViolationKind::TriangleViolation:
      s << "TriangleViolation at (" << x << "," << y << ") via " << via << ": " << lhs.str() << " > "
        << rhs.str();
      break;
  }
  return s.str();
}

ValidationResult validate_metric(std::vector<std::string> labels,
                                 const std::vector<std::vector<Rational>>& matrix) {
  const int n = static_cast<int>(matrix.size());
  if (n == 0) throw std::invalid_argument("validate_metric: empty matrix");
  if (labels.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("validate_metric: label count != matrix size");
  std::vector<Rational> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : matrix) {
    if (row.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("validate_metric: matrix not square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  ValidationResult result;
  result.violations = find_violations(n, flat);
  if (result.violations.empty())
    result.space = std::make_shared<FiniteMetricSpace>(std::move(labels), std::move(flat));
  return result;
}

SpacePtr rescale_bounded(const FiniteMetricSpace& space) {
  const int n = space.size();
  std::vector<Rational> d(static_cast<std::size_t>(n) * n, Rational(0));
  const Rational one(1);
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      const Rational v = space.dist(x, y) / (one + space.dist(x, y));
      d[static_cast<std::size_t>(x) * n + y] = v;
      d[static_cast<std::size_t>(y) * n + x] = v;
    }
  }
  return std::make_shared<FiniteMetricSpace>(space.labels(), std::move(d));
}

Rational dist_to_set(const FiniteMetricSpace& space, PointId x, const std::vector<PointId>& members) {
  if (members.empty()) throw EmptySubsetError();
  if (x < 0 || x >= space.size()) throw PointNotInSpaceError(x);
  Rational best = space.dist(x, members.front());
  for (std::size_t i = 1; i < members.size(); ++i) {
    const Rational& v = space.dist(x, members[i]);
    if (v < best) best = v;
  }
  return best;
}

Restriction restrict_space(const FiniteMetricSpace& space, const std::vector<PointId>& members) {
  if (members.empty()) throw EmptySubsetError();
  std::vector<PointId> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const int m = static_cast<int>(sorted.size());
  std::vector<std::string> labels(m);
  std::vector<Rational> d(static_cast<std::size_t>(m) * m, Rational(0));
  for (int i = 0; i < m; ++i) {
    if (sorted[i] < 0 || sorted[i] >= space.size()) throw PointNotInSpaceError(sorted[i]);
    labels[i] = space.label(sorted[i]);
    for (int j = 0; j < m; ++j) d[static_cast<std::size_t>(i) * m + j] = space.dist(sorted[i], sorted[j]);
  }
  return Restriction{std::make_shared<FiniteMetricSpace>(std::move(labels), std::move(d)),
                     std::move(sorted)};
}

}  // namespace fms
