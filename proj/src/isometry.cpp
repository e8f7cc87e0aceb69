#include "fms/isometry.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "fms/errors.hpp"
#include "fms/tower.hpp"

namespace fms {

Isometry::Isometry(SpacePtr space, std::vector<PointId> images)
    : space_(std::move(space)), img_(std::move(images)) {
  if (!space_) throw std::invalid_argument("Isometry: null space");
  const int n = space_->size();
  if (img_.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("Isometry: image list has wrong length");
  std::vector<bool> seen(n, false);
  for (PointId y : img_) {
    if (y < 0 || y >= n) throw PointNotInSpaceError(y);
    if (seen[y]) throw MathError("Isometry: not a bijection");
    seen[y] = true;
  }
  for (PointId x = 0; x < n; ++x)
    for (PointId y = x + 1; y < n; ++y)
      if (space_->dist(x, y) != space_->dist(img_[x], img_[y]))
        throw MathError("Isometry: distances not preserved at pair (" + std::to_string(x) + "," +
                        std::to_string(y) + ")");
}

Isometry Isometry::identity(SpacePtr space) {
  std::vector<PointId> img(space->size());
  for (PointId x = 0; x < space->size(); ++x) img[x] = x;
  return Isometry(std::move(space), std::move(img));
}

Isometry Isometry::inverse() const {
  std::vector<PointId> inv(img_.size());
  for (PointId x = 0; x < static_cast<PointId>(img_.size()); ++x) inv[img_[x]] = x;
  return Isometry(space_, std::move(inv));
}

Isometry compose(const Isometry& f, const Isometry& g) {
  if (f.space() != g.space()) throw SpaceMismatchError();
  std::vector<PointId> img(f.images().size());
  for (PointId x = 0; x < static_cast<PointId>(img.size()); ++x) img[x] = f.apply(g.apply(x));
  return Isometry(f.space(), std::move(img));
}

int IsometryGroup::index_of(const Isometry& iso) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), iso);
  if (it == elements.end() || !(*it == iso)) return -1;
  return static_cast<int>(it - elements.begin());
}

namespace {

void verify_group_axioms(const IsometryGroup& g) {
  if (g.index_of(Isometry::identity(g.space)) < 0)
    throw MathError("internal: enumeration lost the identity");
  for (const auto& a : g.elements) {
    if (g.index_of(a.inverse()) < 0) throw MathError("internal: enumeration not inverse-closed");
    for (const auto& b : g.elements)
      if (g.index_of(compose(a, b)) < 0)
        throw MathError("internal: enumeration not composition-closed");
  }
}

}  // namespace

IsometryGroup enumerate_isometries(SpacePtr space) {
  const int n = space->size();
  // Distance profile of a point: the sorted multiset of its distances.
  std::vector<std::vector<Rational>> profile(n);
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = 0; y < n; ++y)
      if (y != x) profile[x].push_back(space->dist(x, y));
    std::sort(profile[x].begin(), profile[x].end());
  }
  std::vector<std::vector<PointId>> candidates(n);
  for (PointId x = 0; x < n; ++x)
    for (PointId y = 0; y < n; ++y)
      if (profile[x] == profile[y]) candidates[x].push_back(y);

  // Assign rarest profiles first; the output is sorted afterwards, so the
  // heuristic only affects pruning.
  std::vector<PointId> order(n);
  for (PointId x = 0; x < n; ++x) order[x] = x;
  std::stable_sort(order.begin(), order.end(), [&](PointId a, PointId b) {
    return candidates[a].size() < candidates[b].size();
  });

  std::vector<PointId> img(n, -1);
  std::vector<bool> used(n, false);
  std::vector<std::vector<PointId>> found;

  auto rec = [&](auto&& self, int k) -> void {
    if (k == n) {
      found.push_back(img);
      return;
    }
    const PointId x = order[k];
    for (PointId y : candidates[x]) {
      if (used[y]) continue;
      bool ok = true;
      for (int j = 0; j < k; ++j) {
        const PointId u = order[j];
        if (space->dist(x, u) != space->dist(y, img[u])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      img[x] = y;
      used[y] = true;
      self(self, k + 1);
      img[x] = -1;
      used[y] = false;
    }
  };
  rec(rec, 0);

  std::sort(found.begin(), found.end());
  IsometryGroup group{space, {}};
  group.elements.reserve(found.size());
  for (auto& f : found) group.elements.emplace_back(space, std::move(f));
  verify_group_axioms(group);
  return group;
}

std::vector<std::vector<PointId>> orbit_partition(const IsometryGroup& group) {
  const int n = group.space->size();
  std::vector<int> root(n, -1);
  std::vector<std::vector<PointId>> orbits;
  for (PointId x = 0; x < n; ++x) {
    if (root[x] >= 0) continue;
    std::vector<PointId> orbit;
    for (const auto& iso : group.elements) {
      const PointId y = iso.apply(x);
      if (root[y] < 0) {
        root[y] = x;
        orbit.push_back(y);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

KatetovMap extend_to_katetov(const Isometry& phi, const KatetovMap& f) {
  if (phi.space() != f.space()) throw SpaceMismatchError();
  std::vector<std::pair<PointId, Rational>> support;
  support.reserve(f.support().size());
  for (const auto& [s, v] : f.support()) support.emplace_back(phi.apply(s), v);
  return KatetovMap(f.space(), std::move(support));
}

Isometry extend_to_level(const Isometry& base, const Tower& tower, int level) {
  if (base.space() != tower.level(0)) throw SpaceMismatchError();
  if (level < 0 || level > tower.depth()) throw std::invalid_argument("extend_to_level: bad level");

  std::vector<PointId> img = base.images();
  for (int l = 0; l < level; ++l) {
    const SpacePtr& cur = tower.level(l);
    const SpacePtr& next = tower.level(l + 1);
    const int n_cur = cur->size();
    const int n_next = next->size();
    // Distance rows over the current level identify the new points uniquely.
    std::map<std::vector<Rational>, PointId> rows;
    for (PointId z = n_cur; z < n_next; ++z) {
      std::vector<Rational> row;
      row.reserve(n_cur);
      for (PointId x = 0; x < n_cur; ++x) row.push_back(next->dist(z, x));
      rows.emplace(std::move(row), z);
    }
    std::vector<PointId> inv(n_cur);
    for (PointId x = 0; x < n_cur; ++x) inv[img[x]] = x;
    std::vector<PointId> next_img(n_next);
    for (PointId x = 0; x < n_cur; ++x) next_img[x] = img[x];
    for (PointId z = n_cur; z < n_next; ++z) {
      std::vector<Rational> wanted;
      wanted.reserve(n_cur);
      for (PointId x = 0; x < n_cur; ++x) wanted.push_back(next->dist(z, inv[x]));
      auto it = rows.find(wanted);
      if (it == rows.end()) throw OrbitNotRealizedError(z, l);
      next_img[z] = it->second;
    }
    img = std::move(next_img);
  }
  return Isometry(tower.level(level), std::move(img));
}

Isometry extend_through_tower(const Isometry& base, const Tower& tower) {
  return extend_to_level(base, tower, tower.depth());
}

}  // namespace fms
