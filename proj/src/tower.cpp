#include "fms/tower.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "fms/errors.hpp"

namespace fms {

Tower::Tower(SpacePtr base) {
  if (!base) throw std::invalid_argument("Tower: null base space");
  levels_.push_back(base);
  diameters_.push_back(base->diameter());
  for (PointId p = 0; p < base->size(); ++p)
    provenance_.push_back(ProvenanceRecord{p, ProvenanceKind::Base, 0, std::nullopt, std::nullopt,
                                           std::nullopt});
}

std::vector<PointId> Tower::level_points(int i) const {
  std::vector<PointId> pts(level(i)->size());
  for (PointId p = 0; p < level(i)->size(); ++p) pts[p] = p;
  return pts;
}

void Tower::append_level(std::vector<Adjunction> adjunctions) {
  const SpacePtr& cur = levels_.back();
  const int n = cur->size();
  const Rational cap = diameters_.back() + diameters_.back();
  const int level_index = depth();

  std::vector<std::vector<Rational>> rows;
  rows.reserve(adjunctions.size());
  for (const auto& adj : adjunctions) {
    if (adj.map.space() != cur) throw SpaceMismatchError();
    if (adj.kind == ProvenanceKind::Base)
      throw std::invalid_argument("append_level: adjoined points cannot have base provenance");
    if (adj.kind == ProvenanceKind::Axial) {
      if (!adj.axial_level || !adj.axial_value)
        throw std::invalid_argument("append_level: axial adjunction without (level, value)");
      if (*adj.axial_level < 0 || *adj.axial_level >= level_index)
        throw std::invalid_argument("append_level: axial level must name an earlier level");
      if (!extensionally_equal(adj.map,
                               axial_map(cur, level_points(*adj.axial_level), *adj.axial_value)))
        throw InvalidKatetovMapError("axial adjunction does not match its (level, value) claim");
    }
    auto check = is_katetov(adj.map);
    if (!check.ok)
      throw InvalidKatetovMapError("payload violates the Katetov condition at pair (" +
                                   std::to_string(check.x) + "," + std::to_string(check.y) + ")");
    auto vals = adj.map.values();
    for (PointId x = 0; x < n; ++x) {
      if (vals[x].is_zero()) throw DuplicatePointError(x);
      if (vals[x] > cap)
        throw InvalidKatetovMapError("payload value " + vals[x].str() + " at point " +
                                     std::to_string(x) + " exceeds the level cap " + cap.str());
    }
    for (const auto& other : rows)
      if (other == vals)
        throw InvalidKatetovMapError("two adjunctions are extensionally equal");
    rows.push_back(std::move(vals));
  }

  if (adjunctions.empty()) {
    levels_.push_back(cur);
    diameters_.push_back(diameters_.back());
    return;
  }

  const int k = static_cast<int>(adjunctions.size());
  const int nn = n + k;
  std::vector<std::string> labels = cur->labels();
  for (int a = 0; a < k; ++a)
    labels.push_back(adjunctions[a].label.empty()
                         ? "p" + std::to_string(n + a)
                         : adjunctions[a].label);
  std::vector<Rational> d(static_cast<std::size_t>(nn) * nn, Rational(0));
  auto put = [&](PointId x, PointId y, const Rational& v) {
    d[static_cast<std::size_t>(x) * nn + y] = v;
    d[static_cast<std::size_t>(y) * nn + x] = v;
  };
  for (PointId x = 0; x < n; ++x)
    for (PointId y = x + 1; y < n; ++y) put(x, y, cur->dist(x, y));
  for (int a = 0; a < k; ++a)
    for (PointId x = 0; x < n; ++x) put(n + a, x, rows[a][x]);
  // Distances between points adjoined together: the sup-metric of their maps.
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      Rational best(0);
      for (PointId x = 0; x < n; ++x) {
        Rational v = (rows[a][x] - rows[b][x]).abs();
        if (v > best) best = std::move(v);
      }
      put(n + a, n + b, best);
    }

  // The Katetov condition guarantees this is a metric; the constructor
  // re-checks every axiom anyway.
  auto next = std::make_shared<FiniteMetricSpace>(std::move(labels), std::move(d));
  levels_.push_back(next);
  diameters_.push_back(next->diameter());
  for (int a = 0; a < k; ++a) {
    provenance_.push_back(ProvenanceRecord{n + a, adjunctions[a].kind, level_index,
                                           std::move(adjunctions[a].map),
                                           adjunctions[a].axial_level,
                                           adjunctions[a].axial_value});
  }
}

void Tower::build_level(const TowerConfig& cfg) {
  const int i = depth();
  const SpacePtr cur = levels_.back();
  const int n = cur->size();
  const Rational cap = diameters_.back() + diameters_.back();

  std::vector<Rational> grid = cfg.grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (const auto& v : grid)
    if (v.is_negative()) throw std::invalid_argument("grid values must be >= 0");

  std::vector<Adjunction> chosen;
  std::vector<std::vector<Rational>> chosen_rows;
  auto already = [&](const std::vector<Rational>& row) {
    return std::find(chosen_rows.begin(), chosen_rows.end(), row) != chosen_rows.end();
  };

  // Generic maps: supports of size <= i with grid values, capped, adjoined in
  // whole orbits of the extended base group so the tower stays symmetric.
  if (i >= 1 && cfg.budget > 0 && !grid.empty()) {
    std::vector<Isometry> extended;
    for (const auto& g : enumerate_isometries(levels_.front()).elements)
      extended.push_back(extend_to_level(g, *this, i));

    int accepted = 0;
    bool budget_left = true;
    const int max_k = std::min(i, n);
    for (int k = 1; k <= max_k && budget_left; ++k) {
      std::vector<PointId> subset(k);
      for (int j = 0; j < k; ++j) subset[j] = j;
      std::vector<std::size_t> tuple(k, 0);
      while (budget_left) {
        // value tuples over the current subset, lexicographic in grid order
        std::fill(tuple.begin(), tuple.end(), 0);
        while (true) {
          std::vector<std::pair<PointId, Rational>> support;
          support.reserve(k);
          for (int j = 0; j < k; ++j) support.emplace_back(subset[j], grid[tuple[j]]);
          KatetovMap f(cur, std::move(support));
          auto vals = f.values();
          bool valid = is_katetov(f).ok;
          if (valid)
            for (PointId x = 0; x < n && valid; ++x)
              valid = !vals[x].is_zero() && vals[x] <= cap;
          if (valid && !already(vals)) {
            // whole orbit under the extended base group, or nothing
            std::vector<std::vector<Rational>> orbit_rows;
            std::vector<KatetovMap> orbit_maps;
            for (const auto& phi : extended) {
              KatetovMap image = extend_to_katetov(phi, f);
              auto row = image.values();
              if (std::find(orbit_rows.begin(), orbit_rows.end(), row) == orbit_rows.end()) {
                orbit_rows.push_back(std::move(row));
                orbit_maps.push_back(std::move(image));
              }
            }
            if (accepted + static_cast<int>(orbit_maps.size()) > cfg.budget) {
              budget_left = false;
            } else {
              std::vector<std::size_t> order(orbit_maps.size());
              for (std::size_t idx = 0; idx < order.size(); ++idx) order[idx] = idx;
              std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return orbit_rows[a] < orbit_rows[b];
              });
              for (std::size_t idx : order) {
                chosen.push_back(Adjunction{std::move(orbit_maps[idx]),
                                            ProvenanceKind::FiniteSupport, std::nullopt,
                                            std::nullopt,
                                            "g" + std::to_string(i + 1) + "." +
                                                std::to_string(accepted)});
                chosen_rows.push_back(std::move(orbit_rows[idx]));
                ++accepted;
              }
            }
          }
          if (!budget_left) break;
          int pos = k - 1;
          while (pos >= 0 && tuple[pos] + 1 == grid.size()) --pos;
          if (pos < 0) break;
          ++tuple[pos];
          for (int j = pos + 1; j < k; ++j) tuple[j] = 0;
        }
        int pos = k - 1;
        while (pos >= 0 && subset[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++subset[pos];
        for (int j = pos + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
      }
    }
  }

  // Axial points over every earlier level, every admissible grid value.
  for (int j = 0; j < i; ++j) {
    const auto members = level_points(j);
    for (const auto& v : grid) {
      if (v.is_zero()) continue;  // realizes an existing point or fails outright
      std::optional<KatetovMap> f;
      try {
        f.emplace(axial_map(cur, members, v));
      } catch (const InvalidKatetovMapError&) {
        continue;  // value below half the subset diameter
      }
      auto vals = f->values();
      bool valid = true;
      for (PointId x = 0; x < n && valid; ++x) valid = !vals[x].is_zero() && vals[x] <= cap;
      if (!valid || already(vals)) continue;
      chosen.push_back(Adjunction{std::move(*f), ProvenanceKind::Axial, j, v,
                                  "ax" + std::to_string(i + 1) + "." + std::to_string(j) + "." +
                                      v.str()});
      chosen_rows.push_back(std::move(vals));
    }
  }

  append_level(std::move(chosen));
}

void Tower::append_growth_level() {
  const int t = depth();
  if (t < 1) throw TowerGrowthFailedError("growth needs an existing level above the base");
  const SpacePtr& cur = levels_.back();
  const Rational& d_top = diameters_.back();
  if (d_top.is_zero()) throw TowerGrowthFailedError("zero-diameter tower cannot grow");
  const auto members = level_points(t - 1);
  Rational reach(0);
  for (PointId x = 0; x < cur->size(); ++x) {
    Rational v = dist_to_set(*cur, x, members);
    if (v > reach) reach = std::move(v);
  }
  // Largest cap-respecting axial value over the previous level; the new
  // point sits at distance exactly 2*diam from the farthest point.
  const Rational value = d_top + d_top - reach;
  KatetovMap f = axial_map(cur, members, value);
  append_level({Adjunction{std::move(f), ProvenanceKind::Axial, t - 1, value,
                           "ax" + std::to_string(t + 1) + "." + std::to_string(t - 1) + "." +
                               value.str()}});
}

void build_level(Tower& tower, int i, const TowerConfig& cfg) {
  if (i != tower.depth())
    throw std::invalid_argument("build_level: levels are append-only; i must equal the top index " +
                                std::to_string(tower.depth()));
  tower.build_level(cfg);
}

SpacePtr adjoin_point(const SpacePtr& space, const KatetovMap& f, const std::string& label) {
  if (f.space() != space) throw SpaceMismatchError();
  auto check = is_katetov(f);
  if (!check.ok)
    throw InvalidKatetovMapError("map violates the Katetov condition at pair (" +
                                 std::to_string(check.x) + "," + std::to_string(check.y) + ")");
  const int n = space->size();
  const auto vals = f.values();
  for (PointId x = 0; x < n; ++x)
    if (vals[x].is_zero()) throw DuplicatePointError(x);
  std::vector<std::string> labels = space->labels();
  labels.push_back(label.empty() ? "p" + std::to_string(n) : label);
  const int nn = n + 1;
  std::vector<Rational> d(static_cast<std::size_t>(nn) * nn, Rational(0));
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = 0; y < n; ++y) d[static_cast<std::size_t>(x) * nn + y] = space->dist(x, y);
    d[static_cast<std::size_t>(x) * nn + n] = vals[x];
    d[static_cast<std::size_t>(n) * nn + x] = vals[x];
  }
  return std::make_shared<FiniteMetricSpace>(std::move(labels), std::move(d));
}

AuditReport finite_injectivity_audit(const SpacePtr& Z, int m, const std::vector<Rational>& grid,
                                     const std::vector<PointId>* scope) {
  if (!Z) throw std::invalid_argument("audit: null space");
  if (m < 1) throw std::invalid_argument("audit: m must be >= 1");
  std::vector<Rational> values = grid;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  for (const auto& v : values)
    if (v.is_negative()) throw std::invalid_argument("audit: grid values must be >= 0");

  std::vector<PointId> pool;
  if (scope) {
    pool = *scope;
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    for (PointId p : pool)
      if (p < 0 || p >= Z->size()) throw PointNotInSpaceError(p);
  } else {
    pool.resize(Z->size());
    for (PointId p = 0; p < Z->size(); ++p) pool[p] = p;
  }

  AuditReport report;
  if (values.empty()) return report;
  const int npool = static_cast<int>(pool.size());
  for (int k = 1; k <= std::min(m, npool); ++k) {
    std::vector<int> pick(k);
    for (int j = 0; j < k; ++j) pick[j] = j;
    while (true) {
      std::vector<PointId> K(k);
      for (int j = 0; j < k; ++j) K[j] = pool[pick[j]];
      std::vector<std::size_t> tuple(k, 0);
      while (true) {
        bool katetov = true;
        for (int a = 0; a < k && katetov; ++a)
          for (int b = a + 1; b < k && katetov; ++b) {
            const Rational& dd = Z->dist(K[a], K[b]);
            katetov = (values[tuple[a]] - values[tuple[b]]).abs() <= dd &&
                      dd <= values[tuple[a]] + values[tuple[b]];
          }
        if (katetov) {
          ++report.total;
          bool found = false;
          for (PointId z = 0; z < Z->size() && !found; ++z) {
            bool match = true;
            for (int a = 0; a < k && match; ++a) match = Z->dist(z, K[a]) == values[tuple[a]];
            found = match;
          }
          if (found) {
            ++report.realized;
          } else {
            UnrealizedMap u;
            u.subset = K;
            for (int a = 0; a < k; ++a) u.values.push_back(values[tuple[a]]);
            report.unrealized.push_back(std::move(u));
          }
        }
        int pos = k - 1;
        while (pos >= 0 && tuple[pos] + 1 == values.size()) --pos;
        if (pos < 0) break;
        ++tuple[pos];
        for (int j = pos + 1; j < k; ++j) tuple[j] = 0;
      }
      int pos = k - 1;
      while (pos >= 0 && pick[pos] == npool - k + pos) --pos;
      if (pos < 0) break;
      ++pick[pos];
      for (int j = pos + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return report;
}

}  // namespace fms
