#include "fms/witness.hpp"

#include <algorithm>
#include <stdexcept>

#include "fms/errors.hpp"

namespace fms {

WitnessPlan plan_witnesses(int depth, int reps) {
  if (depth < 1 || reps < 1) throw std::invalid_argument("plan_witnesses: depth and reps must be >= 1");
  WitnessPlan plan{depth, reps, {}};
  plan.k.reserve(static_cast<std::size_t>(depth) * reps);
  for (int r = 0; r < reps; ++r)
    for (int k = 1; k <= depth; ++k) plan.k.push_back(k);
  return plan;
}

WitnessSet choose_witnesses(Tower& tower, const WitnessPlan& plan, const TowerConfig& cfg) {
  if (plan.k.empty()) throw std::invalid_argument("choose_witnesses: empty plan");
  for (int k : plan.k)
    if (k < 1) throw std::invalid_argument("choose_witnesses: k indices must be >= 1");
  const int max_k = *std::max_element(plan.k.begin(), plan.k.end());
  while (tower.depth() < max_k) tower.build_level(cfg);

  WitnessSet w;
  w.plan = plan;
  Rational e_prev(1);  // e_0
  for (std::size_t idx = 0; idx < plan.k.size(); ++idx) {
    const int k = plan.k[idx];
    const Rational e = fms::max(Rational(4) * e_prev + Rational(1),
                                tower.level_diameter(k) + Rational(1));
    // Witness points are adjoined at the frontier; grow by diameter-doubling
    // axial points until the top level is wide enough to hold the radius.
    while (tower.level_diameter(tower.depth()) < e) {
      if (tower.depth() + 1 >= cfg.max_levels)
        throw TowerGrowthFailedError("needed diameter " + e.str() + " not reached within " +
                                     std::to_string(cfg.max_levels) + " levels");
      tower.append_growth_level();
    }
    const int j = tower.depth();
    KatetovMap payload = axial_map(tower.level(j), tower.level_points(k - 1), e);
    tower.append_level({Adjunction{std::move(payload), ProvenanceKind::Axial, k - 1, e,
                                   "a" + std::to_string(idx + 1)}});
    w.e.push_back(e);
    w.j.push_back(j);
    w.a.push_back(tower.top()->size() - 1);
    e_prev = e;
  }
  validate_witness_set(tower, w);
  return w;
}

void validate_witness_set(const Tower& tower, const WitnessSet& w) {
  const std::size_t n = w.plan.k.size();
  if (w.e.size() != n || w.j.size() != n || w.a.size() != n)
    throw PreconditionError("witness set arrays disagree in length");
  if (n == 0) throw PreconditionError("witness set is empty");

  for (std::size_t i = 0; i < n; ++i) {
    if (w.plan.k[i] < 1) throw PreconditionError("k indices must be >= 1");
    if (i == 0) {
      if (w.e[0] < Rational(4)) throw PreconditionError("e_1 must be >= 4");
    } else {
      if (!(w.e[i] > Rational(4) * w.e[i - 1]))
        throw PreconditionError("e_" + std::to_string(i + 1) + " must exceed 4 e_" +
                                std::to_string(i));
      if (w.j[i] < w.j[i - 1]) throw PreconditionError("j must be nondecreasing");
    }
    if (w.j[i] < w.plan.k[i]) throw PreconditionError("j_i must be >= k_i");
    if (w.j[i] + 1 > tower.depth()) throw PreconditionError("witness level missing from tower");
    if (tower.birth_level(w.a[i]) != w.j[i] + 1)
      throw PreconditionError("witness a_" + std::to_string(i + 1) + " does not live at level j_i + 1");

    // Realization: d(a_i, x) = e_i + dist(x, X_{k_i - 1}) over level j_i.
    const SpacePtr& top = tower.top();
    const auto base_members = tower.level_points(w.plan.k[i] - 1);
    const int nj = tower.level(w.j[i])->size();
    for (PointId x = 0; x < nj; ++x) {
      if (top->dist(w.a[i], x) != w.e[i] + dist_to_set(*top, x, base_members))
        throw PreconditionError("witness a_" + std::to_string(i + 1) +
                                " fails its realization equation at point " + std::to_string(x));
    }
    if (dist_to_set(*top, w.a[i], tower.level_points(0)) != w.e[i])
      throw PreconditionError("dist(a_i, X_0) != e_i for witness " + std::to_string(i + 1));
  }

  // Separation between distinct witnesses, and the >1 gap the membership
  // criterion needs.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = i + 1; l < n; ++l) {
      const Rational& d = tower.top()->dist(w.a[i], w.a[l]);
      if (d < fms::max(w.e[i], w.e[l]) - fms::min(w.e[i], w.e[l]))
        throw PreconditionError("witnesses " + std::to_string(i + 1) + "," + std::to_string(l + 1) +
                                " are closer than their radii allow");
      if (d <= Rational(1)) throw PreconditionError("witness points are not 1-separated");
    }

  // Every extension of a base isometry fixes every witness.
  for (const auto& g : enumerate_isometries(tower.level(0)).elements) {
    const Isometry ext = extend_through_tower(g, tower);
    for (std::size_t i = 0; i < n; ++i)
      if (ext.apply(w.a[i]) != w.a[i])
        throw PreconditionError("extended isometry moves witness " + std::to_string(i + 1));
  }
}

std::vector<PointId> witness_f_members(const Tower& tower, const WitnessSet& w) {
  std::vector<PointId> members = tower.level_points(0);
  members.insert(members.end(), w.a.begin(), w.a.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return members;
}

LemmaReport check_lemma_sympa(const Tower& tower, const WitnessSet& w) {
  const SpacePtr& x0 = tower.level(0);
  if (x0->size() < 3) throw PreconditionError("the lemma needs a base space with at least 3 points");
  if (x0->diameter() > Rational(1)) throw PreconditionError("the lemma needs base diameter <= 1");

  LemmaReport report;
  const auto members = witness_f_members(tower, w);
  report.f_space = restrict_space(*tower.top(), members);
  const SpacePtr& F = report.f_space.space;
  const int nf = F->size();
  const int n0 = x0->size();  // base points occupy the first n0 slots of F

  // Membership criterion: x in X_0 iff some other F-point lies within (0, 1].
  report.membership_ok = true;
  for (int x = 0; x < nf; ++x) {
    bool near = false;
    for (int y = 0; y < nf && !near; ++y)
      near = y != x && !F->dist(x, y).is_zero() && F->dist(x, y) <= Rational(1);
    const bool in_x0 = report.f_space.to_parent[x] < n0;
    if (near != in_x0) report.membership_ok = false;
  }

  report.iso_f = enumerate_isometries(F);
  report.stabilizes_x0 = true;
  report.fixes_witnesses = true;
  for (const auto& phi : report.iso_f.elements) {
    std::vector<PointId> action;
    for (int x = 0; x < n0; ++x) {
      const PointId y = phi.apply(x);
      if (y >= n0) report.stabilizes_x0 = false;
      action.push_back(y);
    }
    for (int x = n0; x < nf; ++x)
      if (phi.apply(x) != x) report.fixes_witnesses = false;
    report.x0_actions.push_back(std::move(action));
  }
  return report;
}

namespace {

std::vector<std::vector<int>> composition_table(const IsometryGroup& g) {
  const int n = g.order();
  std::vector<std::vector<int>> table(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      table[a][b] = g.index_of(compose(g.elements[a], g.elements[b]));
      if (table[a][b] < 0) throw MathError("internal: group not closed under composition");
    }
  return table;
}

// Does exactly one point of level l+1 \ level l realize the given row over
// level l? Needed for the uniqueness part of the certificate.
bool unique_realizer(const Tower& tower, int l, const std::vector<Rational>& row) {
  const SpacePtr& next = tower.level(l + 1);
  const int n_cur = tower.level(l)->size();
  int count = 0;
  for (PointId z = n_cur; z < next->size(); ++z) {
    bool match = true;
    for (PointId x = 0; x < n_cur && match; ++x) match = next->dist(z, x) == row[x];
    if (match) ++count;
  }
  return count == 1;
}

}  // namespace

MainTheoremCertificate verify_main_theorem(SpacePtr x0, const PipelineConfig& cfg) {
  if (!x0) throw std::invalid_argument("verify_main_theorem: null space");
  if (x0->size() < 3) throw PreconditionError("the construction needs at least 3 base points");

  MainTheoremCertificate cert;
  cert.rescaled = x0->diameter() > Rational(1);
  cert.base = cert.rescaled ? rescale_bounded(*x0) : std::move(x0);
  cert.coverage_depth = cfg.tower.depth;
  cert.coverage_reps = cfg.reps;

  cert.tower = Tower(cert.base);
  for (int i = 0; i < cfg.tower.depth; ++i) cert.tower.build_level(cfg.tower);
  const WitnessPlan plan = plan_witnesses(cfg.tower.depth, cfg.reps);
  cert.witnesses = choose_witnesses(cert.tower, plan, cfg.tower);

  for (std::size_t i = 0; i < cert.witnesses.a.size(); ++i) {
    WitnessRow row;
    row.index = static_cast<int>(i) + 1;
    row.k = plan.k[i];
    row.j = cert.witnesses.j[i];
    row.e = cert.witnesses.e[i];
    row.a = cert.witnesses.a[i];
    row.dist_to_x0 =
        dist_to_set(*cert.tower.top(), cert.witnesses.a[i], cert.tower.level_points(0));
    cert.witness_table.push_back(std::move(row));
  }

  cert.iso_x0 = enumerate_isometries(cert.base);
  cert.lemma = check_lemma_sympa(cert.tower, cert.witnesses);

  cert.table_x0 = composition_table(cert.iso_x0);
  cert.table_f = composition_table(cert.lemma.iso_f);

  // Restriction: an isometry of F acts on the first |X_0| slots.
  const int n0 = cert.base->size();
  for (const auto& phi : cert.lemma.iso_f.elements) {
    std::vector<PointId> images(phi.images().begin(), phi.images().begin() + n0);
    const bool stays = std::all_of(images.begin(), images.end(), [&](PointId p) { return p < n0; });
    cert.restriction_map.push_back(
        stays ? cert.iso_x0.index_of(Isometry(cert.base, std::move(images))) : -1);
  }

  // Extension: extend through the tower, then restrict to the F slots.
  const auto members = witness_f_members(cert.tower, cert.witnesses);
  std::vector<int> slot_of(cert.tower.top()->size(), -1);
  for (std::size_t s = 0; s < members.size(); ++s) slot_of[members[s]] = static_cast<int>(s);
  std::vector<Isometry> extensions;
  extensions.reserve(cert.iso_x0.order());
  for (const auto& g : cert.iso_x0.elements) extensions.push_back(extend_through_tower(g, cert.tower));
  for (const auto& ext : extensions) {
    std::vector<PointId> images;
    images.reserve(members.size());
    for (PointId p : members) {
      const PointId q = ext.apply(p);
      if (q < 0 || slot_of[q] < 0) throw MathError("internal: extension does not preserve F");
      images.push_back(slot_of[q]);
    }
    cert.extension_map.push_back(
        cert.lemma.iso_f.index_of(Isometry(cert.lemma.f_space.space, std::move(images))));
  }

  // Both maps are total bijections and mutually inverse.
  cert.mutually_inverse =
      std::all_of(cert.restriction_map.begin(), cert.restriction_map.end(),
                  [](int v) { return v >= 0; }) &&
      std::all_of(cert.extension_map.begin(), cert.extension_map.end(),
                  [](int v) { return v >= 0; });
  if (cert.mutually_inverse) {
    for (int a = 0; a < cert.lemma.iso_f.order(); ++a)
      if (cert.extension_map[cert.restriction_map[a]] != a) cert.mutually_inverse = false;
    for (int b = 0; b < cert.iso_x0.order(); ++b)
      if (cert.restriction_map[cert.extension_map[b]] != b) cert.mutually_inverse = false;
  }

  // Homomorphism checks, element by element against the composition tables.
  cert.restriction_hom = cert.mutually_inverse;
  for (int a = 0; a < cert.lemma.iso_f.order() && cert.restriction_hom; ++a)
    for (int b = 0; b < cert.lemma.iso_f.order() && cert.restriction_hom; ++b)
      cert.restriction_hom = cert.restriction_map[cert.table_f[a][b]] ==
                             cert.table_x0[cert.restriction_map[a]][cert.restriction_map[b]];
  cert.extension_hom = cert.mutually_inverse;
  for (int a = 0; a < cert.iso_x0.order() && cert.extension_hom; ++a)
    for (int b = 0; b < cert.iso_x0.order() && cert.extension_hom; ++b)
      cert.extension_hom = cert.extension_map[cert.table_x0[a][b]] ==
                           cert.table_f[cert.extension_map[a]][cert.extension_map[b]];

  // Uniqueness: every transported payload row has exactly one realizer, so a
  // level-preserving isometry agreeing on X_0 has no freedom anywhere. The
  // top-level extension restricted to a level is the level extension, so the
  // rows can be read off the extensions computed above.
  cert.unique_extension = true;
  for (const auto& ext : extensions) {
    std::vector<PointId> inv(ext.images().size());
    for (PointId x = 0; x < static_cast<PointId>(inv.size()); ++x) inv[ext.images()[x]] = x;
    for (const auto& rec : cert.tower.provenance()) {
      if (rec.kind == ProvenanceKind::Base) continue;
      const SpacePtr& next = cert.tower.level(rec.level + 1);
      const int n_cur = cert.tower.level(rec.level)->size();
      std::vector<Rational> row;
      row.reserve(n_cur);
      for (PointId x = 0; x < n_cur; ++x) row.push_back(next->dist(rec.point, inv[x]));
      if (!unique_realizer(cert.tower, rec.level, row)) cert.unique_extension = false;
    }
    if (!cert.unique_extension) break;
  }

  return cert;
}

RigidityReport rigidity_probe(const Tower& tower, const WitnessSet& w, const Isometry& phi,
                              int boundary) {
  if (phi.space() != tower.top()) throw SpaceMismatchError();

  // Find crossings: points outside a level mapped into it.
  auto crossing_at = [&](int n) -> PointId {
    const int size_n = tower.level(n)->size();
    for (PointId x = size_n; x < tower.top()->size(); ++x)
      if (phi.apply(x) < size_n) return x;
    return -1;
  };

  int n = -1;
  PointId x = -1;
  if (boundary >= 0) {
    if (boundary >= tower.depth()) throw std::invalid_argument("rigidity_probe: bad boundary level");
    x = crossing_at(boundary);
    n = boundary;
    if (x < 0) {
      bool preserved = true;
      for (int l = 0; l < tower.depth() && preserved; ++l) preserved = crossing_at(l) < 0;
      if (preserved) return RigidityReport{};
      throw std::invalid_argument("rigidity_probe: nothing crosses level " +
                                  std::to_string(boundary) + ", but other levels leak");
    }
  } else {
    for (int l = 0; l < tower.depth() && x < 0; ++l) {
      x = crossing_at(l);
      n = l;
    }
    if (x < 0) return RigidityReport{};
  }

  RigidityReport report;
  report.verdict = RigidityReport::Verdict::Violation;
  report.boundary = n;
  report.moved_point = x;
  // Every point of a truncated tower lives at a finite level, so the point
  // within delta/4 of x is x itself.
  report.nearby_point = x;
  report.delta = dist_to_set(*tower.top(), x, tower.level_points(n));
  const int m = tower.birth_level(x);

  int chosen = -1;
  for (std::size_t i = 0; i < w.plan.k.size(); ++i) {
    if (w.plan.k[i] == n + 1 && w.j[i] >= m) {
      chosen = static_cast<int>(i);
      break;
    }
  }
  if (chosen < 0) throw WitnessPlanInsufficientError(n + 1, m);

  report.witness_index = chosen + 1;
  report.displacement = tower.top()->dist(phi.apply(w.a[chosen]), w.a[chosen]);
  report.bound = report.delta / Rational(2);
  if (report.displacement < report.bound)
    throw MathError("internal: the rigidity bound failed; the witness construction is broken");
  return report;
}

}  // namespace fms
