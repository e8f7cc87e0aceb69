#include "fms/katetov.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "fms/errors.hpp"

namespace fms {

KatetovMap::KatetovMap(SpacePtr space, std::vector<std::pair<PointId, Rational>> support)
    : space_(std::move(space)), support_(std::move(support)) {
  if (!space_) throw std::invalid_argument("KatetovMap: null space");
  if (support_.empty()) throw InvalidKatetovMapError("empty support");
  std::sort(support_.begin(), support_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  PointId prev = -1;
  for (const auto& [s, v] : support_) {
    if (s < 0 || s >= space_->size()) throw PointNotInSpaceError(s);
    if (s == prev) throw InvalidKatetovMapError("duplicate support point " + std::to_string(s));
    if (v.is_negative()) throw InvalidKatetovMapError("negative value at point " + std::to_string(s));
    prev = s;
  }
}

Rational KatetovMap::evaluate(PointId x) const {
  if (x < 0 || x >= space_->size()) throw PointNotInSpaceError(x);
  Rational best = support_.front().second + space_->dist(x, support_.front().first);
  for (std::size_t i = 1; i < support_.size(); ++i) {
    Rational v = support_[i].second + space_->dist(x, support_[i].first);
    if (v < best) best = std::move(v);
  }
  return best;
}

std::vector<Rational> KatetovMap::values() const {
  std::vector<Rational> out;
  out.reserve(space_->size());
  for (PointId x = 0; x < space_->size(); ++x) out.push_back(evaluate(x));
  return out;
}

Rational KatetovMap::min_value() const {
  auto vals = values();
  return *std::min_element(vals.begin(), vals.end());
}

Rational KatetovMap::max_value() const {
  auto vals = values();
  return *std::max_element(vals.begin(), vals.end());
}

KatetovMap KatetovMap::tightened() const {
  std::vector<std::pair<PointId, Rational>> tight;
  tight.reserve(support_.size());
  for (const auto& [s, v] : support_) tight.emplace_back(s, evaluate(s));
  return KatetovMap(space_, std::move(tight));
}

KatetovCheck is_katetov(const KatetovMap& f) {
  const auto vals = f.values();
  const auto& space = *f.space();
  for (PointId x = 0; x < space.size(); ++x) {
    for (PointId y = x + 1; y < space.size(); ++y) {
      const Rational& d = space.dist(x, y);
      if (d > vals[x] + vals[y]) return KatetovCheck{false, x, y, true};
      if ((vals[x] - vals[y]).abs() > d) return KatetovCheck{false, x, y, false};
    }
  }
  return KatetovCheck{};
}

KatetovMap kuratowski(SpacePtr space, PointId base) {
  if (!space) throw std::invalid_argument("kuratowski: null space");
  if (base < 0 || base >= space->size()) throw PointNotInSpaceError(base);
  return KatetovMap(std::move(space), {{base, Rational(0)}});
}

Rational sup_dist(const KatetovMap& f, const KatetovMap& g) {
  if (f.space() != g.space()) throw SpaceMismatchError();
  Rational best(0);
  for (PointId x = 0; x < f.space()->size(); ++x) {
    Rational v = (f.evaluate(x) - g.evaluate(x)).abs();
    if (v > best) best = std::move(v);
  }
  return best;
}

bool extensionally_equal(const KatetovMap& f, const KatetovMap& g) {
  if (f.space() != g.space()) throw SpaceMismatchError();
  for (PointId x = 0; x < f.space()->size(); ++x)
    if (f.evaluate(x) != g.evaluate(x)) return false;
  return true;
}

KatetovMap katetov_extension(const KatetovMap& f, SpacePtr big,
                             const std::vector<PointId>& embedding) {
  if (!big) throw std::invalid_argument("katetov_extension: null space");
  const auto& small = *f.space();
  if (embedding.size() != static_cast<std::size_t>(small.size()))
    throw BadEmbeddingError("index map covers " + std::to_string(embedding.size()) + " of " +
                            std::to_string(small.size()) + " points");
  for (PointId a = 0; a < small.size(); ++a) {
    if (embedding[a] < 0 || embedding[a] >= big->size())
      throw BadEmbeddingError("image point " + std::to_string(embedding[a]) + " out of range");
    for (PointId b = a + 1; b < small.size(); ++b) {
      if (small.dist(a, b) != big->dist(embedding[a], embedding[b]))
        throw BadEmbeddingError("distances disagree at pair (" + std::to_string(a) + "," +
                                std::to_string(b) + ")");
    }
  }
  // Transporting the support computes the inf-formula extension exactly:
  // the triangle inequality collapses min over Y of min over S to min over S.
  std::vector<std::pair<PointId, Rational>> transported;
  transported.reserve(f.support().size());
  for (const auto& [s, v] : f.support()) transported.emplace_back(embedding[s], v);
  return KatetovMap(std::move(big), std::move(transported));
}

KatetovMap axial_map(SpacePtr space, const std::vector<PointId>& members, const Rational& d) {
  auto subset = make_subset(space, members);
  if (d.is_negative()) throw InvalidKatetovMapError("axial value must be >= 0");
  Rational diam_y(0);
  for (std::size_t i = 0; i < subset.members.size(); ++i)
    for (std::size_t j = i + 1; j < subset.members.size(); ++j) {
      const Rational& v = space->dist(subset.members[i], subset.members[j]);
      if (v > diam_y) diam_y = v;
    }
  // d + dist(.,Y) is Katetov iff 2d >= diam(Y); the binding pairs are inside Y.
  if (d + d < diam_y)
    throw InvalidKatetovMapError("axial value " + d.str() + " below half the subset diameter " +
                                 diam_y.str());
  std::vector<std::pair<PointId, Rational>> support;
  support.reserve(subset.members.size());
  for (PointId y : subset.members) support.emplace_back(y, d);
  return KatetovMap(subset.space, std::move(support));
}

namespace {

bool controls(const std::vector<Rational>& vals, const FiniteMetricSpace& space,
              const std::vector<PointId>& subset) {
  for (PointId x = 0; x < space.size(); ++x) {
    Rational best = vals[subset[0]] + space.dist(x, subset[0]);
    for (std::size_t i = 1; i < subset.size(); ++i) {
      Rational v = vals[subset[i]] + space.dist(x, subset[i]);
      if (v < best) best = std::move(v);
    }
    if (best != vals[x]) return false;
  }
  return true;
}

}  // namespace

SupportCertificate minimal_support(const KatetovMap& f) {
  const auto& space = *f.space();
  const int n = space.size();
  if (n > 20)
    throw MathError("minimal_support is an exhaustive search; refusing spaces with more than 20 points");
  const auto vals = f.values();
  std::vector<PointId> subset;
  for (int k = 1; k <= n; ++k) {
    // lexicographically ordered k-combinations of 0..n-1
    subset.resize(k);
    for (int i = 0; i < k; ++i) subset[i] = i;
    while (true) {
      if (controls(vals, space, subset)) {
        SupportCertificate cert;
        cert.minimal_support = subset;
        cert.cardinality = k;
        for (PointId s : subset) cert.tight_values.push_back(vals[s]);
        return cert;
      }
      int i = k - 1;
      while (i >= 0 && subset[i] == n - k + i) --i;
      if (i < 0) break;
      ++subset[i];
      for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
    }
  }
  throw MathError("internal: no controlling subset found (the full space always controls)");
}

// ---------------------------------------------------------------------------
// limit_extract
//
// The decomposition runs the completeness argument for spaces of maps with
// bounded support as a deterministic procedure on the given finite sequence.
// Where the original argument passes to subsequences or re-enumerates support
// points, this code does the following, in order:
//   1. tight minimal supports replace the arbitrary support enumerations;
//   2. the analysed tail is the maximal suffix on which the support
//      cardinality is constant and consecutive supports admit a unique
//      nearest-partner bijection (the trajectory pairing);
//   3. the separation constant 2*delta is computed as the least pairwise gap
//      observed inside any tail support, never assumed;
//   4. the converging cluster is read off the final element: support points
//      whose value equals the minimum d of the final map (the limit of the
//      per-element minima); the residual points stay above d by delta';
//   5. entries violating the residual-slack condition eta > 0 (the strict
//      domination of residual support points by the cluster cone) are trimmed
//      off the front of the tail, which is the deterministic replacement for
//      one more subsequence extraction;
//   6. the residual parts form a shorter-support sequence handled by
//      recursion, and the limit is min(cluster cone, residual limit).
// On an eventually constant sequence the result is extensionally the final
// element together with the support decomposition that certifies membership.
// ---------------------------------------------------------------------------

namespace {

struct TightSupport {
  std::vector<PointId> points;   // sorted
  std::vector<Rational> values;  // f(s) for each point
};

TightSupport tight_of(const SupportCertificate& cert) {
  return TightSupport{cert.minimal_support, cert.tight_values};
}

// Unique nearest-partner matching from each point of `next` into `prev`.
// Returns positions into prev, or nullopt when a tie or collision occurs.
std::optional<std::vector<int>> pair_supports(const FiniteMetricSpace& space,
                                              const TightSupport& prev, const TightSupport& next) {
  const int c = static_cast<int>(next.points.size());
  std::vector<int> partner(c, -1);
  std::vector<bool> taken(prev.points.size(), false);
  for (int a = 0; a < c; ++a) {
    int best = -1;
    bool tie = false;
    for (int b = 0; b < static_cast<int>(prev.points.size()); ++b) {
      if (best < 0) {
        best = b;
        continue;
      }
      const Rational& db = space.dist(next.points[a], prev.points[b]);
      const Rational& dbest = space.dist(next.points[a], prev.points[best]);
      if (db < dbest) {
        best = b;
        tie = false;
      } else if (db == dbest) {
        tie = true;
      }
    }
    if (tie || best < 0 || taken[best]) return std::nullopt;
    taken[best] = true;
    partner[a] = best;
  }
  return partner;
}

KatetovMap map_from_support(const SpacePtr& space, const TightSupport& s,
                            const std::vector<int>& positions) {
  std::vector<std::pair<PointId, Rational>> pairs;
  pairs.reserve(positions.size());
  for (int pos : positions) pairs.emplace_back(s.points[pos], s.values[pos]);
  return KatetovMap(space, std::move(pairs));
}

KatetovMap min_combine(const KatetovMap& a, const KatetovMap& b) {
  std::map<PointId, Rational> merged;
  for (const auto& [s, v] : a.support()) merged.emplace(s, v);
  for (const auto& [s, v] : b.support()) {
    auto [it, inserted] = merged.emplace(s, v);
    if (!inserted && v < it->second) it->second = v;
  }
  return KatetovMap(a.space(), {merged.begin(), merged.end()});
}

KatetovMap limit_stage(const std::vector<KatetovMap>& fs, LimitDiagnostics& diag, int depth) {
  const std::size_t m = fs.size();
  const SpacePtr& space = fs.back().space();
  std::vector<TightSupport> supports;
  supports.reserve(m);
  for (const auto& f : fs) supports.push_back(tight_of(minimal_support(f)));

  const int c = static_cast<int>(supports.back().points.size());

  // Maximal tail with constant support cardinality and a working pairing.
  std::size_t t = m - 1;
  std::vector<std::vector<int>> chain(m);  // position in S_last -> position in S_n
  std::vector<int> ident(c);
  for (int i = 0; i < c; ++i) ident[i] = i;
  chain[m - 1] = ident;
  while (t > 0) {
    if (static_cast<int>(supports[t - 1].points.size()) != c) break;
    auto partner = pair_supports(*space, supports[t - 1], supports[t]);
    if (!partner) break;
    chain[t - 1].resize(c);
    for (int i = 0; i < c; ++i) chain[t - 1][i] = (*partner)[chain[t][i]];
    --t;
  }

  if (depth == 0) {
    diag.suffix_start = t;
    diag.support_cardinality = c;
  }

  const TightSupport& last = supports.back();

  if (c == 1) {
    // Singleton supports: the trajectory contraction d(y_n, y_{n+1}) is
    // bounded by the sup-distance of the maps (an identity for tight cones).
    for (std::size_t n = t; n + 1 < m; ++n) {
      const PointId yn = supports[n].points[chain[n][0]];
      const PointId yn1 = supports[n + 1].points[chain[n + 1][0]];
      if (space->dist(yn, yn1) > sup_dist(fs[n], fs[n + 1]))
        throw NotCauchyError(n, "singleton supports drift faster than the maps");
    }
    if (depth == 0) {
      diag.cluster_size = 1;
      diag.cluster_points = last.points;
    }
    return map_from_support(space, last, {0});
  }

  // Separation constant: half the least gap inside any tail support.
  Rational two_delta;
  bool have_gap = false;
  for (std::size_t n = t; n < m; ++n) {
    for (int i = 0; i < c; ++i)
      for (int j = i + 1; j < c; ++j) {
        const Rational& g = space->dist(supports[n].points[i], supports[n].points[j]);
        if (!have_gap || g < two_delta) {
          two_delta = g;
          have_gap = true;
        }
      }
  }

  // Cluster split on the final element: supports at the minimum vs the rest.
  Rational d_lim = fs.back().min_value();
  std::vector<int> cluster, residual;
  for (int i = 0; i < c; ++i) {
    if (last.values[i] == d_lim)
      cluster.push_back(i);
    else
      residual.push_back(i);
  }
  const int p = static_cast<int>(cluster.size());
  if (p == 0) throw MathError("internal: minimum of a tight cone is attained on its support");

  if (depth == 0) {
    diag.cluster_size = p;
    for (int i : cluster) diag.cluster_points.push_back(last.points[i]);
    diag.separation = two_delta / Rational(2);
  }

  if (residual.empty()) return map_from_support(space, last, cluster);

  Rational delta_prime = last.values[residual.front()] - d_lim;
  for (int i : residual) {
    Rational gap = last.values[i] - d_lim;
    if (gap < delta_prime) delta_prime = std::move(gap);
  }

  // Residual slack: cluster cones must strictly dominate residual support
  // points. Trim tail entries where they do not (minimality guarantees the
  // final element passes).
  Rational eta;
  bool have_eta = false;
  std::size_t start = t;
  for (std::size_t n = t; n < m; ++n) {
    std::vector<int> cluster_n, residual_n;
    for (int i : cluster) cluster_n.push_back(chain[n][i]);
    for (int i : residual) residual_n.push_back(chain[n][i]);
    KatetovMap cone_n = map_from_support(space, supports[n], cluster_n);
    bool ok = true;
    Rational local;
    bool have_local = false;
    for (int i : residual_n) {
      Rational slack = cone_n.evaluate(supports[n].points[i]) - supports[n].values[i];
      if (slack <= Rational(0)) {
        ok = false;
        break;
      }
      if (!have_local || slack < local) {
        local = std::move(slack);
        have_local = true;
      }
    }
    if (!ok) {
      start = n + 1;
      eta = Rational();
      have_eta = false;
      continue;
    }
    if (!have_eta || local < eta) {
      eta = local;
      have_eta = true;
    }
  }
  if (start >= m) throw MathError("internal: final element must satisfy the residual slack");

  if (depth == 0) {
    diag.residual_gap = delta_prime;
    diag.residual_slack = eta;
  }

  std::vector<KatetovMap> residual_seq;
  for (std::size_t n = start; n < m; ++n) {
    std::vector<int> residual_n;
    for (int i : residual) residual_n.push_back(chain[n][i]);
    residual_seq.push_back(map_from_support(space, supports[n], residual_n));
  }
  KatetovMap g_limit = limit_stage(residual_seq, diag, depth + 1);
  diag.recursion_depth = std::max(diag.recursion_depth, depth + 1);

  return min_combine(map_from_support(space, last, cluster), g_limit);
}

}  // namespace

LimitExtraction limit_extract(const std::vector<KatetovMap>& seq, int max_support,
                              const std::vector<Rational>& tolerance) {
  if (seq.empty()) throw std::invalid_argument("limit_extract: empty sequence");
  if (max_support < 1) throw std::invalid_argument("limit_extract: max_support must be >= 1");
  const SpacePtr& space = seq.front().space();
  for (const auto& f : seq)
    if (f.space() != space) throw SpaceMismatchError();
  if (tolerance.size() + 1 < seq.size())
    throw std::invalid_argument("limit_extract: tolerance schedule too short");

  for (std::size_t n = 0; n + 1 < seq.size(); ++n) {
    Rational step = sup_dist(seq[n], seq[n + 1]);
    if (step > tolerance[n])
      throw NotCauchyError(n, "consecutive distance " + step.str() + " exceeds tolerance " +
                                  tolerance[n].str());
  }
  for (std::size_t n = 0; n < seq.size(); ++n) {
    auto cert = minimal_support(seq[n]);
    if (cert.cardinality > max_support)
      throw SupportTooLargeError(n, cert.cardinality, max_support);
  }

  LimitDiagnostics diag;
  KatetovMap limit = limit_stage(seq, diag, 0);
  if (!extensionally_equal(limit, seq.back()))
    throw MathError("internal: decomposition disagrees with the stabilized tail");

  auto cert = minimal_support(limit);
  if (cert.cardinality > max_support)
    throw MathError("internal: limit escaped the support bound");
  return LimitExtraction{std::move(limit), std::move(cert), std::move(diag)};
}

}  // namespace fms
