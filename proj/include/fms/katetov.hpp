#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fms/metric_space.hpp"

namespace fms {

// A Katetov map with finite support: f(x) = min over support pairs (s, v) of
// v + d(x, s). Encodes the distances of a prospective one-point extension.
// Only the support is stored; full value tables are always recomputed.
// Support values may be non-tight (v > f(s)); tightened() normalizes them.
// Structural validity (nonempty sorted support, values >= 0, points in the
// space) is enforced here; the Katetov condition itself is a separate check,
// is_katetov, because several operations deliberately build candidates first
// and test them after.
class KatetovMap {
 public:
  KatetovMap(SpacePtr space, std::vector<std::pair<PointId, Rational>> support);

  const SpacePtr& space() const { return space_; }
  const std::vector<std::pair<PointId, Rational>>& support() const { return support_; }

  Rational evaluate(PointId x) const;
  std::vector<Rational> values() const;  // f(x) for every x, in point order

  Rational min_value() const;
  Rational max_value() const;

  KatetovMap tightened() const;  // replace each v by f(s); idempotent

 private:
  SpacePtr space_;
  std::vector<std::pair<PointId, Rational>> support_;
};

struct KatetovCheck {
  bool ok = true;
  // First violated pair, when !ok. lower_bound_failed distinguishes
  // d(x,y) > f(x) + f(y) from |f(x) - f(y)| > d(x,y).
  PointId x = -1;
  PointId y = -1;
  bool lower_bound_failed = false;
};

// Checks |f(x)-f(y)| <= d(x,y) <= f(x)+f(y) over all pairs. The min-formula
// makes the Lipschitz half automatic, but both halves are checked anyway.
KatetovCheck is_katetov(const KatetovMap& f);

// The map x -> d(base, x), supported by {(base, 0)}.
KatetovMap kuratowski(SpacePtr space, PointId base);

// max over x of |f(x) - g(x)|; both maps must live on the same space object.
Rational sup_dist(const KatetovMap& f, const KatetovMap& g);

bool extensionally_equal(const KatetovMap& f, const KatetovMap& g);

// Katetov extension of a map on a subspace: transports the support through
// the embedding (old index -> index in the big space). The result is the
// greatest 1-Lipschitz map on the big space agreeing with f on the image.
// Throws BadEmbedding when the index map does not preserve distances.
KatetovMap katetov_extension(const KatetovMap& f, SpacePtr big,
                             const std::vector<PointId>& embedding);

// The map x -> d + dist(x, Y), supported by {(y, d) : y in Y}. Katetov-valid
// exactly when d >= diam(Y)/2, which is asserted (InvalidKatetovMap).
KatetovMap axial_map(SpacePtr space, const std::vector<PointId>& members, const Rational& d);

struct SupportCertificate {
  std::vector<PointId> minimal_support;  // smallest controlling set, lex-least among ties
  int cardinality = 0;
  std::vector<Rational> tight_values;  // f(s) for each s in minimal_support
};

// Exhaustive search over subsets of X in increasing cardinality, lexicographic
// within a cardinality; the first controlling subset wins. Exponential in |X|;
// intended for oracle-scale spaces (|X| <= 12 or so).
SupportCertificate minimal_support(const KatetovMap& f);

// Quantities the Cauchy-limit decomposition computes along the way, exposed
// so tests can confirm the procedure runs the way it is specified to.
struct LimitDiagnostics {
  std::size_t suffix_start = 0;        // first index of the analysed tail
  int support_cardinality = 0;         // common tight-support size c on the tail
  int cluster_size = 0;                // p = number of supports converging to the min
  std::vector<PointId> cluster_points; // their limit positions y_k
  std::optional<Rational> separation;        // delta: half the least support gap (c >= 2)
  std::optional<Rational> residual_gap;      // delta': min of f(s) - d over residual supports
  std::optional<Rational> residual_slack;    // eta: min of f~(s) - f(s) over residual supports
  int recursion_depth = 0;             // how many residual stages were peeled off
};

struct LimitExtraction {
  KatetovMap limit;
  SupportCertificate certificate;
  LimitDiagnostics diagnostics;
};

// Limit of a Cauchy sequence of finitely supported Katetov maps, computed by
// the support-splitting decomposition (see katetov.cpp for the procedure).
// Preconditions: every element has minimal support of cardinality at most
// max_support (SupportTooLarge otherwise), and consecutive sup-distances are
// bounded by the supplied tolerance schedule (NotCauchy otherwise; the
// schedule needs at least seq.size()-1 entries).
LimitExtraction limit_extract(const std::vector<KatetovMap>& seq, int max_support,
                              const std::vector<Rational>& tolerance);

}  // namespace fms
