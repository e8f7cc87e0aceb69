#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fms/isometry.hpp"
#include "fms/tower.hpp"

namespace fms {

// Which tower levels the witnesses guard, and how often. k_i >= 1 always;
// a finite plan covers every level index 1..depth at least `reps` times,
// round-robin, in place of an infinite enumeration.
struct WitnessPlan {
  int depth = 1;
  int reps = 1;
  std::vector<int> k;
};

WitnessPlan plan_witnesses(int depth, int reps);

// The chosen witnesses: radii e_i (e_1 >= 4, e_{i+1} > 4 e_i), levels j_i
// (nondecreasing, j_i >= k_i), and points a_i living in level j_i + 1, each
// realizing x -> e_i + dist(x, X_{k_i - 1}) over level j_i. Every isometry
// extended from the base fixes every a_i, and dist(a_i, X_0) = e_i.
struct WitnessSet {
  WitnessPlan plan;
  std::vector<Rational> e;
  std::vector<int> j;
  std::vector<PointId> a;
};

// Builds the witnesses on top of the tower, growing it with axial points
// whenever the current diameter is below the next radius. Deterministic:
// e_i = max(4 e_{i-1} + 1, diam(X_{k_i}) + 1) with e_0 = 1, and j_i is the
// first frontier level with diameter >= e_i.
WitnessSet choose_witnesses(Tower& tower, const WitnessPlan& plan, const TowerConfig& cfg);

// Checks every WitnessSet invariant against the tower; throws on failure.
void validate_witness_set(const Tower& tower, const WitnessSet& w);

// F = X_0 together with the witness points, as ids into the top level.
std::vector<PointId> witness_f_members(const Tower& tower, const WitnessSet& w);

struct LemmaReport {
  bool membership_ok = false;   // x in X_0  <=>  some other F-point within (0, 1]
  bool stabilizes_x0 = false;   // every isometry of F maps X_0 onto X_0
  bool fixes_witnesses = false; // ... and fixes each a_i
  IsometryGroup iso_f;          // on the restricted space F
  Restriction f_space;
  // For each element of iso_f, its restriction to X_0 as an images vector.
  std::vector<std::vector<PointId>> x0_actions;
  bool ok() const { return membership_ok && stabilizes_x0 && fixes_witnesses; }
};

// The membership-criterion lemma on a concrete witness set. Requires the
// base space to have at least 3 points and diameter <= 1.
LemmaReport check_lemma_sympa(const Tower& tower, const WitnessSet& w);

struct PipelineConfig {
  TowerConfig tower;
  int reps = 1;
};

struct WitnessRow {
  int index = 0;
  int k = 0;
  int j = 0;
  Rational e;
  PointId a = -1;
  Rational dist_to_x0;
};

// Everything needed to re-check the group isomorphism independently:
// both groups as explicit element lists with composition tables, the
// restriction/extension bijection between them, and the lemma verdicts.
struct MainTheoremCertificate {
  bool rescaled = false;
  SpacePtr base;  // the space the pipeline ran on (post-rescale)
  Tower tower;
  WitnessSet witnesses;
  std::vector<WitnessRow> witness_table;
  IsometryGroup iso_x0;
  LemmaReport lemma;
  std::vector<std::vector<int>> table_x0;  // composition tables (element indices)
  std::vector<std::vector<int>> table_f;
  std::vector<int> restriction_map;  // iso_f element -> iso_x0 element
  std::vector<int> extension_map;    // iso_x0 element -> iso_f element
  bool restriction_hom = false;
  bool extension_hom = false;
  bool mutually_inverse = false;
  bool unique_extension = false;
  int coverage_depth = 0;
  int coverage_reps = 0;
  bool ok() const {
    return lemma.ok() && restriction_hom && extension_hom && mutually_inverse && unique_extension;
  }
};

// End-to-end pipeline: rescale if needed, build the tower, choose witnesses,
// form F, and certify that restriction and tower extension are mutually
// inverse group isomorphisms between Iso(F) and Iso(X_0).
MainTheoremCertificate verify_main_theorem(SpacePtr x0, const PipelineConfig& cfg);

struct RigidityReport {
  enum class Verdict { Compatible, Violation };
  Verdict verdict = Verdict::Compatible;
  // Violation details:
  int boundary = -1;       // the level n whose preimage leaks
  PointId moved_point = -1;  // x outside X_n with phi(x) inside X_n
  PointId nearby_point = -1; // the y within delta/4 of x (here y = x: x already
                             // lives at a finite level)
  Rational delta;            // dist(x, X_n) > 0
  int witness_index = -1;    // i with k_i = n+1 and j_i >= level(y)
  Rational displacement;     // dist(phi(a_i), a_i)
  Rational bound;            // delta / 2
};

// The quantitative contradiction step: a top-level isometry that moves a
// point into a guarded level must displace the guarding witness by at least
// delta/2. Reports Compatible when phi preserves every level setwise. Pass
// boundary = -1 to probe the smallest leaking level; otherwise the probe
// inspects the given level only and throws (std::invalid_argument) if nothing
// crosses it. Throws WitnessPlanInsufficient when the finite plan has no
// witness guarding the crossing.
RigidityReport rigidity_probe(const Tower& tower, const WitnessSet& w, const Isometry& phi,
                              int boundary);

}  // namespace fms
