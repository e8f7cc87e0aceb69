#pragma once

#include <iosfwd>
#include <string>

#include "fms/isometry.hpp"
#include "fms/katetov.hpp"
#include "fms/metric_space.hpp"
#include "fms/tower.hpp"
#include "fms/witness.hpp"

namespace fms::io {

// FMS v1 text format:
//   fms 1
//   points N
//   <N label lines>
//   <N-1 lower-triangular rows; row i holds d(i,0) .. d(i,i-1)>
// Tokens are integers or p/q with q > 0, single-space separated. The parser
// rejects trailing garbage; the file content is parsed, and the metric axioms
// are checked separately via validate_metric.
ValidationResult parse_fms(std::istream& in);
ValidationResult parse_fms_string(const std::string& text);
ValidationResult parse_fms_file(const std::string& path);

std::string write_fms(const FiniteMetricSpace& space);

// One-line Katetov map: kat {0: 1/2, 3: 2} with support sorted by point.
std::string write_kat(const KatetovMap& f);
KatetovMap parse_kat(const std::string& line, SpacePtr space);

// One-line isometry: iso 0->2 1->0 2->1
std::string write_iso(const Isometry& iso);
Isometry parse_iso(const std::string& line, SpacePtr space);

// Tower provenance sidecar:
//   tower 1
//   levels L+1
//   sizes n0 n1 ... nL
//   prov <point> finite_support <level> kat {...}
//   prov <point> axial <level> <j> <d> kat {...}
// Base points carry no prov lines. Together with the FMS file of the top
// level this rebuilds the tower exactly.
std::string write_tower(const Tower& tower);
Tower parse_tower(const std::string& text, SpacePtr top);

std::string write_audit(const AuditReport& report);

std::string write_certificate(const MainTheoremCertificate& cert);

std::string write_rigidity(const RigidityReport& report);

}  // namespace fms::io
