#include "fms/io.hpp"

#include <fstream>
#include <sstream>

#include "fms/errors.hpp"

namespace fms::io {

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> split_single_spaces(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t end = line.find(' ', start);
    if (end == std::string::npos) end = line.size();
    out.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

Rational parse_rational_token(const std::string& token, const std::string& context) {
  auto v = Rational::parse(token);
  if (!v) throw ParseError("bad rational '" + token + "' in " + context);
  return *v;
}

long long parse_int_token(const std::string& token, const std::string& context) {
  if (token.empty()) throw ParseError("missing integer in " + context);
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(token, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad integer '" + token + "' in " + context);
  }
  if (pos != token.size()) throw ParseError("bad integer '" + token + "' in " + context);
  return v;
}

}  // namespace

ValidationResult parse_fms(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "fms 1")
    throw ParseError("expected header 'fms 1'");
  if (!std::getline(in, line)) throw ParseError("expected 'points N'");
  line = strip_cr(line);
  auto head = split_single_spaces(line);
  if (head.size() != 2 || head[0] != "points") throw ParseError("expected 'points N'");
  const long long n = parse_int_token(head[1], "points line");
  if (n < 1) throw ParseError("a space needs at least one point");

  std::vector<std::string> labels;
  labels.reserve(n);
  for (long long i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ParseError("missing label line " + std::to_string(i));
    labels.push_back(strip_cr(line));
  }

  std::vector<std::vector<Rational>> matrix(n, std::vector<Rational>(n, Rational(0)));
  for (long long i = 1; i < n; ++i) {
    if (!std::getline(in, line)) throw ParseError("missing distance row " + std::to_string(i));
    line = strip_cr(line);
    auto tokens = split_single_spaces(line);
    if (tokens.size() != static_cast<std::size_t>(i))
      throw ParseError("distance row " + std::to_string(i) + " has " +
                       std::to_string(tokens.size()) + " entries, expected " + std::to_string(i));
    for (long long j = 0; j < i; ++j) {
      Rational v = parse_rational_token(tokens[j], "distance row " + std::to_string(i));
      matrix[i][j] = v;
      matrix[j][i] = std::move(v);
    }
  }
  while (std::getline(in, line)) {
    if (!blank(strip_cr(line))) throw ParseError("trailing garbage: '" + strip_cr(line) + "'");
  }
  return validate_metric(std::move(labels), matrix);
}

ValidationResult parse_fms_string(const std::string& text) {
  std::istringstream in(text);
  return parse_fms(in);
}

ValidationResult parse_fms_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_fms(in);
}

std::string write_fms(const FiniteMetricSpace& space) {
  std::ostringstream out;
  out << "fms 1\n";
  out << "points " << space.size() << "\n";
  for (PointId x = 0; x < space.size(); ++x) out << space.label(x) << "\n";
  for (PointId i = 1; i < space.size(); ++i) {
    for (PointId j = 0; j < i; ++j) {
      if (j) out << ' ';
      out << space.dist(i, j).str();
    }
    out << "\n";
  }
  return out.str();
}

std::string write_kat(const KatetovMap& f) {
  std::ostringstream out;
  out << "kat {";
  bool first = true;
  for (const auto& [s, v] : f.support()) {
    if (!first) out << ", ";
    out << s << ": " << v.str();
    first = false;
  }
  out << "}";
  return out.str();
}

KatetovMap parse_kat(const std::string& line, SpacePtr space) {
  if (line.rfind("kat {", 0) != 0 || line.back() != '}')
    throw ParseError("expected 'kat {...}'");
  const std::string inner = line.substr(5, line.size() - 6);
  if (blank(inner)) throw ParseError("kat line has empty support");
  std::vector<std::pair<PointId, Rational>> support;
  std::size_t start = 0;
  while (start < inner.size()) {
    std::size_t end = inner.find(", ", start);
    if (end == std::string::npos) end = inner.size();
    const std::string entry = inner.substr(start, end - start);
    const std::size_t colon = entry.find(": ");
    if (colon == std::string::npos) throw ParseError("bad kat entry '" + entry + "'");
    const long long idx = parse_int_token(entry.substr(0, colon), "kat entry");
    Rational v = parse_rational_token(entry.substr(colon + 2), "kat entry");
    support.emplace_back(static_cast<PointId>(idx), std::move(v));
    start = end + 2;
  }
  return KatetovMap(std::move(space), std::move(support));
}

std::string write_iso(const Isometry& iso) {
  std::ostringstream out;
  out << "iso";
  for (PointId x = 0; x < static_cast<PointId>(iso.images().size()); ++x)
    out << ' ' << x << "->" << iso.apply(x);
  return out.str();
}

Isometry parse_iso(const std::string& line, SpacePtr space) {
  auto tokens = split_single_spaces(line);
  if (tokens.empty() || tokens[0] != "iso") throw ParseError("expected 'iso ...'");
  const int n = space->size();
  if (tokens.size() != static_cast<std::size_t>(n) + 1)
    throw ParseError("iso line has " + std::to_string(tokens.size() - 1) + " entries, expected " +
                     std::to_string(n));
  std::vector<PointId> images(n, -1);
  std::vector<bool> assigned(n, false);
  for (std::size_t t = 1; t < tokens.size(); ++t) {
    const std::size_t arrow = tokens[t].find("->");
    if (arrow == std::string::npos) throw ParseError("bad iso entry '" + tokens[t] + "'");
    const long long from = parse_int_token(tokens[t].substr(0, arrow), "iso entry");
    const long long to = parse_int_token(tokens[t].substr(arrow + 2), "iso entry");
    if (from < 0 || from >= n || assigned[from]) throw ParseError("bad iso source " + tokens[t]);
    assigned[from] = true;
    images[from] = static_cast<PointId>(to);
  }
  return Isometry(std::move(space), std::move(images));
}

std::string write_tower(const Tower& tower) {
  std::ostringstream out;
  out << "tower 1\n";
  out << "levels " << tower.depth() + 1 << "\n";
  out << "sizes";
  for (int l = 0; l <= tower.depth(); ++l) out << ' ' << tower.level(l)->size();
  out << "\n";
  for (const auto& rec : tower.provenance()) {
    if (rec.kind == ProvenanceKind::Base) continue;
    out << "prov " << rec.point << ' ';
    if (rec.kind == ProvenanceKind::FiniteSupport) {
      out << "finite_support " << rec.level;
    } else {
      out << "axial " << rec.level << ' ' << *rec.axial_level << ' ' << rec.axial_value->str();
    }
    out << ' ' << write_kat(*rec.payload) << "\n";
  }
  return out.str();
}

Tower parse_tower(const std::string& text, SpacePtr top) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "tower 1")
    throw ParseError("expected header 'tower 1'");
  if (!std::getline(in, line)) throw ParseError("expected 'levels N'");
  auto head = split_single_spaces(strip_cr(line));
  if (head.size() != 2 || head[0] != "levels") throw ParseError("expected 'levels N'");
  const long long levels = parse_int_token(head[1], "levels line");
  if (levels < 1) throw ParseError("tower needs at least one level");
  if (!std::getline(in, line)) throw ParseError("expected 'sizes ...'");
  auto sizes_tokens = split_single_spaces(strip_cr(line));
  if (sizes_tokens.size() != static_cast<std::size_t>(levels) + 1 || sizes_tokens[0] != "sizes")
    throw ParseError("bad sizes line");
  std::vector<int> sizes;
  for (std::size_t t = 1; t < sizes_tokens.size(); ++t) {
    sizes.push_back(static_cast<int>(parse_int_token(sizes_tokens[t], "sizes line")));
    if (sizes.back() < 1 || (sizes.size() > 1 && sizes.back() < sizes[sizes.size() - 2]))
      throw ParseError("sizes must be positive and nondecreasing");
  }
  if (sizes.back() != top->size()) throw ParseError("top level size disagrees with the space");

  struct ProvLine {
    PointId point;
    ProvenanceKind kind;
    int level;
    std::optional<int> axial_level;
    std::optional<Rational> axial_value;
    std::string kat;
  };
  std::vector<ProvLine> prov;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (blank(line)) continue;
    auto tokens = split_single_spaces(line);
    if (tokens.size() < 4 || tokens[0] != "prov") throw ParseError("bad prov line: '" + line + "'");
    ProvLine p;
    p.point = static_cast<PointId>(parse_int_token(tokens[1], "prov line"));
    std::size_t kat_from;
    if (tokens[2] == "finite_support") {
      p.kind = ProvenanceKind::FiniteSupport;
      p.level = static_cast<int>(parse_int_token(tokens[3], "prov line"));
      kat_from = 4;
    } else if (tokens[2] == "axial") {
      if (tokens.size() < 7) throw ParseError("bad axial prov line: '" + line + "'");
      p.kind = ProvenanceKind::Axial;
      p.level = static_cast<int>(parse_int_token(tokens[3], "prov line"));
      p.axial_level = static_cast<int>(parse_int_token(tokens[4], "prov line"));
      p.axial_value = parse_rational_token(tokens[5], "prov line");
      kat_from = 6;
    } else {
      throw ParseError("unknown provenance kind '" + tokens[2] + "'");
    }
    std::string kat;
    for (std::size_t t = kat_from; t < tokens.size(); ++t) {
      if (t > kat_from) kat += ' ';
      kat += tokens[t];
    }
    p.kat = std::move(kat);
    prov.push_back(std::move(p));
  }

  // Rebuild the tower level by level from the prefixes of the top space.
  Tower tower(restrict_space(*top, [&] {
                std::vector<PointId> m(sizes[0]);
                for (int x = 0; x < sizes[0]; ++x) m[x] = x;
                return m;
              }())
                  .space);
  std::size_t cursor = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    std::vector<Adjunction> adjunctions;
    for (int p = sizes[l]; p < sizes[l + 1]; ++p) {
      if (cursor >= prov.size() || prov[cursor].point != p)
        throw ParseError("missing prov line for point " + std::to_string(p));
      if (prov[cursor].level != static_cast<int>(l))
        throw ParseError("prov line for point " + std::to_string(p) + " names the wrong level");
      Adjunction adj{parse_kat(prov[cursor].kat, tower.top()), prov[cursor].kind,
                     prov[cursor].axial_level, prov[cursor].axial_value, top->label(p)};
      adjunctions.push_back(std::move(adj));
      ++cursor;
    }
    tower.append_level(std::move(adjunctions));
  }
  if (cursor != prov.size()) throw ParseError("unused prov lines");
  if (!tower.top()->same_metric(*top))
    throw ValidationError("rebuilt tower disagrees with the supplied top level");
  return tower;
}

std::string write_audit(const AuditReport& report) {
  std::ostringstream out;
  out << "audit 1\n";
  out << "total " << report.total << "\n";
  out << "realized " << report.realized << "\n";
  out << "ratio " << report.ratio().str() << "\n";
  for (const auto& u : report.unrealized) {
    out << "unrealized {";
    for (std::size_t a = 0; a < u.subset.size(); ++a) {
      if (a) out << ", ";
      out << u.subset[a] << ": " << u.values[a].str();
    }
    out << "}\n";
  }
  return out.str();
}

std::string write_certificate(const MainTheoremCertificate& cert) {
  std::ostringstream out;
  auto yesno = [](bool b) { return b ? "true" : "false"; };
  out << "certificate 1\n";
  out << "rescaled " << yesno(cert.rescaled) << "\n";
  out << "coverage depth " << cert.coverage_depth << " reps " << cert.coverage_reps << "\n";
  out << "base begin\n" << write_fms(*cert.base) << "base end\n";
  out << "tower levels " << cert.tower.depth() + 1 << "\n";
  out << "tower sizes";
  for (int l = 0; l <= cert.tower.depth(); ++l) out << ' ' << cert.tower.level(l)->size();
  out << "\n";
  out << "witness count " << cert.witness_table.size() << "\n";
  for (const auto& row : cert.witness_table)
    out << "witness " << row.index << " k " << row.k << " j " << row.j << " e " << row.e.str()
        << " a " << row.a << " dist_x0 " << row.dist_to_x0.str() << "\n";
  out << "f members";
  for (PointId p : cert.lemma.f_space.to_parent) out << ' ' << p;
  out << "\n";

  out << "group x0 order " << cert.iso_x0.order() << "\n";
  for (const auto& g : cert.iso_x0.elements) out << "x0 " << write_iso(g) << "\n";
  out << "x0 table\n";
  for (const auto& row : cert.table_x0) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
    out << "\n";
  }
  out << "group f order " << cert.lemma.iso_f.order() << "\n";
  for (const auto& g : cert.lemma.iso_f.elements) out << "f " << write_iso(g) << "\n";
  out << "f table\n";
  for (const auto& row : cert.table_f) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
    out << "\n";
  }
  for (std::size_t i = 0; i < cert.restriction_map.size(); ++i)
    out << "bijection restriction " << i << " -> " << cert.restriction_map[i] << "\n";
  for (std::size_t i = 0; i < cert.extension_map.size(); ++i)
    out << "bijection extension " << i << " -> " << cert.extension_map[i] << "\n";
  out << "lemma membership " << yesno(cert.lemma.membership_ok) << "\n";
  out << "lemma stabilizes_x0 " << yesno(cert.lemma.stabilizes_x0) << "\n";
  out << "lemma fixes_witnesses " << yesno(cert.lemma.fixes_witnesses) << "\n";
  out << "check restriction_hom " << yesno(cert.restriction_hom) << "\n";
  out << "check extension_hom " << yesno(cert.extension_hom) << "\n";
  out << "check mutually_inverse " << yesno(cert.mutually_inverse) << "\n";
  out << "check unique_extension " << yesno(cert.unique_extension) << "\n";
  out << "verdict " << (cert.ok() ? "ok" : "failed") << "\n";
  out << "certificate end\n";
  return out.str();
}

std::string write_rigidity(const RigidityReport& report) {
  std::ostringstream out;
  if (report.verdict == RigidityReport::Verdict::Compatible) {
    out << "compatible\n";
  } else {
    out << "violation boundary " << report.boundary << " moved " << report.moved_point << " delta "
        << report.delta.str() << " witness " << report.witness_index << " displacement "
        << report.displacement.str() << " bound " << report.bound.str() << "\n";
  }
  return out.str();
}

}  // namespace fms::io
