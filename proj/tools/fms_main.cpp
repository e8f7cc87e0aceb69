// Command-line front end: validate spaces, enumerate isometry groups, build
// towers, synthesize witness certificates, audit extension properties, and
// probe rigidity. Reports are deterministic: identical inputs give
// byte-identical outputs.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "fms/errors.hpp"
#include "fms/io.hpp"
#include "fms/isometry.hpp"
#include "fms/katetov.hpp"
#include "fms/metric_space.hpp"
#include "fms/tower.hpp"
#include "fms/witness.hpp"

namespace {

using nlohmann::json;

std::vector<fms::Rational> parse_grid(const std::string& csv) {
  std::vector<fms::Rational> grid;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t end = csv.find(',', start);
    if (end == std::string::npos) end = csv.size();
    const std::string token = csv.substr(start, end - start);
    if (!token.empty()) {
      auto v = fms::Rational::parse(token);
      if (!v) throw fms::ParseError("bad grid value '" + token + "'");
      grid.push_back(*v);
    }
    start = end + 1;
  }
  if (grid.empty()) throw fms::ParseError("empty grid");
  return grid;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fms::ParseError("cannot write " + path);
  out << content;
}

int run_validate(const std::string& path) {
  auto result = fms::io::parse_fms_file(path);
  if (!result.ok()) {
    for (const auto& v : result.violations) std::cout << v.describe() << "\n";
    return 2;
  }
  std::cout << "valid, diameter " << result.space->diameter().str() << "\n";
  return 0;
}

int run_iso_group(const std::string& path) {
  auto result = fms::io::parse_fms_file(path);
  if (!result.ok()) {
    for (const auto& v : result.violations) std::cout << v.describe() << "\n";
    return 2;
  }
  auto group = fms::enumerate_isometries(result.space);
  std::cout << "order " << group.order() << "\n";
  for (const auto& g : group.elements) std::cout << fms::io::write_iso(g) << "\n";
  for (const auto& orbit : fms::orbit_partition(group)) {
    std::cout << "orbit";
    for (fms::PointId p : orbit) std::cout << ' ' << p;
    std::cout << "\n";
  }
  return 0;
}

int run_tower_build(const std::string& config_path, std::string out_prefix) {
  std::ifstream in(config_path);
  if (!in) throw fms::ParseError("cannot open " + config_path);
  json cfg_json;
  try {
    cfg_json = json::parse(in);
  } catch (const json::exception& e) {
    throw fms::ParseError(std::string("bad config: ") + e.what());
  }
  if (!cfg_json.contains("input")) throw fms::ParseError("config needs an 'input' path");
  auto result = fms::io::parse_fms_file(cfg_json["input"].get<std::string>());
  if (!result.ok()) {
    for (const auto& v : result.violations) std::cout << v.describe() << "\n";
    return 2;
  }
  fms::TowerConfig cfg;
  cfg.depth = cfg_json.value("depth", 1);
  cfg.budget = cfg_json.value("budget", 0);
  cfg.max_levels = cfg_json.value("max_levels", 64);
  if (cfg_json.contains("grid")) {
    for (const auto& item : cfg_json["grid"]) {
      // grid values are strings so they parse exactly; no floats
      auto v = fms::Rational::parse(item.get<std::string>());
      if (!v) throw fms::ParseError("bad grid value in config");
      cfg.grid.push_back(*v);
    }
  }
  if (out_prefix.empty()) out_prefix = cfg_json.value("out", std::string("tower"));

  fms::Tower tower(result.space);
  for (int i = 0; i < cfg.depth; ++i) tower.build_level(cfg);

  write_file(out_prefix + ".fms", fms::io::write_fms(*tower.top()));
  write_file(out_prefix + ".prov", fms::io::write_tower(tower));
  std::cout << "tower levels " << tower.depth() + 1 << "\n";
  std::cout << "tower sizes";
  for (int l = 0; l <= tower.depth(); ++l) std::cout << ' ' << tower.level(l)->size();
  std::cout << "\n";
  std::cout << "top diameter " << tower.level_diameter(tower.depth()).str() << "\n";
  return 0;
}

int run_witness_build(const std::string& path, int depth, int reps, int budget,
                      const std::string& grid_csv, int max_levels, const std::string& out_path) {
  auto result = fms::io::parse_fms_file(path);
  if (!result.ok()) {
    for (const auto& v : result.violations) std::cout << v.describe() << "\n";
    return 2;
  }
  fms::PipelineConfig cfg;
  cfg.tower.depth = depth;
  cfg.tower.budget = budget;
  cfg.tower.max_levels = max_levels;
  if (!grid_csv.empty()) cfg.tower.grid = parse_grid(grid_csv);
  cfg.reps = reps;
  auto cert = fms::verify_main_theorem(result.space, cfg);
  const std::string text = fms::io::write_certificate(cert);
  if (!out_path.empty()) write_file(out_path, text);
  std::cout << "witness-build " << (cert.ok() ? "ok" : "FAILED") << " |Iso(F)| = "
            << cert.lemma.iso_f.order() << " |Iso(X0)| = " << cert.iso_x0.order() << "\n";
  if (out_path.empty()) std::cout << text;
  return cert.ok() ? 0 : 3;
}

int run_audit(const std::string& path, int m, const std::string& grid_csv) {
  auto result = fms::io::parse_fms_file(path);
  if (!result.ok()) {
    for (const auto& v : result.violations) std::cout << v.describe() << "\n";
    return 2;
  }
  auto report = fms::finite_injectivity_audit(result.space, m, parse_grid(grid_csv));
  std::cout << fms::io::write_audit(report);
  return 0;
}

int run_rigidity_probe(const std::string& path, int depth, int reps, int budget,
                       const std::string& grid_csv, int max_levels) {
  auto result = fms::io::parse_fms_file(path);
  if (!result.ok()) {
    for (const auto& v : result.violations) std::cout << v.describe() << "\n";
    return 2;
  }
  fms::PipelineConfig cfg;
  cfg.tower.depth = depth;
  cfg.tower.budget = budget;
  cfg.tower.max_levels = max_levels;
  if (!grid_csv.empty()) cfg.tower.grid = parse_grid(grid_csv);
  cfg.reps = reps;
  auto cert = fms::verify_main_theorem(result.space, cfg);
  auto top_group = fms::enumerate_isometries(cert.tower.top());
  std::cout << "top-level isometries " << top_group.order() << "\n";
  for (const auto& phi : top_group.elements) {
    std::cout << fms::io::write_iso(phi) << "\n  ";
    try {
      std::cout << fms::io::write_rigidity(fms::rigidity_probe(cert.tower, cert.witnesses, phi, -1));
    } catch (const fms::WitnessPlanInsufficientError& e) {
      std::cout << "plan-insufficient needs k " << e.needed_k << " j " << e.needed_j << "\n";
    }
  }
  return 0;
}

int run_gen_space(int points, unsigned long long seed, const std::string& out_path) {
  if (points < 1) throw fms::ParseError("need at least one point");
  // Distances in [1, 2]: every triangle inequality holds automatically.
  std::mt19937_64 rng(seed);
  const int den = 12;
  std::vector<std::vector<fms::Rational>> m(points, std::vector<fms::Rational>(points, fms::Rational(0)));
  for (int i = 0; i < points; ++i)
    for (int j = i + 1; j < points; ++j) {
      const long long num = den + static_cast<long long>(rng() % (den + 1));
      m[i][j] = fms::Rational(num, den);
      m[j][i] = m[i][j];
    }
  std::vector<std::string> labels;
  for (int i = 0; i < points; ++i) labels.push_back("x" + std::to_string(i));
  auto result = fms::validate_metric(std::move(labels), m);
  const std::string text = fms::io::write_fms(*result.space);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite metric spaces, Katetov extensions, isometry groups"};
  app.require_subcommand(1);

  std::string in_path, out_path, config_path, grid_csv;
  int depth = 2, reps = 1, budget = 4, max_levels = 64, subset_size = 1, points = 4;
  unsigned long long seed = 1;

  auto* validate = app.add_subcommand("validate", "check the metric axioms of an FMS file");
  validate->add_option("file", in_path)->required();

  auto* iso = app.add_subcommand("iso-group", "enumerate the isometry group of an FMS file");
  iso->add_option("file", in_path)->required();

  auto* tower = app.add_subcommand("tower-build", "build a tower from a JSON config");
  tower->add_option("--config", config_path)->required();
  tower->add_option("--out", out_path);

  auto* witness = app.add_subcommand("witness-build", "build witnesses and certify Iso(F) = Iso(X0)");
  witness->add_option("file", in_path)->required();
  witness->add_option("--depth", depth);
  witness->add_option("--reps", reps);
  witness->add_option("--budget", budget);
  witness->add_option("--grid", grid_csv);
  witness->add_option("--max-levels", max_levels);
  witness->add_option("--out", out_path);

  auto* audit = app.add_subcommand("audit", "finite-injectivity audit over a value grid");
  audit->add_option("file", in_path)->required();
  audit->add_option("--max-subset", subset_size);
  audit->add_option("--grid", grid_csv)->required();

  auto* rigidity = app.add_subcommand("rigidity-probe", "probe every top-level isometry of a built tower");
  rigidity->add_option("file", in_path)->required();
  rigidity->add_option("--depth", depth);
  rigidity->add_option("--reps", reps);
  rigidity->add_option("--budget", budget);
  rigidity->add_option("--grid", grid_csv);
  rigidity->add_option("--max-levels", max_levels);

  auto* gen = app.add_subcommand("gen-space", "generate a random valid space (deterministic by seed)");
  gen->add_option("--points", points);
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return run_validate(in_path);
    if (iso->parsed()) return run_iso_group(in_path);
    if (tower->parsed()) return run_tower_build(config_path, out_path);
    if (witness->parsed())
      return run_witness_build(in_path, depth, reps, budget, grid_csv, max_levels, out_path);
    if (audit->parsed()) return run_audit(in_path, subset_size, grid_csv);
    if (rigidity->parsed())
      return run_rigidity_probe(in_path, depth, reps, budget, grid_csv, max_levels);
    if (gen->parsed()) return run_gen_space(points, seed, out_path);
  } catch (const fms::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.error_class()) {
      case fms::ErrorClass::Parse: return 1;
      case fms::ErrorClass::Validation: return 2;
      case fms::ErrorClass::Mathematical: return 3;
      case fms::ErrorClass::Internal: return 4;
    }
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
