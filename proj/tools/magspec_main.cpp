// magspec command line: identity check suites, spectrum scans over a
// parameter grid, butterfly data emission and gap persistence reports.
//
// Subcommands: check, scan, butterfly, gaps.
// Exit codes: 0 pass, 1 check failure, 2 usage/config error, 3 internal error.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>

#include "magspec/field.hpp"
#include "magspec/represent.hpp"
#include "magspec/spectrum.hpp"
#include "magspec/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace magspec;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json default_config() {
  return json{
      {"model", {{"kind", "harper"}}},
      {"potential", {{"kind", "symmetric_gauge"}, {"B", kTwoPi / 8.0}, {"d", 2}}},
      {"field", {{"kind", "scaled"}}},
      {"box", {{"d", 2}, {"L", 6}, {"boundary", "dirichlet"}}},
      {"grid", {{"n", 129}}},
      {"cochain_policy", "direct"},
      {"output", ""},
      {"seed", 1},
      {"workers", 0},  // 0: use the available parallelism
      {"checks",
       {{"triangle_bound", true}, {"tol", 1e-12}, {"samples", 200}, {"window_radius", 2},
        {"range", 12}}},
      {"gaps", {{"resolution", 0.0}}},  // 0: auto, 1e-3 * sup spectral radius
  };
}

void merge_into(json& base, const json& overlay) {
  for (auto it = overlay.begin(); it != overlay.end(); ++it) {
    if (it->is_object() && base.contains(it.key()) && base[it.key()].is_object())
      merge_into(base[it.key()], *it);
    else
      base[it.key()] = *it;
  }
}

void apply_set_overrides(json& cfg, const std::vector<std::string>& sets) {
  for (const std::string& s : sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + s + "'");
    std::string key = s.substr(0, eq);
    std::string value = s.substr(eq + 1);
    json parsed;
    try {
      parsed = json::parse(value);
    } catch (const json::exception&) {
      parsed = value;  // unquoted strings are taken verbatim
    }
    json* node = &cfg;
    std::size_t pos = 0;
    for (;;) {
      auto dot = key.find('.', pos);
      std::string part = key.substr(pos, dot == std::string::npos ? dot : dot - pos);
      if (dot == std::string::npos) {
        (*node)[part] = parsed;
        break;
      }
      node = &(*node)[part];
      pos = dot + 1;
    }
  }
}

std::string default_output(const std::string& sub) {
  const char* root = std::getenv("MAGSPEC_OUTPUT_ROOT");
  return (fs::path(root ? root : "magspec_out") / sub).string();
}

MagneticPotential potential_from_config(const json& cfg) {
  try {
    return MagneticPotential::from_json(cfg.at("potential").dump());
  } catch (const std::invalid_argument&) {
    throw;  // antisymmetry violations are check failures, handled by the caller
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field 'potential': ") + e.what());
  }
}

Symbol model_from_config(const json& cfg) {
  try {
    return Symbol::from_json(cfg.at("model").dump());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field 'model': ") + e.what());
  }
}

Box box_from_config(const json& cfg) {
  try {
    const json& b = cfg.at("box");
    std::string boundary = b.value("boundary", "dirichlet");
    if (boundary == "dirichlet")
      return Box::dirichlet(b.at("d").get<int>(), b.at("L").get<Coord>());
    if (boundary == "periodic")
      return Box::periodic(b.at("d").get<int>(), b.at("sides").get<std::vector<Coord>>(),
                           b.at("period").get<std::vector<Coord>>());
    throw ConfigError("config field 'box.boundary': unknown value '" + boundary + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field 'box': ") + e.what());
  }
}

ParameterGrid grid_from_config(const json& cfg) {
  try {
    const json& g = cfg.at("grid");
    if (g.contains("points")) {
      ParameterGrid grid;
      grid.points = g.at("points").get<std::vector<double>>();
      if (grid.points.size() < 2)
        throw ConfigError("config field 'grid.points': need at least 2 points");
      for (std::size_t i = 0; i < grid.points.size(); ++i) {
        double p = grid.points[i];
        if (p < 0.0 || p > 1.0 || (i > 0 && p <= grid.points[i - 1]))
          throw ConfigError("config field 'grid.points': must be strictly increasing in [0,1]");
      }
      return grid;
    }
    return ParameterGrid::uniform(g.at("n").get<int>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field 'grid': ") + e.what());
  }
}

CocycleField field_from_config(const json& cfg, const MagneticPotential& pot) {
  try {
    std::string kind = cfg.at("field").value("kind", "scaled");
    if (kind == "scaled") return scaled_cocycle_field(pot);
    if (kind == "constant") return constant_cocycle_field(pot);
    if (kind == "table")
      return tabulated_cocycle_field(pot, cfg.at("field").at("eps").get<std::vector<double>>(),
                                     cfg.at("field").at("coef").get<std::vector<double>>());
    throw ConfigError("config field 'field.kind': unknown value '" + kind + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field 'field': ") + e.what());
  }
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct CheckRow {
  std::string name;
  std::size_t samples = 0;
  double max_defect = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

class CheckSuite {
 public:
  explicit CheckSuite(double default_tol) : tol_(default_tol) {}

  void add(const std::string& name, std::size_t samples, double defect, double tol,
           const std::string& note = "") {
    rows_.push_back({name, samples, defect, tol, defect <= tol, note});
  }
  void add_bool(const std::string& name, std::size_t samples, bool pass,
                const std::string& note = "") {
    rows_.push_back({name, samples, pass ? 0.0 : 1.0, 0.0, pass, note});
  }
  double tol() const { return tol_; }
  bool all_pass() const {
    for (const auto& r : rows_)
      if (!r.pass) return false;
    return true;
  }
  const std::vector<CheckRow>& rows() const { return rows_; }

 private:
  double tol_;
  std::vector<CheckRow> rows_;
};

LatticePoint random_point(std::mt19937_64& rng, int d, Coord range) {
  std::uniform_int_distribution<Coord> pick(-range, range);
  LatticePoint p((std::size_t)d);
  for (int i = 0; i < d; ++i) p[i] = pick(rng);
  return p;
}

Symbol random_symbol(std::mt19937_64& rng, int d, std::uint64_t seed, int n_terms) {
  Symbol::Terms terms;
  for (int t = 0; t < n_terms; ++t) {
    LatticePoint offset = random_point(rng, d, 2);
    terms.emplace(offset, CoefficientField::random(d, seed + (std::uint64_t)t * 977u, 1.0));
  }
  return Symbol(d, std::move(terms), "random");
}

int run_check(const json& cfg) {
  const json& checks = cfg.at("checks");
  const double tol = checks.at("tol").get<double>();
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const std::size_t samples = checks.at("samples").get<std::size_t>();
  const Coord range = checks.at("range").get<Coord>();
  CheckSuite suite(tol);
  std::mt19937_64 rng(seed);

  MagneticPotential pot = MagneticPotential::zero(2);
  bool pot_ok = true;
  try {
    pot = potential_from_config(cfg);
  } catch (const std::invalid_argument& e) {
    suite.add_bool("potential_antisymmetry", 0, false, e.what());
    pot_ok = false;
  }

  if (pot_ok) {
    const int d = pot.dim();
    // antisymmetry of the constructed potential
    {
      double worst = 0.0;
      for (std::size_t i = 0; i < samples; ++i) {
        LatticePoint x = random_point(rng, d, range), y = random_point(rng, d, range);
        worst = std::max(worst, std::abs(pot.phase(x, y) + pot.phase(y, x)));
      }
      suite.add("potential_antisymmetry", samples, worst, 0.0);
    }

    TwoCocycle coc = cocycle_from_potential(pot);
    LatticePoint zero((std::size_t)d);

    // 2-cocycle laws on random tuples
    {
      double law = 0.0, norm = 0.0, inv = 0.0;
      for (std::size_t i = 0; i < samples; ++i) {
        LatticePoint q = random_point(rng, d, range), x = random_point(rng, d, range),
                     y = random_point(rng, d, range), z = random_point(rng, d, range);
        law = std::max(law, phase_defect(coc.phase(q, x + y, z) + coc.phase(q, x, y),
                                         coc.phase(q + x, y, z) + coc.phase(q, x, y + z)));
        norm = std::max(norm, std::abs(fold_phase(coc.phase(q, x, zero))));
        norm = std::max(norm, std::abs(fold_phase(coc.phase(q, zero, x))));
        inv = std::max(inv, std::abs(fold_phase(coc.phase(q, x, -x))));
      }
      suite.add("cocycle_law", samples, law, tol);
      suite.add("cocycle_normalization", samples, norm, tol);
      suite.add("cocycle_inverse_pair", samples, inv, tol);
    }

    // 1-cochain equations on a window
    {
      Box window = Box::dirichlet(d, checks.at("window_radius").get<Coord>());
      auto rep_t = verify_cochain(cochain_transversal(coc), coc, window, tol);
      suite.add("cochain_transversal", rep_t.triples_checked, rep_t.worst.defect, tol);
      auto rep_d = verify_cochain(cochain_direct(pot), coc, window, tol);
      suite.add("cochain_direct", rep_d.triples_checked, rep_d.worst.defect, tol);
    }

    // gauge invariance of the cocycle
    {
      double worst = 0.0;
      for (int g = 0; g < 10; ++g) {
        GaugeFunction gauge = GaugeFunction::random(d, seed + 131u * (std::uint64_t)g, 5.0);
        TwoCocycle coc2 = cocycle_from_potential(gauge_transform_potential(pot, gauge));
        for (std::size_t i = 0; i < samples / 10 + 1; ++i) {
          LatticePoint q = random_point(rng, d, range), x = random_point(rng, d, range),
                       y = random_point(rng, d, range);
          worst = std::max(worst, phase_defect(coc.phase(q, x, y), coc2.phase(q, x, y)));
        }
      }
      suite.add("gauge_invariance", samples, worst, tol);
    }

    // cocycle -> potential -> cocycle round trip
    {
      double worst = 0.0;
      MagneticPotential rec = potential_from_cocycle(coc);
      TwoCocycle coc2 = cocycle_from_potential(rec);
      for (std::size_t i = 0; i < samples; ++i) {
        LatticePoint q = random_point(rng, d, range), x = random_point(rng, d, range),
                     y = random_point(rng, d, range);
        worst = std::max(worst, phase_defect(coc.phase(q, x, y), coc2.phase(q, x, y)));
      }
      suite.add("reconstruction_roundtrip", samples, worst, tol);
    }

    // algebra suite on random symbols over this cocycle
    {
      double assoc = 0.0, anti = 0.0, subm = 0.0;
      Box window = Box::dirichlet(d, 2);
      for (int inst = 0; inst < 10; ++inst) {
        Symbol f = random_symbol(rng, d, seed + 11u * (std::uint64_t)inst, 3);
        Symbol g = random_symbol(rng, d, seed + 11u * (std::uint64_t)inst + 3u, 3);
        Symbol h = random_symbol(rng, d, seed + 11u * (std::uint64_t)inst + 7u, 3);
        Symbol lhs = twisted_product(twisted_product(f, g, coc), h, coc);
        Symbol rhs = twisted_product(f, twisted_product(g, h, coc), coc);
        Symbol prod = twisted_product(f, g, coc);
        Symbol anti_lhs = involution(prod);
        Symbol anti_rhs = twisted_product(involution(g), involution(f), coc);
        for (const auto& offset : lhs.support()) {
          window.for_each_site([&](std::size_t, const LatticePoint& q) {
            assoc = std::max(assoc,
                             std::abs(lhs.coeff(offset).value(q) - rhs.coeff(offset).value(q)));
          });
        }
        for (const auto& offset : anti_lhs.support()) {
          window.for_each_site([&](std::size_t, const LatticePoint& q) {
            anti = std::max(anti, std::abs(anti_lhs.coeff(offset).value(q) -
                                           anti_rhs.coeff(offset).value(q)));
          });
        }
        double est = norm_1_inf_window(prod, window);
        double bound = norm_1_inf(f).value * norm_1_inf(g).value;
        subm = std::max(subm, est - bound);
      }
      suite.add("product_associativity", 10, assoc, tol);
      suite.add("involution_antiautomorphism", 10, anti, tol);
      suite.add("submultiplicativity", 10, std::max(0.0, subm), tol);
    }

    // representation suite on the model symbol
    Symbol model = model_from_config(cfg);
    if (model.dim() == d) {
      Box box = box_from_config(cfg);
      OneCochain lam = cochain_direct(pot);
      OperatorMatrix m = assemble(model, lam, box);
      double herm = 0.0;
      for (Eigen::Index i = 0; i < m.entries.rows(); ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
          herm = std::max(herm, std::abs(m.entries(i, j) - std::conj(m.entries(j, i))));
      suite.add("representation_hermiticity", (std::size_t)m.entries.size(), herm, 1e-13);

      Symbol f = random_symbol(rng, d, seed + 4242u, 3);
      Eigen::MatrixXcd a = assemble(involution(f), lam, box).entries;
      Eigen::MatrixXcd b = assemble(f, lam, box).entries.adjoint();
      suite.add("adjoint_covariance", (std::size_t)a.size(), (a - b).cwiseAbs().maxCoeff(),
                1e-13);

      double defect = homomorphism_defect(model, model, lam, coc, box);
      suite.add("homomorphism_defect", 1, defect, 1e-10);
    }

    // triangle-area bound (optional)
    if (checks.at("triangle_bound").get<bool>()) {
      auto tris = random_triangles(d, samples, range, seed + 99u);
      auto rep = check_triangle_bound(pot, tris);
      suite.add_bool("triangle_bound", rep.checked, rep.pass,
                     "max ratio " + fmt(rep.max_ratio));
    }
  }

  // report
  std::string out_dir = cfg.at("output").get<std::string>();
  if (out_dir.empty()) out_dir = default_output("check");
  fs::create_directories(out_dir);
  json report;
  report["pass"] = suite.all_pass();
  report["tol_default"] = suite.tol();
  json rows = json::array();
  for (const auto& r : suite.rows()) {
    rows.push_back(json{{"name", r.name},
                        {"samples", r.samples},
                        {"max_defect", r.max_defect},
                        {"tol", r.tol},
                        {"pass", r.pass},
                        {"note", r.note}});
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "  max_defect=" << fmt(r.max_defect)
              << " tol=" << fmt(r.tol) << (r.note.empty() ? "" : "  " + r.note) << "\n";
  }
  report["checks"] = rows;
  report["config"] = cfg;
  std::ofstream os(fs::path(out_dir) / "check_report.json", std::ios::binary);
  os << report.dump(2) << "\n";
  std::cout << (suite.all_pass() ? "CHECK PASS" : "CHECK FAIL") << "  (report: " << out_dir
            << "/check_report.json)\n";
  return suite.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// scan / butterfly / gaps
// ---------------------------------------------------------------------------

SpectrumScan scan_from_config(const json& cfg) {
  MagneticPotential pot = potential_from_config(cfg);
  Symbol model = model_from_config(cfg);
  SymbolFamily family = SymbolFamily::constant(model);
  CocycleField field = field_from_config(cfg, pot);
  Box box = box_from_config(cfg);
  ParameterGrid grid = grid_from_config(cfg);
  CochainPolicy policy = cochain_policy_from_string(cfg.at("cochain_policy").get<std::string>());
  int workers = cfg.at("workers").get<int>();
  SpectrumScan scan = spectrum_scan(family, field, policy, box, grid, workers);
  scan.seed = cfg.at("seed").get<std::uint64_t>();
  return scan;
}

void write_config_echo(const std::string& dir, const json& cfg) {
  std::ofstream os(fs::path(dir) / "config.json", std::ios::binary);
  os << cfg.dump(2) << "\n";
}

int run_scan(const json& cfg) {
  SpectrumScan scan = scan_from_config(cfg);
  std::string out_dir = cfg.at("output").get<std::string>();
  if (out_dir.empty()) out_dir = default_output("scan");
  write_scan(out_dir, scan);
  write_config_echo(out_dir, cfg);
  std::cout << "scan: " << scan.grid.size() << " grid points written to " << out_dir << "\n";
  return 0;
}

int run_butterfly(const json& cfg) {
  SpectrumScan scan = scan_from_config(cfg);
  std::string out_dir = cfg.at("output").get<std::string>();
  if (out_dir.empty()) out_dir = default_output("butterfly");
  fs::create_directories(out_dir);
  std::ofstream os(fs::path(out_dir) / "butterfly.csv", std::ios::binary);
  os << "epsilon,eigenvalue\n";
  for (std::size_t i = 0; i < scan.grid.size(); ++i)
    for (double v : scan.spectra[i].values)
      os << fmt(scan.grid.points[i]) << "," << fmt(v) << "\n";
  write_config_echo(out_dir, cfg);
  std::cout << "butterfly: " << scan.grid.size() << " columns written to " << out_dir
            << "/butterfly.csv\n";
  return 0;
}

int run_gaps(const json& cfg, const std::string& scan_dir) {
  SpectrumScan scan = read_scan(scan_dir);
  double resolution = cfg.at("gaps").at("resolution").get<double>();
  if (resolution <= 0.0) {
    double sup = 0.0;
    for (const auto& s : scan.spectra) sup = std::max(sup, s.radius());
    resolution = 1e-3 * std::max(1.0, sup);
  }
  auto rows = gap_persistence_report(scan, resolution);

  std::string out_dir = cfg.at("output").get<std::string>();
  if (out_dir.empty()) out_dir = default_output("gaps");
  fs::create_directories(out_dir);
  {
    std::ofstream os(fs::path(out_dir) / "gaps.csv", std::ios::binary);
    os << "epsilon,gap_lo,gap_hi,persist_left_steps,persist_right_steps,to_left_edge,"
          "to_right_edge\n";
    for (const auto& r : rows)
      os << fmt(r.eps) << "," << fmt(r.gap.lo) << "," << fmt(r.gap.hi) << "," << r.persist_left
         << "," << r.persist_right << "," << (r.to_left_edge ? 1 : 0) << ","
         << (r.to_right_edge ? 1 : 0) << "\n";
  }
  {
    // outer probe on the middle third of each gap; inner probe on a small
    // interval around the gap's lower edge point
    std::ofstream os(fs::path(out_dir) / "probes.csv", std::ios::binary);
    os << "epsilon,gap_lo,gap_hi,outer_steps_left,outer_steps_right,outer_min_margin,"
          "inner_steps_left,inner_steps_right\n";
    for (const auto& r : rows) {
      double w = r.gap.width();
      Interval k{r.gap.lo + w / 3.0, r.gap.hi - w / 3.0};
      ProbeVerdict outer = outer_continuity_probe(scan, r.eps, k);
      Interval o{r.gap.lo - resolution, r.gap.lo + resolution};
      ProbeVerdict inner = inner_continuity_probe(scan, r.eps, o);
      os << fmt(r.eps) << "," << fmt(r.gap.lo) << "," << fmt(r.gap.hi) << ","
         << (outer.vacuous ? -1 : outer.steps_left) << ","
         << (outer.vacuous ? -1 : outer.steps_right) << ","
         << fmt(outer.vacuous ? 0.0 : outer.min_margin) << ","
         << (inner.vacuous ? -1 : inner.steps_left) << ","
         << (inner.vacuous ? -1 : inner.steps_right) << "\n";
    }
  }
  std::cout << "gaps: " << rows.size() << " gap rows (resolution " << fmt(resolution)
            << ") written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magspec: spectra of magnetic lattice operators under parameter variation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough(true);

  std::string config_path;
  std::vector<std::string> set_overrides;
  std::string scan_dir;
  double flag_B = std::nan("");
  std::pair<int, int> flag_flux{0, 0};
  long flag_L = -1;
  int flag_grid_n = -1;
  std::string flag_policy, flag_out;
  long long flag_seed = -1;
  int flag_workers = -1;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--set", set_overrides, "override a config entry: key.path=value");
  app.add_option("-B,--field-strength", flag_B, "potential field strength B");
  app.add_option("--flux", flag_flux, "rational flux p q (sets B = 2 pi p/q)");
  app.add_option("-L,--box-radius", flag_L, "Dirichlet box radius");
  app.add_option("--grid-n", flag_grid_n, "uniform grid size");
  app.add_option("--policy", flag_policy, "cochain policy: direct|transversal");
  app.add_option("--out", flag_out, "output directory");
  app.add_option("--seed", flag_seed, "seed for randomized checks");
  app.add_option("--workers", flag_workers, "scan worker threads");

  CLI::App* cmd_check = app.add_subcommand("check", "run the algebraic identity suites");
  CLI::App* cmd_scan = app.add_subcommand("scan", "spectrum scan over the parameter grid");
  CLI::App* cmd_butterfly =
      app.add_subcommand("butterfly", "emit (epsilon, eigenvalue) scatter data");
  CLI::App* cmd_gaps = app.add_subcommand("gaps", "gap persistence report from a scan");
  cmd_gaps->add_option("--scan-dir", scan_dir, "directory written by 'scan'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    json cfg = default_config();
    // butterfly spans the full flux quantum by default: eps = flux fraction
    if (cmd_butterfly->parsed()) cfg["potential"]["B"] = kTwoPi;
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw ConfigError("cannot open config file '" + config_path + "'");
      json file_cfg;
      try {
        file_cfg = json::parse(is);
      } catch (const json::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
      }
      merge_into(cfg, file_cfg);
    }
    apply_set_overrides(cfg, set_overrides);
    if (!std::isnan(flag_B)) cfg["potential"]["B"] = flag_B;
    if (flag_flux.second != 0)
      cfg["potential"]["B"] = kTwoPi * (double)flag_flux.first / (double)flag_flux.second;
    if (flag_L >= 0) cfg["box"]["L"] = flag_L;
    if (flag_grid_n > 0) cfg["grid"] = json{{"n", flag_grid_n}};
    if (!flag_policy.empty()) cfg["cochain_policy"] = flag_policy;
    if (!flag_out.empty()) cfg["output"] = flag_out;
    if (flag_seed >= 0) cfg["seed"] = flag_seed;
    if (flag_workers > 0) cfg["workers"] = flag_workers;

    if (cmd_check->parsed()) return run_check(cfg);
    if (cmd_scan->parsed()) return run_scan(cfg);
    if (cmd_butterfly->parsed()) return run_butterfly(cfg);
    if (cmd_gaps->parsed()) return run_gaps(cfg, scan_dir);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
