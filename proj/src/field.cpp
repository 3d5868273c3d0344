#include "magspec/field.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace magspec {

using nlohmann::json;
namespace fs = std::filesystem;

ParameterGrid ParameterGrid::uniform(int n) {
  if (n < 2) throw std::invalid_argument("grid: need at least 2 points");
  ParameterGrid g;
  g.points.resize((std::size_t)n);
  for (int i = 0; i < n; ++i) g.points[(std::size_t)i] = (double)i / (double)(n - 1);
  return g;
}

ParameterGrid ParameterGrid::refined() const {
  ParameterGrid g;
  g.refinement_level = refinement_level + 1;
  g.points.reserve(points.size() * 2 - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    g.points.push_back(points[i]);
    g.points.push_back(0.5 * (points[i] + points[i + 1]));
  }
  g.points.push_back(points.back());
  return g;
}

double ParameterGrid::spacing() const {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    s = std::max(s, points[i + 1] - points[i]);
  return s;
}

std::size_t ParameterGrid::index_of(double eps, double tol) const {
  auto it = std::lower_bound(points.begin(), points.end(), eps - tol);
  if (it == points.end() || std::abs(*it - eps) > tol)
    throw std::invalid_argument("grid: eps=" + std::to_string(eps) + " is not a grid point");
  return (std::size_t)(it - points.begin());
}

double triangle_area(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c) {
  double uu = 0.0, vv = 0.0, uv = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    double u = (double)(b[i] - a[i]);
    double v = (double)(c[i] - a[i]);
    uu += u * u;
    vv += v * v;
    uv += u * v;
  }
  return 0.5 * std::sqrt(std::max(0.0, uu * vv - uv * uv));
}

CocycleField scaled_cocycle_field(const MagneticPotential& pot) {
  CocycleField field;
  field.dim = pot.dim();
  field.id = "scaled(" + pot.kind() + ")";
  TwoCocycle base = cocycle_from_potential(pot);
  field.at = [base](double eps) {
    auto fn = [base, eps](const LatticePoint& q, const LatticePoint& x, const LatticePoint& y) {
      return eps * base.phase(q, x, y);
    };
    return TwoCocycle(base.dim(), fn, base.id() + "@eps");
  };
  field.modulus = [](double e1, double e2, const LatticePoint& x, const LatticePoint& y) {
    LatticePoint origin(x.dim());
    double area = triangle_area(origin, x, x + y);
    return std::expm1(std::abs(e1 - e2) * area);
  };
  field.base_potential = pot;
  field.scale = [](double eps) { return eps; };
  return field;
}

CocycleField constant_cocycle_field(const MagneticPotential& pot) {
  CocycleField field;
  field.dim = pot.dim();
  field.id = "constant(" + pot.kind() + ")";
  TwoCocycle base = cocycle_from_potential(pot);
  field.at = [base](double) { return base; };
  field.modulus = [](double, double, const LatticePoint&, const LatticePoint&) { return 0.0; };
  field.base_potential = pot;
  field.scale = [](double) { return 1.0; };
  return field;
}

CocycleField tabulated_cocycle_field(const MagneticPotential& pot,
                                     std::vector<double> eps_table,
                                     std::vector<double> coef_table) {
  if (eps_table.size() != coef_table.size() || eps_table.empty())
    throw std::invalid_argument("tabulated field: table sizes mismatch or empty");
  for (std::size_t i = 0; i + 1 < eps_table.size(); ++i)
    if (eps_table[i] >= eps_table[i + 1])
      throw std::invalid_argument("tabulated field: eps table must be increasing");
  auto coef_at = [eps_table, coef_table](double eps) {
    auto it = std::upper_bound(eps_table.begin(), eps_table.end(), eps);
    if (it == eps_table.begin()) return coef_table.front();
    return coef_table[(std::size_t)(it - eps_table.begin()) - 1];
  };
  CocycleField field;
  field.dim = pot.dim();
  field.id = "tabulated(" + pot.kind() + ")";
  TwoCocycle base = cocycle_from_potential(pot);
  field.at = [base, coef_at](double eps) {
    double c = coef_at(eps);
    auto fn = [base, c](const LatticePoint& q, const LatticePoint& x, const LatticePoint& y) {
      return c * base.phase(q, x, y);
    };
    return TwoCocycle(base.dim(), fn, base.id() + "@step");
  };
  field.base_potential = pot;
  field.scale = coef_at;
  return field;
}

SymbolFamily SymbolFamily::constant(const Symbol& s) {
  SymbolFamily fam;
  fam.dim = s.dim();
  fam.id = "constant(" + s.id() + ")";
  fam.at = [s](double) { return s; };
  fam.shared_support = s.support();
  return fam;
}

TriangleBoundReport check_triangle_bound(
    const MagneticPotential& pot, const std::vector<std::array<LatticePoint, 3>>& samples) {
  TriangleBoundReport rep;
  for (const auto& [a, b, c] : samples) {
    double sum = std::abs(pot.phase(a, b) + pot.phase(b, c) + pot.phase(c, a));
    double area = triangle_area(a, b, c);
    ++rep.checked;
    if (area == 0.0) {
      rep.max_degenerate_sum = std::max(rep.max_degenerate_sum, sum);
    } else if (sum / area > rep.max_ratio) {
      rep.max_ratio = sum / area;
      rep.worst = {a, b, c};
    }
  }
  rep.pass = rep.max_ratio <= 1.0 + 1e-12 && rep.max_degenerate_sum <= 1e-12;
  return rep;
}

std::vector<std::array<LatticePoint, 3>> random_triangles(int d, std::size_t count,
                                                          Coord range, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Coord> pick(-range, range);
  std::vector<std::array<LatticePoint, 3>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::array<LatticePoint, 3> tri;
    for (auto& p : tri) {
      p = LatticePoint((std::size_t)d);
      for (int k = 0; k < d; ++k) p[k] = pick(rng);
    }
    out.push_back(tri);
  }
  return out;
}

namespace {

double pair_defect(const CocycleField& field, double e1, double e2, const LatticePoint& x,
                   const LatticePoint& y, const Box& window) {
  TwoCocycle c1 = field.at(e1);
  TwoCocycle c2 = field.at(e2);
  double sup = 0.0;
  window.for_each_site([&](std::size_t, const LatticePoint& q) {
    double t1 = c1.phase(q, x, y);
    double t2 = c2.phase(q, x, y);
    sup = std::max(sup, 2.0 * std::abs(std::sin(0.5 * (t2 - t1))));
  });
  return sup;
}

}  // namespace

FieldContinuityReport check_field_continuity(const CocycleField& field,
                                             const LatticePoint& x, const LatticePoint& y,
                                             const ParameterGrid& grid, const Box& window) {
  if (grid.size() < 3)
    throw std::invalid_argument("check_field_continuity: need at least 3 grid points");
  FieldContinuityReport rep;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    rep.defect_coarse.push_back(
        pair_defect(field, grid.points[i], grid.points[i + 1], x, y, window));
  ParameterGrid fine = grid.refined();
  for (std::size_t i = 0; i + 1 < fine.size(); ++i)
    rep.defect_refined.push_back(
        pair_defect(field, fine.points[i], fine.points[i + 1], x, y, window));
  rep.max_coarse = *std::max_element(rep.defect_coarse.begin(), rep.defect_coarse.end());
  rep.max_refined = *std::max_element(rep.defect_refined.begin(), rep.defect_refined.end());
  if (rep.max_coarse < 1e-14) {
    rep.ratio = 0.0;
    rep.pass = true;
  } else {
    rep.ratio = rep.max_refined / rep.max_coarse;
    rep.pass = rep.ratio <= 0.75;
  }
  return rep;
}

namespace {

double family_pair_defect(const SymbolFamily& family, double e1, double e2,
                          const Box& window) {
  Symbol a = family.at(e1);
  Symbol b = family.at(e2);
  double sup = 0.0;
  for (const auto& offset : family.shared_support) {
    CoefficientField ca = a.coeff(offset), cb = b.coeff(offset);
    window.for_each_site([&](std::size_t, const LatticePoint& q) {
      sup = std::max(sup, std::abs(cb.value(q) - ca.value(q)));
    });
  }
  return sup;
}

}  // namespace

FieldContinuityReport check_family_continuity(const SymbolFamily& family,
                                              const ParameterGrid& grid, const Box& window) {
  if (grid.size() < 3)
    throw std::invalid_argument("check_family_continuity: need at least 3 grid points");
  FieldContinuityReport rep;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    rep.defect_coarse.push_back(
        family_pair_defect(family, grid.points[i], grid.points[i + 1], window));
  ParameterGrid fine = grid.refined();
  for (std::size_t i = 0; i + 1 < fine.size(); ++i)
    rep.defect_refined.push_back(
        family_pair_defect(family, fine.points[i], fine.points[i + 1], window));
  rep.max_coarse = *std::max_element(rep.defect_coarse.begin(), rep.defect_coarse.end());
  rep.max_refined = *std::max_element(rep.defect_refined.begin(), rep.defect_refined.end());
  if (rep.max_coarse < 1e-14) {
    rep.ratio = 0.0;
    rep.pass = true;
  } else {
    rep.ratio = rep.max_refined / rep.max_coarse;
    rep.pass = rep.ratio <= 0.75;
  }
  return rep;
}

std::pair<Symbol, TwoCocycle> evaluate_at(const SymbolFamily& family,
                                          const CocycleField& field, double eps) {
  if (eps < 0.0 || eps > 1.0)
    throw std::invalid_argument("evaluate_at: eps=" + std::to_string(eps) +
                                " outside [0,1]");
  return {family.at(eps), field.at(eps)};
}

std::string to_string(CochainPolicy p) {
  return p == CochainPolicy::Direct ? "direct" : "transversal";
}

CochainPolicy cochain_policy_from_string(const std::string& s) {
  if (s == "direct") return CochainPolicy::Direct;
  if (s == "transversal") return CochainPolicy::Transversal;
  throw std::invalid_argument("unknown cochain policy '" + s + "'");
}

OneCochain cochain_for(const CocycleField& field, double eps, CochainPolicy policy) {
  if (policy == CochainPolicy::Direct) {
    if (field.base_potential) {
      MagneticPotential pot = *field.base_potential;
      double c = field.scale ? field.scale(eps) : 1.0;
      auto fn = [pot, c](const LatticePoint& q, const LatticePoint& x) {
        return c * pot.phase(q, q + x);
      };
      return OneCochain(pot.dim(), fn, "lambda_phi@eps");
    }
    return cochain_direct(potential_from_cocycle(field.at(eps)));
  }
  return cochain_transversal(field.at(eps));
}

SpectrumScan spectrum_scan(const SymbolFamily& family, const CocycleField& field,
                           CochainPolicy policy, const Box& box, const ParameterGrid& grid,
                           int workers) {
  if (family.dim != field.dim || family.dim != box.dim())
    throw std::invalid_argument("scan: dimension mismatch");
  SpectrumScan scan;
  scan.grid = grid;
  scan.spectra.resize(grid.size());
  scan.family_id = family.id;
  scan.field_id = field.id;
  scan.policy = policy;
  scan.box = box;

  Box sa_window = Box::dirichlet(family.dim, 2);
  const std::size_t n = grid.size();
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto work = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      double eps = grid.points[i];
      try {
        Symbol sym = family.at(eps);
        if (!is_selfadjoint(sym, sa_window, 1e-10))
          throw std::invalid_argument("symbol family is not self-adjoint");
        OneCochain lam = cochain_for(field, eps, policy);
        Spectrum s = eigenvalues(assemble(sym, lam, box));
        s.epsilon = eps;
        s.source = family.id;
        scan.spectra[i] = std::move(s);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error)
          error = std::make_exception_ptr(
              std::runtime_error("scan failed at eps=" + std::to_string(eps) + ": " + e.what()));
        return;
      }
    }
  };

  if (workers <= 0) workers = (int)std::thread::hardware_concurrency();
  workers = std::max(1, std::min(workers, (int)n));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve((std::size_t)workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return scan;
}

namespace {

double interval_distance(const Spectrum& s, const Interval& k) {
  // distance from the set to the closed interval [lo, hi]
  double d = std::numeric_limits<double>::infinity();
  for (double v : s.values) {
    double dv = v < k.lo ? k.lo - v : (v > k.hi ? v - k.hi : 0.0);
    d = std::min(d, dv);
  }
  return d;
}

bool meets_closed(const Spectrum& s, const Interval& k) {
  auto it = std::lower_bound(s.values.begin(), s.values.end(), k.lo);
  return it != s.values.end() && *it <= k.hi;
}

bool meets_open(const Spectrum& s, const Interval& o) {
  auto it = std::upper_bound(s.values.begin(), s.values.end(), o.lo);
  return it != s.values.end() && *it < o.hi;
}

}  // namespace

ProbeVerdict outer_continuity_probe(const SpectrumScan& scan, double eps0, Interval k) {
  ProbeVerdict v;
  v.center = scan.grid.index_of(eps0);
  v.spacing = scan.grid.spacing();
  if (meets_closed(scan.spectra[v.center], k)) {
    v.vacuous = true;  // K already meets sigma(eps0): nothing to probe
    return v;
  }
  std::size_t lo = v.center, hi = v.center;
  while (lo > 0 && !meets_closed(scan.spectra[lo - 1], k)) --lo;
  while (hi + 1 < scan.grid.size() && !meets_closed(scan.spectra[hi + 1], k)) ++hi;
  v.lo = lo;
  v.hi = hi;
  v.steps_left = (int)(v.center - lo);
  v.steps_right = (int)(hi - v.center);
  v.hits_left_edge = lo == 0;
  v.hits_right_edge = hi + 1 == scan.grid.size();
  v.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = lo; i <= hi; ++i)
    v.min_margin = std::min(v.min_margin, interval_distance(scan.spectra[i], k));
  return v;
}

ProbeVerdict inner_continuity_probe(const SpectrumScan& scan, double eps0, Interval o) {
  ProbeVerdict v;
  v.center = scan.grid.index_of(eps0);
  v.spacing = scan.grid.spacing();
  if (!meets_open(scan.spectra[v.center], o)) {
    v.vacuous = true;  // O misses sigma(eps0): nothing to probe
    return v;
  }
  std::size_t lo = v.center, hi = v.center;
  while (lo > 0 && meets_open(scan.spectra[lo - 1], o)) --lo;
  while (hi + 1 < scan.grid.size() && meets_open(scan.spectra[hi + 1], o)) ++hi;
  v.lo = lo;
  v.hi = hi;
  v.steps_left = (int)(v.center - lo);
  v.steps_right = (int)(hi - v.center);
  v.hits_left_edge = lo == 0;
  v.hits_right_edge = hi + 1 == scan.grid.size();
  v.min_margin = 0.0;
  return v;
}

namespace {

// The gap of sigma containing the point m, or width 0 when m touches the set
// or leaves the spectrum range.
Gap gap_around(const Spectrum& s, double m) {
  const auto& v = s.values;
  auto it = std::lower_bound(v.begin(), v.end(), m);
  if (it == v.begin() || it == v.end()) return {m, m};
  if (*it == m) return {m, m};
  return {*(it - 1), *it};
}

}  // namespace

std::vector<GapTrackRow> gap_persistence_report(const SpectrumScan& scan, double resolution) {
  std::vector<GapTrackRow> rows;
  const std::size_t n = scan.grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (const Gap& g : gaps(scan.spectra[i], resolution)) {
      GapTrackRow row;
      row.eps = scan.grid.points[i];
      row.grid_index = i;
      row.gap = g;
      double m = g.mid();
      std::size_t j = i;
      while (j > 0 && gap_around(scan.spectra[j - 1], m).width() >= resolution) --j;
      row.persist_left = (int)(i - j);
      row.to_left_edge = j == 0;
      j = i;
      while (j + 1 < n && gap_around(scan.spectra[j + 1], m).width() >= resolution) ++j;
      row.persist_right = (int)(j - i);
      row.to_right_edge = j + 1 == n;
      rows.push_back(row);
    }
  }
  return rows;
}

NormCurveReport norm_curve(const SpectrumScan& scan) {
  NormCurveReport rep;
  rep.norms.reserve(scan.spectra.size());
  for (const Spectrum& s : scan.spectra) rep.norms.push_back(s.radius());
  rep.sup = *std::max_element(rep.norms.begin(), rep.norms.end());
  for (std::size_t i = 0; i + 1 < rep.norms.size(); ++i)
    rep.max_jump = std::max(rep.max_jump, std::abs(rep.norms[i + 1] - rep.norms[i]));
  return rep;
}

FieldNormReport field_norm_estimate(const SymbolFamily& family, const CocycleField& field,
                                    const Box& box, const ParameterGrid& grid,
                                    CochainPolicy policy, int workers) {
  FieldNormReport rep;
  rep.coarse = norm_curve(spectrum_scan(family, field, policy, box, grid, workers));
  rep.refined = norm_curve(spectrum_scan(family, field, policy, box, grid.refined(), workers));
  if (rep.coarse.max_jump < 1e-14) {
    rep.ratio = 0.0;
    rep.pass = true;
  } else {
    rep.ratio = rep.refined.max_jump / rep.coarse.max_jump;
    rep.pass = rep.ratio <= 0.75;
  }
  return rep;
}

namespace {

json box_to_json(const Box& box) {
  json j;
  j["d"] = box.dim();
  j["boundary"] = box.boundary() == Boundary::Dirichlet ? "dirichlet" : "periodic";
  if (box.boundary() == Boundary::Dirichlet) {
    j["L"] = box.radius();
  } else {
    j["sides"] = box.sides();
    j["period"] = box.period();
  }
  return j;
}

Box box_from_json(const json& j) {
  std::string boundary = j.at("boundary").get<std::string>();
  int d = j.at("d").get<int>();
  if (boundary == "dirichlet") return Box::dirichlet(d, j.at("L").get<Coord>());
  return Box::periodic(d, j.at("sides").get<std::vector<Coord>>(),
                       j.at("period").get<std::vector<Coord>>());
}

std::string spectrum_file_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "spectrum_%04zu.csv", i);
  return buf;
}

}  // namespace

void write_scan(const std::string& directory, const SpectrumScan& scan) {
  fs::create_directories(directory);
  json manifest;
  manifest["format"] = "magspec-scan/1";
  manifest["family"] = scan.family_id;
  manifest["field"] = scan.field_id;
  manifest["cochain_policy"] = to_string(scan.policy);
  manifest["box"] = box_to_json(scan.box);
  manifest["seed"] = scan.seed;
  manifest["code_version"] = "0.1.0";
  manifest["refinement_level"] = scan.grid.refinement_level;
  json pts = json::array();
  for (double p : scan.grid.points) pts.push_back(p);
  manifest["grid"] = pts;
  json files = json::array();
  for (std::size_t i = 0; i < scan.spectra.size(); ++i) files.push_back(spectrum_file_name(i));
  manifest["files"] = files;
  {
    std::ofstream os(fs::path(directory) / "manifest.json", std::ios::binary);
    os << manifest.dump(2) << "\n";
  }
  for (std::size_t i = 0; i < scan.spectra.size(); ++i) {
    std::ofstream os(fs::path(directory) / spectrum_file_name(i), std::ios::binary);
    write_spectrum_csv(os, scan.spectra[i]);
  }
}

SpectrumScan read_scan(const std::string& directory) {
  std::ifstream ms(fs::path(directory) / "manifest.json");
  if (!ms) throw std::runtime_error("read_scan: no manifest in " + directory);
  json manifest = json::parse(ms);
  if (manifest.at("format").get<std::string>() != "magspec-scan/1")
    throw std::runtime_error("read_scan: unknown manifest format");
  SpectrumScan scan;
  scan.family_id = manifest.at("family").get<std::string>();
  scan.field_id = manifest.at("field").get<std::string>();
  scan.policy = cochain_policy_from_string(manifest.at("cochain_policy").get<std::string>());
  scan.box = box_from_json(manifest.at("box"));
  scan.seed = manifest.at("seed").get<std::uint64_t>();
  scan.grid.refinement_level = manifest.at("refinement_level").get<int>();
  scan.grid.points = manifest.at("grid").get<std::vector<double>>();
  for (const auto& name : manifest.at("files")) {
    std::ifstream is(fs::path(directory) / name.get<std::string>());
    if (!is) throw std::runtime_error("read_scan: missing file " + name.get<std::string>());
    scan.spectra.push_back(read_spectrum_csv(is));
  }
  if (scan.spectra.size() != scan.grid.points.size())
    throw std::runtime_error("read_scan: file count does not match grid");
  return scan;
}

}  // namespace magspec
