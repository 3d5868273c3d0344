#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "magspec/cocycle.hpp"
#include "magspec/spectrum.hpp"
#include "magspec/symbol.hpp"

namespace magspec {

/// Finite discretization of the parameter space [0, 1].
struct ParameterGrid {
  std::vector<double> points;  // sorted, distinct, within [0,1]
  int refinement_level = 0;

  static ParameterGrid uniform(int n);
  /// Insert midpoints: n points become 2n - 1.
  ParameterGrid refined() const;
  std::size_t size() const { return points.size(); }
  double spacing() const;  // max adjacent spacing
  std::size_t index_of(double eps, double tol = 1e-12) const;  // throws if absent
};

/// Family of 2-cocycles over [0, 1] with an optional continuity modulus
/// bounding sup_q |omega_eps' - omega_eps| for fixed (x, y).
struct CocycleField {
  int dim = 0;
  std::function<TwoCocycle(double)> at;
  std::function<double(double, double, const LatticePoint&, const LatticePoint&)> modulus;
  /// Base potential and scale coefficient, when the field is built from one;
  /// cochain policies use them to construct lambda^eps without reconstruction.
  std::optional<MagneticPotential> base_potential;
  std::function<double(double)> scale;  // coefficient c(eps) applied to the base phase
  std::string id;
};

/// The scaling family omega(q,eps;x,y) = exp(i eps [base cocycle phase]).
/// The modulus is exp(|eps - eps'| A) - 1 with A the area of the triangle
/// (0, x, x+y); it bounds the defect whenever the potential satisfies the
/// triangle-area bound.
CocycleField scaled_cocycle_field(const MagneticPotential& pot);

/// Constant-in-eps field of the cocycle of a fixed potential.
CocycleField constant_cocycle_field(const MagneticPotential& pot);

/// Step-interpolated coefficient c(eps) from a table (the coefficient of the
/// largest tabulated eps <= the query). A step table is the standard way to
/// build a deliberately discontinuous field.
CocycleField tabulated_cocycle_field(const MagneticPotential& pot,
                                     std::vector<double> eps_table,
                                     std::vector<double> coef_table);

/// Symbol family eps -> h^eps with a shared finite support.
struct SymbolFamily {
  int dim = 0;
  std::function<Symbol(double)> at;
  std::vector<LatticePoint> shared_support;
  std::string id;

  static SymbolFamily constant(const Symbol& s);
};

/// Triangle-area bound |phi(x,y) + phi(y,z) + phi(z,x)| <= area(x,y,z).
struct TriangleBoundReport {
  double max_ratio = 0.0;            // over nondegenerate triangles
  std::array<LatticePoint, 3> worst;
  double max_degenerate_sum = 0.0;   // |phase sum| over collinear triples
  std::size_t checked = 0;
  bool pass = false;
};

/// Area of the triangle in R^d spanned by three lattice points.
double triangle_area(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c);

TriangleBoundReport check_triangle_bound(
    const MagneticPotential& pot,
    const std::vector<std::array<LatticePoint, 3>>& samples);

/// Random sample triples for the triangle bound check.
std::vector<std::array<LatticePoint, 3>> random_triangles(int d, std::size_t count,
                                                          Coord range, std::uint64_t seed);

struct FieldContinuityReport {
  std::vector<double> defect_coarse;   // per adjacent pair of the input grid
  std::vector<double> defect_refined;  // per adjacent pair of the refined grid
  double max_coarse = 0.0;
  double max_refined = 0.0;
  double ratio = 0.0;  // max_refined / max_coarse (0 when both vanish)
  bool pass = false;   // ratio <= 0.75, or both maxima negligible
};

/// Empirical continuity of eps -> omega(eps; x, y): sup over the window of
/// |exp(i theta') - exp(i theta)| per adjacent grid pair, compared against
/// the same quantity on the once-refined grid.
FieldContinuityReport check_field_continuity(const CocycleField& field,
                                             const LatticePoint& x, const LatticePoint& y,
                                             const ParameterGrid& grid, const Box& window);

/// Same refinement statistic for a symbol family: per adjacent grid pair,
/// max over the shared support of sup_q |h_eps'(q;y) - h_eps(q;y)|.
FieldContinuityReport check_family_continuity(const SymbolFamily& family,
                                              const ParameterGrid& grid, const Box& window);

/// Pointwise evaluation map: the pair (h^eps, omega_eps).
std::pair<Symbol, TwoCocycle> evaluate_at(const SymbolFamily& family,
                                          const CocycleField& field, double eps);

enum class CochainPolicy { Direct, Transversal };

std::string to_string(CochainPolicy p);
CochainPolicy cochain_policy_from_string(const std::string& s);

/// The 1-cochain lambda^eps selected by the policy. Direct uses the base
/// potential phase scaled by c(eps) when the field carries one (otherwise the
/// potential is reconstructed from the cocycle); transversal uses
/// omega_eps(0; q, x).
OneCochain cochain_for(const CocycleField& field, double eps, CochainPolicy policy);

struct SpectrumScan {
  ParameterGrid grid;
  std::vector<Spectrum> spectra;  // one per grid point, same order
  std::string family_id, field_id;
  CochainPolicy policy = CochainPolicy::Direct;
  Box box = Box::dirichlet(1, 0);
  std::uint64_t seed = 0;
};

/// One spectrum per grid point, deterministic given inputs. `workers` > 1
/// solves grid points concurrently; 0 selects the hardware concurrency.
SpectrumScan spectrum_scan(const SymbolFamily& family, const CocycleField& field,
                           CochainPolicy policy, const Box& box, const ParameterGrid& grid,
                           int workers = 1);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Result of a Definition-style continuity probe on a finished scan.
struct ProbeVerdict {
  bool vacuous = false;      // precondition failed; not an error
  std::size_t center = 0;    // grid index of eps0
  std::size_t lo = 0, hi = 0;       // inclusive index range of the neighborhood
  int steps_left = 0, steps_right = 0;
  bool hits_left_edge = false, hits_right_edge = false;
  double min_margin = 0.0;   // min over N of dist(K, sigma_eps); outer probe only
  double spacing = 0.0;      // grid spacing the verdict is valid at
};

/// Largest grid neighborhood of eps0 on which the compact interval K stays
/// disjoint from the spectrum. Vacuous if K already meets sigma(eps0).
ProbeVerdict outer_continuity_probe(const SpectrumScan& scan, double eps0, Interval k);

/// Largest grid neighborhood of eps0 on which the open interval O keeps
/// meeting the spectrum. Vacuous if O misses sigma(eps0).
ProbeVerdict inner_continuity_probe(const SpectrumScan& scan, double eps0, Interval o);

struct GapTrackRow {
  double eps = 0.0;
  std::size_t grid_index = 0;
  Gap gap;
  int persist_left = 0, persist_right = 0;  // grid steps until the gap closes
  bool to_left_edge = false, to_right_edge = false;
};

/// For every gap of width >= resolution at every grid point, walk the grid in
/// both directions until the gap (tracked by its midpoint) closes below the
/// resolution.
std::vector<GapTrackRow> gap_persistence_report(const SpectrumScan& scan, double resolution);

struct NormCurveReport {
  std::vector<double> norms;  // spectral norm per grid point
  double sup = 0.0;
  double max_jump = 0.0;  // max adjacent difference
};

NormCurveReport norm_curve(const SpectrumScan& scan);

/// Per-eps spectral norm of the assembled operator plus a twofold-refinement
/// continuity check on the norm curve (ratio <= 0.75 passes).
struct FieldNormReport {
  NormCurveReport coarse, refined;
  double ratio = 0.0;
  bool pass = false;
};

FieldNormReport field_norm_estimate(const SymbolFamily& family, const CocycleField& field,
                                    const Box& box, const ParameterGrid& grid,
                                    CochainPolicy policy = CochainPolicy::Direct,
                                    int workers = 1);

/// Scan persistence: manifest.json plus one spectrum CSV per grid point.
void write_scan(const std::string& directory, const SpectrumScan& scan);
SpectrumScan read_scan(const std::string& directory);

}  // namespace magspec
