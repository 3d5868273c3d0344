#pragma once

#include <functional>
#include <string>

#include "magspec/lattice.hpp"
#include "magspec/potential.hpp"

namespace magspec {

/// Normalized 2-cocycle on Z^d with values in unit phases. The stored phase
/// is the real argument; the cocycle value itself is exp(i*phase). All group
/// identities are checked on phases mod 2pi, never on complex numbers.
class TwoCocycle {
 public:
  using PhaseFn =
      std::function<double(const LatticePoint&, const LatticePoint&, const LatticePoint&)>;

  TwoCocycle(int d, PhaseFn f, std::string id = "cocycle")
      : dim_(d), fn_(std::move(f)), id_(std::move(id)) {}

  double phase(const LatticePoint& q, const LatticePoint& x, const LatticePoint& y) const {
    return fn_(q, x, y);
  }
  int dim() const { return dim_; }
  const std::string& id() const { return id_; }

  static TwoCocycle trivial(int d) {
    return TwoCocycle(d, [](const LatticePoint&, const LatticePoint&, const LatticePoint&) {
      return 0.0;
    }, "trivial");
  }

 private:
  int dim_;
  PhaseFn fn_;
  std::string id_;
};

/// Phase map lambda(q; x) trivializing a 2-cocycle (a gauge choice).
class OneCochain {
 public:
  using PhaseFn = std::function<double(const LatticePoint&, const LatticePoint&)>;

  OneCochain(int d, PhaseFn f, std::string id = "cochain")
      : dim_(d), fn_(std::move(f)), id_(std::move(id)) {}

  double phase(const LatticePoint& q, const LatticePoint& x) const { return fn_(q, x); }
  int dim() const { return dim_; }
  const std::string& id() const { return id_; }

 private:
  int dim_;
  PhaseFn fn_;
  std::string id_;
};

/// The magnetic 2-cocycle of a potential. Its phase at (q; x, y) is the real
/// sum phi(q,q+x) + phi(q+x,q+x+y) + phi(q+x+y,q), i.e. the flux through the
/// lattice triangle spanned at q; no premature exponentiation happens.
TwoCocycle cocycle_from_potential(const MagneticPotential& pot);

/// Transversal-gauge cochain lambda_t(q; x) = omega(0; q, x).
OneCochain cochain_transversal(const TwoCocycle& coc);

/// Direct cochain lambda_phi(q; x) with phase phi(q, q+x).
OneCochain cochain_direct(const MagneticPotential& pot);

/// phi'(x,y) = phi(x,y) + g(y) - g(x); defines the same 2-cocycle.
MagneticPotential gauge_transform_potential(const MagneticPotential& pot,
                                            const GaugeFunction& g);

/// Reconstruct a magnetic potential from a cocycle via
/// exp(i phi(x,y)) = omega(0; x, y-x), principal branch in (-pi, pi), with
/// values at the branch point assigned by lexicographic comparison
/// (phi = -pi when x < y, +pi when y < x). Cocycles that violate the cocycle
/// invariants beyond `invariant_tol` on a sample window are rejected.
MagneticPotential potential_from_cocycle(const TwoCocycle& coc,
                                         double invariant_tol = 1e-9);

struct DefectSite {
  double defect = 0.0;
  LatticePoint q, x, y;
};

struct CocycleReport {
  DefectSite cocycle_law;     // the 2-cocycle identity
  DefectSite normalization;   // omega(q; x, 0) = omega(q; 0, x) = 1
  DefectSite inverse_pair;    // omega(q; x, -x) = 1
  std::size_t triples_checked = 0;
  double tol = 0.0;
  bool pass = false;
  double max_defect() const {
    return std::max(cocycle_law.defect,
                    std::max(normalization.defect, inverse_pair.defect));
  }
};

/// Check the three 2-cocycle invariants for all (q, x, y) in the window.
CocycleReport verify_cocycle(const TwoCocycle& coc, const Box& window, double tol);

struct CochainReport {
  DefectSite worst;
  std::size_t triples_checked = 0;
  double tol = 0.0;
  bool pass = false;
};

/// Check the 1-cochain equation lambda(q;x) + lambda(q+x;y) - lambda(q;x+y)
/// = omega(q;x,y) mod 2pi for all (q, x, y) in the window.
CochainReport verify_cochain(const OneCochain& lam, const TwoCocycle& coc,
                             const Box& window, double tol);

}  // namespace magspec
