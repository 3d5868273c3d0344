#include "magspec/cocycle.hpp"

#include <random>
#include <stdexcept>

#include "magspec/hashrand.hpp"

namespace magspec {

TwoCocycle cocycle_from_potential(const MagneticPotential& pot) {
  int d = pot.dim();
  auto fn = [pot](const LatticePoint& q, const LatticePoint& x, const LatticePoint& y) {
    LatticePoint qx = q + x;
    LatticePoint qxy = qx + y;
    return pot.phase(q, qx) + pot.phase(qx, qxy) + pot.phase(qxy, q);
  };
  return TwoCocycle(d, fn, "magnetic(" + pot.kind() + ")");
}

OneCochain cochain_transversal(const TwoCocycle& coc) {
  int d = coc.dim();
  LatticePoint origin((std::size_t)d);
  auto fn = [coc, origin](const LatticePoint& q, const LatticePoint& x) {
    return coc.phase(origin, q, x);
  };
  return OneCochain(d, fn, "lambda_t");
}

OneCochain cochain_direct(const MagneticPotential& pot) {
  int d = pot.dim();
  auto fn = [pot](const LatticePoint& q, const LatticePoint& x) {
    return pot.phase(q, q + x);
  };
  return OneCochain(d, fn, "lambda_phi(" + pot.kind() + ")");
}

MagneticPotential gauge_transform_potential(const MagneticPotential& pot,
                                            const GaugeFunction& g) {
  if (pot.dim() != g.dim())
    throw std::invalid_argument("gauge transform: dimension mismatch");
  auto fn = [pot, g](const LatticePoint& x, const LatticePoint& y) {
    return pot.phase(x, y) + (g.value(y) - g.value(x));
  };
  return MagneticPotential::callable(pot.dim(), fn);
}

namespace {

// Random-sample invariant check used to reject non-magnetic cocycles before
// reconstruction. Deterministic via a fixed internal seed.
void reject_if_invalid(const TwoCocycle& coc, double tol) {
  int d = coc.dim();
  std::mt19937_64 rng(0x5eedu);
  std::uniform_int_distribution<Coord> pick(-4, 4);
  auto rand_point = [&]() {
    LatticePoint p((std::size_t)d);
    for (int i = 0; i < d; ++i) p[i] = pick(rng);
    return p;
  };
  LatticePoint zero((std::size_t)d);
  for (int s = 0; s < 400; ++s) {
    LatticePoint q = rand_point(), x = rand_point(), y = rand_point(), z = rand_point();
    double law = phase_defect(coc.phase(q, x + y, z) + coc.phase(q, x, y),
                              coc.phase(q + x, y, z) + coc.phase(q, x, y + z));
    double norm1 = std::abs(fold_phase(coc.phase(q, x, zero)));
    double norm2 = std::abs(fold_phase(coc.phase(q, zero, x)));
    double inv = std::abs(fold_phase(coc.phase(q, x, -x)));
    double worst = std::max(std::max(law, inv), std::max(norm1, norm2));
    if (worst > tol)
      throw std::invalid_argument(
          "potential_from_cocycle: cocycle invariants violated (defect " +
          std::to_string(worst) + " at q=" + q.str() + " x=" + x.str() + " y=" + y.str() +
          "); not a magnetic cocycle");
  }
}

}  // namespace

MagneticPotential potential_from_cocycle(const TwoCocycle& coc, double invariant_tol) {
  reject_if_invalid(coc, invariant_tol);
  int d = coc.dim();
  LatticePoint origin((std::size_t)d);
  // Only called on lexicographically ordered pairs (x < y); the callable
  // wrapper supplies the antisymmetric extension, which realizes the
  // prescribed tie-break phi = -pi when x < y.
  auto fn = [coc, origin](const LatticePoint& x, const LatticePoint& y) {
    double p = fold_phase(coc.phase(origin, x, y - x));
    if (kPi - std::abs(p) <= 1e-9) return -kPi;
    return p;
  };
  return MagneticPotential::callable(d, fn);
}

CocycleReport verify_cocycle(const TwoCocycle& coc, const Box& window, double tol) {
  if (window.dim() != coc.dim())
    throw std::invalid_argument("verify_cocycle: window dimension mismatch");
  CocycleReport rep;
  rep.tol = tol;
  LatticePoint zero((std::size_t)coc.dim());
  const std::size_t n = window.site_count();
  for (std::size_t iq = 0; iq < n; ++iq) {
    LatticePoint q = window.site(iq);
    for (std::size_t ix = 0; ix < n; ++ix) {
      LatticePoint x = window.site(ix);
      double dn = std::max(std::abs(fold_phase(coc.phase(q, x, zero))),
                           std::abs(fold_phase(coc.phase(q, zero, x))));
      if (dn > rep.normalization.defect) rep.normalization = {dn, q, x, zero};
      double di = std::abs(fold_phase(coc.phase(q, x, -x)));
      if (di > rep.inverse_pair.defect) rep.inverse_pair = {di, q, x, -x};
      for (std::size_t iy = 0; iy < n; ++iy) {
        LatticePoint y = window.site(iy);
        for (std::size_t iz = 0; iz < n; ++iz) {
          LatticePoint z = window.site(iz);
          double dl = phase_defect(coc.phase(q, x + y, z) + coc.phase(q, x, y),
                                   coc.phase(q + x, y, z) + coc.phase(q, x, y + z));
          if (dl > rep.cocycle_law.defect) rep.cocycle_law = {dl, q, x, y};
          ++rep.triples_checked;
        }
      }
    }
  }
  rep.pass = rep.max_defect() <= tol;
  return rep;
}

CochainReport verify_cochain(const OneCochain& lam, const TwoCocycle& coc,
                             const Box& window, double tol) {
  if (lam.dim() != coc.dim() || window.dim() != coc.dim())
    throw std::invalid_argument("verify_cochain: dimension mismatch");
  CochainReport rep;
  rep.tol = tol;
  const std::size_t n = window.site_count();
  for (std::size_t iq = 0; iq < n; ++iq) {
    LatticePoint q = window.site(iq);
    for (std::size_t ix = 0; ix < n; ++ix) {
      LatticePoint x = window.site(ix);
      double lqx = lam.phase(q, x);
      LatticePoint qx = q + x;
      for (std::size_t iy = 0; iy < n; ++iy) {
        LatticePoint y = window.site(iy);
        double lhs = lqx + lam.phase(qx, y) - lam.phase(q, x + y);
        double defect = phase_defect(lhs, coc.phase(q, x, y));
        if (defect > rep.worst.defect) rep.worst = {defect, q, x, y};
        ++rep.triples_checked;
      }
    }
  }
  rep.pass = rep.worst.defect <= tol;
  return rep;
}

}  // namespace magspec
