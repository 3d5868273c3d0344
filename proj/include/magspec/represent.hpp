#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "magspec/cocycle.hpp"
#include "magspec/lattice.hpp"
#include "magspec/symbol.hpp"

namespace magspec {

/// A symbol represented on a finite box: the compression P Rep(h) P of the
/// lattice operator. Hermitian whenever the generating symbol is
/// self-adjoint.
struct OperatorMatrix {
  Box box = Box::dirichlet(1, 0);
  Eigen::MatrixXcd entries;
  std::string symbol_id;
  std::string cochain_id;
};

/// Assemble the matrix of Rep^lambda(h) on the box:
/// entry(x, y) = h(x; y-x) exp(i lambda(x; y-x)) for y-x in the support.
/// Dirichlet boxes drop hops that leave the box; periodic boxes wrap them and
/// require the cochain phase (and the coefficients) to be invariant under the
/// declared period, checked at assembly.
OperatorMatrix assemble(const Symbol& h, const OneCochain& lam, const Box& box);

/// Matrix-free action of Rep^lambda(h) on a box-indexed vector.
Eigen::VectorXcd apply(const Symbol& h, const OneCochain& lam, const Box& box,
                       const Eigen::VectorXcd& u);

/// Diagonal unitary with entries exp(i g(x)).
OperatorMatrix gauge_unitary(const GaugeFunction& g, const Box& box);

/// Numerical witness that Rep is an algebra homomorphism: the operator norm
/// of assemble(f<>g) - assemble(f) assemble(g) restricted to test vectors
/// supported at distance >= margin from the boundary. margin < 0 selects the
/// default r_f + r_g. Dirichlet boxes only.
double homomorphism_defect(const Symbol& f, const Symbol& g, const OneCochain& lam,
                           const TwoCocycle& coc, const Box& box, Coord margin = -1);

/// Text export: matrix-market-style triplets (row, col, re, im) with a header
/// recording box, boundary and generating identifiers.
void write_matrix_triplets(std::ostream& os, const OperatorMatrix& m);

}  // namespace magspec
