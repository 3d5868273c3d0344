#include "magspec/represent.hpp"

#include <Eigen/Eigenvalues>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace magspec {

namespace {

constexpr std::size_t kMaxDenseSites = 12000;

void check_periodic_compatibility(const Symbol& h, const OneCochain& lam, const Box& box) {
  const double tol = 1e-9;
  for (int k = 0; k < box.dim(); ++k) {
    LatticePoint shift((std::size_t)box.dim());
    shift[k] = box.period()[k];
    for (std::size_t i = 0; i < box.site_count(); ++i) {
      LatticePoint x = box.site(i);
      LatticePoint xs = x + shift;
      for (const auto& [s, coeff] : h.terms()) {
        double d = phase_defect(lam.phase(xs, s), lam.phase(x, s));
        if (d > tol)
          throw std::invalid_argument(
              "assemble: cochain phase not invariant under period shift along axis " +
              std::to_string(k) + " at site " + x.str() + ", offset " + s.str() +
              " (defect " + std::to_string(d) + ")");
        if (std::abs(coeff.value(xs) - coeff.value(x)) > tol)
          throw std::invalid_argument(
              "assemble: coefficient not invariant under period shift along axis " +
              std::to_string(k) + " at site " + x.str() + ", offset " + s.str());
      }
    }
  }
}

}  // namespace

OperatorMatrix assemble(const Symbol& h, const OneCochain& lam, const Box& box) {
  if (h.dim() != box.dim() || lam.dim() != box.dim())
    throw std::invalid_argument("assemble: dimension mismatch");
  const std::size_t n = box.site_count();
  if (n > kMaxDenseSites)
    throw std::invalid_argument("assemble: box has " + std::to_string(n) +
                                " sites, beyond the dense limit; use apply()");
  if (box.boundary() == Boundary::Periodic) check_periodic_compatibility(h, lam, box);

  OperatorMatrix m;
  m.box = box;
  m.symbol_id = h.id();
  m.cochain_id = lam.id();
  m.entries = Eigen::MatrixXcd::Zero((Eigen::Index)n, (Eigen::Index)n);
  for (std::size_t i = 0; i < n; ++i) {
    LatticePoint x = box.site(i);
    for (const auto& [s, coeff] : h.terms()) {
      LatticePoint y = x + s;
      std::size_t j;
      if (box.boundary() == Boundary::Dirichlet) {
        auto idx = box.index_of(y);
        if (!idx) continue;  // hop leaves the box: dropped
        j = *idx;
      } else {
        j = *box.index_of(box.wrap(y));
      }
      m.entries((Eigen::Index)i, (Eigen::Index)j) +=
          coeff.value(x) * std::polar(1.0, lam.phase(x, s));
    }
  }
  return m;
}

Eigen::VectorXcd apply(const Symbol& h, const OneCochain& lam, const Box& box,
                       const Eigen::VectorXcd& u) {
  if (h.dim() != box.dim() || lam.dim() != box.dim())
    throw std::invalid_argument("apply: dimension mismatch");
  const std::size_t n = box.site_count();
  if ((std::size_t)u.size() != n)
    throw std::invalid_argument("apply: vector size " + std::to_string(u.size()) +
                                " does not match box site count " + std::to_string(n));
  if (box.boundary() == Boundary::Periodic) check_periodic_compatibility(h, lam, box);

  Eigen::VectorXcd v = Eigen::VectorXcd::Zero((Eigen::Index)n);
  for (std::size_t i = 0; i < n; ++i) {
    LatticePoint x = box.site(i);
    Complex acc = 0.0;
    for (const auto& [s, coeff] : h.terms()) {
      LatticePoint y = x + s;
      std::size_t j;
      if (box.boundary() == Boundary::Dirichlet) {
        auto idx = box.index_of(y);
        if (!idx) continue;
        j = *idx;
      } else {
        j = *box.index_of(box.wrap(y));
      }
      acc += coeff.value(x) * std::polar(1.0, lam.phase(x, s)) * u((Eigen::Index)j);
    }
    v((Eigen::Index)i) = acc;
  }
  return v;
}

OperatorMatrix gauge_unitary(const GaugeFunction& g, const Box& box) {
  if (g.dim() != box.dim())
    throw std::invalid_argument("gauge_unitary: dimension mismatch");
  const std::size_t n = box.site_count();
  OperatorMatrix m;
  m.box = box;
  m.symbol_id = "gauge_unitary";
  m.cochain_id = "";
  m.entries = Eigen::MatrixXcd::Zero((Eigen::Index)n, (Eigen::Index)n);
  for (std::size_t i = 0; i < n; ++i)
    m.entries((Eigen::Index)i, (Eigen::Index)i) = std::polar(1.0, g.value(box.site(i)));
  return m;
}

double homomorphism_defect(const Symbol& f, const Symbol& g, const OneCochain& lam,
                           const TwoCocycle& coc, const Box& box, Coord margin) {
  if (box.boundary() != Boundary::Dirichlet)
    throw std::invalid_argument("homomorphism_defect: Dirichlet boxes only");
  if (margin < 0) margin = f.support_radius() + g.support_radius();
  if (box.radius() - margin < 0)
    throw std::invalid_argument("homomorphism_defect: box radius " +
                                std::to_string(box.radius()) +
                                " too small for margin " + std::to_string(margin));
  Symbol fg = twisted_product(f, g, coc);
  Eigen::MatrixXcd a = assemble(fg, lam, box).entries;
  Eigen::MatrixXcd b = assemble(f, lam, box).entries;
  Eigen::MatrixXcd c = assemble(g, lam, box).entries;
  Eigen::MatrixXcd d = a - b * c;

  std::vector<Eigen::Index> interior;
  for (std::size_t i = 0; i < box.site_count(); ++i)
    if (box.site(i).max_norm() <= box.radius() - margin) interior.push_back((Eigen::Index)i);
  Eigen::MatrixXcd di(d.rows(), (Eigen::Index)interior.size());
  for (Eigen::Index k = 0; k < (Eigen::Index)interior.size(); ++k)
    di.col(k) = d.col(interior[(std::size_t)k]);

  // Largest singular value via the Gram matrix of the interior columns.
  Eigen::MatrixXcd gram = di.adjoint() * di;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
  double top = solver.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, top));
}

void write_matrix_triplets(std::ostream& os, const OperatorMatrix& m) {
  const Eigen::Index n = m.entries.rows();
  std::size_t nnz = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (m.entries(i, j) != Complex(0.0)) ++nnz;
  os << "%%magspec operator matrix: row col re im (1-based)\n";
  os << "% box: " << m.box.str() << "\n";
  os << "% symbol: " << m.symbol_id << "\n";
  os << "% cochain: " << m.cochain_id << "\n";
  os << n << " " << n << " " << nnz << "\n";
  char buf[128];
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      Complex v = m.entries(i, j);
      if (v == Complex(0.0)) continue;
      std::snprintf(buf, sizeof(buf), "%lld %lld %.17g %.17g\n",
                    (long long)(i + 1), (long long)(j + 1), v.real(), v.imag());
      os << buf;
    }
}

}  // namespace magspec
