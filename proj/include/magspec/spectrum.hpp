#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "magspec/represent.hpp"

namespace magspec {

/// Sorted finite spectrum with provenance metadata.
struct Spectrum {
  std::vector<double> values;  // nondecreasing
  double epsilon = 0.0;
  std::string source;

  double min() const { return values.front(); }
  double max() const { return values.back(); }
  /// Spectral radius max |lambda|.
  double radius() const { return std::max(std::abs(values.front()), std::abs(values.back())); }
  /// Distance from a real point to the spectrum set.
  double distance(double t) const;
};

enum class EigenMethod { Auto, Dense, Banded };

/// Full eigenvalue list of a Hermitian matrix. The input is checked to be
/// Hermitian entrywise to `hermiticity_tol` (error names the worst entry),
/// symmetrized, and solved with LAPACK; matrices with small bandwidth under
/// the fixed lexicographic site enumeration take the banded path.
Spectrum eigenvalues(Eigen::MatrixXcd a, EigenMethod method = EigenMethod::Auto,
                     double hermiticity_tol = 1e-12);
Spectrum eigenvalues(const OperatorMatrix& m, EigenMethod method = EigenMethod::Auto,
                     double hermiticity_tol = 1e-12);

struct EigenSystem {
  std::vector<double> values;
  Eigen::MatrixXcd vectors;  // columns
};

/// Eigenvalues and eigenvectors (used for residual/backward-error checks).
EigenSystem eigen_system(Eigen::MatrixXcd a, double hermiticity_tol = 1e-12);

/// Symmetrized Hausdorff distance between two finite spectra.
double hausdorff(const Spectrum& s1, const Spectrum& s2);
double hausdorff(const std::vector<double>& a, const std::vector<double>& b);

struct Gap {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

using GapList = std::vector<Gap>;

/// Maximal open intervals of length >= resolution between consecutive
/// spectrum points.
GapList gaps(const Spectrum& s, double resolution);

/// For self-adjoint operators, ||(H - z)^{-1}|| = 1 / dist(z, spectrum).
/// Throws if z lies in the spectrum (distance below 1e-14).
double resolvent_norm(const Spectrum& s, std::complex<double> z);

/// Independent Bloch-band oracle for the Harper operator at rational flux
/// 2*pi*p/q: union over a kgrid x kgrid Brillouin grid of the eigenvalues of
/// the q x q Bloch matrices, solved with Eigen (a route independent of the
/// LAPACK path used for assembled boxes).
Spectrum bloch_bands_harper(int p, int q, int kgrid);

/// CSV export with header epsilon,index,eigenvalue.
void write_spectrum_csv(std::ostream& os, const Spectrum& s);
Spectrum read_spectrum_csv(std::istream& is);

}  // namespace magspec
