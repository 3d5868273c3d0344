#include "magspec/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace magspec {

extern "C" {
void zheevd_(const char* jobz, const char* uplo, const int* n, std::complex<double>* a,
             const int* lda, double* w, std::complex<double>* work, const int* lwork,
             double* rwork, const int* lrwork, int* iwork, const int* liwork, int* info);
void zhbevd_(const char* jobz, const char* uplo, const int* n, const int* kd,
             std::complex<double>* ab, const int* ldab, double* w, std::complex<double>* z,
             const int* ldz, std::complex<double>* work, const int* lwork, double* rwork,
             const int* lrwork, int* iwork, const int* liwork, int* info);
}

double Spectrum::distance(double t) const {
  if (values.empty()) throw std::invalid_argument("spectrum: empty");
  auto it = std::lower_bound(values.begin(), values.end(), t);
  double d = std::numeric_limits<double>::infinity();
  if (it != values.end()) d = std::min(d, *it - t);
  if (it != values.begin()) d = std::min(d, t - *(it - 1));
  return d;
}

namespace {

void check_and_symmetrize(Eigen::MatrixXcd& a, double tol) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("eigenvalues: matrix not square");
  double worst = 0.0;
  Eigen::Index wi = 0, wj = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      double d = std::abs(a(i, j) - std::conj(a(j, i)));
      if (d > worst) {
        worst = d;
        wi = i;
        wj = j;
      }
    }
  if (worst > tol) {
    std::ostringstream msg;
    msg << "eigenvalues: matrix not Hermitian, |A(" << wi << "," << wj << ") - conj(A(" << wj
        << "," << wi << "))| = " << worst << " exceeds " << tol;
    throw std::invalid_argument(msg.str());
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    a(j, j) = Complex(a(j, j).real(), 0.0);
    for (Eigen::Index i = 0; i < j; ++i) {
      Complex v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }
}

int bandwidth_of(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  int kd = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = n - 1; i > j; --i) {
      if (i - j <= kd) break;
      if (a(i, j) != Complex(0.0)) {
        kd = (int)(i - j);
        break;
      }
    }
  return kd;
}

std::vector<double> solve_dense(Eigen::MatrixXcd& a) {
  int n = (int)a.rows();
  std::vector<double> w((std::size_t)n);
  int info = 0, lwork = -1, lrwork = -1, liwork = -1;
  Complex wq;
  double rwq;
  int iwq;
  zheevd_("N", "L", &n, a.data(), &n, w.data(), &wq, &lwork, &rwq, &lrwork, &iwq, &liwork,
          &info);
  lwork = (int)wq.real();
  lrwork = (int)rwq;
  liwork = iwq;
  std::vector<Complex> work((std::size_t)lwork);
  std::vector<double> rwork((std::size_t)lrwork);
  std::vector<int> iwork((std::size_t)liwork);
  zheevd_("N", "L", &n, a.data(), &n, w.data(), work.data(), &lwork, rwork.data(), &lrwork,
          iwork.data(), &liwork, &info);
  if (info != 0)
    throw std::runtime_error("zheevd failed with info=" + std::to_string(info));
  return w;
}

std::vector<double> solve_banded(const Eigen::MatrixXcd& a, int kd) {
  int n = (int)a.rows();
  int ldab = kd + 1;
  std::vector<Complex> ab((std::size_t)ldab * (std::size_t)n, Complex(0.0));
  for (int j = 0; j < n; ++j)
    for (int i = j; i <= std::min(n - 1, j + kd); ++i)
      ab[(std::size_t)j * (std::size_t)ldab + (std::size_t)(i - j)] = a(i, j);
  std::vector<double> w((std::size_t)n);
  int info = 0, ldz = 1, lwork = -1, lrwork = -1, liwork = -1;
  Complex wq;
  double rwq;
  int iwq;
  zhbevd_("N", "L", &n, &kd, ab.data(), &ldab, w.data(), nullptr, &ldz, &wq, &lwork, &rwq,
          &lrwork, &iwq, &liwork, &info);
  lwork = (int)wq.real();
  lrwork = (int)rwq;
  liwork = iwq;
  std::vector<Complex> work((std::size_t)std::max(lwork, 1));
  std::vector<double> rwork((std::size_t)std::max(lrwork, 1));
  std::vector<int> iwork((std::size_t)std::max(liwork, 1));
  zhbevd_("N", "L", &n, &kd, ab.data(), &ldab, w.data(), nullptr, &ldz, work.data(), &lwork,
          rwork.data(), &lrwork, iwork.data(), &liwork, &info);
  if (info != 0)
    throw std::runtime_error("zhbevd failed with info=" + std::to_string(info));
  return w;
}

}  // namespace

Spectrum eigenvalues(Eigen::MatrixXcd a, EigenMethod method, double hermiticity_tol) {
  check_and_symmetrize(a, hermiticity_tol);
  const int n = (int)a.rows();
  if (n == 0) throw std::invalid_argument("eigenvalues: empty matrix");
  Spectrum s;
  const int kd = bandwidth_of(a);
  if (method == EigenMethod::Banded || (method == EigenMethod::Auto && 3 * (kd + 1) <= n)) {
    s.values = solve_banded(a, kd);
  } else {
    s.values = solve_dense(a);
  }
  std::sort(s.values.begin(), s.values.end());
  return s;
}

Spectrum eigenvalues(const OperatorMatrix& m, EigenMethod method, double hermiticity_tol) {
  Spectrum s = eigenvalues(m.entries, method, hermiticity_tol);
  s.source = m.symbol_id + " @ " + m.box.str();
  return s;
}

EigenSystem eigen_system(Eigen::MatrixXcd a, double hermiticity_tol) {
  check_and_symmetrize(a, hermiticity_tol);
  int n = (int)a.rows();
  EigenSystem sys;
  sys.values.resize((std::size_t)n);
  int info = 0, lwork = -1, lrwork = -1, liwork = -1;
  Complex wq;
  double rwq;
  int iwq;
  zheevd_("V", "L", &n, a.data(), &n, sys.values.data(), &wq, &lwork, &rwq, &lrwork, &iwq,
          &liwork, &info);
  lwork = (int)wq.real();
  lrwork = (int)rwq;
  liwork = iwq;
  std::vector<Complex> work((std::size_t)lwork);
  std::vector<double> rwork((std::size_t)lrwork);
  std::vector<int> iwork((std::size_t)liwork);
  zheevd_("V", "L", &n, a.data(), &n, sys.values.data(), work.data(), &lwork, rwork.data(),
          &lrwork, iwork.data(), &liwork, &info);
  if (info != 0)
    throw std::runtime_error("zheevd(V) failed with info=" + std::to_string(info));
  sys.vectors = std::move(a);
  return sys;
}

double hausdorff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: empty spectrum");
  auto one_sided = [](const std::vector<double>& from, const std::vector<double>& to) {
    double worst = 0.0;
    for (double v : from) {
      auto it = std::lower_bound(to.begin(), to.end(), v);
      double d = std::numeric_limits<double>::infinity();
      if (it != to.end()) d = std::min(d, *it - v);
      if (it != to.begin()) d = std::min(d, v - *(it - 1));
      worst = std::max(worst, d);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

double hausdorff(const Spectrum& s1, const Spectrum& s2) {
  return hausdorff(s1.values, s2.values);
}

GapList gaps(const Spectrum& s, double resolution) {
  if (resolution <= 0.0) throw std::invalid_argument("gaps: resolution must be positive");
  GapList list;
  for (std::size_t i = 0; i + 1 < s.values.size(); ++i)
    if (s.values[i + 1] - s.values[i] >= resolution)
      list.push_back({s.values[i], s.values[i + 1]});
  return list;
}

double resolvent_norm(const Spectrum& s, std::complex<double> z) {
  double d = std::hypot(s.distance(z.real()), z.imag());
  if (d < 1e-14)
    throw std::domain_error("resolvent_norm: z lies in the spectrum (distance " +
                            std::to_string(d) + ")");
  return 1.0 / d;
}

Spectrum bloch_bands_harper(int p, int q, int kgrid) {
  if (q < 1 || kgrid < 1) throw std::invalid_argument("bloch_bands_harper: invalid q or kgrid");
  if (std::gcd(std::abs(p), q) != 1)
    throw std::invalid_argument("bloch_bands_harper: p/q must be reduced (gcd(p,q)=1)");
  const double alpha = (double)p / (double)q;
  Spectrum s;
  s.values.reserve((std::size_t)kgrid * kgrid * q);
  s.source = "bloch_harper " + std::to_string(p) + "/" + std::to_string(q);
  Eigen::MatrixXcd h(q, q);
  for (int a = 0; a < kgrid; ++a) {
    double k1 = kTwoPi * a / kgrid;
    for (int b = 0; b < kgrid; ++b) {
      double k2 = kTwoPi * b / kgrid;
      h.setZero();
      for (int j = 0; j < q; ++j) {
        h(j, j) += 2.0 * std::cos(k2 + kTwoPi * alpha * j);
        h(j, (j + 1) % q) += std::polar(1.0, k1);
        h((j + 1) % q, j) += std::polar(1.0, -k1);
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
      for (int j = 0; j < q; ++j) s.values.push_back(solver.eigenvalues()(j));
    }
  }
  std::sort(s.values.begin(), s.values.end());
  return s;
}

void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
  os << "epsilon,index,eigenvalue\n";
  char buf[96];
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%zu,%.17g\n", s.epsilon, i, s.values[i]);
    os << buf;
  }
}

Spectrum read_spectrum_csv(std::istream& is) {
  Spectrum s;
  std::string line;
  if (!std::getline(is, line) || line.rfind("epsilon,index,eigenvalue", 0) != 0)
    throw std::runtime_error("spectrum csv: bad header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double eps = 0.0, value = 0.0;
    std::size_t idx = 0;
    if (std::sscanf(line.c_str(), "%lg,%zu,%lg", &eps, &idx, &value) != 3)
      throw std::runtime_error("spectrum csv: bad row '" + line + "'");
    s.epsilon = eps;
    s.values.push_back(value);
  }
  return s;
}

}  // namespace magspec
