#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "magspec/represent.hpp"
#include "magspec/spectrum.hpp"
#include "test_support.hpp"

using namespace magspec;
using magspec::test::rand_point;
using magspec::test::rand_symbol;

namespace {

double hermiticity_defect(const Eigen::MatrixXcd& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

}  // namespace

TEST_CASE("box enumeration is lexicographic") {
  Box box = Box::dirichlet(2, 1);
  REQUIRE(box.site_count() == 9);
  std::vector<LatticePoint> expected = {
      {-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 0}, {0, 1}, {1, -1}, {1, 0}, {1, 1}};
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(box.site(i) == expected[i]);
    CHECK(*box.index_of(expected[i]) == i);
  }
  CHECK_FALSE(box.index_of(LatticePoint{2, 0}).has_value());
}

TEST_CASE("free chain on three sites is the expected tridiagonal matrix") {
  OperatorMatrix m = assemble(Symbol::free_hopping(1),
                              cochain_direct(MagneticPotential::zero(1)), Box::dirichlet(1, 1));
  REQUIRE(m.entries.rows() == 3);
  Eigen::MatrixXcd expected(3, 3);
  expected << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK((m.entries - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assembled matrices of self-adjoint symbols are Hermitian") {
  SUBCASE("harper with the direct cochain, exactly") {
    MagneticPotential pot = MagneticPotential::symmetric_gauge(kTwoPi / 3.0);
    OperatorMatrix m = assemble(Symbol::harper(), cochain_direct(pot), Box::dirichlet(2, 4));
    CHECK(hermiticity_defect(m.entries) == 0.0);
  }
  SUBCASE("random self-adjoint symbols with both cochains") {
    std::mt19937_64 rng(5);
    for (int inst = 0; inst < 5; ++inst) {
      MagneticPotential pot = MagneticPotential::random(2, 60 + (std::uint64_t)inst, 5.0);
      Symbol f = rand_symbol(rng, 2, 70 + (std::uint64_t)inst, 3);
      Symbol h = f.plus(involution(f));
      Box box = Box::dirichlet(2, 4);
      CHECK(hermiticity_defect(assemble(h, cochain_direct(pot), box).entries) <= 1e-13);
      OneCochain lt = cochain_transversal(cocycle_from_potential(pot));
      CHECK(hermiticity_defect(assemble(h, lt, box).entries) <= 1e-13);
    }
  }
}

TEST_CASE("the direct cochain reproduces the Peierls-phase operator") {
  MagneticPotential pot = MagneticPotential::random(2, 80, 4.0);
  Symbol h = Symbol::harper();
  Box box = Box::dirichlet(2, 3);
  OperatorMatrix m = assemble(h, cochain_direct(pot), box);
  for (std::size_t i = 0; i < box.site_count(); ++i) {
    LatticePoint x = box.site(i);
    for (const auto& s : h.support()) {
      auto j = box.index_of(x + s);
      if (!j) continue;
      Complex expected = std::polar(1.0, pot.phase(x, x + s));
      CHECK(std::abs(m.entries((Eigen::Index)i, (Eigen::Index)*j) - expected) == 0.0);
    }
  }
}

TEST_CASE("apply agrees with the assembled matrix") {
  SUBCASE("indicator of the origin under free hopping") {
    Box box = Box::dirichlet(1, 2);
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(5);
    u(2) = 1.0;  // origin
    Eigen::VectorXcd v =
        apply(Symbol::free_hopping(1), cochain_direct(MagneticPotential::zero(1)), box, u);
    Eigen::VectorXcd expected(5);
    expected << 0, 1, 0, 1, 0;
    CHECK((v - expected).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("linearity") {
    std::mt19937_64 rng(9);
    Box box = Box::dirichlet(2, 3);
    MagneticPotential pot = MagneticPotential::random(2, 90, 3.0);
    OneCochain lam = cochain_direct(pot);
    Symbol h = Symbol::harper();
    Eigen::VectorXcd u = Eigen::VectorXcd::Random((Eigen::Index)box.site_count());
    Eigen::VectorXcd v = Eigen::VectorXcd::Random((Eigen::Index)box.site_count());
    Complex a(0.3, -1.2), b(2.0, 0.7);
    Eigen::VectorXcd lhs = apply(h, lam, box, a * u + b * v);
    Eigen::VectorXcd rhs = a * apply(h, lam, box, u) + b * apply(h, lam, box, v);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-13);
  }
  SUBCASE("dense oracle at L = 6, flux 1/3") {
    Box box = Box::dirichlet(2, 6);
    MagneticPotential pot = MagneticPotential::symmetric_gauge(kTwoPi / 3.0);
    OneCochain lam = cochain_direct(pot);
    Symbol h = Symbol::harper();
    OperatorMatrix m = assemble(h, lam, box);
    Eigen::VectorXcd u = Eigen::VectorXcd::Random((Eigen::Index)box.site_count());
    Eigen::VectorXcd direct = apply(h, lam, box, u);
    CHECK((direct - m.entries * u).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("size mismatch is an error") {
    Box box = Box::dirichlet(1, 2);
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(4);
    CHECK_THROWS_AS(
        (void)apply(Symbol::free_hopping(1), cochain_direct(MagneticPotential::zero(1)), box, u),
        std::invalid_argument);
  }
}

TEST_CASE("gauge unitaries") {
  Box box = Box::dirichlet(2, 3);
  SUBCASE("zero gauge gives the identity") {
    OperatorMatrix u = gauge_unitary(GaugeFunction::zero(2), box);
    CHECK((u.entries - Eigen::MatrixXcd::Identity(u.entries.rows(), u.entries.cols()))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
  SUBCASE("conjugation relates the two canonical cochains") {
    MagneticPotential pot = MagneticPotential::random(2, 100, 4.0);
    Symbol h = Symbol::harper();
    Eigen::MatrixXcd mt = assemble(h, cochain_transversal(cocycle_from_potential(pot)), box).entries;
    Eigen::MatrixXcd mp = assemble(h, cochain_direct(pot), box).entries;
    Eigen::MatrixXcd u = gauge_unitary(GaugeFunction::from_potential_origin(pot), box).entries;
    CHECK((mt - u.adjoint() * mp * u).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("the two assemblies have the same spectrum") {
    MagneticPotential pot = MagneticPotential::random(2, 101, 4.0);
    Box box6 = Box::dirichlet(2, 6);
    Symbol h = Symbol::harper();
    Spectrum st = eigenvalues(assemble(h, cochain_transversal(cocycle_from_potential(pot)), box6));
    Spectrum sp = eigenvalues(assemble(h, cochain_direct(pot), box6));
    REQUIRE(st.values.size() == sp.values.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < st.values.size(); ++i)
      worst = std::max(worst, std::abs(st.values[i] - sp.values[i]));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("adjoint covariance: assemble(f^<>) is the conjugate transpose") {
  std::mt19937_64 rng(11);
  MagneticPotential pot = MagneticPotential::random(2, 110, 3.0);
  OneCochain lam = cochain_direct(pot);
  Box box = Box::dirichlet(2, 4);
  for (int inst = 0; inst < 5; ++inst) {
    Symbol f = rand_symbol(rng, 2, 120 + (std::uint64_t)inst, 4);
    Eigen::MatrixXcd a = assemble(involution(f), lam, box).entries;
    Eigen::MatrixXcd b = assemble(f, lam, box).entries.adjoint();
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("spectral enclosure: eigenvalues stay within the symbol norm") {
  MagneticPotential pot = MagneticPotential::symmetric_gauge(kTwoPi * 0.37);
  OneCochain lam = cochain_direct(pot);
  for (Coord L : {4, 8, 16}) {
    Spectrum s = eigenvalues(assemble(Symbol::harper(), lam, Box::dirichlet(2, L)));
    CHECK(s.values.size() == (std::size_t)((2 * L + 1) * (2 * L + 1)));
    CHECK(s.radius() <= 4.0 + 1e-10);
  }
}

TEST_CASE("homomorphism defect") {
  SUBCASE("plain convolution case is exact") {
    Symbol d1 = Symbol::delta(1, LatticePoint{1}, CoefficientField::constant(1, 1.0));
    double defect = homomorphism_defect(d1, d1, cochain_direct(MagneticPotential::zero(1)),
                                        TwoCocycle::trivial(1), Box::dirichlet(1, 4));
    CHECK(defect < 1e-13);
  }
  SUBCASE("harper squared at flux 1/4") {
    MagneticPotential pot = MagneticPotential::symmetric_gauge(kTwoPi / 4.0);
    double defect = homomorphism_defect(Symbol::harper(), Symbol::harper(), cochain_direct(pot),
                                        cocycle_from_potential(pot), Box::dirichlet(2, 8), 2);
    CHECK(defect < 1e-10);
  }
  SUBCASE("a mismatched cochain is detected") {
    MagneticPotential quarter = MagneticPotential::symmetric_gauge(kTwoPi / 4.0);
    MagneticPotential half = MagneticPotential::symmetric_gauge(kTwoPi / 2.0);
    double defect =
        homomorphism_defect(Symbol::harper(), Symbol::harper(), cochain_direct(half),
                            cocycle_from_potential(quarter), Box::dirichlet(2, 8), 2);
    CHECK(defect >= 0.1);
  }
  SUBCASE("boxes smaller than the margin are rejected") {
    CHECK_THROWS_AS((void)homomorphism_defect(Symbol::harper(), Symbol::harper(),
                                              cochain_direct(MagneticPotential::zero(2)),
                                              TwoCocycle::trivial(2), Box::dirichlet(2, 1)),
                    std::invalid_argument);
  }
}

TEST_CASE("periodic boxes") {
  SUBCASE("period must divide the sides") {
    CHECK_THROWS_AS((void)Box::periodic(2, {7, 6}, {3, 1}), std::invalid_argument);
  }
  SUBCASE("incompatible cochains are rejected with the violating pair named") {
    // the symmetric gauge phase grows with q2 and is not (3,1)-periodic
    MagneticPotential pot = MagneticPotential::symmetric_gauge(kTwoPi / 3.0);
    Box torus = Box::periodic(2, {6, 6}, {3, 1});
    try {
      (void)assemble(Symbol::harper(), cochain_direct(pot), torus);
      FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("period") != std::string::npos);
      CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
  }
  SUBCASE("landau torus spectrum equals the Bloch set at matching momenta") {
    MagneticPotential pot = MagneticPotential::landau_gauge(kTwoPi / 3.0);
    Box torus = Box::periodic(2, {6, 6}, {3, 1});
    Spectrum torus_spec = eigenvalues(assemble(Symbol::harper(), cochain_direct(pot), torus));
    Spectrum bloch = bloch_bands_harper(1, 3, 6);
    CHECK(hausdorff(torus_spec, bloch) <= 1e-10);
  }
}

TEST_CASE("matrix triplet export") {
  OperatorMatrix m = assemble(Symbol::free_hopping(1),
                              cochain_direct(MagneticPotential::zero(1)), Box::dirichlet(1, 1));
  std::ostringstream os;
  write_matrix_triplets(os, m);
  std::string text = os.str();
  CHECK(text.find("% box: dirichlet d=1 L=1") != std::string::npos);
  CHECK(text.find("% symbol: free_hopping") != std::string::npos);
  CHECK(text.find("3 3 4") != std::string::npos);  // rows cols nnz
}
