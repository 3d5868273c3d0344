#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "magspec/symbol.hpp"
#include "test_support.hpp"

using namespace magspec;
using magspec::test::rand_point;
using magspec::test::rand_symbol;

namespace {

double max_pointwise_diff(const Symbol& a, const Symbol& b, const Box& window) {
  std::map<LatticePoint, int, LexLess> offsets;
  for (const auto& o : a.support()) offsets[o] = 1;
  for (const auto& o : b.support()) offsets[o] = 1;
  double worst = 0.0;
  for (const auto& [o, unused] : offsets) {
    CoefficientField ca = a.coeff(o), cb = b.coeff(o);
    window.for_each_site([&](std::size_t, const LatticePoint& q) {
      worst = std::max(worst, std::abs(ca.value(q) - cb.value(q)));
    });
  }
  return worst;
}

// Plain (untwisted) convolution, written independently of twisted_product.
Complex plain_convolution_value(const Symbol& f, const Symbol& g, const LatticePoint& x,
                                const LatticePoint& q) {
  Complex acc = 0.0;
  for (const auto& [y, fy] : f.terms()) {
    auto it = g.terms().find(x - y);
    if (it == g.terms().end()) continue;
    acc += fy.value(q) * it->second.value(q + y);
  }
  return acc;
}

}  // namespace

TEST_CASE("translate") {
  CoefficientField f = CoefficientField::random(2, 1, 1.0);
  std::mt19937_64 rng(2);
  SUBCASE("by zero is the identity") {
    CoefficientField g = translate(f, LatticePoint{0, 0});
    for (int i = 0; i < 50; ++i) {
      LatticePoint q = rand_point(rng, 2, 20);
      CHECK(g.value(q) == f.value(q));
    }
  }
  SUBCASE("composes as a group action") {
    LatticePoint x{3, -1}, y{-2, 4};
    CoefficientField a = translate(translate(f, x), y);
    CoefficientField b = translate(f, x + y);
    for (int i = 0; i < 50; ++i) {
      LatticePoint q = rand_point(rng, 2, 20);
      CHECK(a.value(q) == b.value(q));
    }
  }
  SUBCASE("moves the indicator of the origin to -x") {
    CoefficientField::Table t;
    t[LatticePoint{0, 0}] = 1.0;
    CoefficientField ind = CoefficientField::table(2, t);
    CoefficientField moved = translate(ind, LatticePoint{1, 0});
    CHECK(moved.value(LatticePoint{-1, 0}) == Complex(1.0));
    CHECK(moved.value(LatticePoint{0, 0}) == Complex(0.0));
    CHECK(moved.value(LatticePoint{1, 0}) == Complex(0.0));
  }
}

TEST_CASE("norm_1_inf") {
  CHECK(norm_1_inf(Symbol::delta(2, LatticePoint{0, 0}, CoefficientField::constant(2, 1.0)))
            .value == 1.0);
  NormValue harper = norm_1_inf(Symbol::harper());
  CHECK(harper.value == 4.0);
  CHECK(harper.certified);
  Complex c(0.3, -0.4);  // |c| = 0.5
  CHECK(norm_1_inf(Symbol::harper().scaled(c)).value == doctest::Approx(2.0));
}

TEST_CASE("twisted product") {
  MagneticPotential pot = MagneticPotential::random(2, 7, 2.0);
  TwoCocycle coc = cocycle_from_potential(pot);
  std::mt19937_64 rng(8);
  Box window = Box::dirichlet(2, 2);

  SUBCASE("delta_0 is the unit") {
    Symbol unit = Symbol::delta(2, LatticePoint{0, 0}, CoefficientField::constant(2, 1.0));
    Symbol g = rand_symbol(rng, 2, 9, 4);
    CHECK(max_pointwise_diff(twisted_product(unit, g, coc), g, window) <= 1e-15);
    CHECK(max_pointwise_diff(twisted_product(g, unit, coc), g, window) <= 1e-15);
  }
  SUBCASE("delta_a <> delta_b lands at a+b with the cocycle phase") {
    LatticePoint a{1, -2}, b{0, 3};
    Symbol da = Symbol::delta(2, a, CoefficientField::constant(2, 1.0));
    Symbol db = Symbol::delta(2, b, CoefficientField::constant(2, 1.0));
    Symbol prod = twisted_product(da, db, coc);
    REQUIRE(prod.support().size() == 1);
    CHECK(prod.support()[0] == a + b);
    window.for_each_site([&](std::size_t, const LatticePoint& q) {
      Complex expected = std::polar(1.0, coc.phase(q, a, b));
      CHECK(std::abs(prod.coeff(a + b).value(q) - expected) <= 1e-15);
    });
  }
  SUBCASE("associativity over a magnetic cocycle") {
    for (int inst = 0; inst < 25; ++inst) {
      Symbol f = rand_symbol(rng, 2, 100 + (std::uint64_t)inst, 3);
      Symbol g = rand_symbol(rng, 2, 200 + (std::uint64_t)inst, 3);
      Symbol h = rand_symbol(rng, 2, 300 + (std::uint64_t)inst, 3);
      Symbol lhs = twisted_product(twisted_product(f, g, coc), h, coc);
      Symbol rhs = twisted_product(f, twisted_product(g, h, coc), coc);
      CHECK(max_pointwise_diff(lhs, rhs, Box::dirichlet(2, 1)) <= 1e-12);
    }
  }
  SUBCASE("support is contained in the sum of supports") {
    Symbol f = rand_symbol(rng, 2, 400, 3), g = rand_symbol(rng, 2, 401, 3);
    Symbol prod = twisted_product(f, g, coc);
    for (const auto& o : prod.support()) {
      bool found = false;
      for (const auto& a : f.support())
        for (const auto& b : g.support())
          if (o == a + b) found = true;
      CHECK(found);
    }
  }
  SUBCASE("reduces to plain convolution for the trivial cocycle") {
    TwoCocycle trivial = TwoCocycle::trivial(2);
    Symbol f = rand_symbol(rng, 2, 500, 4), g = rand_symbol(rng, 2, 501, 4);
    Symbol prod = twisted_product(f, g, trivial);
    for (const auto& o : prod.support()) {
      window.for_each_site([&](std::size_t, const LatticePoint& q) {
        CHECK(std::abs(prod.coeff(o).value(q) - plain_convolution_value(f, g, o, q)) <= 1e-14);
      });
    }
  }
}

TEST_CASE("involution") {
  std::mt19937_64 rng(20);
  Box window = Box::dirichlet(2, 2);
  SUBCASE("is involutive") {
    Symbol f = rand_symbol(rng, 2, 21, 4);
    CHECK(max_pointwise_diff(involution(involution(f)), f, window) <= 1e-15);
  }
  SUBCASE("fixes the Harper symbol") {
    CHECK(max_pointwise_diff(involution(Symbol::harper()), Symbol::harper(), window) == 0.0);
  }
  SUBCASE("maps delta_a with coefficient c to delta_{-a} with conj(c(. - a))") {
    LatticePoint a{2, -1};
    CoefficientField c = CoefficientField::random(2, 22, 1.0);
    Symbol f = Symbol::delta(2, a, c);
    Symbol adj = involution(f);
    REQUIRE(adj.support().size() == 1);
    CHECK(adj.support()[0] == -a);
    window.for_each_site([&](std::size_t, const LatticePoint& q) {
      CHECK(std::abs(adj.coeff(-a).value(q) - std::conj(c.value(q - a))) == 0.0);
    });
  }
  SUBCASE("preserves the norm") {
    Symbol f = rand_symbol(rng, 2, 23, 5);
    CHECK(norm_1_inf(involution(f)).value == norm_1_inf(f).value);
  }
  SUBCASE("is a conjugate-linear anti-automorphism") {
    MagneticPotential pot = MagneticPotential::random(2, 24, 2.0);
    TwoCocycle coc = cocycle_from_potential(pot);
    for (int inst = 0; inst < 25; ++inst) {
      Symbol f = rand_symbol(rng, 2, 600 + (std::uint64_t)inst, 3);
      Symbol g = rand_symbol(rng, 2, 700 + (std::uint64_t)inst, 3);
      Symbol lhs = involution(twisted_product(f, g, coc));
      Symbol rhs = twisted_product(involution(g), involution(f), coc);
      CHECK(max_pointwise_diff(lhs, rhs, Box::dirichlet(2, 1)) <= 1e-12);
    }
  }
}

TEST_CASE("is_selfadjoint") {
  Box window = Box::dirichlet(2, 2);
  CHECK(is_selfadjoint(Symbol::harper(), window, 1e-12));
  LatticePoint a{1, 1};
  Symbol da = Symbol::delta(2, a, CoefficientField::constant(2, 1.0));
  CHECK_FALSE(is_selfadjoint(da, window, 1e-12));
  Symbol pair = da.plus(Symbol::delta(2, -a, CoefficientField::constant(2, 1.0)));
  CHECK(is_selfadjoint(pair, window, 1e-12));
  // f + involution(f) is always self-adjoint
  std::mt19937_64 rng(30);
  Symbol f = rand_symbol(rng, 2, 31, 4);
  CHECK(is_selfadjoint(f.plus(involution(f)), window, 1e-12));
}

TEST_CASE("submultiplicativity of the 1,inf norm") {
  MagneticPotential pot = MagneticPotential::random(2, 40, 2.0);
  TwoCocycle coc = cocycle_from_potential(pot);
  std::mt19937_64 rng(41);
  Box window = Box::dirichlet(2, 3);
  for (int inst = 0; inst < 100; ++inst) {
    Symbol f = rand_symbol(rng, 2, 800 + (std::uint64_t)inst, 3);
    Symbol g = rand_symbol(rng, 2, 900 + (std::uint64_t)inst, 3);
    Symbol prod = twisted_product(f, g, coc);
    double estimated = norm_1_inf_window(prod, window);
    double bound = norm_1_inf(f).value * norm_1_inf(g).value;
    CHECK(estimated <= bound + 1e-12);
    // the lazy product's certified bound dominates the window estimate too
    CHECK(estimated <= norm_1_inf(prod).value + 1e-12);
  }
}

TEST_CASE("truncation reports the discarded mass") {
  auto coeff_at = [](const LatticePoint& offset) {
    double b = std::pow(0.5, (double)offset.max_norm());
    return CoefficientField::constant(2, b);
  };
  TruncationResult r = truncate_symbol(2, coeff_at, 1, 3);
  CHECK(r.symbol.support().size() == 9);
  // shells at radius 2 (16 sites, bound 1/4) and radius 3 (24 sites, bound 1/8)
  CHECK(r.discarded_mass == doctest::Approx(16.0 * 0.25 + 24.0 * 0.125));
  NormValue kept = norm_1_inf(r.symbol);
  CHECK(kept.value == doctest::Approx(1.0 + 8.0 * 0.5));
}

TEST_CASE("window-estimated bounds are flagged as uncertified") {
  CoefficientField raw = CoefficientField::callable(
      2, [](const LatticePoint& q) { return Complex(std::sin((double)q[0])); }, 1.0, false);
  Symbol s = Symbol::diagonal(raw);
  CHECK_FALSE(norm_1_inf(s).certified);
  Symbol t = Symbol::harper();
  CHECK(norm_1_inf(t).certified);
}

TEST_CASE("symbol serialization") {
  SUBCASE("table coefficients are bit exact") {
    CoefficientField::Table t;
    t[LatticePoint{0, 0}] = Complex(0.1 + 0.2, -kPi);
    t[LatticePoint{3, -2}] = Complex(1e-17, 1.0 / 3.0);
    Symbol s = Symbol::diagonal(CoefficientField::table(2, t));
    Symbol back = Symbol::from_json(s.to_json());
    for (const auto& [q, v] : t) CHECK(back.coeff(LatticePoint{0, 0}).value(q) == v);
  }
  SUBCASE("named builders parse") {
    Symbol h = Symbol::from_json(R"({"kind": "harper"})");
    CHECK(h.support().size() == 4);
    CHECK(norm_1_inf(h).value == 4.0);
    Symbol fh = Symbol::from_json(R"({"kind": "free_hopping", "d": 3})");
    CHECK(fh.support().size() == 6);
  }
  SUBCASE("lambda coefficients refuse to serialize") {
    Symbol s = Symbol::diagonal(CoefficientField::random(2, 1, 1.0));
    CHECK_THROWS_AS((void)s.to_json(), std::invalid_argument);
  }
}
