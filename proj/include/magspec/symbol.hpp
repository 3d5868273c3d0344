#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "magspec/cocycle.hpp"
#include "magspec/lattice.hpp"

namespace magspec {

using Complex = std::complex<double>;

/// Bounded coefficient field q -> value (the l-infinity fiber of a symbol).
/// `bound` is an upper bound for sup_q |value(q)|; it is exact for constant
/// and table coefficients and a declared or window-estimated bound otherwise.
class CoefficientField {
 public:
  using Fn = std::function<Complex(const LatticePoint&)>;
  using Table = std::map<LatticePoint, Complex, LexLess>;

  static CoefficientField constant(int d, Complex c);
  /// Finite table, zero outside.
  static CoefficientField table(int d, Table entries);
  /// Arbitrary callable with a certified sup bound.
  static CoefficientField callable(int d, Fn f, double bound, bool certified = true);
  /// Hash-based random complex field with |value| <= amplitude.
  static CoefficientField random(int d, std::uint64_t seed, double amplitude);

  Complex value(const LatticePoint& q) const { return fn_(q); }
  double bound() const { return bound_; }
  bool certified() const { return certified_; }
  int dim() const { return dim_; }
  const std::string& kind() const { return kind_; }
  const Table* table_entries() const;  // nullptr unless kind == "table"

  CoefficientField translated(const LatticePoint& x) const;
  CoefficientField scaled(Complex c) const;
  CoefficientField plus(const CoefficientField& other) const;

 private:
  CoefficientField() = default;
  int dim_ = 0;
  std::string kind_;
  Fn fn_;
  double bound_ = 0.0;
  bool certified_ = true;
  std::shared_ptr<const Table> table_;
};

/// theta_x f: the translated field q -> f(q + x).
CoefficientField translate(const CoefficientField& f, const LatticePoint& x);

/// Finitely supported symbol: offsets x -> coefficient fields h(.; x).
class Symbol {
 public:
  using Terms = std::map<LatticePoint, CoefficientField, LexLess>;

  Symbol() = default;
  Symbol(int d, Terms terms, std::string id = "symbol");

  static Symbol delta(int d, const LatticePoint& offset, const CoefficientField& c);
  /// Nearest-neighbour hopping on Z^2 with unit coefficients (4 offsets).
  static Symbol harper();
  /// Free nearest-neighbour hopping on Z^d with unit coefficients.
  static Symbol free_hopping(int d);
  /// Diagonal potential: offset 0 with the given coefficient field.
  static Symbol diagonal(const CoefficientField& v);

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  const std::string& id() const { return id_; }
  std::vector<LatticePoint> support() const;
  Coord support_radius() const;  // max infinity-norm of offsets
  /// Coefficient at an offset; zero field if the offset is not in the support.
  CoefficientField coeff(const LatticePoint& offset) const;

  Symbol plus(const Symbol& other) const;
  Symbol scaled(Complex c) const;

  std::string to_json() const;
  static Symbol from_json(const std::string& text);

 private:
  int dim_ = 0;
  Terms terms_;
  std::string id_;
};

struct NormValue {
  double value = 0.0;
  bool certified = true;
};

/// The l1(l-infinity) norm: sum over the support of the per-offset bounds.
NormValue norm_1_inf(const Symbol& s);

/// Window-estimated norm: sum over the support of max_{q in window} |h(q;x)|.
/// Always a lower bound for the true norm.
double norm_1_inf_window(const Symbol& s, const Box& window);

/// Twisted product [f <> g](x) = sum_y f(y) theta_y g(x-y) omega(y, x-y).
/// Coefficients of the result are lazy; bounds multiply-and-add, so the
/// product of certified symbols carries a certified bound.
Symbol twisted_product(const Symbol& f, const Symbol& g, const TwoCocycle& coc);

/// Involution f^<>(x) = conj(f(. + x; -x)).
Symbol involution(const Symbol& f);

/// True iff involution(f) matches f pointwise on window x support to tol.
bool is_selfadjoint(const Symbol& f, const Box& window, double tol);

struct TruncationResult {
  Symbol symbol;
  double discarded_mass = 0.0;  // sum of bounds over dropped offsets scanned
};

/// Keep offsets with |x|_inf <= radius; reports the 1,inf mass of the dropped
/// offsets scanned up to report_radius.
TruncationResult truncate_symbol(
    int d, const std::function<CoefficientField(const LatticePoint&)>& coeff_at,
    Coord radius, Coord report_radius);

}  // namespace magspec
