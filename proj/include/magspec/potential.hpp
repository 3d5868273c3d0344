#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>

#include "magspec/lattice.hpp"

namespace magspec {

/// Antisymmetric real phase function on pairs of lattice sites (radians).
///
/// Every constructor guarantees phase(x,y) + phase(y,x) == 0 exactly in
/// floating point: closed-form gauges are antisymmetric expression by
/// expression, and table/callable/random potentials are evaluated on the
/// lexicographically ordered pair and negated for the flipped order.
class MagneticPotential {
 public:
  using PhaseFn = std::function<double(const LatticePoint&, const LatticePoint&)>;

  struct PairLexLess {
    bool operator()(const std::pair<LatticePoint, LatticePoint>& a,
                    const std::pair<LatticePoint, LatticePoint>& b) const {
      if (a.first.c != b.first.c) return a.first.c < b.first.c;
      return a.second.c < b.second.c;
    }
  };

  using Table = std::map<std::pair<LatticePoint, LatticePoint>, double, PairLexLess>;

  static MagneticPotential zero(int d);
  /// d=2 symmetric gauge for a constant field: phase = (B/2)(x1 y2 - x2 y1).
  static MagneticPotential symmetric_gauge(double B);
  /// d=2 Landau gauge for a constant field, antisymmetrized midpoint form
  /// (B/2)(x1 + y1)(y2 - x2). On nearest-neighbour hops this reproduces the
  /// textbook Peierls phases B x1 for vertical hops and 0 for horizontal ones.
  static MagneticPotential landau_gauge(double B);
  static MagneticPotential table(int d, const Table& entries);
  /// Arbitrary callable, forced antisymmetric via the lexicographic order.
  static MagneticPotential callable(int d, PhaseFn f);
  /// Hash-based random potential with values in [-amplitude, amplitude].
  static MagneticPotential random(int d, std::uint64_t seed, double amplitude);

  double phase(const LatticePoint& x, const LatticePoint& y) const;
  int dim() const { return dim_; }
  const std::string& kind() const { return kind_; }
  double field_strength() const { return B_; }

  /// Serialize to the structured-text schema; "callable" potentials are not
  /// serializable and raise.
  std::string to_json() const;
  static MagneticPotential from_json(const std::string& text);

 private:
  MagneticPotential() = default;
  void check_dim(const LatticePoint& x, const LatticePoint& y) const;

  int dim_ = 0;
  std::string kind_;
  double B_ = 0.0;
  std::uint64_t seed_ = 0;
  double amplitude_ = 0.0;
  PhaseFn fn_;      // raw callable for "callable"/"random" kinds, lex-canonical
  Table table_;     // canonical (lex-ordered) entries for "table" kind
};

/// Arbitrary real function on Z^d used for gauge transformations.
class GaugeFunction {
 public:
  using Fn = std::function<double(const LatticePoint&)>;

  static GaugeFunction zero(int d);
  static GaugeFunction callable(int d, Fn f);
  static GaugeFunction random(int d, std::uint64_t seed, double amplitude);
  static GaugeFunction table(int d, const std::map<LatticePoint, double, LexLess>& entries);
  /// The gauge g(x) = pot.phase(x, 0) relating the direct and transversal
  /// cochains of the same potential.
  static GaugeFunction from_potential_origin(const MagneticPotential& pot);

  double value(const LatticePoint& x) const;
  int dim() const { return dim_; }

  std::string to_json() const;
  static GaugeFunction from_json(const std::string& text);

 private:
  GaugeFunction() = default;
  int dim_ = 0;
  std::string kind_;
  std::uint64_t seed_ = 0;
  double amplitude_ = 0.0;
  Fn fn_;
  std::map<LatticePoint, double, LexLess> table_;
};

}  // namespace magspec
