#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace magspec {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Fold a phase (radians) into (-pi, pi]; the branch cut at pi belongs to +pi.
inline double fold_phase(double t) {
  double r = std::remainder(t, kTwoPi);
  if (r <= -kPi) r = kPi;
  return r;
}

/// |a - b| as a folded phase distance.
inline double phase_defect(double a, double b) {
  return std::abs(fold_phase(a - b));
}

using Coord = std::int64_t;

/// Point of the integer lattice Z^d.
struct LatticePoint {
  std::vector<Coord> c;

  LatticePoint() = default;
  explicit LatticePoint(std::size_t d) : c(d, 0) {}
  LatticePoint(std::initializer_list<Coord> init) : c(init) {}
  explicit LatticePoint(std::vector<Coord> v) : c(std::move(v)) {}

  std::size_t dim() const { return c.size(); }
  Coord operator[](std::size_t i) const { return c[i]; }
  Coord& operator[](std::size_t i) { return c[i]; }

  friend LatticePoint operator+(const LatticePoint& a, const LatticePoint& b) {
    LatticePoint r(a.c.size());
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend LatticePoint operator-(const LatticePoint& a, const LatticePoint& b) {
    LatticePoint r(a.c.size());
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
  friend LatticePoint operator-(const LatticePoint& a) {
    LatticePoint r(a.c.size());
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = -a.c[i];
    return r;
  }
  friend bool operator==(const LatticePoint& a, const LatticePoint& b) {
    return a.c == b.c;
  }

  Coord max_norm() const {
    Coord m = 0;
    for (Coord v : c) m = std::max(m, std::abs(v));
    return m;
  }

  bool is_zero() const {
    for (Coord v : c) if (v != 0) return false;
    return true;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(c[i]);
    }
    return s + ")";
  }
};

/// Strict lexicographic order on Z^d (first coordinate most significant).
inline bool lex_less(const LatticePoint& a, const LatticePoint& b) {
  return a.c < b.c;
}

struct LexLess {
  bool operator()(const LatticePoint& a, const LatticePoint& b) const {
    return lex_less(a, b);
  }
};

enum class Boundary { Dirichlet, Periodic };

/// Finite truncation window of Z^d.
///
/// Dirichlet boxes are centered cubes {x : |x|_inf <= L}. Periodic boxes are
/// fundamental domains [0, side_i) of a torus whose side lengths must be
/// multiples of the declared magnetic period. Sites are enumerated in
/// lexicographic order of their coordinates (first coordinate slowest), so
/// assembled matrices are reproducible bit for bit.
class Box {
 public:
  static Box dirichlet(int d, Coord radius) {
    if (d < 1 || radius < 0) throw std::invalid_argument("box: bad dimension or radius");
    Box b;
    b.dim_ = d;
    b.radius_ = radius;
    b.boundary_ = Boundary::Dirichlet;
    b.lo_.assign(d, -radius);
    b.side_.assign(d, 2 * radius + 1);
    b.init_strides();
    return b;
  }

  static Box periodic(int d, std::vector<Coord> sides, std::vector<Coord> period) {
    if (d < 1 || (int)sides.size() != d || (int)period.size() != d)
      throw std::invalid_argument("box: dimension mismatch");
    for (int i = 0; i < d; ++i) {
      if (sides[i] < 1 || period[i] < 1)
        throw std::invalid_argument("box: sides and period components must be positive");
      if (sides[i] % period[i] != 0)
        throw std::invalid_argument("box: period component " + std::to_string(period[i]) +
                                    " does not divide side " + std::to_string(sides[i]));
    }
    Box b;
    b.dim_ = d;
    b.radius_ = 0;
    b.boundary_ = Boundary::Periodic;
    b.lo_.assign(d, 0);
    b.side_ = std::move(sides);
    b.period_ = std::move(period);
    b.init_strides();
    return b;
  }

  int dim() const { return dim_; }
  Coord radius() const { return radius_; }
  Boundary boundary() const { return boundary_; }
  const std::vector<Coord>& sides() const { return side_; }
  const std::vector<Coord>& period() const { return period_; }

  std::size_t site_count() const { return count_; }

  LatticePoint site(std::size_t index) const {
    LatticePoint p((std::size_t)dim_);
    for (int i = 0; i < dim_; ++i) {
      p[i] = lo_[i] + (Coord)(index / stride_[i]);
      index %= stride_[i];
    }
    return p;
  }

  bool contains(const LatticePoint& p) const {
    if ((int)p.dim() != dim_) return false;
    for (int i = 0; i < dim_; ++i)
      if (p[i] < lo_[i] || p[i] >= lo_[i] + side_[i]) return false;
    return true;
  }

  std::optional<std::size_t> index_of(const LatticePoint& p) const {
    if (!contains(p)) return std::nullopt;
    std::size_t idx = 0;
    for (int i = 0; i < dim_; ++i) idx += (std::size_t)(p[i] - lo_[i]) * stride_[i];
    return idx;
  }

  /// Fold a point into the fundamental domain (periodic boxes only).
  LatticePoint wrap(const LatticePoint& p) const {
    LatticePoint r(p);
    for (int i = 0; i < dim_; ++i) {
      Coord m = ((p[i] - lo_[i]) % side_[i] + side_[i]) % side_[i];
      r[i] = lo_[i] + m;
    }
    return r;
  }

  void for_each_site(const std::function<void(std::size_t, const LatticePoint&)>& fn) const {
    for (std::size_t i = 0; i < count_; ++i) fn(i, site(i));
  }

  std::string str() const {
    std::string s = boundary_ == Boundary::Dirichlet ? "dirichlet" : "periodic";
    s += " d=" + std::to_string(dim_);
    if (boundary_ == Boundary::Dirichlet) {
      s += " L=" + std::to_string(radius_);
    } else {
      s += " sides=";
      for (int i = 0; i < dim_; ++i) s += (i ? "x" : "") + std::to_string(side_[i]);
      s += " period=";
      for (int i = 0; i < dim_; ++i) s += (i ? "x" : "") + std::to_string(period_[i]);
    }
    return s;
  }

 private:
  void init_strides() {
    stride_.assign(dim_, 1);
    for (int i = dim_ - 2; i >= 0; --i) stride_[i] = stride_[i + 1] * (std::size_t)side_[i + 1];
    count_ = stride_[0] * (std::size_t)side_[0];
  }

  int dim_ = 0;
  Coord radius_ = 0;
  Boundary boundary_ = Boundary::Dirichlet;
  std::vector<Coord> lo_, side_, period_;
  std::vector<std::size_t> stride_;
  std::size_t count_ = 0;
};

}  // namespace magspec
