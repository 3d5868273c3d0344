#include "magspec/potential.hpp"

#include <json.hpp>
#include <stdexcept>

#include "magspec/hashrand.hpp"

namespace magspec {

using nlohmann::json;

void MagneticPotential::check_dim(const LatticePoint& x, const LatticePoint& y) const {
  if ((int)x.dim() != dim_ || (int)y.dim() != dim_)
    throw std::invalid_argument("potential: dimension mismatch, expected d=" +
                                std::to_string(dim_));
}

double MagneticPotential::phase(const LatticePoint& x, const LatticePoint& y) const {
  check_dim(x, y);
  if (kind_ == "zero") return 0.0;
  if (kind_ == "symmetric_gauge")
    return 0.5 * B_ * ((double)x[0] * (double)y[1] - (double)x[1] * (double)y[0]);
  if (kind_ == "landau_gauge")
    return 0.5 * B_ * ((double)(x[0] + y[0])) * ((double)(y[1] - x[1]));
  if (kind_ == "table") {
    if (x.c == y.c) return 0.0;
    if (x.c < y.c) {
      auto it = table_.find({x, y});
      return it == table_.end() ? 0.0 : it->second;
    }
    auto it = table_.find({y, x});
    return it == table_.end() ? 0.0 : -it->second;
  }
  // callable kinds, forced antisymmetric on the ordered pair
  if (x.c == y.c) return 0.0;
  if (x.c < y.c) return fn_(x, y);
  return -fn_(y, x);
}

MagneticPotential MagneticPotential::zero(int d) {
  MagneticPotential p;
  p.dim_ = d;
  p.kind_ = "zero";
  return p;
}

MagneticPotential MagneticPotential::symmetric_gauge(double B) {
  MagneticPotential p;
  p.dim_ = 2;
  p.kind_ = "symmetric_gauge";
  p.B_ = B;
  return p;
}

MagneticPotential MagneticPotential::landau_gauge(double B) {
  MagneticPotential p;
  p.dim_ = 2;
  p.kind_ = "landau_gauge";
  p.B_ = B;
  return p;
}

MagneticPotential MagneticPotential::table(int d, const Table& entries) {
  MagneticPotential p;
  p.dim_ = d;
  p.kind_ = "table";
  for (const auto& [key, value] : entries) {
    const auto& [x, y] = key;
    if ((int)x.dim() != d || (int)y.dim() != d)
      throw std::invalid_argument("potential table: entry dimension mismatch");
    if (x.c == y.c) {
      if (value != 0.0)
        throw std::invalid_argument("antisymmetry: diagonal entry phi" + x.str() + " must vanish");
      continue;
    }
    auto canonical = x.c < y.c ? std::make_pair(x, y) : std::make_pair(y, x);
    double canonical_value = x.c < y.c ? value : -value;
    auto [it, inserted] = p.table_.emplace(canonical, canonical_value);
    if (!inserted && it->second != canonical_value)
      throw std::invalid_argument("antisymmetry: inconsistent table entries for pair " +
                                  canonical.first.str() + " " + canonical.second.str());
  }
  return p;
}

MagneticPotential MagneticPotential::callable(int d, PhaseFn f) {
  MagneticPotential p;
  p.dim_ = d;
  p.kind_ = "callable";
  p.fn_ = std::move(f);
  return p;
}

MagneticPotential MagneticPotential::random(int d, std::uint64_t seed, double amplitude) {
  MagneticPotential p;
  p.dim_ = d;
  p.kind_ = "random";
  p.seed_ = seed;
  p.amplitude_ = amplitude;
  p.fn_ = [seed, amplitude](const LatticePoint& x, const LatticePoint& y) {
    return hashrand::symmetric(hashrand::hash_pair(seed, x, y), amplitude);
  };
  return p;
}

namespace {

json point_to_json(const LatticePoint& p) {
  json a = json::array();
  for (Coord c : p.c) a.push_back(c);
  return a;
}

LatticePoint point_from_json(const json& a) {
  LatticePoint p;
  for (const auto& v : a) p.c.push_back(v.get<Coord>());
  return p;
}

}  // namespace

std::string MagneticPotential::to_json() const {
  json j;
  j["kind"] = kind_;
  j["d"] = dim_;
  if (kind_ == "symmetric_gauge" || kind_ == "landau_gauge") j["B"] = B_;
  if (kind_ == "random") {
    j["seed"] = seed_;
    j["amplitude"] = amplitude_;
  }
  if (kind_ == "table") {
    json t = json::array();
    for (const auto& [key, value] : table_)
      t.push_back(json::array({point_to_json(key.first), point_to_json(key.second), value}));
    j["table"] = t;
  }
  if (kind_ == "callable")
    throw std::invalid_argument("potential: callable kind is not serializable");
  return j.dump();
}

MagneticPotential MagneticPotential::from_json(const std::string& text) {
  json j = json::parse(text);
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") return zero(j.at("d").get<int>());
  if (kind == "symmetric_gauge") return symmetric_gauge(j.at("B").get<double>());
  if (kind == "landau_gauge") return landau_gauge(j.at("B").get<double>());
  if (kind == "random")
    return random(j.at("d").get<int>(), j.at("seed").get<std::uint64_t>(),
                  j.at("amplitude").get<double>());
  if (kind == "table") {
    Table entries;
    for (const auto& row : j.at("table")) {
      LatticePoint x = point_from_json(row.at(0));
      LatticePoint y = point_from_json(row.at(1));
      double v = row.at(2).get<double>();
      auto key = std::make_pair(x, y);
      auto [it, inserted] = entries.emplace(key, v);
      if (!inserted && it->second != v)
        throw std::invalid_argument("potential table: duplicate pair with different phases");
    }
    return table(j.at("d").get<int>(), entries);
  }
  throw std::invalid_argument("potential: unknown kind '" + kind + "'");
}

double GaugeFunction::value(const LatticePoint& x) const {
  if ((int)x.dim() != dim_)
    throw std::invalid_argument("gauge: dimension mismatch, expected d=" + std::to_string(dim_));
  if (kind_ == "zero") return 0.0;
  if (kind_ == "table") {
    auto it = table_.find(x);
    return it == table_.end() ? 0.0 : it->second;
  }
  return fn_(x);
}

GaugeFunction GaugeFunction::zero(int d) {
  GaugeFunction g;
  g.dim_ = d;
  g.kind_ = "zero";
  return g;
}

GaugeFunction GaugeFunction::callable(int d, Fn f) {
  GaugeFunction g;
  g.dim_ = d;
  g.kind_ = "callable";
  g.fn_ = std::move(f);
  return g;
}

GaugeFunction GaugeFunction::random(int d, std::uint64_t seed, double amplitude) {
  GaugeFunction g;
  g.dim_ = d;
  g.kind_ = "random";
  g.seed_ = seed;
  g.amplitude_ = amplitude;
  g.fn_ = [seed, amplitude](const LatticePoint& x) {
    return hashrand::symmetric(hashrand::hash_point(seed, x), amplitude);
  };
  return g;
}

GaugeFunction GaugeFunction::table(int d, const std::map<LatticePoint, double, LexLess>& entries) {
  GaugeFunction g;
  g.dim_ = d;
  g.kind_ = "table";
  g.table_ = entries;
  return g;
}

GaugeFunction GaugeFunction::from_potential_origin(const MagneticPotential& pot) {
  GaugeFunction g;
  g.dim_ = pot.dim();
  g.kind_ = "callable";
  LatticePoint origin((std::size_t)pot.dim());
  g.fn_ = [pot, origin](const LatticePoint& x) { return pot.phase(x, origin); };
  return g;
}

std::string GaugeFunction::to_json() const {
  json j;
  j["kind"] = kind_;
  j["d"] = dim_;
  if (kind_ == "random") {
    j["seed"] = seed_;
    j["amplitude"] = amplitude_;
  }
  if (kind_ == "table") {
    json t = json::array();
    for (const auto& [x, v] : table_) t.push_back(json::array({point_to_json(x), v}));
    j["table"] = t;
  }
  if (kind_ == "callable")
    throw std::invalid_argument("gauge: callable kind is not serializable");
  return j.dump();
}

GaugeFunction GaugeFunction::from_json(const std::string& text) {
  json j = json::parse(text);
  std::string kind = j.at("kind").get<std::string>();
  int d = j.at("d").get<int>();
  if (kind == "zero") return zero(d);
  if (kind == "random")
    return random(d, j.at("seed").get<std::uint64_t>(), j.at("amplitude").get<double>());
  if (kind == "table") {
    std::map<LatticePoint, double, LexLess> entries;
    for (const auto& row : j.at("table"))
      entries[point_from_json(row.at(0))] = row.at(1).get<double>();
    return table(d, entries);
  }
  throw std::invalid_argument("gauge: unknown kind '" + kind + "'");
}

}  // namespace magspec
