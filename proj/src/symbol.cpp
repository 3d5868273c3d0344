#include "magspec/symbol.hpp"

#include <json.hpp>
#include <stdexcept>

#include "magspec/hashrand.hpp"

namespace magspec {

using nlohmann::json;

CoefficientField CoefficientField::constant(int d, Complex c) {
  CoefficientField f;
  f.dim_ = d;
  f.kind_ = "const";
  f.fn_ = [c](const LatticePoint&) { return c; };
  f.bound_ = std::abs(c);
  f.certified_ = true;
  return f;
}

CoefficientField CoefficientField::table(int d, Table entries) {
  CoefficientField f;
  f.dim_ = d;
  f.kind_ = "table";
  auto shared = std::make_shared<const Table>(std::move(entries));
  f.table_ = shared;
  f.fn_ = [shared](const LatticePoint& q) {
    auto it = shared->find(q);
    return it == shared->end() ? Complex(0.0) : it->second;
  };
  double b = 0.0;
  for (const auto& [q, v] : *shared) b = std::max(b, std::abs(v));
  f.bound_ = b;
  f.certified_ = true;
  return f;
}

CoefficientField CoefficientField::callable(int d, Fn f, double bound, bool certified) {
  CoefficientField c;
  c.dim_ = d;
  c.kind_ = "lambda";
  c.fn_ = std::move(f);
  c.bound_ = bound;
  c.certified_ = certified;
  return c;
}

CoefficientField CoefficientField::random(int d, std::uint64_t seed, double amplitude) {
  CoefficientField c;
  c.dim_ = d;
  c.kind_ = "lambda";
  c.fn_ = [seed, amplitude](const LatticePoint& q) {
    std::uint64_t h = hashrand::hash_point(seed, q);
    double r = amplitude * hashrand::unit(h);
    double arg = kTwoPi * hashrand::unit(hashrand::mix(h));
    return std::polar(r, arg);
  };
  c.bound_ = amplitude;
  c.certified_ = true;
  return c;
}

const CoefficientField::Table* CoefficientField::table_entries() const {
  return table_ ? table_.get() : nullptr;
}

CoefficientField CoefficientField::translated(const LatticePoint& x) const {
  if ((int)x.dim() != dim_)
    throw std::invalid_argument("translate: dimension mismatch");
  CoefficientField r;
  r.dim_ = dim_;
  r.kind_ = "lambda";
  Fn base = fn_;
  r.fn_ = [base, x](const LatticePoint& q) { return base(q + x); };
  r.bound_ = bound_;
  r.certified_ = certified_;
  return r;
}

CoefficientField CoefficientField::scaled(Complex c) const {
  CoefficientField r;
  r.dim_ = dim_;
  r.kind_ = "lambda";
  Fn base = fn_;
  r.fn_ = [base, c](const LatticePoint& q) { return c * base(q); };
  r.bound_ = std::abs(c) * bound_;
  r.certified_ = certified_;
  return r;
}

CoefficientField CoefficientField::plus(const CoefficientField& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("coefficient sum: dimension mismatch");
  CoefficientField r;
  r.dim_ = dim_;
  r.kind_ = "lambda";
  Fn a = fn_, b = other.fn_;
  r.fn_ = [a, b](const LatticePoint& q) { return a(q) + b(q); };
  r.bound_ = bound_ + other.bound_;
  r.certified_ = certified_ && other.certified_;
  return r;
}

CoefficientField translate(const CoefficientField& f, const LatticePoint& x) {
  return f.translated(x);
}

Symbol::Symbol(int d, Terms terms, std::string id)
    : dim_(d), terms_(std::move(terms)), id_(std::move(id)) {
  for (const auto& [offset, coeff] : terms_)
    if ((int)offset.dim() != d || coeff.dim() != d)
      throw std::invalid_argument("symbol: offset/coefficient dimension mismatch");
}

Symbol Symbol::delta(int d, const LatticePoint& offset, const CoefficientField& c) {
  Terms t;
  t.emplace(offset, c);
  return Symbol(d, std::move(t), "delta" + offset.str());
}

Symbol Symbol::harper() {
  Terms t;
  CoefficientField one = CoefficientField::constant(2, 1.0);
  t.emplace(LatticePoint{1, 0}, one);
  t.emplace(LatticePoint{-1, 0}, one);
  t.emplace(LatticePoint{0, 1}, one);
  t.emplace(LatticePoint{0, -1}, one);
  return Symbol(2, std::move(t), "harper");
}

Symbol Symbol::free_hopping(int d) {
  Terms t;
  CoefficientField one = CoefficientField::constant(d, 1.0);
  for (int i = 0; i < d; ++i) {
    LatticePoint e((std::size_t)d);
    e[i] = 1;
    t.emplace(e, one);
    t.emplace(-e, one);
  }
  return Symbol(d, std::move(t), "free_hopping");
}

Symbol Symbol::diagonal(const CoefficientField& v) {
  Terms t;
  t.emplace(LatticePoint((std::size_t)v.dim()), v);
  return Symbol(v.dim(), std::move(t), "diagonal");
}

std::vector<LatticePoint> Symbol::support() const {
  std::vector<LatticePoint> s;
  s.reserve(terms_.size());
  for (const auto& [offset, coeff] : terms_) s.push_back(offset);
  return s;
}

Coord Symbol::support_radius() const {
  Coord r = 0;
  for (const auto& [offset, coeff] : terms_) r = std::max(r, offset.max_norm());
  return r;
}

CoefficientField Symbol::coeff(const LatticePoint& offset) const {
  auto it = terms_.find(offset);
  if (it != terms_.end()) return it->second;
  return CoefficientField::constant(dim_, 0.0);
}

Symbol Symbol::plus(const Symbol& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("symbol sum: dimension mismatch");
  Terms t = terms_;
  for (const auto& [offset, coeff] : other.terms_) {
    auto it = t.find(offset);
    if (it == t.end())
      t.emplace(offset, coeff);
    else
      it->second = it->second.plus(coeff);
  }
  return Symbol(dim_, std::move(t), id_ + "+" + other.id_);
}

Symbol Symbol::scaled(Complex c) const {
  Terms t;
  for (const auto& [offset, coeff] : terms_) t.emplace(offset, coeff.scaled(c));
  return Symbol(dim_, std::move(t), id_ + "*c");
}

NormValue norm_1_inf(const Symbol& s) {
  NormValue n;
  for (const auto& [offset, coeff] : s.terms()) {
    n.value += coeff.bound();
    n.certified = n.certified && coeff.certified();
  }
  return n;
}

double norm_1_inf_window(const Symbol& s, const Box& window) {
  if (window.dim() != s.dim())
    throw std::invalid_argument("norm window: dimension mismatch");
  double total = 0.0;
  for (const auto& [offset, coeff] : s.terms()) {
    double sup = 0.0;
    window.for_each_site([&](std::size_t, const LatticePoint& q) {
      sup = std::max(sup, std::abs(coeff.value(q)));
    });
    total += sup;
  }
  return total;
}

Symbol twisted_product(const Symbol& f, const Symbol& g, const TwoCocycle& coc) {
  if (f.dim() != g.dim() || f.dim() != coc.dim())
    throw std::invalid_argument("twisted product: dimension mismatch");
  struct Contribution {
    CoefficientField fy, gz;
    LatticePoint y;
  };
  std::map<LatticePoint, std::vector<Contribution>, LexLess> groups;
  for (const auto& [y, fy] : f.terms())
    for (const auto& [z, gz] : g.terms())
      groups[y + z].push_back({fy, gz, y});

  Symbol::Terms terms;
  for (auto& [x, contributions] : groups) {
    double bound = 0.0;
    bool certified = true;
    for (const auto& c : contributions) {
      bound += c.fy.bound() * c.gz.bound();
      certified = certified && c.fy.certified() && c.gz.certified();
    }
    auto shared = std::make_shared<const std::vector<Contribution>>(std::move(contributions));
    LatticePoint offset = x;
    auto fn = [shared, coc, offset](const LatticePoint& q) {
      Complex acc = 0.0;
      for (const auto& c : *shared)
        acc += c.fy.value(q) * c.gz.value(q + c.y) *
               std::polar(1.0, coc.phase(q, c.y, offset - c.y));
      return acc;
    };
    terms.emplace(x, CoefficientField::callable(f.dim(), fn, bound, certified));
  }
  return Symbol(f.dim(), std::move(terms), "(" + f.id() + "<>" + g.id() + ")");
}

Symbol involution(const Symbol& f) {
  Symbol::Terms terms;
  for (const auto& [y, fy] : f.terms()) {
    LatticePoint offset = -y;
    CoefficientField::Fn fn = [fy, y](const LatticePoint& q) {
      return std::conj(fy.value(q - y));
    };
    terms.emplace(offset,
                  CoefficientField::callable(f.dim(), fn, fy.bound(), fy.certified()));
  }
  return Symbol(f.dim(), std::move(terms), f.id() + "^<>");
}

bool is_selfadjoint(const Symbol& f, const Box& window, double tol) {
  if (window.dim() != f.dim())
    throw std::invalid_argument("is_selfadjoint: window dimension mismatch");
  Symbol adj = involution(f);
  std::map<LatticePoint, int, LexLess> offsets;
  for (const auto& [o, c] : f.terms()) offsets[o] = 1;
  for (const auto& [o, c] : adj.terms()) offsets[o] = 1;
  for (const auto& [o, unused] : offsets) {
    CoefficientField a = f.coeff(o);
    CoefficientField b = adj.coeff(o);
    bool ok = true;
    window.for_each_site([&](std::size_t, const LatticePoint& q) {
      if (std::abs(a.value(q) - b.value(q)) > tol) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

TruncationResult truncate_symbol(
    int d, const std::function<CoefficientField(const LatticePoint&)>& coeff_at,
    Coord radius, Coord report_radius) {
  if (report_radius < radius)
    throw std::invalid_argument("truncate: report_radius must be >= radius");
  TruncationResult result;
  Symbol::Terms terms;
  Box scan = Box::dirichlet(d, report_radius);
  scan.for_each_site([&](std::size_t, const LatticePoint& offset) {
    CoefficientField c = coeff_at(offset);
    if (c.bound() == 0.0) return;
    if (offset.max_norm() <= radius)
      terms.emplace(offset, c);
    else
      result.discarded_mass += c.bound();
  });
  result.symbol = Symbol(d, std::move(terms), "truncated");
  return result;
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

json coeff_to_json(const CoefficientField& c) {
  json j;
  if (c.kind() == "const") {
    LatticePoint probe((std::size_t)c.dim());
    Complex v = c.value(probe);
    j["kind"] = "const";
    j["re"] = v.real();
    j["im"] = v.imag();
  } else if (c.kind() == "table") {
    j["kind"] = "table";
    json entries = json::array();
    for (const auto& [q, v] : *c.table_entries())
      entries.push_back(json::array({point_to_json(q), v.real(), v.imag()}));
    j["entries"] = entries;
  } else {
    throw std::invalid_argument("symbol: lambda coefficients are not serializable");
  }
  return j;
}

CoefficientField coeff_from_json(int d, const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "const")
    return CoefficientField::constant(d, Complex(j.at("re").get<double>(),
                                                 j.at("im").get<double>()));
  if (kind == "table") {
    CoefficientField::Table t;
    for (const auto& row : j.at("entries"))
      t[point_from_json(row.at(0))] =
          Complex(row.at(1).get<double>(), row.at(2).get<double>());
    return CoefficientField::table(d, std::move(t));
  }
  throw std::invalid_argument("symbol: unknown coefficient kind '" + kind + "'");
}

}  // namespace

std::string Symbol::to_json() const {
  json j;
  j["d"] = dim_;
  j["id"] = id_;
  json terms = json::array();
  for (const auto& [offset, coeff] : terms_)
    terms.push_back(json{{"offset", point_to_json(offset)}, {"coeff", coeff_to_json(coeff)}});
  j["terms"] = terms;
  return j.dump();
}

Symbol Symbol::from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.contains("kind")) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "harper") return harper();
    if (kind == "free_hopping") return free_hopping(j.at("d").get<int>());
    if (kind == "diagonal") {
      int d = j.at("d").get<int>();
      return diagonal(coeff_from_json(d, j.at("coeff")));
    }
    throw std::invalid_argument("symbol: unknown builder '" + kind + "'");
  }
  int d = j.at("d").get<int>();
  Terms terms;
  for (const auto& term : j.at("terms"))
    terms.emplace(point_from_json(term.at("offset")), coeff_from_json(d, term.at("coeff")));
  std::string id = j.contains("id") ? j.at("id").get<std::string>() : "symbol";
  return Symbol(d, std::move(terms), id);
}

}  // namespace magspec
