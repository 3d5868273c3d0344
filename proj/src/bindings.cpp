// Python bindings: the main operations of the library exposed on numpy types.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "magspec/field.hpp"
#include "magspec/represent.hpp"
#include "magspec/spectrum.hpp"
#include "magspec/version.hpp"

namespace py = pybind11;
using namespace magspec;

namespace {

LatticePoint to_point(const std::vector<Coord>& v) { return LatticePoint(v); }

Spectrum spectrum_from_array(const Eigen::VectorXd& values) {
  Spectrum s;
  s.values.assign(values.data(), values.data() + values.size());
  std::sort(s.values.begin(), s.values.end());
  return s;
}

Eigen::VectorXd to_array(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), (Eigen::Index)v.size());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Magnetic lattice operators on Z^d: cocycles, twisted symbols, spectra";
  m.attr("__version__") = kVersion;

  py::class_<MagneticPotential>(m, "MagneticPotential")
      .def_static("zero", &MagneticPotential::zero, py::arg("d"))
      .def_static("symmetric_gauge", &MagneticPotential::symmetric_gauge, py::arg("B"))
      .def_static("landau_gauge", &MagneticPotential::landau_gauge, py::arg("B"))
      .def_static("random", &MagneticPotential::random, py::arg("d"), py::arg("seed"),
                  py::arg("amplitude"))
      .def_static("from_json", &MagneticPotential::from_json)
      .def("to_json", &MagneticPotential::to_json)
      .def("phase",
           [](const MagneticPotential& p, const std::vector<Coord>& x,
              const std::vector<Coord>& y) { return p.phase(to_point(x), to_point(y)); })
      .def_property_readonly("d", &MagneticPotential::dim)
      .def_property_readonly("kind", &MagneticPotential::kind);

  py::class_<GaugeFunction>(m, "GaugeFunction")
      .def_static("zero", &GaugeFunction::zero, py::arg("d"))
      .def_static("random", &GaugeFunction::random, py::arg("d"), py::arg("seed"),
                  py::arg("amplitude"))
      .def_static("from_potential_origin", &GaugeFunction::from_potential_origin)
      .def("value", [](const GaugeFunction& g, const std::vector<Coord>& x) {
        return g.value(to_point(x));
      });

  py::class_<TwoCocycle>(m, "TwoCocycle")
      .def_static("trivial", &TwoCocycle::trivial, py::arg("d"))
      .def("phase",
           [](const TwoCocycle& c, const std::vector<Coord>& q, const std::vector<Coord>& x,
              const std::vector<Coord>& y) {
             return c.phase(to_point(q), to_point(x), to_point(y));
           })
      .def_property_readonly("d", &TwoCocycle::dim);

  py::class_<OneCochain>(m, "OneCochain")
      .def("phase", [](const OneCochain& c, const std::vector<Coord>& q,
                       const std::vector<Coord>& x) { return c.phase(to_point(q), to_point(x)); })
      .def_property_readonly("d", &OneCochain::dim);

  m.def("cocycle_from_potential", &cocycle_from_potential);
  m.def("cochain_transversal", &cochain_transversal);
  m.def("cochain_direct", &cochain_direct);
  m.def("gauge_transform_potential", &gauge_transform_potential);
  m.def("potential_from_cocycle", &potential_from_cocycle, py::arg("cocycle"),
        py::arg("invariant_tol") = 1e-9);

  py::class_<CoefficientField>(m, "CoefficientField")
      .def_static("constant", &CoefficientField::constant, py::arg("d"), py::arg("value"))
      .def_static("random", &CoefficientField::random, py::arg("d"), py::arg("seed"),
                  py::arg("amplitude"))
      .def("value", [](const CoefficientField& c, const std::vector<Coord>& q) {
        return c.value(to_point(q));
      })
      .def_property_readonly("bound", &CoefficientField::bound)
      .def_property_readonly("certified", &CoefficientField::certified);

  py::class_<Symbol>(m, "Symbol")
      .def_static("harper", &Symbol::harper)
      .def_static("free_hopping", &Symbol::free_hopping, py::arg("d"))
      .def_static("diagonal", &Symbol::diagonal)
      .def_static(
          "delta",
          [](int d, const std::vector<Coord>& offset, const CoefficientField& c) {
            return Symbol::delta(d, to_point(offset), c);
          })
      .def_static("from_json", &Symbol::from_json)
      .def("to_json", &Symbol::to_json)
      .def("support",
           [](const Symbol& s) {
             std::vector<std::vector<Coord>> out;
             for (const auto& p : s.support()) out.push_back(p.c);
             return out;
           })
      .def_property_readonly("d", &Symbol::dim);

  m.def("norm_1_inf", [](const Symbol& s) {
    NormValue n = norm_1_inf(s);
    return py::make_tuple(n.value, n.certified);
  });
  m.def("twisted_product", &twisted_product);
  m.def("involution", &involution);
  m.def("is_selfadjoint", &is_selfadjoint, py::arg("symbol"), py::arg("window"), py::arg("tol"));

  py::class_<Box>(m, "Box")
      .def_static("dirichlet", &Box::dirichlet, py::arg("d"), py::arg("radius"))
      .def_static("periodic", &Box::periodic, py::arg("d"), py::arg("sides"), py::arg("period"))
      .def_property_readonly("site_count", &Box::site_count)
      .def("__repr__", &Box::str);

  m.def("assemble", [](const Symbol& h, const OneCochain& lam, const Box& box) {
    return assemble(h, lam, box).entries;
  });
  m.def("gauge_unitary", [](const GaugeFunction& g, const Box& box) {
    return gauge_unitary(g, box).entries;
  });
  m.def("homomorphism_defect", &homomorphism_defect, py::arg("f"), py::arg("g"), py::arg("lam"),
        py::arg("coc"), py::arg("box"), py::arg("margin") = -1);

  m.def("eigenvalues", [](const Eigen::MatrixXcd& a) {
    return to_array(eigenvalues(a).values);
  });
  m.def("hausdorff", [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return hausdorff(spectrum_from_array(a), spectrum_from_array(b));
  });
  m.def("gaps", [](const Eigen::VectorXd& values, double resolution) {
    std::vector<std::pair<double, double>> out;
    for (const Gap& g : gaps(spectrum_from_array(values), resolution))
      out.emplace_back(g.lo, g.hi);
    return out;
  });
  m.def("resolvent_norm", [](const Eigen::VectorXd& values, std::complex<double> z) {
    return resolvent_norm(spectrum_from_array(values), z);
  });
  m.def("bloch_bands_harper", [](int p, int q, int kgrid) {
    return to_array(bloch_bands_harper(p, q, kgrid).values);
  });

  py::enum_<CochainPolicy>(m, "CochainPolicy")
      .value("direct", CochainPolicy::Direct)
      .value("transversal", CochainPolicy::Transversal);

  py::class_<CocycleField>(m, "CocycleField")
      .def("at", [](const CocycleField& f, double eps) { return f.at(eps); })
      .def_property_readonly("id", [](const CocycleField& f) { return f.id; });
  m.def("scaled_cocycle_field", &scaled_cocycle_field);
  m.def("constant_cocycle_field", &constant_cocycle_field);

  m.def(
      "harper_flux_scan",
      [](double base_B, Coord L, int grid_n, CochainPolicy policy, int workers) {
        SymbolFamily family = SymbolFamily::constant(Symbol::harper());
        CocycleField field = scaled_cocycle_field(MagneticPotential::symmetric_gauge(base_B));
        SpectrumScan scan = spectrum_scan(family, field, policy, Box::dirichlet(2, L),
                                          ParameterGrid::uniform(grid_n), workers);
        std::vector<Eigen::VectorXd> spectra;
        spectra.reserve(scan.spectra.size());
        for (const auto& s : scan.spectra) spectra.push_back(to_array(s.values));
        return py::make_tuple(to_array(scan.grid.points), spectra);
      },
      py::arg("base_B") = kTwoPi, py::arg("L") = 10, py::arg("grid_n") = 33,
      py::arg("policy") = CochainPolicy::Direct, py::arg("workers") = 1,
      "Scan the Harper spectrum over flux eps*base_B; returns (grid, [spectra]).");

  m.def("triangle_area", [](const std::vector<Coord>& a, const std::vector<Coord>& b,
                            const std::vector<Coord>& c) {
    return triangle_area(to_point(a), to_point(b), to_point(c));
  });
}
