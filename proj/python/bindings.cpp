#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dilab/config.hpp"
#include "dilab/error.hpp"
#include "dilab/experiments.hpp"
#include "dilab/fft.hpp"
#include "dilab/functionals.hpp"
#include "dilab/initial_data.hpp"
#include "dilab/multiplier.hpp"
#include "dilab/potential.hpp"
#include "dilab/scattering.hpp"
#include "dilab/spectral.hpp"

namespace py = pybind11;
using namespace dilab;

namespace {

struct PyGrid {
  GridPtr ptr;
};

struct PyHamiltonian {
  SpectralOperatorPtr op;
};

ComplexField as_field(const PyGrid& g, const ComplexVector& v) {
  if (v.size() != g.ptr->size())
    throw Error(ErrorCode::incompatible_grid, "expected " + std::to_string(g.ptr->size()) + " values, got " +
                                                  std::to_string(v.size()));
  return ComplexField(g.ptr, v);
}

PotentialParams potential_params(const py::dict& d) {
  PotentialParams p;
  for (auto [k, v] : d) {
    const auto key = k.cast<std::string>();
    const double x = v.cast<double>();
    if (key == "c") p.c = x;
    else if (key == "p") p.p = x;
    else if (key == "a") p.a = x;
    else if (key == "sigma") p.sigma = x;
    else if (key == "rho") p.rho = x;
    else if (key == "q") p.q = x;
    else throw Error(ErrorCode::invalid_argument, "unknown potential parameter '" + key + "'");
  }
  return p;
}

MultiplierParams multiplier_params(const py::dict& d) {
  MultiplierParams p;
  for (auto [k, v] : d) {
    const auto key = k.cast<std::string>();
    if (key == "eps") p.eps = v.cast<double>();
    else if (key == "k") p.k = v.cast<int>();
    else if (key == "inner") p.inner = v.cast<double>();
    else if (key == "R") p.R = v.cast<double>();
    else if (key == "offset") p.offset = v.cast<double>();
    else if (key == "scale") p.scale = v.cast<double>();
    else throw Error(ErrorCode::invalid_argument, "unknown multiplier parameter '" + key + "'");
  }
  return p;
}

DataParams data_params(const std::string& family, const py::dict& d) {
  DataParams p;
  p.family = family;
  for (auto [k, v] : d) {
    const auto key = k.cast<std::string>();
    if (key == "width") p.width = v.cast<double>();
    else if (key == "amplitude") p.amplitude = v.cast<double>();
    else if (key == "xi0") p.xi0 = v.cast<double>();
    else if (key == "radius") p.radius = v.cast<double>();
    else if (key == "normalize") p.normalize = v.cast<bool>();
    else if (key == "bandlimit") p.bandlimit = v.cast<double>();
    else if (key == "envelope") p.envelope = v.cast<double>();
    else if (key == "hole") p.hole = v.cast<double>();
    else if (key == "modes") p.modes = v.cast<int>();
    else if (key == "seed") p.seed = v.cast<std::uint64_t>();
    else throw Error(ErrorCode::invalid_argument, "unknown data parameter '" + key + "'");
  }
  return p;
}

py::dict run(const std::function<ExperimentConfig()>& load, const std::vector<std::string>& overrides) {
  RunOutcome out;
  try {
    ExperimentConfig cfg = load();
    for (const auto& o : overrides) cfg.set(o);
    out = run_experiment(cfg);
  } catch (const Error& e) {
    out.exit_code = exit_code_for(e.code());
    out.message = e.what();
  }
  py::dict d;
  d["exit_code"] = out.exit_code;
  d["message"] = out.message;
  d["report"] = out.has_report ? py::cast(out.report.to_json().dump()) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  static py::exception<Error> error(m, "DilabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<PyGrid>(m, "Grid")
      .def(py::init([](const std::string& mode, int n, double L, int N) {
             return PyGrid{build_grid(parse_grid_mode(mode), n, L, N)};
           }),
           py::arg("mode"), py::arg("n"), py::arg("L"), py::arg("N"))
      .def_property_readonly("mode", [](const PyGrid& g) { return to_string(g.ptr->mode()); })
      .def_property_readonly("dimension", [](const PyGrid& g) { return g.ptr->dimension(); })
      .def_property_readonly("extent", [](const PyGrid& g) { return g.ptr->extent(); })
      .def_property_readonly("points", [](const PyGrid& g) { return g.ptr->points(); })
      .def_property_readonly("spacing", [](const PyGrid& g) { return g.ptr->spacing(); })
      .def_property_readonly("size", [](const PyGrid& g) { return g.ptr->size(); })
      .def_property_readonly("axis", [](const PyGrid& g) { return g.ptr->axis(); })
      .def_property_readonly("radius", [](const PyGrid& g) { return g.ptr->radius(); })
      .def_property_readonly("weights", [](const PyGrid& g) { return g.ptr->weights(); })
      .def("coordinate", [](const PyGrid& g, int a) { return g.ptr->coordinate(a); })
      .def("__repr__", [](const PyGrid& g) { return "<Grid " + g.ptr->describe() + ">"; });

  m.def("initial_data",
        [](const PyGrid& g, const std::string& family, const py::dict& params) {
          return make_initial_data(g.ptr, data_params(family, params)).values;
        },
        py::arg("grid"), py::arg("family") = "gaussian", py::arg("params") = py::dict());

  py::class_<PyHamiltonian>(m, "Hamiltonian")
      .def(py::init([](const PyGrid& g, const std::string& family, const py::dict& params) {
             return PyHamiltonian{
                 assemble_hamiltonian(sample_potential(parse_potential_family(family), potential_params(params), g.ptr))};
           }),
           py::arg("grid"), py::arg("potential") = "zero", py::arg("params") = py::dict())
      .def_property_readonly("eigenvalues", [](const PyHamiltonian& h) { return h.op->eigenvalues(); })
      .def_property_readonly("potential", [](const PyHamiltonian& h) { return h.op->potential()->values(); })
      .def_property_readonly("hypotheses", [](const PyHamiltonian& h) {
        const Hypotheses& x = h.op->potential()->hypotheses();
        py::dict d;
        d["sr0"] = x.sr0;
        d["sr0_C"] = x.sr0_C;
        d["sr0_eps"] = x.sr0_eps;
        d["decay"] = x.decay;
        d["new"] = x.new_limit;
        d["rageweak"] = x.rageweak;
        return d;
      })
      .def("apply", [](const PyHamiltonian& h, const ComplexVector& f) {
        return h.op->apply(as_field({h.op->grid()}, f)).values;
      })
      .def("propagate", [](const PyHamiltonian& h, const ComplexVector& f, double t) {
        return h.op->propagate(as_field({h.op->grid()}, f), t).values;
      }, py::arg("f"), py::arg("t"))
      .def("propagate_many", [](const PyHamiltonian& h, const ComplexVector& f, const std::vector<double>& times) {
        return h.op->propagate_many(as_field({h.op->grid()}, f), times);
      })
      .def("sobolev_norm", [](const PyHamiltonian& h, const ComplexVector& f, double s) {
        return h.op->sobolev_norm(as_field({h.op->grid()}, f), s);
      }, py::arg("f"), py::arg("s"))
      .def("functional_calculus",
           [](const PyHamiltonian& h, const std::function<cplx(double)>& phi, const ComplexVector& f) {
             return h.op->functional_calculus(phi, as_field({h.op->grid()}, f)).values;
           });

  m.def("mass", [](const PyGrid& g, const ComplexVector& f) { return as_field(g, f).mass(); });
  m.def("weighted_mass", [](const PyGrid& g, const ComplexVector& f) { return weighted_mass(as_field(g, f)); });
  m.def("centered_flux_G", [](const PyGrid& g, const ComplexVector& f) { return centered_flux_G(as_field(g, f)); });
  m.def("dispersive_defect",
        [](const PyGrid& g, const ComplexVector& u, double t) { return dispersive_defect(as_field(g, u), t); });
  m.def("homogeneous_half_norm_sq", [](const PyGrid& g, const ComplexVector& f) {
    if (g.ptr->radial()) {
      SpectralOperator free_op(zero_potential(g.ptr));
      return homogeneous_half_norm_sq(as_field(g, f), &free_op);
    }
    return homogeneous_half_norm_sq(as_field(g, f));
  });
  m.def("bilinear_form_a", [](const PyGrid& g, const ComplexVector& f, const ComplexVector& h) {
    return bilinear_form_a(as_field(g, f), as_field(g, h));
  });
  m.def("fourier_transform", [](const PyGrid& g, const ComplexVector& f) { return fourier_transform(as_field(g, f)); });
  m.def("propagate_free",
        [](const PyGrid& g, const ComplexVector& f, double t) { return propagate_free(as_field(g, f), t).values; });

  m.def("finite_T_terms",
        [](const PyHamiltonian& h, const std::string& multiplier, const py::dict& params, const ComplexVector& f,
           double T, double dt) {
          const Multiplier mult = build_multiplier(parse_multiplier_family(multiplier), multiplier_params(params),
                                                   h.op->grid());
          const IdentityTerms t = finite_T_terms(*h.op, mult, as_field({h.op->grid()}, f), T, dt);
          py::dict d;
          d["lhs"] = t.lhs;
          d["rhs"] = t.rhs;
          d["residual"] = t.residual;
          return d;
        },
        py::arg("hamiltonian"), py::arg("multiplier"), py::arg("params"), py::arg("f"), py::arg("T"), py::arg("dt"));

  m.def("experiments", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : experiments()) out.emplace_back(e.name, e.summary);
    return out;
  });
  m.def("run_config_file", [](const std::string& path, const std::vector<std::string>& overrides) {
    return run([&] { return ExperimentConfig::from_file(path); }, overrides);
  }, py::arg("path"), py::arg("overrides") = std::vector<std::string>{});
  m.def("run_config_text", [](const std::string& text, const std::vector<std::string>& overrides) {
    return run([&] { return ExperimentConfig::from_string(text); }, overrides);
  }, py::arg("text"), py::arg("overrides") = std::vector<std::string>{});
}
