#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include <vector>

#include "wavedecay/analysis.hpp"
#include "wavedecay/experiment.hpp"
#include "wavedecay/medium.hpp"
#include "wavedecay/spectral.hpp"

namespace py = pybind11;
using namespace wavedecay;

namespace {

std::vector<double> to_vector(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  return {a.data(), a.data() + a.size()};
}

ExperimentConfig config_from(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("<json>", e.what());
  }
  return parse_config(j);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Wave-equation local energy decay laboratory (compiled core).";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.attr("SCHEMA_VERSION") = kSchemaVersion;

  m.def(
      "profile_constants",
      [](const std::string& mode, const std::string& family, double L, double a) {
        const auto fam = family == "constant" ? ProfileFamily::Constant : ProfileFamily::RadialBump;
        if (family != "constant" && family != "radial-bump")
          throw PreconditionError("unknown profile family '" + family + "'");
        const auto p = make_profile(parse_dim_mode(mode), fam, L, a);
        py::dict d;
        d["c_sup"] = p.c_sup;
        d["c_m"] = p.c_m;
        d["grad_c_sup"] = p.grad_c_sup;
        d["eta"] = p.eta;
        d["applicable"] = compute_eta(p).applicable;
        return d;
      },
      py::arg("dim_mode"), py::arg("family") = "radial-bump", py::arg("L") = 1.0, py::arg("a") = 0.0);

  m.def(
      "run_experiment_json",
      [](const std::string& text) {
        const auto cfg = config_from(text);
        std::vector<RunOutcome> out;
        {
          py::gil_scoped_release release;
          out = run_all(expand_matrix(cfg), 1);
        }
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& o : out) arr.push_back(o.summary);
        return arr.dump();
      },
      py::arg("config_json"), "Runs a config (matrix expanded) and returns the summaries as JSON.");

  m.def("verify_suite_json",
        [](const std::string& name, double scale) { return verify_suite(name, scale).to_json().dump(); },
        py::arg("name"), py::arg("resolution_scale") = 1.0);

  m.def(
      "fit_decay",
      [](py::array_t<double> t, py::array_t<double> E, double t_start, double t_end,
         const std::string& model, double floor) {
        const auto tv = to_vector(t), ev = to_vector(E);
        if (model != "algebraic" && model != "logarithmic")
          throw PreconditionError("model must be 'algebraic' or 'logarithmic'");
        const auto f = fit_decay(tv, ev, t_start, t_end,
                                 model == "algebraic" ? DecayModel::Algebraic : DecayModel::Logarithmic, floor);
        py::dict d;
        d["ok"] = f.ok;
        d["reason"] = f.reason;
        d["A"] = f.A;
        d["p"] = f.p;
        d["rss"] = f.rss;
        d["used"] = f.used;
        d["excluded"] = f.excluded;
        return d;
      },
      py::arg("t"), py::arg("E"), py::arg("t_start"), py::arg("t_end"), py::arg("model") = "algebraic",
      py::arg("floor") = 0.0);

  m.def(
      "gronwall_bound",
      [](py::array_t<double> t, py::array_t<double> e, double K0, double eta, double a, double t0) {
        const auto c = gronwall_bound(to_vector(t), to_vector(e), K0, eta, a, t0);
        py::dict d;
        d["M0"] = c.M0;
        d["xi_t0"] = c.xi_t0;
        d["dominated"] = c.dominated;
        d["max_ratio"] = c.max_ratio;
        d["bound_t"] = py::array_t<double>(c.bound_t.size(), c.bound_t.data());
        d["bound"] = py::array_t<double>(c.bound.size(), c.bound.data());
        return d;
      },
      py::arg("t"), py::arg("e"), py::arg("K0"), py::arg("eta"), py::arg("a"), py::arg("t0"));

  m.def(
      "riesz_integral",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> f, double h, double theta,
         bool require_zero_mean) {
        const int dim = static_cast<int>(f.ndim());
        if (dim < 1 || dim > 3) throw PreconditionError("expected a 1-, 2- or 3-dimensional array");
        const auto n = static_cast<std::size_t>(f.shape(0));
        for (int k = 1; k < dim; ++k)
          if (static_cast<std::size_t>(f.shape(k)) != n) throw PreconditionError("expected a cubic array");
        const auto s = fourier_transform(dim, n, h, to_vector(f));
        return riesz_weighted_integral(
            s, theta, require_zero_mean ? ZeroModePolicy::RequireZeroMean : ZeroModePolicy::ExcludeZeroMode);
      },
      py::arg("f"), py::arg("h"), py::arg("theta"), py::arg("require_zero_mean") = true,
      "Samples on a cube of side n h centred at the origin.");
}
