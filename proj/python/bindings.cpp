#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qrouter/circuit.hpp"
#include "qrouter/commands.hpp"
#include "qrouter/config.hpp"
#include "qrouter/error.hpp"
#include "qrouter/pulse.hpp"
#include "qrouter/scattering.hpp"

namespace py = pybind11;
using namespace qrouter;

namespace {

py::dict table_dict(const Table& t) {
  py::dict d;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    py::dict row;
    for (std::size_t c = 0; c < t.columns.size(); ++c) row[py::str(t.columns[c])] = t.values[r][c];
    d[py::str(t.rows[r])] = row;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_qrouter, m) {
  m.doc() = "Transmon photon router simulator";

  py::register_exception<Error>(m, "Error");

  py::enum_<Condition>(m, "Condition")
      .value("GS", Condition::gs)
      .value("T1", Condition::t1)
      .value("T3", Condition::t3);

  py::enum_<ModeKind>(m, "ModeKind")
      .value("even", ModeKind::even)
      .value("odd", ModeKind::odd)
      .value("right", ModeKind::right)
      .value("left", ModeKind::left);

  py::class_<Lifetimes>(m, "Lifetimes")
      .def(py::init<>())
      .def_readwrite("t1", &Lifetimes::t1)
      .def_readwrite("t3", &Lifetimes::t3)
      .def_readwrite("a", &Lifetimes::a)
      .def_readwrite("b", &Lifetimes::b);

  py::class_<RouterModel>(m, "RouterModel")
      .def(py::init<>())
      .def_readwrite("omega_t", &RouterModel::omega_t)
      .def_readwrite("omega_s", &RouterModel::omega_s)
      .def_readwrite("j", &RouterModel::j)
      .def_readwrite("tau", &RouterModel::tau)
      .def_readwrite("gamma_d", &RouterModel::gamma_d)
      .def("validate", &RouterModel::validate);

  py::class_<CircuitParams>(m, "CircuitParams")
      .def(py::init<>())
      .def_readwrite("c1", &CircuitParams::c1)
      .def_readwrite("ct", &CircuitParams::ct)
      .def_readwrite("c_branch", &CircuitParams::c_branch)
      .def_readwrite("c_couple", &CircuitParams::c_couple)
      .def_readwrite("alpha", &CircuitParams::alpha)
      .def_readwrite("ej_transmon", &CircuitParams::ej_transmon)
      .def_readwrite("ej_squid", &CircuitParams::ej_squid);

  py::class_<DerivedConstants>(m, "DerivedConstants")
      .def_readonly("csum", &DerivedConstants::csum)
      .def_readonly("e_t", &DerivedConstants::e_t)
      .def_readonly("alpha", &DerivedConstants::alpha)
      .def_readonly("beta", &DerivedConstants::beta)
      .def_readonly("ej_total", &DerivedConstants::ej_total)
      .def_readonly("e_squid", &DerivedConstants::e_squid);

  m.def("derive_constants", &derive_constants, py::arg("params"));
  m.def("solve_josephson_energies",
        [](const CircuitParams& p) { return solve_josephson_energies(p, derive_constants(p)); }, py::arg("params"));
  m.def(
      "build_model",
      [](const CircuitParams& p, const Lifetimes& tau, double gamma_d) {
        ModelOptions opt;
        opt.tau = tau;
        opt.gamma_d = gamma_d;
        return build_model(p, opt);
      },
      py::arg("params"), py::arg("tau") = Lifetimes{}, py::arg("gamma_d") = 0.0);
  m.def(
      "load_model", [](const std::string& path) { return resolve_model(load_config(path)); }, py::arg("path"));
  m.def(
      "single_photon_s",
      [](const RouterModel& model, Condition ctx, ModeKind kind, double k, int out_channel) {
        return single_photon_s(model, ctx, PhotonMode{1, kind, k}, out_channel);
      },
      py::arg("model"), py::arg("context"), py::arg("kind"), py::arg("k"), py::arg("out_channel") = 1);
  m.def(
      "pulse_probabilities",
      [](const RouterModel& model, Condition ctx, ModeKind kind, double center, double width) {
        PulseOptions opt;
        opt.samples = 0;
        const PulseResult r = pulse_scatter(model, ctx, kind, LorentzianPulse{center, width}, opt);
        py::dict d;
        for (std::size_t c = 0; c < r.channels.size(); ++c) d[py::str(r.channels[c])] = r.probability[c];
        return d;
      },
      py::arg("model"), py::arg("context"), py::arg("kind"), py::arg("center"), py::arg("width"));
  m.def(
      "table_one", [](const RouterModel& model) { return table_dict(table_one(model)); }, py::arg("model"));
  m.def(
      "table_two", [](const RouterModel& model) { return table_dict(table_two(model)); }, py::arg("model"));
  m.def(
      "run",
      [](const std::string& command, const std::string& config_text) -> py::tuple {
        const auto cmd = parse_command(command);
        if (!cmd) throw py::value_error("unknown command " + command);
        RunConfig cfg;
        try {
          cfg = parse_config(config_text);
        } catch (const Error& e) {
          return py::make_tuple(int(exit_validation), std::string(),
                                "qrouter " + command + ": cli parse_config: " + e.what() + "\n");
        }
        std::ostringstream out, err;
        const int code = run_command(*cmd, cfg, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("command"), py::arg("config_text"));
}
