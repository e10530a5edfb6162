#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ptbec/errors.hpp"
#include "ptbec/fewmode/model.hpp"
#include "ptbec/gauss/basis.hpp"
#include "ptbec/scenario/compare.hpp"
#include "ptbec/scenario/config.hpp"
#include "ptbec/scenario/records.hpp"
#include "ptbec/scenario/run.hpp"

namespace py = pybind11;
using namespace ptbec;

namespace {

py::dict series_dict(const scenario::TimeSeries& s) {
    py::dict d;
    for (const auto& name : s.columns()) d[py::str(name)] = s.column(name);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "PT-symmetric four-well condensate scenarios";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<MissingKey>(m, "MissingKey", base.ptr());
    py::register_exception<UnitError>(m, "UnitError", base.ptr());
    py::register_exception<NoOverlap>(m, "NoOverlap", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());

    m.def(
        "two_mode_eigenvalues",
        [](double J, double gamma) {
            const auto ev = fewmode::two_mode_eigenvalues(fewmode::TridiagonalComplexModel::pt_dimer(J, gamma));
            return std::vector<std::complex<double>>{ev[0], ev[1]};
        },
        py::arg("J"), py::arg("gamma"));

    py::class_<gauss::UnitSystem>(m, "UnitSystem")
        .def(py::init(&gauss::UnitSystem::rb87), py::arg("w_z") = 1e-6, py::arg("N") = 1e5,
             py::arg("a_scat") = 2.83 * gauss::UnitSystem::bohr_radius)
        .def_readwrite("w_z", &gauss::UnitSystem::w_z)
        .def_readwrite("mass", &gauss::UnitSystem::mass)
        .def_readwrite("N", &gauss::UnitSystem::N)
        .def_readwrite("a_scat", &gauss::UnitSystem::a_scat)
        .def_property_readonly("E0", &gauss::UnitSystem::E0)
        .def_property_readonly("t0", &gauss::UnitSystem::t0)
        .def_property_readonly("g", &gauss::UnitSystem::g)
        .def_property_readonly("E0_Hz", [](const gauss::UnitSystem& u) { return u.E0() / gauss::UnitSystem::planck; });

    py::class_<scenario::ScenarioConfig>(m, "ScenarioConfig")
        .def_property_readonly("scenario",
                               [](const scenario::ScenarioConfig& c) { return std::string(to_string(c.scenario)); })
        .def_readwrite("t_end", &scenario::ScenarioConfig::t_end)
        .def_readwrite("gamma", &scenario::ScenarioConfig::gamma)
        .def_readwrite("t_f", &scenario::ScenarioConfig::t_f)
        .def_readwrite("stride", &scenario::ScenarioConfig::stride)
        .def_readwrite("output_dir", &scenario::ScenarioConfig::output_dir)
        .def_readwrite("emit_plots", &scenario::ScenarioConfig::emit_plots);

    m.def("parse_config", [](const std::string& text) { return scenario::parse_config(text); }, py::arg("text"));
    m.def("load_config", &scenario::load_config, py::arg("path"));

    m.def(
        "run_scenario",
        [](const scenario::ScenarioConfig& c, bool write) {
            scenario::ScenarioResult res;
            {
                py::gil_scoped_release release;
                res = scenario::run_scenario(c);
                if (write) scenario::write_outputs(res.output, c.scenario, c.output_dir, c.emit_plots);
            }
            py::dict out;
            out["exit_status"] = res.exit_status;
            out["summary"] = res.output.summary.dump();
            out["series"] = series_dict(res.output.series);
            return out;
        },
        py::arg("config"), py::arg("write") = false);

    m.def(
        "compare_csv",
        [](const std::filesystem::path& a, const std::filesystem::path& b) {
            return scenario::compare_runs(scenario::read_csv(a), scenario::read_csv(b)).to_json().dump();
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "read_csv", [](const std::filesystem::path& p) { return series_dict(scenario::read_csv(p)); }, py::arg("path"));

    m.def(
        "describe_trap",
        [](const scenario::ScenarioConfig& c) { return scenario::describe_trap(scenario::prepare_trap(c)).dump(); },
        py::arg("config"));
    m.def(
        "parameter_table",
        [](const scenario::ScenarioConfig& c) { return scenario::parameter_table(scenario::prepare_trap(c)); },
        py::arg("config"));
}
