#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "ptbec/gauss/basis.hpp"
#include "ptbec/gauss/lowdin.hpp"
#include "ptbec/numerics/ode.hpp"
#include "ptbec/variational/control.hpp"

namespace ptbec::scenario {

enum class ScenarioKind { stationary, oscillatory, collapse, adiabatic_fewmode, adiabatic_variational, compare };

std::string_view to_string(ScenarioKind kind);
/// True for the scenarios that start from a trap and a fitted ground state.
bool is_physical(ScenarioKind kind);

/// Run parameters. Abstract scenarios (stationary, oscillatory, collapse) use
/// hbar = 1 with energies in units of J12 = 1 and times in hbar/J12. Physical
/// scenarios use E0 = hbar^2/(m w_z^2), t0 = m w_z^2/hbar and lengths in w_z;
/// gamma is then given relative to the fitted J12.
struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::stationary;

    double t_end = 0.0;
    double gamma = 0.5;
    double t_f = 60.0;
    double d = 1.0;
    double c = 0.0;
    double max_condition = 1e14;
    gauss::AmplitudeTransform transform = gauss::AmplitudeTransform::nearest_neighbor;

    // abstract initial state; psi1 defaults to the PT eigenstate amplitude
    std::optional<std::complex<double>> psi1;
    double psi2 = 0.0;
    double psi0_real = 0.0;
    double psi3_real = 0.0;
    /// Relative amplitude added to psi1 (collapse).
    double perturbation = 0.0;

    gauss::WellPotentialSpec trap;
    gauss::UnitSystem units;

    numerics::IntegratorSettings integrator;
    variational::ControllerSettings controller;

    std::filesystem::path output_dir = "out";
    /// Output cadence in internal time units.
    double stride = 0.02;
    bool emit_plots = false;

    std::filesystem::path compare_a;
    std::filesystem::path compare_b;

    /// Scenario defaults before any key is applied.
    static ScenarioConfig defaults(ScenarioKind kind);
};

/// Parses the `key = value` format with `[section]` headers. Values may carry
/// a unit after the number (`t_end = 70 ms`, `depths = -60, -45 E0`).
/// Throws ParseError, MissingKey and UnitError.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace ptbec::scenario
