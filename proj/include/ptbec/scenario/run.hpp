#pragma once

#include <string>

#include "json.hpp"
#include "ptbec/gauss/effective.hpp"
#include "ptbec/scenario/config.hpp"
#include "ptbec/scenario/records.hpp"

namespace ptbec::scenario {

enum ExitStatus : int { completed = 0, failed = 1, breakdown = 2 };

struct ScenarioResult {
    int exit_status = completed;
    ScenarioOutput output;
};

/// Fitted ground state and few-mode parameters of a physical trap.
struct TrapModel {
    gauss::WellPotentialSpec wells;
    gauss::UnitSystem units;
    double g = 0.0;
    gauss::GroundStateFit fit;
    gauss::AmplitudeTransform transform = gauss::AmplitudeTransform::nearest_neighbor;
    gauss::EffectiveModel model;
};

/// Fits the trap of a physical config. Throws InvalidArgument for abstract scenarios.
TrapModel prepare_trap(const ScenarioConfig& config);

/// Units, trap, fit and effective parameters (internal units plus Hz).
nlohmann::json describe_trap(const TrapModel& trap);

/// Human-readable table of the effective parameters.
std::string parameter_table(const TrapModel& trap);

/// Runs a scenario. Physical breakdown is reported through exit_status == 2
/// with the partial record; other failures throw.
ScenarioResult run_scenario(const ScenarioConfig& config);

}  // namespace ptbec::scenario
