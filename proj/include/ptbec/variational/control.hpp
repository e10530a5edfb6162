#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "ptbec/embedding/control.hpp"
#include "ptbec/numerics/ode.hpp"
#include "ptbec/variational/eom.hpp"
#include "ptbec/variational/observables.hpp"

namespace ptbec::variational {

struct ControlTargets {
    double j01 = 0.0;
    double j23 = 0.0;
};

/// Targets as a function of the end-of-step occupations.
using TargetRule = std::function<ControlTargets(const BoxObservables&)>;

/// j01 = 2 gamma n1, j23 = 2 gamma n2.
TargetRule pt_targets(double gamma);
TargetRule fixed_targets(ControlTargets targets);

struct ControllerSettings {
    /// Control interval; V0 and V3 are held constant inside it.
    double dt = 0.01;
    /// Relative tolerance on the end-of-step currents.
    double tolerance = 1e-8;
    /// Current scale below which the tolerance becomes absolute (tolerance * floor).
    double current_floor = 1e-4;
    int max_iterations = 30;
    numerics::IntegratorSettings integrator{};
    EomSettings eom{};
};

struct ControlledStep {
    VariationalState state;
    double V0 = 0.0;
    double V3 = 0.0;
    BoxObservables observables;
    int iterations = 0;
    /// Quasi-Newton Jacobian of the scaled residual; seeds the next step.
    Eigen::Matrix2d jacobian = Eigen::Matrix2d::Zero();
    /// Integrator step size at the end of the step.
    double last_step = 0.0;
};

/// Propagates with the outer depths of `model.wells` replaced by (V0, V3).
VariationalState propagate(const VariationalState& state, const GpeModel& model, double V0, double V3, double dt,
                           const ControllerSettings& settings, double* last_step = nullptr);

/// Finds constant (V0, V3) over one interval such that the end-of-step wall
/// currents meet the targets. The search starts from the outer depths of
/// `model.wells`. Throws ControlSearchFailed.
ControlledStep controlled_step(const VariationalState& state, const GpeModel& model, const WallPartition& partition,
                               const TargetRule& targets, const ControllerSettings& settings,
                               const Eigen::Matrix2d* jacobian_seed = nullptr, double initial_step = 0.0);

struct VariationalSample {
    double t = 0.0;
    BoxObservables observables;
    double V0 = 0.0;
    double V3 = 0.0;
    /// Displacement of each well from its initial position.
    Eigen::VectorXd delta;
    double gamma = 0.0;
    double norm = 0.0;
};

struct Snapshot {
    double t = 0.0;
    VariationalState state;
};

struct VariationalRun {
    std::vector<VariationalSample> samples;
    /// States at the control steps closest to the requested snapshot times.
    std::vector<Snapshot> snapshots;
    VariationalState final_state;
    bool breakdown = false;
    double breakdown_time = 0.0;
    std::string breakdown_reason;
};

struct VariationalScenario {
    GpeModel model;
    /// Relaxed initial state (normally a fixed point of `model`).
    VariationalState initial;
    double mu = 0.0;
    embedding::GammaSchedule schedule = embedding::GammaSchedule::constant(0.0);
    double t_end = 1.0;
    ControllerSettings controller{};
    std::vector<double> snapshot_times;
};

/// Sequence of controlled steps with targets 2 gamma(t) n1 and 2 gamma(t) n2.
/// A failed search ends the run with `breakdown` set; the samples up to the
/// last successful step are kept.
VariationalRun run_variational_scenario(const VariationalScenario& scenario);

}  // namespace ptbec::variational
