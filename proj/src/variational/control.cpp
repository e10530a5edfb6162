#include "ptbec/variational/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ptbec/errors.hpp"
#include "ptbec/numerics/roots.hpp"

namespace ptbec::variational {

TargetRule pt_targets(double gamma) {
    return [gamma](const BoxObservables& obs) {
        return ControlTargets{2.0 * gamma * obs.n(1), 2.0 * gamma * obs.n(obs.n.size() - 2)};
    };
}

TargetRule fixed_targets(ControlTargets targets) {
    return [targets](const BoxObservables&) { return targets; };
}

namespace {

GpeModel with_outer_depths(const GpeModel& model, double V0, double V3) {
    GpeModel out = model;
    out.wells.depths(0) = V0;
    out.wells.depths(out.wells.size() - 1) = V3;
    return out;
}

}  // namespace

VariationalState propagate(const VariationalState& state, const GpeModel& model, double V0, double V3, double dt,
                           const ControllerSettings& settings, double* last_step) {
    const GpeModel trial = with_outer_depths(model, V0, V3);
    const EomSettings eom = settings.eom;
    numerics::Derivative<Eigen::VectorXcd> rhs = [&trial, &eom](double, const Eigen::VectorXcd& z) {
        return time_derivative(VariationalState{z}, trial, eom);
    };
    numerics::IntegratorSettings integ = settings.integrator;
    if (last_step && *last_step > 0.0) integ.initial_step = std::min(*last_step, dt);
    numerics::DormandPrince45<Eigen::VectorXcd> stepper(rhs, 0.0, state.z, dt, integ);
    double h = stepper.step_size();
    while (!stepper.finished()) {
        h = stepper.step_size();
        stepper.step();
    }
    if (last_step) *last_step = h;
    VariationalState out{stepper.state()};
    out.validate();
    return out;
}

ControlledStep controlled_step(const VariationalState& state, const GpeModel& model, const WallPartition& partition,
                               const TargetRule& targets, const ControllerSettings& settings,
                               const Eigen::Matrix2d* jacobian_seed, double initial_step) {
    if (!(settings.dt > 0.0) || !(settings.tolerance > 0.0) || !(settings.current_floor > 0.0))
        throw InvalidArgument("controller: dt, tolerance and current_floor must be positive");
    if (model.free || model.wells.size() < 2) throw InvalidArgument("controller needs a trap with outer wells");

    const Eigen::Index last = model.wells.size() - 1;
    ControlledStep best;
    double best_residual = std::numeric_limits<double>::infinity();
    double h_hint = initial_step;

    numerics::VectorFunction residual = [&](const Eigen::VectorXd& v) {
        if (!(v(0) < 0.0) || !(v(1) < 0.0))
            throw ControlSearchFailed("control search drove an outer well depth to " +
                                      std::to_string(std::max(v(0), v(1))));
        double h = h_hint;
        VariationalState end = propagate(state, model, v(0), v(1), settings.dt, settings, &h);
        BoxObservables obs = box_observables(end, partition);
        const ControlTargets tar = targets(obs);
        const double j01 = obs.j(0);
        const double j23 = obs.j(obs.j.size() - 1);
        Eigen::VectorXd r(2);
        r(0) = (j01 - tar.j01) / std::max(std::abs(tar.j01), settings.current_floor);
        r(1) = (j23 - tar.j23) / std::max(std::abs(tar.j23), settings.current_floor);
        const double size = r.lpNorm<Eigen::Infinity>();
        if (size < best_residual) {
            best_residual = size;
            best.state = std::move(end);
            best.V0 = v(0);
            best.V3 = v(1);
            best.observables = std::move(obs);
            best.last_step = h;
        }
        return r;
    };

    numerics::RootFindOptions opts;
    opts.tolerance = settings.tolerance;
    opts.max_iterations = settings.max_iterations;
    if (jacobian_seed && jacobian_seed->allFinite() && jacobian_seed->determinant() != 0.0)
        opts.initial_jacobian = Eigen::MatrixXd(*jacobian_seed);

    Eigen::VectorXd x0(2);
    x0 << model.wells.depths(0), model.wells.depths(last);
    numerics::RootFindReport report;
    try {
        report = numerics::try_root_find(residual, x0, opts);
    } catch (const NonFiniteFunction& e) {
        throw ControlSearchFailed(std::string("control search hit a non-finite current: ") + e.what());
    } catch (const NonNormalizable& e) {
        throw ControlSearchFailed(std::string("control search left the normalizable region: ") + e.what());
    } catch (const IntegrationError& e) {
        throw ControlSearchFailed(std::string("control search propagation failed: ") + e.what());
    } catch (const SingularMetric& e) {
        throw ControlSearchFailed(std::string("control search propagation failed: ") + e.what());
    }
    if (!report.converged || !(best_residual <= settings.tolerance))
        throw ControlSearchFailed("control search did not reach the target currents (residual " +
                                  std::to_string(report.residual_norm) + " after " +
                                  std::to_string(report.iterations) + " iterations)");
    best.iterations = report.iterations;
    if (report.jacobian.rows() == 2 && report.jacobian.cols() == 2) best.jacobian = report.jacobian;
    return best;
}

VariationalRun run_variational_scenario(const VariationalScenario& scenario) {
    const ControllerSettings& cs = scenario.controller;
    if (!(scenario.t_end > 0.0)) throw InvalidArgument("variational scenario: t_end must be positive");
    scenario.initial.validate();

    const WallPartition partition = WallPartition::midpoints(scenario.model.wells);
    const Eigen::VectorXd positions0 = scenario.model.wells.positions;
    const Eigen::Index last = scenario.model.wells.size() - 1;

    ControllerSettings settings = cs;
    settings.eom.energy_offset = scenario.mu;

    VariationalRun run;
    GpeModel model = scenario.model;
    VariationalState state = scenario.initial;

    auto record = [&](double t, const BoxObservables& obs, double gamma) {
        VariationalSample s;
        s.t = t;
        s.observables = obs;
        s.V0 = model.wells.depths(0);
        s.V3 = model.wells.depths(last);
        s.delta = model.wells.positions - positions0;
        s.gamma = gamma;
        s.norm = obs.n.sum();
        run.samples.push_back(std::move(s));
    };
    record(0.0, box_observables(state, partition), scenario.schedule(0.0).first);
    // the control step whose end lies closest to each requested time
    auto snapshot = [&](double t, double lo, double hi) {
        for (double ts : scenario.snapshot_times)
            if (ts > lo && ts <= hi) {
                run.snapshots.push_back({t, state});
                return;
            }
    };
    snapshot(0.0, -INFINITY, 0.5 * cs.dt);

    const auto steps = static_cast<long>(std::ceil(scenario.t_end / cs.dt - 1e-9));
    Eigen::Matrix2d jac = Eigen::Matrix2d::Zero();
    bool have_jac = false;
    double h = 0.0;
    for (long i = 1; i <= steps; ++i) {
        const double t_prev = static_cast<double>(i - 1) * cs.dt;
        const double t = std::min(static_cast<double>(i) * cs.dt, scenario.t_end);
        settings.dt = t - t_prev;
        const double gamma = scenario.schedule(t).first;
        try {
            ControlledStep step = controlled_step(state, model, partition, pt_targets(gamma), settings,
                                                  have_jac ? &jac : nullptr, h);
            state = std::move(step.state);
            model.wells.depths(0) = step.V0;
            model.wells.depths(last) = step.V3;
            if (step.jacobian.allFinite() && step.jacobian.determinant() != 0.0) {
                jac = step.jacobian;
                have_jac = true;
            }
            h = step.last_step;
            record(t, step.observables, gamma);
            snapshot(t, t - 0.5 * cs.dt, i == steps ? INFINITY : t + 0.5 * cs.dt);
        } catch (const ControlSearchFailed& e) {
            run.breakdown = true;
            run.breakdown_time = t_prev;
            run.breakdown_reason = e.what();
            break;
        }
    }
    run.final_state = state;
    return run;
}

}  // namespace ptbec::variational
