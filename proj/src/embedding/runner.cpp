#include "ptbec/embedding/runner.hpp"

#include <cmath>

#include "ptbec/errors.hpp"

namespace ptbec::embedding {

EmbeddingRun run_controlled(const ModeVector& initial, const GammaSchedule& schedule, const EmbeddingModel& model,
                            const RunOptions& options) {
    if (!(options.t_end > 0.0) || !(options.sample_dt > 0.0))
        throw InvalidArgument("run length and sample spacing must be positive");
    EmbeddingRun run;
    auto controls_at = [&](double t, const ModeVector& psi) {
        const auto [g, gd] = schedule(t);
        return synthesize_controls(psi, g, gd, model, options.max_condition);
    };
    auto rhs = [&](double t, const ModeVector& psi) {
        return controlled_four_mode_rhs(t, psi, schedule, model, options.max_condition);
    };

    run.samples.push_back({0.0, initial, controls_at(0.0, initial)});
    numerics::DormandPrince45<ModeVector> stepper(rhs, 0.0, initial, options.t_end, options.integrator);
    std::size_t next = 1;
    auto grid = [&](std::size_t i) { return std::min(options.t_end, static_cast<double>(i) * options.sample_dt); };
    try {
        while (!stepper.finished()) {
            stepper.step();
            while (next * options.sample_dt <= options.t_end * (1.0 + 1e-12) && grid(next) <= stepper.time()) {
                const double t = grid(next);
                const ModeVector psi = t == stepper.time() ? stepper.state() : stepper.interpolate(t);
                run.samples.push_back({t, psi, controls_at(t, psi)});
                ++next;
            }
        }
        if (run.samples.back().t < options.t_end)
            run.samples.push_back({options.t_end, stepper.state(), controls_at(options.t_end, stepper.state())});
    } catch (const ControlSingular& e) {
        run.breakdown = true;
        run.breakdown_reason = e.what();
    } catch (const IntegrationError& e) {
        run.breakdown = true;
        run.breakdown_reason = e.what();
    }
    if (run.breakdown) {
        run.breakdown_time = stepper.time();
        if (run.samples.back().t < stepper.time()) {
            try {
                run.samples.push_back({stepper.time(), stepper.state(), controls_at(stepper.time(), stepper.state())});
            } catch (const ControlSingular&) {
            }
        }
    }
    return run;
}

std::vector<TwoModeSample> run_two_mode(const ModeVector& initial, const GammaSchedule& schedule, double J12,
                                        double c1, double c2, const std::vector<double>& times,
                                        const numerics::IntegratorSettings& settings) {
    if (initial.size() != 2) throw SizeMismatch("two-mode reference needs a two-mode state");
    auto rhs = [&](double t, const ModeVector& psi) {
        auto m = fewmode::TridiagonalComplexModel::pt_dimer(J12, schedule(t).first);
        m.nonlinear << c1, c2;
        return fewmode::model_rhs(psi, m);
    };
    const auto out = numerics::integrate_at<ModeVector>(rhs, initial, times, settings);
    std::vector<TwoModeSample> samples;
    samples.reserve(out.size());
    for (const auto& s : out) samples.push_back({s.t, s.y});
    return samples;
}

}  // namespace ptbec::embedding
