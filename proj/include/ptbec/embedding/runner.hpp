#pragma once

#include <string>
#include <vector>

#include "ptbec/embedding/control.hpp"
#include "ptbec/numerics/ode.hpp"

namespace ptbec::embedding {

struct EmbeddingSample {
    double t = 0.0;
    ModeVector state;
    ControlState controls;
};

struct EmbeddingRun {
    std::vector<EmbeddingSample> samples;
    bool breakdown = false;
    /// Last time the controls could be synthesized.
    double breakdown_time = 0.0;
    std::string breakdown_reason;
};

struct RunOptions {
    double t_end = 1.0;
    /// Spacing of recorded samples; the last accepted time is always recorded.
    double sample_dt = 0.01;
    numerics::IntegratorSettings integrator;
    double max_condition = 1e14;
};

/// Propagates the controlled four-mode system. Control breakdown and
/// integrator failures end the run early with `breakdown` set.
EmbeddingRun run_controlled(const ModeVector& initial, const GammaSchedule& schedule, const EmbeddingModel& model,
                            const RunOptions& options);

struct TwoModeSample {
    double t = 0.0;
    ModeVector state;
};

/// Non-Hermitian two-mode reference with E = (i gamma(t), -i gamma(t)),
/// sampled at the given times.
std::vector<TwoModeSample> run_two_mode(const ModeVector& initial, const GammaSchedule& schedule, double J12,
                                        double c1, double c2, const std::vector<double>& times,
                                        const numerics::IntegratorSettings& settings);

}  // namespace ptbec::embedding
