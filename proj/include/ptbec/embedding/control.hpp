#pragma once

#include <Eigen/Dense>

#include <utility>

#include "ptbec/fewmode/model.hpp"

namespace ptbec::embedding {

using fewmode::cplx;
using fewmode::ModeVector;
using fewmode::ObservableSet;

/// Parameters of the Hermitian four-well chain that stay fixed in time.
struct EmbeddingModel {
    double J12 = 1.0;
    Eigen::Vector4d nonlinear = Eigen::Vector4d::Zero();
    /// Scale of the synthesized couplings J01 = d C13, J23 = d C02.
    double d = 1.0;
};

struct ControlState {
    double gamma = 0.0;
    double gamma_dot = 0.0;
    double d = 1.0;
    double J01 = 0.0;
    double J23 = 0.0;
    double E0 = 0.0;
    double E3 = 0.0;
    /// 2-norm condition number of the onsite-energy system.
    double lgs_condition = 0.0;
};

struct RampSchedule {
    double gamma_f = 0.0;
    double t_f = 1.0;
};

/// Gain/loss parameter over time: either constant or a cosine ramp.
class GammaSchedule {
public:
    static GammaSchedule constant(double gamma);
    static GammaSchedule ramp(RampSchedule ramp);

    /// (gamma, d gamma / dt) at time t.
    std::pair<double, double> operator()(double t) const;
    bool is_ramp() const { return is_ramp_; }
    const RampSchedule& ramp_schedule() const { return ramp_; }

private:
    bool is_ramp_ = false;
    RampSchedule ramp_{};
};

/// Gamma(t) = gamma_f [1 - cos(pi t / t_f)] / 2 for t <= t_f, gamma_f afterwards.
std::pair<double, double> gamma_ramp(double t, const RampSchedule& schedule);

/// (J01, J23) = d (C13, C02). Throws ZeroCoupling for d = 0.
std::pair<double, double> synth_tunneling(const ObservableSet& obs, double d);

/// Onsite energies (E0, E3) that keep d/dt j01 and d/dt j23 on target.
/// `controls` supplies gamma, gamma_dot, d, J01, J23; the returned copy adds
/// E0, E3 and the condition estimate. Throws ControlSingular when the 2x2
/// system exceeds `max_condition`.
ControlState synth_onsite(const ModeVector& state, const ControlState& controls, const EmbeddingModel& model,
                          double max_condition = 1e14);

/// Tunneling and onsite controls for the instantaneous state.
ControlState synthesize_controls(const ModeVector& state, double gamma, double gamma_dot, const EmbeddingModel& model,
                                 double max_condition = 1e14);

/// The Hermitian chain defined by a set of controls (E1 = E2 = 0).
fewmode::TridiagonalComplexModel four_mode_model(const ControlState& controls, const EmbeddingModel& model);

/// Four-mode state with psi2 real that satisfies the current conditions at
/// t = 0. Throws DegenerateInput when the construction divides by zero.
ModeVector build_initial_state(cplx psi1, double psi2, double psi0_real, double psi3_real, double gamma, double d);

/// Residuals (j01 - 2 gamma n1, j23 - 2 gamma n2, J01 C02 - J23 C13, J01 jt02 - J23 jt13).
Eigen::Vector4d check_conditions(const ModeVector& state, const ControlState& controls);

struct ClosedFormSigns {
    int s1 = 1;
    int s2 = 1;
    int s3 = 1;
    int s6 = 1;
};

struct ClosedFormAux {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma_aux = 0.0;
    ClosedFormSigns signs;
};

struct ClosedFormObservables {
    double jt01 = 0.0;
    double jt23 = 0.0;
    double C02 = 0.0;
    double C13 = 0.0;
    double jt02 = 0.0;
    double jt13 = 0.0;
    ClosedFormAux aux;
};

/// Reservoir correlations implied by the conditions, given the occupations
/// and the middle current. Throws BranchViolation if (1-alpha)^2 < beta^2.
ClosedFormObservables closed_form_observables(const Eigen::Vector4d& n, double jt12, double gamma, double d,
                                              const ClosedFormSigns& signs);

/// Sign choices that reproduce the given state's correlations.
ClosedFormSigns infer_signs(const ModeVector& state, double gamma, double d);

/// Derivative of the controlled four-mode system: controls are synthesized
/// from the instantaneous state, then the chain is applied.
ModeVector controlled_four_mode_rhs(double t, const ModeVector& state, const GammaSchedule& schedule,
                                    const EmbeddingModel& model, double max_condition = 1e14);

}  // namespace ptbec::embedding
