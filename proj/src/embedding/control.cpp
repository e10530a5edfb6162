#include "ptbec/embedding/control.hpp"

#include <cmath>
#include <numbers>

#include "ptbec/errors.hpp"
#include "ptbec/numerics/linalg.hpp"

namespace ptbec::embedding {

GammaSchedule GammaSchedule::constant(double gamma) {
    GammaSchedule s;
    s.ramp_.gamma_f = gamma;
    return s;
}

GammaSchedule GammaSchedule::ramp(RampSchedule ramp) {
    if (!(ramp.t_f > 0.0)) throw InvalidArgument("ramp duration must be positive");
    GammaSchedule s;
    s.is_ramp_ = true;
    s.ramp_ = ramp;
    return s;
}

std::pair<double, double> GammaSchedule::operator()(double t) const {
    if (!is_ramp_) return {ramp_.gamma_f, 0.0};
    return gamma_ramp(t, ramp_);
}

std::pair<double, double> gamma_ramp(double t, const RampSchedule& s) {
    if (!(s.t_f > 0.0)) throw InvalidArgument("ramp duration must be positive");
    if (t <= 0.0) return {0.0, 0.0};
    if (t >= s.t_f) return {s.gamma_f, 0.0};
    const double w = std::numbers::pi / s.t_f;
    return {0.5 * s.gamma_f * (1.0 - std::cos(w * t)), 0.5 * s.gamma_f * w * std::sin(w * t)};
}

std::pair<double, double> synth_tunneling(const ObservableSet& obs, double d) {
    if (d == 0.0) throw ZeroCoupling("coupling scale d must be non-zero");
    return {d * obs.C(1, 3), d * obs.C(0, 2)};
}

fewmode::TridiagonalComplexModel four_mode_model(const ControlState& c, const EmbeddingModel& model) {
    fewmode::TridiagonalComplexModel m;
    m.onsite = Eigen::VectorXcd::Zero(4);
    m.onsite(0) = c.E0;
    m.onsite(3) = c.E3;
    m.coupling = Eigen::Vector3d(c.J01, model.J12, c.J23);
    m.nonlinear = model.nonlinear;
    return m;
}

ControlState synth_onsite(const ModeVector& state, const ControlState& controls, const EmbeddingModel& model,
                          double max_condition) {
    if (state.size() != 4) throw SizeMismatch("onsite synthesis needs a four-mode state");
    if (controls.d == 0.0) throw ZeroCoupling("coupling scale d must be non-zero");
    ControlState out = controls;
    const double d = controls.d;
    const double J12 = model.J12;
    const Eigen::Vector4d& c = model.nonlinear;

    ControlState probe = controls;
    probe.E0 = probe.E3 = 0.0;
    const ObservableSet o = fewmode::observables(state, four_mode_model(probe, model));
    const auto& n = o.n;
    const auto& C = o.C;
    const auto& jt = o.j_tilde;
    const double C13 = C(1, 3), C02 = C(0, 2);

    // target-current derivatives, with the rates of n1, n2 at the current state
    const double j01 = controls.J01 * jt(0, 1);
    const double j12 = J12 * jt(1, 2);
    const double j23 = controls.J23 * jt(2, 3);
    const double dtar01 = 2.0 * controls.gamma_dot * n(1) + 2.0 * controls.gamma * (j01 - j12);
    const double dtar23 = 2.0 * controls.gamma_dot * n(2) + 2.0 * controls.gamma * (j12 - j23);

    const double u0 = c(0) * n(0), u1 = c(1) * n(1), u2 = c(2) * n(2), u3 = c(3) * n(3);

    Eigen::Matrix2d A;
    A << C(0, 1) * C13, jt(0, 1) * jt(1, 3), -jt(0, 2) * jt(2, 3), -C02 * C(2, 3);
    Eigen::Vector2d v;
    v(0) = dtar01 / d - J12 * jt(2, 3) * jt(0, 1) - d * (C13 * jt(0, 3) - C02 * jt(1, 2)) * jt(0, 1) -
           2.0 * d * C13 * C13 * (n(0) - n(1)) - J12 * C02 * C13 - (u3 - u1) * jt(0, 1) * jt(1, 3) -
           (u0 - u1) * C(0, 1) * C13;
    v(1) = dtar23 / d + J12 * jt(0, 1) * jt(2, 3) - d * (C13 * jt(1, 2) - C02 * jt(0, 3)) * jt(2, 3) -
           2.0 * d * C02 * C02 * (n(2) - n(3)) + J12 * C02 * C13 - (u2 - u0) * jt(0, 2) * jt(2, 3) -
           (u2 - u3) * C02 * C(2, 3);
    try {
        const auto sol = numerics::solve_linear(A, v, max_condition);
        out.E0 = sol.x(0);
        out.E3 = sol.x(1);
        out.lgs_condition = sol.condition;
    } catch (const SingularMatrix& e) {
        throw ControlSingular(std::string("onsite-energy system cannot be solved: ") + e.what());
    }
    return out;
}

ControlState synthesize_controls(const ModeVector& state, double gamma, double gamma_dot, const EmbeddingModel& model,
                                 double max_condition) {
    if (state.size() != 4) throw SizeMismatch("control synthesis needs a four-mode state");
    ControlState c;
    c.gamma = gamma;
    c.gamma_dot = gamma_dot;
    c.d = model.d;
    ControlState probe = c;
    const auto o = fewmode::observables(state, four_mode_model(probe, model));
    std::tie(c.J01, c.J23) = synth_tunneling(o, model.d);
    return synth_onsite(state, c, model, max_condition);
}

ModeVector build_initial_state(cplx psi1, double psi2, double psi0_real, double psi3_real, double gamma, double d) {
    if (d == 0.0) throw DegenerateInput("coupling scale d must be non-zero");
    if (psi0_real == 0.0) throw DegenerateInput("real part of psi0 must be non-zero");
    if (psi1.real() == 0.0) throw DegenerateInput("real part of psi1 must be non-zero");
    if (psi2 < 0.0) throw DegenerateInput("psi2 must be real and non-negative");
    const double psi3_imag = gamma / (2.0 * d * psi0_real);
    const double overlap = psi1.real() * psi3_real + psi1.imag() * psi3_imag;
    if (overlap == 0.0) throw DegenerateInput("psi1 and psi3 correlation vanishes");
    const double n1 = std::norm(psi1);
    const double psi0_imag = psi0_real * psi1.imag() / psi1.real() - gamma * n1 / (2.0 * d * psi1.real() * overlap);
    ModeVector s(4);
    s << cplx(psi0_real, psi0_imag), psi1, psi2, cplx(psi3_real, psi3_imag);
    if (!s.allFinite()) throw DegenerateInput("initial state is not finite");
    return s;
}

Eigen::Vector4d check_conditions(const ModeVector& state, const ControlState& c) {
    if (state.size() != 4) throw SizeMismatch("condition check needs a four-mode state");
    ControlState probe = c;
    const auto o = fewmode::observables(state, four_mode_model(probe, EmbeddingModel{}));
    const auto& jt = o.j_tilde;
    return {c.J01 * jt(0, 1) - 2.0 * c.gamma * o.n(1), c.J23 * jt(2, 3) - 2.0 * c.gamma * o.n(2),
            c.J01 * o.C(0, 2) - c.J23 * o.C(1, 3), c.J01 * jt(0, 2) - c.J23 * jt(1, 3)};
}

ClosedFormObservables closed_form_observables(const Eigen::Vector4d& n, double jt12, double gamma, double d,
                                              const ClosedFormSigns& s) {
    if (!(n.minCoeff() > 0.0)) throw DegenerateInput("closed forms need positive occupations");
    if (d == 0.0) throw ZeroCoupling("coupling scale d must be non-zero");
    ClosedFormObservables r;
    r.aux.signs = s;
    r.aux.gamma_aux = jt12 / std::sqrt(n(1) * n(2));
    r.aux.beta = s.s3 * gamma / d / std::sqrt(n(0) * n(3));
    r.aux.alpha = 0.5 * r.aux.gamma_aux * (r.aux.beta + 0.5 * r.aux.gamma_aux);
    const double a = 1.0 - r.aux.alpha;
    const double disc = a * a - r.aux.beta * r.aux.beta;
    if (disc < 0.0) throw BranchViolation("closed forms have no real solution: (1-alpha)^2 < beta^2");
    const double root = s.s1 * std::sqrt(disc);
    // sign of C13 follows from j01 = d C13 jt01 = 2 gamma n1, that of C02 from
    // the analogous j23 condition, and jt13 from J01 jt02 = J23 jt13
    const double sd = (d > 0.0 ? 1.0 : -1.0) * (gamma < 0.0 ? -1.0 : 1.0);
    auto safe_sqrt = [](double x) { return std::sqrt(std::max(x, 0.0)); };
    r.jt01 = s.s2 * safe_sqrt(2.0 * n(0) * n(1) * (a + root));
    r.jt23 = s.s3 * std::sqrt(n(2) * n(3) / (n(0) * n(1))) * r.jt01;
    r.C02 = s.s2 * s.s3 * sd * safe_sqrt(2.0 * n(0) * n(2) * (a - root));
    r.C13 = s.s2 * sd * safe_sqrt(2.0 * n(1) * n(3) * (a - root));
    r.jt02 = s.s6 * safe_sqrt(2.0 * n(0) * n(2) * (1.0 + r.aux.alpha + root));
    r.jt13 = s.s6 * s.s3 * safe_sqrt(2.0 * n(1) * n(3) * (1.0 + r.aux.alpha + root));
    return r;
}

ClosedFormSigns infer_signs(const ModeVector& state, double gamma, double d) {
    if (state.size() != 4) throw SizeMismatch("sign inference needs a four-mode state");
    const auto o = fewmode::observables(state, four_mode_model(ControlState{}, EmbeddingModel{}));
    auto sgn = [](double x) { return x < 0.0 ? -1 : 1; };
    ClosedFormSigns s;
    s.s2 = sgn(o.j_tilde(0, 1));
    s.s3 = sgn(o.j_tilde(0, 1) * o.j_tilde(2, 3));
    s.s6 = sgn(o.j_tilde(0, 2));
    // s1 selects the branch that reproduces the actual jt01 magnitude
    double best = std::numeric_limits<double>::infinity();
    for (int s1 : {1, -1}) {
        ClosedFormSigns trial = s;
        trial.s1 = s1;
        try {
            const auto cf = closed_form_observables(o.n, o.j_tilde(1, 2), gamma, d, trial);
            const double err = std::abs(cf.jt01 - o.j_tilde(0, 1)) + std::abs(cf.C13 - o.C(1, 3)) +
                               std::abs(cf.jt02 - o.j_tilde(0, 2));
            if (err < best) {
                best = err;
                s.s1 = s1;
            }
        } catch (const BranchViolation&) {
        }
    }
    return s;
}

ModeVector controlled_four_mode_rhs(double t, const ModeVector& state, const GammaSchedule& schedule,
                                    const EmbeddingModel& model, double max_condition) {
    const auto [gamma, gamma_dot] = schedule(t);
    const ControlState c = synthesize_controls(state, gamma, gamma_dot, model, max_condition);
    return fewmode::model_rhs(state, four_mode_model(c, model));
}

}  // namespace ptbec::embedding
