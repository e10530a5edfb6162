#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ptbec/embedding/control.hpp"
#include "ptbec/embedding/runner.hpp"
#include "ptbec/errors.hpp"
#include "ptbec/numerics/linalg.hpp"
#include "ptbec/numerics/roots.hpp"

using namespace ptbec;
using namespace ptbec::embedding;

namespace {

constexpr double kGamma = 0.5;

ModeVector stationary_state(double gamma, double reservoir = 2.0, double d = 1.0) {
    const double nu = std::sqrt(1.0 - gamma * gamma);
    return build_initial_state(cplx(nu, -gamma) / std::sqrt(2.0), 1.0 / std::sqrt(2.0), reservoir, reservoir, gamma,
                               d);
}

ModeVector oscillatory_state() { return build_initial_state(std::sqrt(0.6), std::sqrt(0.4), 3.0, -2.0, kGamma, 1.0); }

RunOptions options(double t_end, double tol = 1e-10) {
    RunOptions o;
    o.t_end = t_end;
    o.sample_dt = 0.01;
    o.integrator.rel_tol = tol;
    return o;
}

double slope(const std::vector<double>& t, const std::vector<double>& y) {
    const double n = static_cast<double>(t.size());
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    return (n * sty - st * sy) / (n * stt - st * st);
}

}  // namespace

TEST_CASE("tunneling synthesis") {
    ObservableSet o;
    o.C = Eigen::MatrixXd::Zero(4, 4);
    o.C(1, 3) = o.C(3, 1) = 0.5;
    o.C(0, 2) = o.C(2, 0) = 0.25;
    auto [J01, J23] = synth_tunneling(o, 1.0);
    CHECK(J01 == 0.5);
    CHECK(J23 == 0.25);
    o.C(1, 3) = o.C(3, 1) = 0.0;
    CHECK(synth_tunneling(o, 2.0).first == 0.0);
    CHECK_THROWS_AS(synth_tunneling(o, 0.0), ZeroCoupling);

    // stationary state with equally filled reservoirs
    const double nu = std::sqrt(1.0 - kGamma * kGamma);
    const cplx psi1 = cplx(nu, -kGamma) / std::sqrt(2.0);
    auto make = [&](double r3) { return build_initial_state(psi1, 1.0 / std::sqrt(2.0), 1.0, r3, kGamma, 1.0); };
    const auto rep = numerics::root_find(
        [&](const Eigen::VectorXd& x) {
            const ModeVector st = make(x(0));
            return Eigen::VectorXd::Constant(1, std::norm(st(0)) - std::norm(st(3)));
        },
        Eigen::VectorXd::Constant(1, 1.0));
    const ModeVector s = make(rep.solution(0));
    const ControlState c = synthesize_controls(s, kGamma, 0.0, EmbeddingModel{});
    CHECK(std::abs(c.J01 - c.J23) < 1e-9);
}

TEST_CASE("initial state construction") {
    const ModeVector s = build_initial_state(std::sqrt(0.6), std::sqrt(0.4), 0.5, 0.5, 0.5, 1.0);
    CHECK(s(3).imag() == doctest::Approx(0.5));
    CHECK(s(0).imag() == doctest::Approx(-0.5));
    CHECK(s(2).imag() == 0.0);

    const ModeVector z = build_initial_state(cplx(0.4, 0.3), 0.6, 0.7, 0.9, 0.0, 1.0);
    CHECK(z(3).imag() == 0.0);
    CHECK(z(0).imag() == doctest::Approx(0.7 * 0.3 / 0.4));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.2, 1.5);
    for (int trial = 0; trial < 200; ++trial) {
        const double g = u(rng) - 0.7, d = (trial % 2 ? 1.0 : -1.0) * u(rng);
        const ModeVector st = build_initial_state(cplx(u(rng), u(rng) - 0.8), u(rng), u(rng), u(rng) - 0.8, g, d);
        EmbeddingModel m;
        m.d = d;
        const ControlState c = synthesize_controls(st, g, 0.0, m, 1e300);
        const Eigen::Vector4d r = check_conditions(st, c);
        CHECK(r.head(3).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(build_initial_state(cplx(0.0, 1.0), 0.5, 1.0, 1.0, 0.5, 1.0), DegenerateInput);
    CHECK_THROWS_AS(build_initial_state(1.0, 0.5, 0.0, 1.0, 0.5, 1.0), DegenerateInput);
    CHECK_THROWS_AS(build_initial_state(1.0, 0.5, 1.0, 1.0, 0.5, 0.0), DegenerateInput);
}

TEST_CASE("gamma ramp") {
    const RampSchedule r{0.8, 4.0};
    CHECK(gamma_ramp(0.0, r) == std::pair{0.0, 0.0});
    auto [g, gd] = gamma_ramp(4.0, r);
    CHECK(g == doctest::Approx(0.8));
    CHECK(gd == 0.0);
    std::tie(g, gd) = gamma_ramp(2.0, r);
    CHECK(g == doctest::Approx(0.4));
    CHECK(gd == doctest::Approx(std::numbers::pi * 0.8 / 8.0));
    CHECK(gamma_ramp(10.0, r).first == doctest::Approx(0.8));
    const double h = 1e-5;
    CHECK((gamma_ramp(1.3 + h, r).first - gamma_ramp(1.3 - h, r).first) / (2 * h) ==
          doctest::Approx(gamma_ramp(1.3, r).second).epsilon(1e-8));
    auto s = GammaSchedule::constant(0.3);
    CHECK(s(5.0) == std::pair{0.3, 0.0});
}

TEST_CASE("onsite synthesis keeps the current derivatives on target") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        EmbeddingModel m;
        m.J12 = 0.5 + std::abs(u(rng));
        m.d = 0.5 + std::abs(u(rng));
        for (int k = 0; k < 4; ++k) m.nonlinear(k) = u(rng);
        ModeVector psi(4);
        for (int k = 0; k < 4; ++k) psi(k) = cplx(u(rng), u(rng));
        const double g = 0.5 * u(rng), gd = 0.3 * u(rng);
        ControlState c;
        try {
            c = synthesize_controls(psi, g, gd, m, 1e8);
        } catch (const ControlSingular&) {
            continue;
        }
        // residuals of the current conditions, differentiated along the controlled flow
        const ModeVector flow = fewmode::model_rhs(psi, four_mode_model(c, m));
        auto residual = [&](double h) {
            const ModeVector y = psi + h * flow;
            const auto [J01, J23] = synth_tunneling(fewmode::observables(y, four_mode_model(c, m)), m.d);
            ControlState cc = c;
            cc.J01 = J01;
            cc.J23 = J23;
            cc.gamma = g + gd * h;
            return check_conditions(y, cc);
        };
        const double h = 1e-6;
        const Eigen::Vector4d rate = (residual(h) - residual(-h)) / (2 * h);
        const double scale = 1.0 + std::abs(c.E0) + std::abs(c.E3);
        CHECK(std::abs(rate(0)) < 1e-6 * scale);
        CHECK(std::abs(rate(1)) < 1e-6 * scale);
        ++checked;
    }
    CHECK(checked > 80);
    CHECK_THROWS_AS(synth_onsite(ModeVector::Zero(4), ControlState{}, EmbeddingModel{}), ControlSingular);

    Eigen::MatrixXd A(2, 2);
    A << 1, 0, 0, -1;
    const auto sol = numerics::solve_linear(A, Eigen::Vector2d(2, 3));
    CHECK(sol.x(0) == 2.0);
    CHECK(sol.x(1) == -3.0);
}

TEST_CASE("real state without gain keeps currents at zero") {
    ModeVector psi(4);
    psi << 0.4, 0.6, 0.55, 0.45;
    EmbeddingModel m;
    m.nonlinear << 0.3, 0.2, 0.2, 0.3;
    numerics::IntegratorSettings s;
    s.rel_tol = 1e-10;
    numerics::DormandPrince45<ModeVector> stepper(
        [&](double t, const ModeVector& y) { return controlled_four_mode_rhs(t, y, GammaSchedule::constant(0.0), m); },
        0.0, psi, 1e9, s);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        stepper.step();
        const ControlState c = synthesize_controls(stepper.state(), 0.0, 0.0, m);
        const auto o = fewmode::observables(stepper.state(), four_mode_model(c, m));
        worst = std::max({worst, std::abs(o.j(0)), std::abs(o.j(2))});
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("stationary embedding") {
    const ModeVector s = stationary_state(kGamma);
    const auto run = run_controlled(s, GammaSchedule::constant(kGamma), EmbeddingModel{}, options(5.0));
    REQUIRE_FALSE(run.breakdown);
    std::vector<double> t, n0, n3;
    double worst = 0.0, worst_cond = 0.0, worst4 = 0.0;
    for (const auto& smp : run.samples) {
        t.push_back(smp.t);
        n0.push_back(std::norm(smp.state(0)));
        n3.push_back(std::norm(smp.state(3)));
        worst = std::max({worst, std::abs(std::norm(smp.state(1)) - 0.5), std::abs(std::norm(smp.state(2)) - 0.5)});
        const auto r = check_conditions(smp.state, smp.controls);
        worst_cond = std::max(worst_cond, r.head(3).cwiseAbs().maxCoeff());
        worst4 = std::max(worst4, std::abs(r(3)));
    }
    CHECK(worst < 1e-6);
    CHECK(slope(t, n3) == doctest::Approx(kGamma).epsilon(1e-3));
    CHECK(slope(t, n0) == doctest::Approx(-kGamma).epsilon(1e-3));
    CHECK(worst_cond < 1e-7);
    CHECK(worst4 < 1e-7);
}

TEST_CASE("oscillatory embedding reproduces the two-mode model until breakdown") {
    const ModeVector s = oscillatory_state();
    const EmbeddingModel m;
    const auto run = run_controlled(s, GammaSchedule::constant(kGamma), m, options(40.0, 1e-11));
    CHECK(run.breakdown);
    CHECK(std::norm(run.samples.back().state(0)) < 0.01);
    std::vector<double> times;
    for (const auto& smp : run.samples) times.push_back(smp.t);
    ModeVector two(2);
    two << s(1), s(2);
    numerics::IntegratorSettings tight;
    tight.rel_tol = 1e-12;
    const auto ref = run_two_mode(two, GammaSchedule::constant(kGamma), m.J12, 0.0, 0.0, times, tight);
    double worst = 0.0, norm_drift = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const ModeVector& a = run.samples[i].state;
        const ModeVector& b = ref[i].state;
        const double j_a = -2 * std::imag(a(1) * std::conj(a(2)));
        const double j_b = -2 * std::imag(b(0) * std::conj(b(1)));
        worst = std::max({worst, std::abs(std::norm(a(1)) - std::norm(b(0))),
                          std::abs(std::norm(a(2)) - std::norm(b(1))), std::abs(j_a - j_b)});
        norm_drift = std::max(norm_drift, std::abs(a.squaredNorm() / s.squaredNorm() - 1.0));
    }
    CHECK(worst < 1e-6);
    CHECK(norm_drift < 1e-9);
}

TEST_CASE("closed forms along a controlled trajectory") {
    const ModeVector s = oscillatory_state();
    const auto run = run_controlled(s, GammaSchedule::constant(kGamma), EmbeddingModel{}, options(10.0, 1e-11));
    const ClosedFormSigns signs0 = infer_signs(s, kGamma, 1.0);
    double worst = 0.0;
    int consistent_signs = 0;
    for (const auto& smp : run.samples) {
        const auto o = fewmode::observables(smp.state, four_mode_model(smp.controls, EmbeddingModel{}));
        const ClosedFormSigns sg = infer_signs(smp.state, kGamma, 1.0);
        if (sg.s2 == signs0.s2 && sg.s3 == signs0.s3 && sg.s6 == signs0.s6) ++consistent_signs;
        const auto cf = closed_form_observables(o.n, o.j_tilde(1, 2), kGamma, 1.0, sg);
        worst = std::max({worst, std::abs(cf.jt01 - o.j_tilde(0, 1)), std::abs(cf.jt23 - o.j_tilde(2, 3)),
                          std::abs(cf.C02 - o.C(0, 2)), std::abs(cf.C13 - o.C(1, 3)),
                          std::abs(cf.jt02 - o.j_tilde(0, 2)), std::abs(cf.jt13 - o.j_tilde(1, 3))});
    }
    CHECK(worst < 1e-8);
    CHECK(consistent_signs > 0);

    Eigen::Vector4d n(0.3, 0.5, 0.5, 0.4);
    const auto zero = closed_form_observables(n, 0.0, 0.0, 1.0, {-1, 1, 1, 1});
    CHECK(std::abs(zero.jt01) < 1e-15);
    CHECK_THROWS_AS(closed_form_observables(n, 0.0, 5.0, 0.1, {1, 1, 1, 1}), BranchViolation);
}

TEST_CASE("stationary closed forms reproduce the injected current") {
    const ModeVector s = stationary_state(kGamma);
    const auto o = fewmode::observables(s, four_mode_model(ControlState{}, EmbeddingModel{}));
    const auto cf = closed_form_observables(o.n, o.j_tilde(1, 2), kGamma, 1.0, infer_signs(s, kGamma, 1.0));
    CHECK(1.0 * cf.C13 * cf.jt01 == doctest::Approx(2 * kGamma * o.n(1)).epsilon(1e-10));
}

TEST_CASE("condition residuals") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g;
    ModeVector psi(4);
    for (int k = 0; k < 4; ++k) psi(k) = cplx(g(rng), g(rng));
    ControlState c;
    c.gamma = 0.4;
    c.J01 = 0.7;
    c.J23 = -0.2;
    const auto r = check_conditions(psi, c);
    CHECK(r.cwiseAbs().minCoeff() > 1e-6);
}

TEST_CASE("collapse with attractive interaction") {
    const double nu = std::sqrt(1.0 - kGamma * kGamma);
    const ModeVector s = build_initial_state(1.5 * cplx(nu, -kGamma) / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 1.5, 1.5,
                                             kGamma, 1.0);
    EmbeddingModel m;
    m.nonlinear.setConstant(-1.0);
    const auto run = run_controlled(s, GammaSchedule::constant(kGamma), m, options(40.0, 1e-11));
    CHECK(run.breakdown);
    bool monotone = true;
    for (std::size_t i = 1; i < run.samples.size(); ++i)
        monotone = monotone && std::norm(run.samples[i].state(1)) >= std::norm(run.samples[i - 1].state(1));
    CHECK(monotone);
    CHECK(std::norm(run.samples.back().state(1)) > 2.0 * std::norm(s(1)));
}
