#include <cmath>
#include <random>

#include "doctest.h"
#include "ptbec/errors.hpp"
#include "ptbec/fewmode/model.hpp"
#include "ptbec/numerics/ode.hpp"

using namespace ptbec;
using namespace ptbec::fewmode;

namespace {

ModeVector random_state(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    ModeVector psi(n);
    for (int k = 0; k < n; ++k) psi(k) = cplx(g(rng), g(rng));
    return psi / psi.norm();
}

TridiagonalComplexModel random_model(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TridiagonalComplexModel m;
    m.onsite.resize(n);
    m.coupling.resize(n - 1);
    m.nonlinear.resize(n);
    for (int k = 0; k < n; ++k) {
        m.onsite(k) = cplx(u(rng), 0.5 * u(rng));
        m.nonlinear(k) = u(rng);
    }
    for (int k = 0; k < n - 1; ++k) m.coupling(k) = 0.5 + u(rng) * 0.4;
    return m;
}

ModeVector propagate(const ModeVector& psi, const TridiagonalComplexModel& m, double t, double tol = 1e-12) {
    numerics::IntegratorSettings s;
    s.rel_tol = tol;
    s.abs_tol = tol * 1e-2;
    auto traj = numerics::integrate_adaptive<ModeVector>(
        [&m](double, const ModeVector& y) { return model_rhs(y, m); }, psi, {0.0, t}, s);
    return traj.back().y;
}

ModeVector pt_eigenstate(double J, double gamma) {
    const double nu = std::sqrt(J * J - gamma * gamma);
    ModeVector psi(2);
    psi(1) = 1.0 / std::sqrt(2.0);
    psi(0) = cplx(nu, -gamma) / J * psi(1);
    return psi;
}

}  // namespace

TEST_CASE("model_rhs direct substitution") {
    auto m = TridiagonalComplexModel::pt_dimer(1.0, 0.0);
    ModeVector psi(2);
    psi << 1.0, 0.0;
    const ModeVector d = model_rhs(psi, m);
    CHECK(std::abs(d(0)) == 0.0);
    CHECK(std::abs(d(1) - cplx(0, 1)) < 1e-15);
    CHECK_THROWS_AS(model_rhs(ModeVector::Zero(3), m), SizeMismatch);
    TridiagonalComplexModel bad = m;
    bad.coupling.resize(2);
    CHECK_THROWS_AS(model_rhs(psi, bad), SizeMismatch);
}

TEST_CASE("decoupled wells keep their occupations") {
    std::mt19937_64 rng(1);
    auto m = random_model(rng, 4);
    m.coupling.setZero();
    const ModeVector psi = random_state(rng, 4);
    const ModeVector out = propagate(psi, m, 3.0);
    for (int k = 0; k < 4; ++k) {
        const double growth = std::exp(2.0 * m.onsite(k).imag() * 3.0);
        CHECK(std::norm(out(k)) == doctest::Approx(std::norm(psi(k)) * growth).epsilon(1e-9));
    }
}

TEST_CASE("PT eigenstate is stationary in modulus") {
    const auto m = TridiagonalComplexModel::pt_dimer(1.0, 0.5);
    const ModeVector psi = pt_eigenstate(1.0, 0.5);
    numerics::IntegratorSettings s;
    s.rel_tol = 1e-11;
    s.abs_tol = 1e-13;
    auto traj = numerics::integrate_adaptive<ModeVector>(
        [&m](double, const ModeVector& y) { return model_rhs(y, m); }, psi, {0.0, 20.0}, s);
    for (const auto& smp : traj)
        for (int k = 0; k < 2; ++k) CHECK(std::abs(std::abs(smp.y(k)) - std::abs(psi(k))) < 1e-8);
    const auto r = observable_rates(psi, m);
    CHECK(std::abs(r.n(0)) < 1e-10);
    CHECK(std::abs(r.n(1)) < 1e-10);
    CHECK(std::abs(r.j(0)) < 1e-10);
    CHECK(std::abs(r.C(0, 1)) < 1e-10);
}

TEST_CASE("observable definitions") {
    auto m = TridiagonalComplexModel::pt_dimer(0.7, 0.0);
    ModeVector psi(2);
    psi << std::sqrt(0.6), std::sqrt(0.4);
    auto o = observables(psi, m);
    CHECK(o.n(0) == doctest::Approx(0.6));
    CHECK(o.n(1) == doctest::Approx(0.4));
    CHECK(o.j_tilde(0, 1) == 0.0);
    CHECK(o.C(0, 1) == doctest::Approx(2 * std::sqrt(0.24)));
    CHECK(o.C(0, 1) == doctest::Approx(0.9798).epsilon(1e-4));

    m.coupling(0) = 1.0;
    psi << 1.0 / std::sqrt(2.0), cplx(0, 1) / std::sqrt(2.0);
    o = observables(psi, m);
    CHECK(o.j_tilde(0, 1) == doctest::Approx(1.0));
    CHECK(o.j(0) == doctest::Approx(1.0));
    CHECK(o.j_tilde(1, 0) == doctest::Approx(-1.0));
    CHECK((o.C - o.C.transpose()).norm() == 0.0);
}

TEST_CASE("closed system conserves the total occupation rate") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = random_model(rng, 2);
        m.onsite = m.onsite.real().cast<cplx>();
        const auto r = observable_rates(random_state(rng, 2), m);
        CHECK(std::abs(r.n.sum()) < 1e-14);
    }
}

TEST_CASE("gain and loss bookkeeping of the PT dimer") {
    std::mt19937_64 rng(4);
    const double gamma = 0.37;
    const auto m = TridiagonalComplexModel::pt_dimer(1.0, gamma, 0.8);
    for (int trial = 0; trial < 20; ++trial) {
        const ModeVector psi = random_state(rng, 2);
        const auto o = observables(psi, m);
        const auto r = observable_rates(psi, m);
        CHECK(r.n.sum() == doctest::Approx(2 * gamma * (o.n(0) - o.n(1))).epsilon(1e-12));
        const double h = 1e-4;
        const double np = propagate(psi, m, h).cwiseAbs2().sum();
        const double nm = propagate(psi, m, -h).cwiseAbs2().sum();
        CHECK(std::abs((np - nm) / (2 * h) - 2 * gamma * (o.n(0) - o.n(1))) < 1e-7);
    }
}

TEST_CASE("observable rates match finite differences") {
    std::mt19937_64 rng(5);
    for (int n : {2, 4}) {
        for (int trial = 0; trial < 100; ++trial) {
            const auto m = random_model(rng, n);
            const ModeVector psi = random_state(rng, n);
            const auto r = observable_rates(psi, m);
            double worst = 0.0;
            for (double h : {2e-3, 1e-3}) {
                const auto op = observables(propagate(psi, m, h), m);
                const auto om = observables(propagate(psi, m, -h), m);
                const double err = std::max({((op.n - om.n) / (2 * h) - r.n).cwiseAbs().maxCoeff(),
                                             ((op.j - om.j) / (2 * h) - r.j).cwiseAbs().maxCoeff(),
                                             ((op.C - om.C) / (2 * h) - r.C).cwiseAbs().maxCoeff(),
                                             ((op.j_tilde - om.j_tilde) / (2 * h) - r.j_tilde).cwiseAbs().maxCoeff()});
                if (h == 2e-3)
                    worst = err;
                else
                    CHECK(err < 0.3 * worst + 1e-9);  // O(h^2) convergence
                CHECK(err < 20 * h * h + 1e-9);
            }
        }
    }
    CHECK_THROWS_AS(observable_rates(ModeVector::Zero(3), random_model(rng, 3)), UnsupportedSize);
}

TEST_CASE("Hermitian propagation conserves the norm") {
    std::mt19937_64 rng(6);
    for (auto [tol, t_end] : {std::pair{1e-10, 50.0}, std::pair{1e-11, 100.0}}) {
        auto m = random_model(rng, 4);
        m.onsite = m.onsite.real().cast<cplx>();
        numerics::IntegratorSettings s;
        s.rel_tol = tol;
        auto traj = numerics::integrate_adaptive<ModeVector>(
            [&m](double, const ModeVector& y) { return model_rhs(y, m); }, random_state(rng, 4), {0.0, t_end}, s);
        double worst = 0.0;
        for (const auto& smp : traj) worst = std::max(worst, std::abs(smp.y.squaredNorm() - 1.0));
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("two-mode eigenvalues") {
    auto ev = two_mode_eigenvalues(TridiagonalComplexModel::pt_dimer(1.0, 0.0));
    CHECK(std::abs(ev[0] + 1.0) < 1e-15);
    CHECK(std::abs(ev[1] - 1.0) < 1e-15);
    ev = two_mode_eigenvalues(TridiagonalComplexModel::pt_dimer(1.0, 0.5));
    CHECK(std::abs(ev[0] + 0.8660254037844386) < 1e-12);
    CHECK(std::abs(ev[1] - 0.8660254037844386) < 1e-12);
    ev = two_mode_eigenvalues(TridiagonalComplexModel::pt_dimer(1.0, 1.5));
    CHECK(std::abs(ev[0] - cplx(0, -1.118033988749895)) < 1e-12);
    CHECK(std::abs(ev[1] - cplx(0, 1.118033988749895)) < 1e-12);
    ev = two_mode_eigenvalues(TridiagonalComplexModel::pt_dimer(1.0, 1.0));
    CHECK(std::abs(ev[0] - ev[1]) < 1e-7);

    // against a general eigensolver
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        TridiagonalComplexModel m = TridiagonalComplexModel::pt_dimer(u(rng), 0.0);
        m.onsite << cplx(u(rng), u(rng)), cplx(u(rng), u(rng));
        Eigen::Matrix2cd H;
        H << m.onsite(0), -m.coupling(0), -m.coupling(0), m.onsite(1);
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(H);
        const auto e = two_mode_eigenvalues(m);
        for (int i = 0; i < 2; ++i) {
            const double d = std::min(std::abs(e[i] - es.eigenvalues()(0)), std::abs(e[i] - es.eigenvalues()(1)));
            CHECK(d < 1e-12);
        }
    }
}

TEST_CASE("PT transition") {
    for (double g : {0.1, 0.5, 0.9}) {
        const auto ev = two_mode_eigenvalues(TridiagonalComplexModel::pt_dimer(1.0, g));
        CHECK(std::abs(ev[0].imag()) < 1e-14);
        CHECK(std::abs(ev[1].imag()) < 1e-14);
    }
    for (double g : {1.1, 2.0}) {
        const auto ev = two_mode_eigenvalues(TridiagonalComplexModel::pt_dimer(1.0, g));
        CHECK(std::abs(ev[0].real()) < 1e-14);
        CHECK(std::abs(ev[1].real()) < 1e-14);
    }
}

TEST_CASE("mean-field ground state") {
    SUBCASE("linear dimer") {
        TridiagonalComplexModel m = TridiagonalComplexModel::pt_dimer(0.7, 0.0);
        const auto gs = ground_state(m);
        CHECK(std::abs(gs.state(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
        CHECK(std::abs(gs.state(1) - 1.0 / std::sqrt(2.0)) < 1e-12);
        CHECK(gs.mu == doctest::Approx(-0.7).epsilon(1e-12));
    }
    SUBCASE("interacting dimer against an angle scan") {
        TridiagonalComplexModel m;
        m.onsite = Eigen::Vector2cd(-1.0, 0.3);
        m.coupling = Eigen::VectorXd::Constant(1, 0.4);
        m.nonlinear = Eigen::Vector2d(5.0, 2.0);
        auto e = [&](double th) { return mean_field_energy(Eigen::Vector2cd(std::cos(th), std::sin(th)), m); };
        double lo = 0.0, hi = M_PI / 2;
        for (int i = 0; i < 200; ++i) {
            const double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
            if (e(a) < e(b))
                hi = b;
            else
                lo = a;
        }
        const double th = 0.5 * (lo + hi);
        const auto gs = ground_state(m);
        CHECK(std::abs(gs.state(0).real() - std::cos(th)) < 1e-7);
        CHECK(std::abs(gs.state(1).real() - std::sin(th)) < 1e-7);
        CHECK(gs.energy == doctest::Approx(e(th)).epsilon(1e-12));
        const ModeVector d = model_rhs(gs.state, m);
        CHECK((d + cplx(0.0, 1.0) * gs.mu * gs.state).norm() < 1e-12);
    }
    SUBCASE("gain and loss rejected") {
        CHECK_THROWS_AS(ground_state(TridiagonalComplexModel::pt_dimer(1.0, 0.2)), InvalidArgument);
    }
}
