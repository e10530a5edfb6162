#include "ptbec/fewmode/model.hpp"

#include <algorithm>
#include <string>

#include "ptbec/errors.hpp"
#include "ptbec/numerics/minimize.hpp"

namespace ptbec::fewmode {

namespace {

constexpr cplx I(0.0, 1.0);

void require_size(const ModeVector& state, const TridiagonalComplexModel& model) {
    model.validate();
    if (state.size() != model.size())
        throw SizeMismatch("state has " + std::to_string(state.size()) + " modes, model has " +
                           std::to_string(model.size()));
}

// rho_kl = psi_k psi_l^*; indices outside the chain give zero.
cplx rho(const ModeVector& psi, Eigen::Index k, Eigen::Index l) {
    if (k < 0 || l < 0 || k >= psi.size() || l >= psi.size()) return 0.0;
    return psi(k) * std::conj(psi(l));
}

double hop(const Eigen::VectorXd& J, Eigen::Index k) {
    return (k < 0 || k >= J.size()) ? 0.0 : J(k);
}

}  // namespace

void TridiagonalComplexModel::validate() const {
    if (onsite.size() == 0) throw SizeMismatch("model has no modes");
    if (coupling.size() != onsite.size() - 1)
        throw SizeMismatch("coupling vector must have size-1 entries");
    if (nonlinear.size() != onsite.size()) throw SizeMismatch("nonlinear vector must have one entry per mode");
}

TridiagonalComplexModel TridiagonalComplexModel::pt_dimer(double J, double gamma, double c) {
    TridiagonalComplexModel m;
    m.onsite = Eigen::VectorXcd(2);
    m.onsite << cplx(0.0, gamma), cplx(0.0, -gamma);
    m.coupling = Eigen::VectorXd::Constant(1, J);
    m.nonlinear = Eigen::VectorXd::Constant(2, c);
    return m;
}

ModeVector model_rhs(const ModeVector& state, const TridiagonalComplexModel& model) {
    require_size(state, model);
    const Eigen::Index n = state.size();
    ModeVector d(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        cplx h = (model.onsite(k) + model.nonlinear(k) * std::norm(state(k))) * state(k);
        if (k > 0) h -= model.coupling(k - 1) * state(k - 1);
        if (k + 1 < n) h -= model.coupling(k) * state(k + 1);
        d(k) = -I * h;
    }
    return d;
}

ObservableSet observables(const ModeVector& state, const TridiagonalComplexModel& model) {
    require_size(state, model);
    const Eigen::Index n = state.size();
    ObservableSet o;
    o.n = state.cwiseAbs2();
    o.j_tilde.resize(n, n);
    o.C.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) {
            const cplx r = rho(state, k, l);
            o.C(k, l) = 2.0 * r.real();
            o.j_tilde(k, l) = -2.0 * r.imag();
        }
    o.j.resize(n - 1);
    for (Eigen::Index k = 0; k + 1 < n; ++k) o.j(k) = model.coupling(k) * o.j_tilde(k, k + 1);
    return o;
}

ObservableRates observable_rates(const ModeVector& state, const TridiagonalComplexModel& model) {
    require_size(state, model);
    const Eigen::Index n = state.size();
    if (n != 2 && n != 4)
        throw UnsupportedSize("observable rates are available for 2 and 4 modes, got " + std::to_string(n));

    Eigen::VectorXcd eps(n);
    for (Eigen::Index k = 0; k < n; ++k) eps(k) = model.onsite(k) + model.nonlinear(k) * std::norm(state(k));
    const Eigen::VectorXd& J = model.coupling;

    ObservableRates r;
    r.C.resize(n, n);
    r.j_tilde.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) {
            const cplx drho = -I * (eps(k) - std::conj(eps(l))) * rho(state, k, l) +
                              I * (hop(J, k - 1) * rho(state, k - 1, l) + hop(J, k) * rho(state, k + 1, l) -
                                   hop(J, l - 1) * rho(state, k, l - 1) - hop(J, l) * rho(state, k, l + 1));
            r.C(k, l) = 2.0 * drho.real();
            r.j_tilde(k, l) = -2.0 * drho.imag();
        }
    const ObservableSet o = observables(state, model);
    r.n.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        double v = 2.0 * model.onsite(k).imag() * o.n(k);
        if (k > 0) v += o.j(k - 1);
        if (k + 1 < n) v -= o.j(k);
        r.n(k) = v;
    }
    r.j.resize(n - 1);
    for (Eigen::Index k = 0; k + 1 < n; ++k) r.j(k) = J(k) * r.j_tilde(k, k + 1);
    return r;
}

std::array<cplx, 2> two_mode_eigenvalues(const TridiagonalComplexModel& model) {
    model.validate();
    if (model.size() != 2) throw UnsupportedSize("two_mode_eigenvalues needs a two-mode model");
    const cplx e1 = model.onsite(0), e2 = model.onsite(1);
    const double J = model.coupling(0);
    const cplx mean = 0.5 * (e1 + e2);
    const cplx half = 0.5 * (e1 - e2);
    const cplx root = std::sqrt(half * half + J * J);
    std::array<cplx, 2> ev{mean - root, mean + root};
    std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return ev;
}

double mean_field_energy(const ModeVector& state, const TridiagonalComplexModel& model) {
    model.validate();
    if (state.size() != model.size()) throw SizeMismatch("state and model sizes differ");
    double e = 0.0;
    for (Eigen::Index k = 0; k < state.size(); ++k) {
        const double n = std::norm(state(k));
        e += model.onsite(k).real() * n + 0.5 * model.nonlinear(k) * n * n;
        if (k + 1 < state.size()) e -= 2.0 * model.coupling(k) * std::real(state(k) * std::conj(state(k + 1)));
    }
    return e;
}

GroundState ground_state(const TridiagonalComplexModel& model) {
    model.validate();
    if (!model.hermitian()) throw InvalidArgument("ground state needs real onsite energies");
    const Eigen::Index n = model.size();
    const Eigen::VectorXd E = model.onsite.real();
    auto energy = [&](const Eigen::VectorXd& x) { return mean_field_energy(x.cast<cplx>(), model); };
    numerics::MinimizeOptions opts;
    opts.gradient_tolerance = 1e-7;
    numerics::NormConstraint norm{[](const Eigen::VectorXd& x) { return x.squaredNorm(); }, {}};
    for (Eigen::Index k = 0; k < n; ++k) norm.scaled.push_back(k);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    const auto res = numerics::minimize_norm_constrained(energy, x0, norm, opts);

    // Newton polish of H(x) x = mu x, |x|^2 = 1
    Eigen::VectorXd x = res.x;
    auto hx = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd h(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            h(k) = (E(k) + model.nonlinear(k) * v(k) * v(k)) * v(k);
            if (k > 0) h(k) -= model.coupling(k - 1) * v(k - 1);
            if (k + 1 < n) h(k) -= model.coupling(k) * v(k + 1);
        }
        return h;
    };
    double mu = x.dot(hx(x));
    for (int it = 0; it < 20; ++it) {
        Eigen::VectorXd r(n + 1);
        r.head(n) = hx(x) - mu * x;
        r(n) = x.squaredNorm() - 1.0;
        if (r.lpNorm<Eigen::Infinity>() < 1e-14 * std::max(1.0, std::abs(mu))) break;
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + 1, n + 1);
        for (Eigen::Index k = 0; k < n; ++k) {
            jac(k, k) = E(k) + 3.0 * model.nonlinear(k) * x(k) * x(k) - mu;
            if (k > 0) jac(k, k - 1) = -model.coupling(k - 1);
            if (k + 1 < n) jac(k, k + 1) = -model.coupling(k);
            jac(k, n) = -x(k);
            jac(n, k) = 2.0 * x(k);
        }
        const Eigen::VectorXd step = jac.fullPivLu().solve(-r);
        if (!step.allFinite()) break;
        x += step.head(n);
        mu += step(n);
    }

    GroundState gs;
    gs.state = x.cast<cplx>();
    if (gs.state.real().sum() < 0.0) gs.state = -gs.state;
    gs.energy = mean_field_energy(gs.state, model);
    gs.mu = mu;
    return gs;
}

}  // namespace ptbec::fewmode
