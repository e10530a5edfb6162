#include "ptbec/gauss/effective.hpp"

#include <cmath>
#include <numbers>

#include "internal.hpp"
#include "ptbec/errors.hpp"
#include "ptbec/gauss/matrices.hpp"
#include "ptbec/numerics/minimize.hpp"
#include "ptbec/numerics/roots.hpp"

namespace ptbec::gauss {

namespace {

constexpr double pi = std::numbers::pi;

cplx beta(cplx A, double w) { return std::sqrt(A * w * w / (A * w * w + 2.0)); }

double real_product(const GaussianBasisSet& b, Eigen::Index k) {
    return b.ax(k).real() * b.ay(k).real() * b.az(k).real();
}

double onsite_energy(const GaussianBasisSet& b, const WellPotentialSpec& w, Eigen::Index k) {
    const double kin = 0.5 * (b.ax(k).real() + b.ay(k).real() + b.az(k).real());
    const cplx bx = beta(2.0 * b.ax(k).real(), w.wx), by = beta(2.0 * b.ay(k).real(), w.wy);
    const cplx bz = beta(2.0 * b.az(k).real(), w.wz);
    const double ds = w.positions(k) - b.q(k);
    const cplx pot = w.depths(k) * bx * by * bz * std::exp(-2.0 * bz * bz * ds * ds / (w.wz * w.wz));
    return kin + pot.real();
}

// h_lk = H_lk / K_lk restricted to the potentials of wells l and k.
cplx reduced_element(const GaussianBasisSet& b, const WellPotentialSpec& w, const PairwiseAux& p, Eigen::Index l,
                     Eigen::Index k) {
    const double dq = b.q(k) - b.q(l);
    const cplx t = p.kappa.sum() - 2.0 * p.kappa(2) * p.kappa(2) * dq * dq;
    const cplx bxyz = beta(p.A(0), w.wx) * beta(p.A(1), w.wy) * beta(p.A(2), w.wz);
    const cplx den = p.A(2) * (p.A(2) * w.wz * w.wz + 2.0);
    auto term = [&](Eigen::Index m) {
        const double s = w.positions(m);
        const cplx u = b.az(k) * (s - b.q(k)) + std::conj(b.az(l)) * (s - b.q(l));
        return w.depths(m) * std::exp(-2.0 * u * u / den);
    };
    return t + bxyz * (term(k) + term(l));
}

EffectiveModel nearest_neighbor_model(const GaussianBasisSet& basis, const WellPotentialSpec& wells, double g) {
    const auto n = basis.size();
    EffectiveModel m;
    m.onsite.resize(n);
    m.interaction.resize(n);
    m.tunneling.resize(n - 1);
    for (Eigen::Index k = 0; k < n; ++k) {
        m.onsite(k) = onsite_energy(basis, wells, k);
        m.interaction(k) = g * std::sqrt(real_product(basis, k)) / std::pow(pi, 1.5);
    }
    for (Eigen::Index l = 0; l + 1 < n; ++l) {
        const Eigen::Index k = l + 1;
        const PairwiseAux p = pair_aux(basis, l, k);
        const double ak = std::pow(real_product(basis, k), 0.25), al = std::pow(real_product(basis, l), 0.25);
        const cplx h = reduced_element(basis, wells, p, l, k);
        const cplx h1 = -2.0 * std::sqrt(2.0) * (ak * ak * al * al) / (ak + al) *
                        ((m.onsite(k) - h) / ak + (m.onsite(l) - h) / al) * p.c /
                        (std::sqrt(p.A(0)) * std::sqrt(p.A(1)) * std::sqrt(p.A(2)));
        m.tunneling(l) = -h1.real();
    }
    return m;
}

EffectiveModel exact_model(const GaussianBasisSet& basis, const WellPotentialSpec& wells, double g) {
    const auto n = basis.size();
    const MatrixBundle mb = hamiltonian_matrices_unchecked(basis, wells, g);
    const Eigen::MatrixXcd X = lowdin_exact(mb.K);
    const Eigen::MatrixXcd H = X * (mb.T + mb.V) * X;
    EffectiveModel m;
    m.onsite = H.diagonal().real();
    m.tunneling.resize(n - 1);
    for (Eigen::Index k = 0; k + 1 < n; ++k) m.tunneling(k) = -H(k, k + 1).real();
    m.interaction.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        cplx w = 0.0;
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b)
                for (Eigen::Index c = 0; c < n; ++c)
                    for (Eigen::Index e = 0; e < n; ++e) w += X(k, a) * X(k, c) * mb.W(a, b, c, e) * X(b, k) * X(e, k);
        m.interaction(k) = w.real();
    }
    return m;
}

}  // namespace

EffectiveModel effective_model_unchecked(const GaussianBasisSet& basis, const WellPotentialSpec& wells, double g,
                                         AmplitudeTransform transform) {
    return transform == AmplitudeTransform::exact ? exact_model(basis, wells, g)
                                                  : nearest_neighbor_model(basis, wells, g);
}

EffectiveModel effective_model(const GaussianBasisSet& basis, const WellPotentialSpec& wells, double g,
                               AmplitudeTransform transform) {
    basis.validate();
    wells.validate();
    if (wells.size() != basis.size()) throw SizeMismatch("basis and trap must have one Gaussian per well");
    return effective_model_unchecked(basis, wells, g, transform);
}

namespace {

struct FitLayout {
    Eigen::Index n;
    Eigen::Index widths() const { return 0; }
    Eigen::Index centres() const { return 3 * n; }
    Eigen::Index amplitudes() const { return 4 * n; }
    Eigen::Index total() const { return 5 * n; }

    GaussianBasisSet basis(const Eigen::VectorXd& x) const {
        GaussianBasisSet b;
        b.ax = x.segment(0, n).array().exp().cast<cplx>();
        b.ay = x.segment(n, n).array().exp().cast<cplx>();
        b.az = x.segment(2 * n, n).array().exp().cast<cplx>();
        b.q = x.segment(centres(), n);
        return b;
    }
    Eigen::VectorXcd d(const Eigen::VectorXd& x) const { return x.segment(amplitudes(), n).cast<cplx>(); }
};

}  // namespace

GroundStateFit fit_ground_state(const WellPotentialSpec& wells, double g, const GaussianBasisSet& seed,
                                const FitOptions& options) {
    wells.validate();
    seed.validate();
    const auto n = wells.size();
    if (seed.size() != n) throw SizeMismatch("seed basis must have one Gaussian per well");
    const FitLayout lay{n};

    Eigen::VectorXd x0(lay.total());
    for (Eigen::Index k = 0; k < n; ++k) {
        x0(k) = std::log(seed.ax(k).real());
        x0(n + k) = std::log(seed.ay(k).real());
        x0(2 * n + k) = std::log(seed.az(k).real());
    }
    x0.segment(lay.centres(), n) = seed.q;
    x0.segment(lay.amplitudes(), n).setOnes();

    numerics::NormConstraint constraint;
    constraint.norm = [&](const Eigen::VectorXd& x) { return norm_of(lay.d(x), overlap_matrix(lay.basis(x))); };
    for (Eigen::Index k = 0; k < n; ++k) constraint.scaled.push_back(lay.amplitudes() + k);
    const numerics::ScalarFunction energy = [&](const Eigen::VectorXd& x) {
        return mean_field_energy(lay.d(x), lay.basis(x), wells, g);
    };

    numerics::MinimizeOptions mo;
    mo.gradient_tolerance = options.gradient_tolerance;
    mo.max_iterations = options.max_iterations;
    mo.fd_step = options.fd_step;
    const numerics::MinimizeResult r = numerics::minimize_norm_constrained(energy, x0, constraint, mo);

    GroundStateFit fit;
    fit.basis = lay.basis(r.x);
    fit.d = lay.d(r.x);
    if (fit.d.real().sum() < 0.0) fit.d = -fit.d;
    fit.energy = r.energy;
    fit.stationarity = r.stationarity;
    fit.iterations = r.iterations;
    return fit;
}

InversionResult invert_to_potential(const EffectiveModel& target, const WellPotentialSpec& current_wells,
                                    const GaussianBasisSet& basis, double g, const InversionOptions& options,
                                    AmplitudeTransform transform) {
    current_wells.validate();
    basis.validate();
    const auto n = current_wells.size();
    if (n < 2 || basis.size() != n) throw SizeMismatch("inversion needs at least two wells and a matching basis");
    if (target.onsite.size() != n || target.tunneling.size() != n - 1)
        throw SizeMismatch("target model does not match the trap");
    const Eigen::Index last = n - 1;
    const Eigen::Vector4d goal(target.onsite(0), target.onsite(last), target.tunneling(0), target.tunneling(last - 1));
    for (int i = 2; i < 4; ++i)
        if (goal(i) == 0.0) throw InvalidArgument("target tunneling elements must be nonzero");

    auto configure = [&](const Eigen::VectorXd& x, WellPotentialSpec& w, GaussianBasisSet& b) {
        w = current_wells;
        b = basis;
        w.depths(0) = x(0);
        w.depths(last) = x(1);
        w.positions(0) = x(2);
        w.positions(last) = x(3);
        b.q(0) = basis.q(0) + (x(2) - current_wells.positions(0));
        b.q(last) = basis.q(last) + (x(3) - current_wells.positions(last));
    };
    auto residual = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        WellPotentialSpec w;
        GaussianBasisSet b;
        configure(x, w, b);
        // depths may cross zero during the search
        const EffectiveModel m = effective_model_unchecked(b, w, g, transform);
        const Eigen::Vector4d got(m.onsite(0), m.onsite(last), m.tunneling(0), m.tunneling(last - 1));
        Eigen::VectorXd r(4);
        for (int i = 0; i < 4; ++i) r(i) = (got(i) - goal(i)) / (i < 2 ? std::max(1.0, std::abs(goal(i))) : std::abs(goal(i)));
        return r;
    };
    Eigen::VectorXd x0(4);
    x0 << current_wells.depths(0), current_wells.depths(last), current_wells.positions(0),
        current_wells.positions(last);

    numerics::RootFindOptions ro;
    ro.tolerance = options.tolerance;
    ro.max_iterations = options.max_iterations;
    const numerics::RootFindReport rep = numerics::try_root_find(residual, x0, ro);
    if (rep.solution(0) >= 0.0 || rep.solution(1) >= 0.0)
        throw OutOfRange("target elements require a nonnegative outer well depth");
    if (!rep.converged) throw NoConvergence("potential inversion did not converge (residual " +
                                            std::to_string(rep.residual_norm) + ")");
    InversionResult out;
    configure(rep.solution, out.wells, out.basis);
    out.wells.validate();
    out.model = effective_model(out.basis, out.wells, g, transform);
    out.iterations = rep.iterations;
    return out;
}

}  // namespace ptbec::gauss
