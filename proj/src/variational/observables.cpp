#include "ptbec/variational/observables.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "moments.hpp"
#include "ptbec/errors.hpp"
#include "ptbec/numerics/special.hpp"

namespace ptbec::variational {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// int_lo^hi exp(-a z^2 + b z + c) dz, evaluated through whichever tails avoid cancellation
cplx slab_integral(cplx a, cplx b, cplx c, double lo, double hi) {
    const cplx ra = std::sqrt(a);
    const cplx mu = b / (2.0 * a);
    const cplx u = b * b / (4.0 * a) + c;
    const cplx half = 0.5 * std::sqrt(std::numbers::pi / a);
    auto right = [&](double x) { return x == inf ? cplx(0.0) : half * numerics::exp_erfc(u, ra * (x - mu)); };
    auto left = [&](double x) { return x == -inf ? cplx(0.0) : half * numerics::exp_erfc(u, -ra * (x - mu)); };
    const double tl = lo == -inf ? -inf : (ra * (lo - mu)).real();
    const double th = hi == inf ? inf : (ra * (hi - mu)).real();
    if (tl >= 0.0) return right(lo) - right(hi);
    if (th <= 0.0) return left(hi) - left(lo);
    return 2.0 * half * std::exp(u) - left(lo) - right(hi);
}

}  // namespace

WallPartition WallPartition::midpoints(const gauss::WellPotentialSpec& wells) {
    wells.validate();
    WallPartition p;
    p.walls.resize(wells.size() - 1);
    for (Eigen::Index k = 0; k + 1 < wells.size(); ++k)
        p.walls(k) = 0.5 * (wells.positions(k) + wells.positions(k + 1));
    return p;
}

BoxObservables box_observables(const VariationalState& state, const WallPartition& partition) {
    state.validate();
    using S = VariationalState;
    const auto& w = partition.walls;
    for (Eigen::Index k = 0; k < w.size(); ++k)
        if (!std::isfinite(w(k)) || (k > 0 && !(w(k) > w(k - 1))))
            throw InvalidArgument("walls must be finite and strictly increasing");
    const Eigen::Index slabs = partition.slabs();
    Eigen::VectorXcd n = Eigen::VectorXcd::Zero(slabs);
    Eigen::VectorXcd j = Eigen::VectorXcd::Zero(w.size());
    const Eigen::Index G = state.gaussians();
    for (Eigen::Index l = 0; l < G; ++l)
        for (Eigen::Index k = 0; k < G; ++k) {
            const detail::Product p = detail::pair(state, l, k);
            const cplx transverse = std::numbers::pi / (std::sqrt(p.ax) * std::sqrt(p.ay));
            for (Eigen::Index s = 0; s < slabs; ++s) {
                const double lo = s == 0 ? -inf : w(s - 1);
                const double hi = s == slabs - 1 ? inf : w(s);
                n(s) += transverse * slab_integral(p.az, p.b, p.c, lo, hi);
            }
            for (Eigen::Index s = 0; s < w.size(); ++s) {
                const double z = w(s);
                const cplx dens = transverse * std::exp(-p.az * z * z + p.b * z + p.c);
                j(s) += (state.at(k, S::B) - 2.0 * state.at(k, S::AZ) * z) * dens;
            }
        }
    return {n.real(), j.imag()};
}

Eigen::VectorXd density_profile(const VariationalState& state, const Eigen::VectorXd& z) {
    state.validate();
    using S = VariationalState;
    Eigen::VectorXd out(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        cplx psi = 0.0;
        for (Eigen::Index k = 0; k < state.gaussians(); ++k)
            psi += std::exp(-state.at(k, S::AZ) * z(i) * z(i) + state.at(k, S::B) * z(i) + state.at(k, S::C));
        out(i) = std::norm(psi);
    }
    return out;
}

Eigen::VectorXd line_density(const VariationalState& state, const Eigen::VectorXd& z) {
    state.validate();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(z.size());
    for (Eigen::Index l = 0; l < state.gaussians(); ++l)
        for (Eigen::Index k = 0; k < state.gaussians(); ++k) {
            const detail::Product p = detail::pair(state, l, k);
            const cplx transverse = std::numbers::pi / (std::sqrt(p.ax) * std::sqrt(p.ay));
            for (Eigen::Index i = 0; i < z.size(); ++i)
                out(i) += (transverse * std::exp(-p.az * z(i) * z(i) + p.b * z(i) + p.c)).real();
        }
    return out;
}

}  // namespace ptbec::variational
