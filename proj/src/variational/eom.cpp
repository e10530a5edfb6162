#include "ptbec/variational/eom.hpp"

#include <array>
#include <cmath>
#include <string>

#include "moments.hpp"
#include "ptbec/errors.hpp"

namespace ptbec::variational {

namespace {

using detail::Monomial;
using detail::Product;
using detail::ProductMoments;
using detail::tangent;
using S = VariationalState;

// -Laplacian/2 psi_k = Q_k psi_k
std::array<Monomial, 5> kinetic(const VariationalState& s, Eigen::Index k) {
    const cplx ax = s.at(k, S::AX), ay = s.at(k, S::AY), az = s.at(k, S::AZ), b = s.at(k, S::B);
    return {{{-2.0 * ax * ax, 2, 0, 0},
             {-2.0 * ay * ay, 0, 2, 0},
             {-2.0 * az * az, 0, 0, 2},
             {2.0 * az * b, 0, 0, 1},
             {ax + ay + az - 0.5 * b * b, 0, 0, 0}}};
}

cplx integrate(const ProductMoments& pm, const Monomial& a, const Monomial& b) {
    return a.coef * b.coef * pm(a.ex + b.ex, a.ey + b.ey, a.ez + b.ez);
}

cplx integrate(const ProductMoments& pm, const Monomial& a) { return a.coef * pm(a.ex, a.ey, a.ez); }

// conj(psi_l) psi_k conj(psi_j) psi_i
Product quad(const VariationalState& s, Eigen::Index l, Eigen::Index k, Eigen::Index j, Eigen::Index i) {
    return detail::pair(s, l, k) * detail::pair(s, j, i);
}

}  // namespace

VariationalSystem assemble_system(const VariationalState& state, const GpeModel& model, const EomSettings& settings) {
    state.validate();
    if (!model.free) model.wells.validate();
    const Eigen::Index n = state.gaussians();
    const Eigen::Index dim = S::per_gaussian * n;
    VariationalSystem sys;
    sys.metric = Eigen::MatrixXcd::Zero(dim, dim);
    sys.rhs = Eigen::VectorXcd::Zero(dim);
    const auto& w = model.wells;

    for (Eigen::Index l = 0; l < n; ++l) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const Product pr = detail::pair(state, l, k);
            const ProductMoments pm(pr);
            const auto Q = kinetic(state, k);
            for (int a = 0; a < 5; ++a) {
                for (int b = 0; b < 5; ++b) sys.metric(5 * l + a, 5 * k + b) = integrate(pm, tangent[a], tangent[b]);
                cplx r = 0.0;
                for (const auto& q : Q) r += integrate(pm, tangent[a], q);
                r -= settings.energy_offset * integrate(pm, tangent[a]);
                sys.rhs(5 * l + a) += r;
            }
            if (model.free) continue;
            for (Eigen::Index m = 0; m < w.size(); ++m) {
                const ProductMoments vm(pr.with_trap(w.wx, w.wy, w.wz, w.positions(m)));
                for (int a = 0; a < 5; ++a) sys.rhs(5 * l + a) += w.depths(m) * integrate(vm, tangent[a]);
            }
        }
    }
    if (model.g != 0.0) {
        for (Eigen::Index l = 0; l < n; ++l)
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index k = 0; k < n; ++k)
                    for (Eigen::Index i = k; i < n; ++i) {
                        const ProductMoments qm(quad(state, l, k, j, i));
                        const double mult = (i == k ? 1.0 : 2.0) * model.g;
                        for (int a = 0; a < 5; ++a) sys.rhs(5 * l + a) += mult * integrate(qm, tangent[a]);
                    }
    }
    return sys;
}

Eigen::VectorXcd solve_metric(const VariationalSystem& system, double metric_floor) {
    if (!system.metric.allFinite() || !system.rhs.allFinite()) throw SingularMetric("metric or rhs is not finite");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(system.metric);
    if (es.info() != Eigen::Success) throw SingularMetric("metric eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues();
    const double top = ev.maxCoeff();
    if (!(top > 0.0)) throw SingularMetric("metric has no positive eigenvalue");
    ev = ev.cwiseMax(metric_floor * top);
    const Eigen::VectorXcd proj = es.eigenvectors().adjoint() * system.rhs;
    return cplx(0.0, -1.0) * (es.eigenvectors() * (proj.array() / ev.array()).matrix());
}

Eigen::VectorXcd time_derivative(const VariationalState& state, const GpeModel& model, const EomSettings& settings) {
    return solve_metric(assemble_system(state, model, settings), settings.metric_floor);
}

double total_norm(const VariationalState& state) {
    state.validate();
    cplx nrm = 0.0;
    for (Eigen::Index l = 0; l < state.gaussians(); ++l)
        for (Eigen::Index k = 0; k < state.gaussians(); ++k) nrm += ProductMoments(detail::pair(state, l, k))(0, 0, 0);
    return nrm.real();
}

double total_energy(const VariationalState& state, const GpeModel& model) {
    state.validate();
    const Eigen::Index n = state.gaussians();
    const auto& w = model.wells;
    cplx e = 0.0;
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index k = 0; k < n; ++k) {
            const Product pr = detail::pair(state, l, k);
            const ProductMoments pm(pr);
            for (const auto& q : kinetic(state, k)) e += integrate(pm, q);
            if (model.free) continue;
            for (Eigen::Index m = 0; m < w.size(); ++m)
                e += w.depths(m) * ProductMoments(pr.with_trap(w.wx, w.wy, w.wz, w.positions(m)))(0, 0, 0);
        }
    if (model.g != 0.0) {
        cplx u = 0.0;
        for (Eigen::Index l = 0; l < n; ++l)
            for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index j = 0; j < n; ++j)
                    for (Eigen::Index i = 0; i < n; ++i) u += ProductMoments(quad(state, l, k, j, i))(0, 0, 0);
        e += 0.5 * model.g * u;
    }
    return e.real();
}

FixedPoint relax_to_fixed_point(const VariationalState& guess, const GpeModel& model, double tolerance,
                                int max_iterations) {
    guess.validate();
    const Eigen::Index dim = guess.z.size();
    auto unpack = [dim](const Eigen::VectorXd& u) {
        return VariationalState(u.head(dim).cast<cplx>() + cplx(0.0, 1.0) * u.segment(dim, dim).cast<cplx>());
    };
    auto residual = [&](const Eigen::VectorXd& u) {
        EomSettings es;
        es.energy_offset = u(2 * dim);
        const VariationalState s = unpack(u);
        const Eigen::VectorXcd dz = time_derivative(s, model, es);
        Eigen::VectorXd r(2 * dim + 1);
        r.head(dim) = dz.real();
        r.segment(dim, dim) = dz.imag();
        r(2 * dim) = total_norm(s) - 1.0;
        return r;
    };

    // chemical potential estimate <psi|H|psi>/<psi|psi> from the c-slot brackets
    const VariationalSystem sys0 = assemble_system(guess, model);
    cplx h = 0.0;
    for (Eigen::Index k = 0; k < guess.gaussians(); ++k) h += sys0.rhs(S::per_gaussian * k + S::C);

    Eigen::VectorXd u(2 * dim + 1);
    u.head(dim) = guess.z.real();
    u.segment(dim, dim) = guess.z.imag();
    u(2 * dim) = h.real() / total_norm(guess);

    FixedPoint fp;
    Eigen::VectorXd r = residual(u);
    for (int it = 0; it <= max_iterations; ++it) {
        fp.iterations = it;
        fp.residual = r.head(2 * dim).lpNorm<Eigen::Infinity>();
        if (fp.residual <= tolerance && std::abs(r(2 * dim)) <= tolerance) {
            fp.state = unpack(u);
            fp.mu = u(2 * dim);
            return fp;
        }
        if (it == max_iterations) break;
        Eigen::MatrixXd jac(r.size(), u.size());
        for (Eigen::Index c = 0; c < u.size(); ++c) {
            const double hstep = 1e-7 * std::max(1.0, std::abs(u(c)));
            Eigen::VectorXd up = u, um = u;
            up(c) += hstep;
            um(c) -= hstep;
            jac.col(c) = (residual(up) - residual(um)) / (2.0 * hstep);
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
        cod.setThreshold(1e-9);
        const Eigen::VectorXd step = cod.solve(-r);
        double lambda = 1.0;
        Eigen::VectorXd trial;
        Eigen::VectorXd rt;
        for (int ls = 0; ls < 30; ++ls) {
            trial = u + lambda * step;
            try {
                rt = residual(trial);
                if (rt.norm() < r.norm()) break;
            } catch (const NonNormalizable&) {
            }
            lambda *= 0.5;
        }
        if (rt.size() == 0 || !(rt.norm() < r.norm())) break;
        u = trial;
        r = rt;
    }
    throw NoConvergence("fixed-point relaxation stalled at residual " + std::to_string(fp.residual) + " after " + std::to_string(fp.iterations) + " iterations");
}

}  // namespace ptbec::variational
