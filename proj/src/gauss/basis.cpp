#include "ptbec/gauss/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ptbec/errors.hpp"

namespace ptbec::gauss {

void WellPotentialSpec::validate() const {
    if (depths.size() == 0) throw InvalidArgument("trap has no wells");
    if (positions.size() != depths.size()) throw SizeMismatch("trap depths and positions differ in length");
    for (Eigen::Index k = 0; k < depths.size(); ++k) {
        if (!(depths(k) < 0.0)) throw InvalidArgument("well " + std::to_string(k) + " depth must be negative");
        if (!std::isfinite(positions(k))) throw InvalidArgument("well positions must be finite");
        if (k > 0 && !(positions(k) > positions(k - 1)))
            throw InvalidArgument("well positions must be strictly increasing");
    }
    if (!(wx > 0.0 && wy > 0.0 && wz > 0.0)) throw InvalidArgument("well widths must be positive");
}

WellPotentialSpec WellPotentialSpec::chain(const Eigen::VectorXd& depths, double spacing, double wx, double wy,
                                           double wz) {
    WellPotentialSpec w;
    w.depths = depths;
    const auto n = depths.size();
    w.positions = Eigen::VectorXd::LinSpaced(n, -0.5 * spacing * double(n - 1), 0.5 * spacing * double(n - 1));
    w.wx = wx;
    w.wy = wy;
    w.wz = wz;
    return w;
}

double UnitSystem::g() const { return 4.0 * std::numbers::pi * N * a_scat / w_z; }

UnitSystem UnitSystem::rb87(double w_z, double N, double a_scat) {
    UnitSystem u;
    u.w_z = w_z;
    u.N = N;
    u.a_scat = a_scat;
    return u;
}

void GaussianBasisSet::validate() const {
    const auto n = q.size();
    if (n == 0) throw InvalidArgument("basis is empty");
    if (ax.size() != n || ay.size() != n || az.size() != n) throw SizeMismatch("basis fields differ in length");
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!(ax(k).real() > 0.0 && ay(k).real() > 0.0 && az(k).real() > 0.0))
            throw NonNormalizable("Gaussian " + std::to_string(k) + " has a width with Re A <= 0");
        if (!std::isfinite(q(k))) throw NonNormalizable("Gaussian " + std::to_string(k) + " has a non-finite centre");
    }
}

GaussianBasisSet GaussianBasisSet::harmonic_guess(const WellPotentialSpec& wells) {
    wells.validate();
    const auto n = wells.size();
    GaussianBasisSet b;
    b.ax.resize(n);
    b.ay.resize(n);
    b.az.resize(n);
    b.q = wells.positions;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double s = std::sqrt(-wells.depths(k));
        b.ax(k) = s / wells.wx;
        b.ay(k) = s / wells.wy;
        b.az(k) = s / wells.wz;
    }
    return b;
}

PairwiseAux pair_aux(const GaussianBasisSet& basis, Eigen::Index l, Eigen::Index k) {
    PairwiseAux p;
    const cplx ak[3] = {basis.ax(k), basis.ay(k), basis.az(k)};
    const cplx al[3] = {basis.ax(l), basis.ay(l), basis.az(l)};
    for (int a = 0; a < 3; ++a) {
        p.A(a) = ak[a] + std::conj(al[a]);
        p.kappa(a) = ak[a] * std::conj(al[a]) / p.A(a);
    }
    const double dq = basis.q(k) - basis.q(l);
    p.c = std::exp(-p.kappa(2) * dq * dq);
    return p;
}

}  // namespace ptbec::gauss
