#include "ptbec/variational/state.hpp"

#include <cmath>
#include <string>

#include "ptbec/errors.hpp"

namespace ptbec::variational {

double VariationalState::centre(Eigen::Index k) const { return at(k, B).real() / (2.0 * at(k, AZ).real()); }

double VariationalState::momentum(Eigen::Index k) const {
    return at(k, B).imag() - 2.0 * at(k, AZ).imag() * centre(k);
}

cplx VariationalState::gamma(Eigen::Index k) const {
    const double q = centre(k), p = momentum(k);
    return -at(k, C) - at(k, AZ) * q * q - cplx(0.0, p * q);
}

void VariationalState::validate() const {
    if (z.size() == 0 || z.size() % per_gaussian != 0)
        throw InvalidArgument("variational state must hold five coordinates per Gaussian");
    if (!z.allFinite()) throw NonNormalizable("variational state is not finite");
    for (Eigen::Index k = 0; k < gaussians(); ++k)
        for (Slot s : {AX, AY, AZ})
            if (!(at(k, s).real() > 0.0))
                throw NonNormalizable("Gaussian " + std::to_string(k) + " has a width with Re A <= 0");
}

VariationalState VariationalState::from_basis(const gauss::GaussianBasisSet& basis, const Eigen::VectorXcd& d) {
    basis.validate();
    if (d.size() != basis.size()) throw SizeMismatch("amplitude vector does not match the basis");
    VariationalState s{Eigen::VectorXcd(per_gaussian * basis.size())};
    for (Eigen::Index k = 0; k < basis.size(); ++k) {
        if (d(k) == 0.0) throw InvalidArgument("zero amplitude cannot be represented");
        const double q = basis.q(k);
        s.at(k, AX) = basis.ax(k);
        s.at(k, AY) = basis.ay(k);
        s.at(k, AZ) = basis.az(k);
        s.at(k, B) = 2.0 * basis.az(k) * q;
        s.at(k, C) = -basis.az(k) * q * q + std::log(d(k));
    }
    return s;
}

VariationalState VariationalState::single(cplx ax, cplx ay, cplx az, double q, double p, cplx gamma) {
    VariationalState s{Eigen::VectorXcd(per_gaussian)};
    s.at(0, AX) = ax;
    s.at(0, AY) = ay;
    s.at(0, AZ) = az;
    s.at(0, B) = 2.0 * az * q + cplx(0.0, p);
    s.at(0, C) = -az * q * q - cplx(0.0, p * q) - gamma;
    s.validate();
    return s;
}

}  // namespace ptbec::variational
