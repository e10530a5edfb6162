#pragma once

#include <Eigen/Dense>

#include <complex>

#include "ptbec/gauss/basis.hpp"

namespace ptbec::variational {

using cplx = std::complex<double>;

/// psi = sum_k exp(-Ax x^2 - Ay y^2 - Az z^2 + b z + c) with five complex
/// coordinates per Gaussian stored as z = (Ax, Ay, Az, b, c) for k = 0, 1, ...
/// In terms of centre q, momentum p and gamma of
/// exp(-A (z - q)^2 + i p (z - q) - gamma):
///   b = 2 Az q + i p,  c = -Az q^2 - i p q - gamma.
struct VariationalState {
    static constexpr Eigen::Index per_gaussian = 5;
    enum Slot : Eigen::Index { AX = 0, AY = 1, AZ = 2, B = 3, C = 4 };

    Eigen::VectorXcd z;

    VariationalState() = default;
    explicit VariationalState(Eigen::VectorXcd coords) : z(std::move(coords)) {}

    Eigen::Index gaussians() const { return z.size() / per_gaussian; }
    cplx& at(Eigen::Index k, Slot s) { return z(per_gaussian * k + s); }
    cplx at(Eigen::Index k, Slot s) const { return z(per_gaussian * k + s); }

    double centre(Eigen::Index k) const;
    double momentum(Eigen::Index k) const;
    cplx gamma(Eigen::Index k) const;

    /// Throws NonNormalizable unless every Re A > 0; InvalidArgument on a ragged vector.
    void validate() const;

    /// sum_k d^k g^k of the simple ansatz (zero momenta).
    static VariationalState from_basis(const gauss::GaussianBasisSet& basis, const Eigen::VectorXcd& d);
    /// Gaussian with given widths, centre, momentum and gamma.
    static VariationalState single(cplx ax, cplx ay, cplx az, double q, double p, cplx gamma);
};

}  // namespace ptbec::variational
