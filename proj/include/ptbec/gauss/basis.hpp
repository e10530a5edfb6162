#pragma once

#include <Eigen/Dense>

#include <complex>

namespace ptbec::gauss {

using cplx = std::complex<double>;

/// Sum of Gaussian wells V^k exp(-2x^2/wx^2 - 2y^2/wy^2 - 2(z - s^k)^2/wz^2).
/// Internal units: lengths in w_z of the unit system, energies in E0.
struct WellPotentialSpec {
    Eigen::VectorXd depths;
    Eigen::VectorXd positions;
    double wx = 1.0;
    double wy = 1.0;
    double wz = 1.0;

    Eigen::Index size() const { return depths.size(); }
    /// Throws InvalidArgument on nonnegative depths, nonpositive widths or
    /// positions that are not strictly increasing.
    void validate() const;

    /// Equidistant chain centred on z = 0.
    static WellPotentialSpec chain(const Eigen::VectorXd& depths, double spacing, double wx, double wy, double wz);
};

/// SI anchor for the internal units hbar = m = 1, length w_z.
struct UnitSystem {
    double w_z = 1e-6;
    double mass = 86.909180527 * 1.66053906660e-27;
    double N = 1e5;
    double a_scat = 2.83 * 5.29177210903e-11;

    static constexpr double hbar = 1.054571817e-34;
    static constexpr double planck = 2.0 * 3.14159265358979323846 * hbar;
    static constexpr double bohr_radius = 5.29177210903e-11;

    /// Energy unit hbar^2 / (m w_z^2) in J.
    double E0() const { return hbar * hbar / (mass * w_z * w_z); }
    /// Time unit m w_z^2 / hbar in s.
    double t0() const { return mass * w_z * w_z / hbar; }
    /// Contact coupling 4 pi N a (internal units, psi normalised to one).
    double g() const;

    static UnitSystem rb87(double w_z = 1e-6, double N = 1e5, double a_scat = 2.83 * bohr_radius);
};

/// One Gaussian per well, g^k = exp(-Ax x^2 - Ay y^2 - Az (z - q)^2).
struct GaussianBasisSet {
    Eigen::VectorXcd ax;
    Eigen::VectorXcd ay;
    Eigen::VectorXcd az;
    Eigen::VectorXd q;

    Eigen::Index size() const { return q.size(); }
    /// Throws NonNormalizable unless every Re A > 0; SizeMismatch on ragged fields.
    void validate() const;

    /// Harmonic estimate of each well's ground state, centred on the wells.
    static GaussianBasisSet harmonic_guess(const WellPotentialSpec& wells);
};

/// Pair quantities for <g^l| ... |g^k>; A = A^k + conj(A^l), kappa = A^k conj(A^l) / A.
struct PairwiseAux {
    Eigen::Vector3cd A;
    Eigen::Vector3cd kappa;
    cplx c;
};

PairwiseAux pair_aux(const GaussianBasisSet& basis, Eigen::Index l, Eigen::Index k);

}  // namespace ptbec::gauss
