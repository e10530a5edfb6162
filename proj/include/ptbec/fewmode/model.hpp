#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace ptbec::fewmode {

using cplx = std::complex<double>;
using ModeVector = Eigen::VectorXcd;

/// Nearest-neighbour chain with complex onsite energies E_k, real couplings
/// J_{k,k+1} and cubic nonlinearity c_k |psi_k|^2. Hopping enters as -J.
struct TridiagonalComplexModel {
    Eigen::VectorXcd onsite;
    Eigen::VectorXd coupling;
    Eigen::VectorXd nonlinear;

    Eigen::Index size() const { return onsite.size(); }
    bool hermitian() const { return onsite.imag().isZero(0.0); }
    /// Throws SizeMismatch unless coupling has size()-1 and nonlinear size() entries.
    void validate() const;

    /// Two-mode PT dimer: E = (i gamma, -i gamma), coupling J, equal nonlinearity c.
    static TridiagonalComplexModel pt_dimer(double J, double gamma, double c = 0.0);
};

struct ObservableSet {
    Eigen::VectorXd n;
    /// Nearest-neighbour currents j_{k,k+1} = J_{k,k+1} jt_{k,k+1}.
    Eigen::VectorXd j;
    /// jt_{kl} = i (psi_k psi_l^* - psi_k^* psi_l); antisymmetric.
    Eigen::MatrixXd j_tilde;
    /// C_{kl} = psi_k psi_l^* + psi_k^* psi_l; symmetric.
    Eigen::MatrixXd C;
};

/// Time derivatives of the observables at fixed model parameters.
struct ObservableRates {
    Eigen::VectorXd n;
    Eigen::VectorXd j;
    Eigen::MatrixXd j_tilde;
    Eigen::MatrixXd C;
};

ModeVector model_rhs(const ModeVector& state, const TridiagonalComplexModel& model);

ObservableSet observables(const ModeVector& state, const TridiagonalComplexModel& model);

/// Closed-form rates for chains of two or four modes (UnsupportedSize otherwise).
ObservableRates observable_rates(const ModeVector& state, const TridiagonalComplexModel& model);

/// Eigenvalues of the linear 2x2 Hamiltonian, sorted by real then imaginary part.
std::array<cplx, 2> two_mode_eigenvalues(const TridiagonalComplexModel& model);

/// sum E_k n_k - sum 2 J Re(psi_k psi_{k+1}^*) + sum c_k n_k^2 / 2
double mean_field_energy(const ModeVector& state, const TridiagonalComplexModel& model);

struct GroundState {
    ModeVector state;
    double energy = 0.0;
    /// Chemical potential <H_eff psi, psi> with the full nonlinear term.
    double mu = 0.0;
};

/// Minimises the mean-field energy over unit-norm real states. Needs a
/// Hermitian model; throws InvalidArgument otherwise.
GroundState ground_state(const TridiagonalComplexModel& model);

}  // namespace ptbec::fewmode
