#pragma once

#include <Eigen/Dense>

#include "ptbec/gauss/basis.hpp"
#include "ptbec/gauss/lowdin.hpp"

namespace ptbec::gauss {

/// Few-mode parameters in internal energy units.
struct EffectiveModel {
    Eigen::VectorXd onsite;
    /// J_{k,k+1}
    Eigen::VectorXd tunneling;
    Eigen::VectorXd interaction;
};

/// Onsite energies, nearest-neighbour tunneling and onsite interaction of the
/// orthogonalised basis. The nearest-neighbour transform works to first order
/// in the neighbour overlap with own-well onsite energies; `exact` takes the
/// diagonal and first off-diagonal of X (T + V) X and the diagonal of the
/// transformed interaction tensor, with X = K^{-1/2}.
EffectiveModel effective_model(const GaussianBasisSet& basis, const WellPotentialSpec& wells, double g,
                               AmplitudeTransform transform = AmplitudeTransform::nearest_neighbor);

struct FitOptions {
    double gradient_tolerance = 1e-6;
    int max_iterations = 4000;
    double fd_step = 1e-5;
};

struct GroundStateFit {
    GaussianBasisSet basis;
    /// Real amplitudes with d^T K d = 1.
    Eigen::VectorXcd d;
    double energy = 0.0;
    double stationarity = 0.0;
    int iterations = 0;
};

/// Minimises the mean-field energy over real widths, centres and amplitudes
/// under the norm constraint. Throws NoConvergence.
GroundStateFit fit_ground_state(const WellPotentialSpec& wells, double g, const GaussianBasisSet& seed,
                                const FitOptions& options = {});

struct InversionOptions {
    /// Infinity norm of the residual; energies relative to max(1, |E|), tunneling relative to |J|.
    double tolerance = 1e-8;
    int max_iterations = 60;
};

struct InversionResult {
    WellPotentialSpec wells;
    GaussianBasisSet basis;
    EffectiveModel model;
    int iterations = 0;
};

/// Solves for (V^0, V^N-1, s^0, s^N-1) so that the outer onsite energies and
/// outer tunneling elements match `target`; inner wells stay fixed. The
/// Gaussians of `basis` (fitted to `current_wells`) keep their widths and move
/// rigidly with their wells. Throws NoConvergence and OutOfRange (an outer
/// depth would become nonnegative).
InversionResult invert_to_potential(const EffectiveModel& target, const WellPotentialSpec& current_wells,
                                    const GaussianBasisSet& basis, double g, const InversionOptions& options = {},
                                    AmplitudeTransform transform = AmplitudeTransform::nearest_neighbor);

}  // namespace ptbec::gauss
