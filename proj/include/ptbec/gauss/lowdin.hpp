#pragma once

#include <Eigen/Dense>

#include "ptbec/gauss/basis.hpp"

namespace ptbec::gauss {

/// Symmetric orthogonaliser X = K^{-1/2}. Throws NotPositiveDefinite when the
/// smallest eigenvalue is not above 1e-14 times the largest.
Eigen::MatrixXcd lowdin_exact(const Eigen::MatrixXcd& K);

struct LowdinExpansion {
    /// Diagonal zeroth order.
    Eigen::MatrixXcd X0;
    /// First order, nonzero only on the first off-diagonals.
    Eigen::MatrixXcd X1;

    Eigen::MatrixXcd combined() const { return X0 + X1; }
};

/// Nearest-neighbour expansion of K^{-1/2} around the diagonal of K.
LowdinExpansion lowdin_nn(const GaussianBasisSet& basis);

enum class AmplitudeTransform { nearest_neighbor, exact };

struct EffectiveAmplitudes {
    Eigen::VectorXcd d_eff;
    Eigen::VectorXd n;
};

/// d_eff = X^{-1} d. The nearest-neighbour form uses the first-order inverse
/// (X0^{-1} - X0^{-1} X1 X0^{-1}); the exact form uses K^{1/2}.
EffectiveAmplitudes effective_amplitudes(const Eigen::VectorXcd& d, const GaussianBasisSet& basis,
                                         AmplitudeTransform mode = AmplitudeTransform::nearest_neighbor);

}  // namespace ptbec::gauss
