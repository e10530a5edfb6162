#pragma once

#include "ptbec/gauss/effective.hpp"
#include "ptbec/gauss/lowdin.hpp"
#include "ptbec/gauss/matrices.hpp"

namespace ptbec::gauss {

// No validation: depths may be positive during potential searches.
MatrixBundle hamiltonian_matrices_unchecked(const GaussianBasisSet& basis, const WellPotentialSpec& wells, double g);
EffectiveModel effective_model_unchecked(const GaussianBasisSet& basis, const WellPotentialSpec& wells, double g,
                                         AmplitudeTransform transform);

}  // namespace ptbec::gauss
