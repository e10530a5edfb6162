#pragma once

#include <Eigen/Dense>

#include "ptbec/gauss/basis.hpp"
#include "ptbec/variational/state.hpp"

namespace ptbec::variational {

/// Interior walls z_1 < ... < z_{N-1}; the outer slabs extend to infinity.
struct WallPartition {
    Eigen::VectorXd walls;

    Eigen::Index slabs() const { return walls.size() + 1; }
    /// Walls midway between neighbouring trap minima.
    static WallPartition midpoints(const gauss::WellPotentialSpec& wells);
};

struct BoxObservables {
    /// Integral of |psi|^2 over each slab.
    Eigen::VectorXd n;
    /// Transverse-integrated probability current through each wall, j_{k,k+1}.
    Eigen::VectorXd j;
};

BoxObservables box_observables(const VariationalState& state, const WallPartition& partition);

/// |psi(0, 0, z)|^2 at the given points.
Eigen::VectorXd density_profile(const VariationalState& state, const Eigen::VectorXd& z);

/// int dx dy |psi(x, y, z)|^2 at the given points.
Eigen::VectorXd line_density(const VariationalState& state, const Eigen::VectorXd& z);

}  // namespace ptbec::variational
