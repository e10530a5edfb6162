#pragma once

#include <Eigen/Dense>

#include "ptbec/gauss/basis.hpp"
#include "ptbec/variational/state.hpp"

namespace ptbec::variational {

/// metric(l, k) = <d psi / d z_l | d psi / d z_k>,  rhs(l) = <d psi / d z_l | H - mu0 | psi>.
struct VariationalSystem {
    Eigen::MatrixXcd metric;
    Eigen::VectorXcd rhs;
};

struct EomSettings {
    /// Metric eigenvalues below floor * (largest eigenvalue) are raised to it.
    double metric_floor = 1e-12;
    /// Constant mu0 subtracted from H; only rotates the global phase.
    double energy_offset = 0.0;
};

/// Trap plus contact interaction g |psi|^2 in internal units.
struct GpeModel {
    gauss::WellPotentialSpec wells;
    double g = 0.0;
    /// Drop the trap entirely (free particle).
    bool free = false;
};

VariationalSystem assemble_system(const VariationalState& state, const GpeModel& model, const EomSettings& settings = {});

/// dz/dt from i metric dz/dt = rhs.
Eigen::VectorXcd time_derivative(const VariationalState& state, const GpeModel& model,
                                 const EomSettings& settings = {});

/// Solves i metric dz/dt = rhs with eigenvalue flooring. Throws SingularMetric
/// when the metric is not finite or has no positive eigenvalue.
Eigen::VectorXcd solve_metric(const VariationalSystem& system, double metric_floor);

double total_norm(const VariationalState& state);

/// <psi|T + V|psi> + g/2 int |psi|^4
double total_energy(const VariationalState& state, const GpeModel& model);

struct FixedPoint {
    VariationalState state;
    double mu = 0.0;
    /// Infinity norm of dz/dt at mu.
    double residual = 0.0;
    int iterations = 0;
};

/// Newton iteration (least squares on the real and imaginary parts) for
/// dz/dt = 0 at offset mu and unit norm. Throws NoConvergence.
FixedPoint relax_to_fixed_point(const VariationalState& guess, const GpeModel& model, double tolerance = 1e-9,
                                int max_iterations = 40);

}  // namespace ptbec::variational
