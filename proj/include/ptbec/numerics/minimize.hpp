#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace ptbec::numerics {

using ScalarFunction = std::function<double(const Eigen::VectorXd&)>;
using GradientFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Unit-norm constraint N(x) = 1 where N is homogeneous of degree two in the
/// coordinates listed in `scaled`. Projection rescales that block.
struct NormConstraint {
    ScalarFunction norm;
    std::vector<Eigen::Index> scaled;

    bool active() const { return static_cast<bool>(norm) && !scaled.empty(); }
};

struct MinimizeOptions {
    /// First-order stationarity: infinity norm of the projected gradient.
    double gradient_tolerance = 1e-8;
    int max_iterations = 5000;
    /// Central-difference step relative to max(1, |x_i|).
    double fd_step = 1e-6;
    /// Optional analytic gradient of the energy (in unconstrained coordinates).
    GradientFunction gradient;
};

struct MinimizeResult {
    Eigen::VectorXd x;
    double energy = 0.0;
    double stationarity = 0.0;
    int iterations = 0;
};

/// Rescales the constrained block of x so that constraint.norm(x) == 1.
/// Throws ConstraintProjectionFailure for a zero or non-finite norm.
Eigen::VectorXd project_to_constraint(const Eigen::VectorXd& x, const NormConstraint& constraint);

/// Projected BFGS: minimises energy(P(x)) where P projects onto the norm
/// sphere, re-projecting after each accepted step. Throws NoConvergence if
/// the stationarity tolerance is not reached.
MinimizeResult minimize_norm_constrained(const ScalarFunction& energy, const Eigen::VectorXd& x0,
                                         const NormConstraint& constraint, const MinimizeOptions& options = {});

}  // namespace ptbec::numerics
