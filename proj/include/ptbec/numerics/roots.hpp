#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>

#include "ptbec/errors.hpp"

namespace ptbec::numerics {

using VectorFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct RootFindOptions {
    /// Convergence when the infinity norm of f drops to this value.
    double tolerance = 1e-10;
    int max_iterations = 100;
    /// Seeds the quasi-Newton model; finite differences are used otherwise.
    std::optional<Eigen::MatrixXd> initial_jacobian;
};

struct RootFindReport {
    Eigen::VectorXd solution;
    double residual_norm = 0.0;
    int iterations = 0;
    int function_evaluations = 0;
    bool converged = false;
    /// Last quasi-Newton Jacobian; useful to warm-start a related search.
    Eigen::MatrixXd jacobian;
};

class RootFindFailure : public NoConvergence {
public:
    RootFindFailure(const std::string& what, RootFindReport report)
        : NoConvergence(what), report_(std::move(report)) {}
    const RootFindReport& report() const noexcept { return report_; }

private:
    RootFindReport report_;
};

/// Forward-difference Jacobian with step max(1e-7, 1e-7 |x_i|).
Eigen::MatrixXd finite_difference_jacobian(const VectorFunction& f, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& fx);

/// Broyden quasi-Newton iteration with a finite-difference Jacobian and
/// backtracking on |f|^2. The returned report is never flagged converged
/// with a residual above the tolerance.
RootFindReport try_root_find(const VectorFunction& f, const Eigen::VectorXd& x0, const RootFindOptions& options = {});

/// As try_root_find, but throws RootFindFailure when the iteration cap is hit
/// and NonFiniteFunction when f evaluates to NaN/Inf.
RootFindReport root_find(const VectorFunction& f, const Eigen::VectorXd& x0, const RootFindOptions& options = {});

}  // namespace ptbec::numerics
