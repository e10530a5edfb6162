#include "ptbec/numerics/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptbec/errors.hpp"

namespace ptbec::numerics {

Eigen::VectorXd project_to_constraint(const Eigen::VectorXd& x, const NormConstraint& constraint) {
    if (!constraint.active()) return x;
    const double n = constraint.norm(x);
    if (!(n > 0.0) || !std::isfinite(n))
        throw ConstraintProjectionFailure("norm constraint cannot be satisfied: norm = " + std::to_string(n));
    const double scale = 1.0 / std::sqrt(n);
    Eigen::VectorXd y = x;
    for (Eigen::Index i : constraint.scaled) y(i) *= scale;
    return y;
}

namespace {

class ProjectedObjective {
public:
    ProjectedObjective(const ScalarFunction& energy, const NormConstraint& constraint, const MinimizeOptions& options)
        : energy_(energy), constraint_(constraint), options_(options) {}

    double value(const Eigen::VectorXd& x) const {
        const double e = energy_(project_to_constraint(x, constraint_));
        return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
        if (options_.gradient && !constraint_.active()) return options_.gradient(x);
        Eigen::VectorXd g(x.size());
        Eigen::VectorXd xp = x;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double h = options_.fd_step * std::max(1.0, std::abs(x(i)));
            xp(i) = x(i) + h;
            const double fp = value(xp);
            xp(i) = x(i) - h;
            const double fm = value(xp);
            xp(i) = x(i);
            g(i) = (fp - fm) / (2.0 * h);
        }
        return g;
    }

private:
    const ScalarFunction& energy_;
    const NormConstraint& constraint_;
    const MinimizeOptions& options_;
};

}  // namespace

MinimizeResult minimize_norm_constrained(const ScalarFunction& energy, const Eigen::VectorXd& x0,
                                         const NormConstraint& constraint, const MinimizeOptions& options) {
    ProjectedObjective objective(energy, constraint, options);
    const Eigen::Index n = x0.size();

    Eigen::VectorXd x = project_to_constraint(x0, constraint);
    double f = objective.value(x);
    if (!std::isfinite(f)) throw NonFiniteFunction("minimize: energy not finite at the starting point");
    Eigen::VectorXd g = objective.gradient(x);
    Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(n, n);
    bool scaled_initial = false;

    MinimizeResult result;
    int stalls = 0;
    for (int it = 0; it < options.max_iterations; ++it) {
        result.iterations = it;
        if (g.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) break;

        Eigen::VectorXd p = -inv_hessian * g;
        double slope = p.dot(g);
        if (!(slope < 0.0)) {
            inv_hessian.setIdentity();
            p = -g;
            slope = -g.squaredNorm();
        }

        // backtracking Armijo line search; unit steps only once curvature is known
        double alpha = scaled_initial ? 1.0 : std::min(1.0, 0.1 / p.lpNorm<Eigen::Infinity>());
        Eigen::VectorXd x_new;
        double f_new = f;
        bool accepted = false;
        for (int k = 0; k < 60; ++k) {
            x_new = x + alpha * p;
            f_new = objective.value(x_new);
            if (f_new <= f + 1e-4 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            if (inv_hessian.isIdentity()) {
                // gradient noise floor reached
                if (++stalls > 2) break;
            }
            inv_hessian.setIdentity();
            scaled_initial = false;
            continue;
        }

        x_new = project_to_constraint(x_new, constraint);
        const Eigen::VectorXd g_new = objective.gradient(x_new);
        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-14 * s.norm() * y.norm()) {
            if (!scaled_initial) {
                inv_hessian *= sy / y.squaredNorm();
                scaled_initial = true;
            }
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
            inv_hessian = (I - rho * s * y.transpose()) * inv_hessian * (I - rho * y * s.transpose()) +
                          rho * s * s.transpose();
        }
        x = x_new;
        f = f_new;
        g = g_new;
        stalls = 0;
    }

    result.x = x;
    result.energy = f;
    result.stationarity = g.lpNorm<Eigen::Infinity>();
    if (!(result.stationarity <= options.gradient_tolerance))
        throw NoConvergence("minimize: stationarity " + std::to_string(result.stationarity) +
                            " above tolerance after " + std::to_string(result.iterations) + " iterations");
    return result;
}

}  // namespace ptbec::numerics
