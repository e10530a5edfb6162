#include "ptbec/numerics/roots.hpp"

#include <algorithm>
#include <cmath>

namespace ptbec::numerics {

namespace {

Eigen::VectorXd evaluate(const VectorFunction& f, const Eigen::VectorXd& x, int& count) {
    ++count;
    Eigen::VectorXd y = f(x);
    if (!y.allFinite()) throw NonFiniteFunction("root_find: function returned a non-finite value");
    return y;
}

}  // namespace

Eigen::MatrixXd finite_difference_jacobian(const VectorFunction& f, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& fx) {
    Eigen::MatrixXd jac(fx.size(), x.size());
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = std::max(1e-7, 1e-7 * std::abs(x(i)));
        xp(i) = x(i) + h;
        const double dx = xp(i) - x(i);
        const Eigen::VectorXd fp = f(xp);
        if (!fp.allFinite()) throw NonFiniteFunction("root_find: non-finite value during Jacobian evaluation");
        jac.col(i) = (fp - fx) / dx;
        xp(i) = x(i);
    }
    return jac;
}

RootFindReport try_root_find(const VectorFunction& f, const Eigen::VectorXd& x0, const RootFindOptions& options) {
    RootFindReport report;
    Eigen::VectorXd x = x0;
    Eigen::VectorXd fx = evaluate(f, x, report.function_evaluations);
    if (fx.size() != x.size()) throw InvalidArgument("root_find: function must map R^n to R^n");

    auto finish = [&](bool converged) {
        report.solution = x;
        report.residual_norm = fx.lpNorm<Eigen::Infinity>();
        report.converged = converged && report.residual_norm <= options.tolerance;
        return report;
    };
    if (fx.lpNorm<Eigen::Infinity>() <= options.tolerance) {
        report.jacobian = options.initial_jacobian.value_or(Eigen::MatrixXd());
        return finish(true);
    }

    bool fresh = !options.initial_jacobian.has_value();
    Eigen::MatrixXd jac;
    if (fresh) {
        jac = finite_difference_jacobian(f, x, fx);
        report.function_evaluations += static_cast<int>(x.size());
    } else {
        jac = *options.initial_jacobian;
    }

    while (report.iterations < options.max_iterations) {
        ++report.iterations;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
        Eigen::VectorXd dx;
        if (qr.rank() < x.size()) {
            if (!fresh) {
                jac = finite_difference_jacobian(f, x, fx);
                report.function_evaluations += static_cast<int>(x.size());
                fresh = true;
                continue;
            }
            // singular: fall back to a steepest-descent direction on |f|^2
            dx = -jac.transpose() * fx;
        } else {
            dx = -qr.solve(fx);
        }

        const double f0 = fx.squaredNorm();
        double lambda = 1.0;
        Eigen::VectorXd x_new, f_new;
        bool accepted = false;
        for (int k = 0; k < 12; ++k) {
            x_new = x + lambda * dx;
            f_new = evaluate(f, x_new, report.function_evaluations);
            if (f_new.squaredNorm() <= (1.0 - 1e-4 * lambda) * f0) {
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            if (!fresh) {
                jac = finite_difference_jacobian(f, x, fx);
                report.function_evaluations += static_cast<int>(x.size());
                fresh = true;
                continue;
            }
            // no descent even with a fresh Jacobian: take the smallest step to escape
        }

        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd y = f_new - fx;
        x = x_new;
        fx = f_new;
        if (fx.lpNorm<Eigen::Infinity>() <= options.tolerance) {
            report.jacobian = jac;
            return finish(true);
        }
        if (lambda < 1.0) {
            jac = finite_difference_jacobian(f, x, fx);
            report.function_evaluations += static_cast<int>(x.size());
            fresh = true;
        } else {
            const double ss = s.squaredNorm();
            if (ss > 0.0) jac += ((y - jac * s) * s.transpose()) / ss;
            fresh = false;
        }
    }
    report.jacobian = jac;
    return finish(false);
}

RootFindReport root_find(const VectorFunction& f, const Eigen::VectorXd& x0, const RootFindOptions& options) {
    RootFindReport report = try_root_find(f, x0, options);
    if (!report.converged)
        throw RootFindFailure("root_find: no convergence after " + std::to_string(report.iterations) +
                                  " iterations (residual " + std::to_string(report.residual_norm) + ")",
                              report);
    return report;
}

}  // namespace ptbec::numerics
