#pragma once

#include <Eigen/Dense>

namespace ptbec::numerics {

struct LinearSolution {
    Eigen::VectorXd x;
    /// 2-norm condition number of the matrix.
    double condition = 0.0;
};

/// Dense solve for small systems (n <= 8). Throws SingularMatrix when the
/// condition number exceeds `max_condition` or the matrix is not finite.
LinearSolution solve_linear(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs,
                            double max_condition = 1e14);

}  // namespace ptbec::numerics
