#include "ptbec/numerics/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ptbec/errors.hpp"

namespace ptbec::numerics {

LinearSolution solve_linear(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs, double max_condition) {
    const Eigen::Index n = matrix.rows();
    if (n == 0 || matrix.cols() != n || rhs.size() != n)
        throw InvalidArgument("solve_linear: matrix must be square and match the right-hand side");
    if (n > 8) throw InvalidArgument("solve_linear: intended for systems with n <= 8");
    if (!matrix.allFinite() || !rhs.allFinite()) throw SingularMatrix("solve_linear: non-finite input");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(n - 1);
    const double condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(condition <= max_condition))
        throw SingularMatrix("solve_linear: condition number " + std::to_string(condition) + " exceeds limit");

    Eigen::FullPivLU<Eigen::MatrixXd> lu(matrix);
    Eigen::VectorXd x = lu.solve(rhs);
    // one step of iterative refinement
    const Eigen::VectorXd r = rhs - matrix * x;
    x += lu.solve(r);
    return {std::move(x), condition};
}

}  // namespace ptbec::numerics
