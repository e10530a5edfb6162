#include "ptbec/gauss/lowdin.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ptbec/errors.hpp"
#include "ptbec/gauss/matrices.hpp"

namespace ptbec::gauss {

namespace {

constexpr double pi = std::numbers::pi;

// (Re ax Re ay Re az)^{1/4}
double quarter_root(const GaussianBasisSet& b, Eigen::Index k) {
    return std::pow(b.ax(k).real() * b.ay(k).real() * b.az(k).real(), 0.25);
}

Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& K, double power) {
    if (K.rows() != K.cols() || K.rows() == 0) throw InvalidArgument("overlap matrix must be square and non-empty");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(K);
    if (es.info() != Eigen::Success) throw NotPositiveDefinite("eigendecomposition of the overlap matrix failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    if (!(ev.minCoeff() > 1e-14 * ev.cwiseAbs().maxCoeff()))
        throw NotPositiveDefinite("overlap matrix is not positive definite (smallest eigenvalue " +
                                  std::to_string(ev.minCoeff()) + ")");
    const Eigen::VectorXd p = ev.array().pow(power);
    return es.eigenvectors() * p.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Eigen::MatrixXcd lowdin_exact(const Eigen::MatrixXcd& K) { return matrix_power(K, -0.5); }

LowdinExpansion lowdin_nn(const GaussianBasisSet& basis) {
    basis.validate();
    const auto n = basis.size();
    LowdinExpansion x;
    x.X0 = Eigen::MatrixXcd::Zero(n, n);
    x.X1 = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) x.X0(k, k) = std::pow(2.0 / pi, 0.75) * quarter_root(basis, k);
    for (Eigen::Index l = 0; l + 1 < n; ++l) {
        const Eigen::Index k = l + 1;
        const PairwiseAux p = pair_aux(basis, l, k);
        const double ak = quarter_root(basis, k), al = quarter_root(basis, l);
        const cplx v = -std::pow(8.0 / pi, 0.75) * p.c / (std::sqrt(p.A(0)) * std::sqrt(p.A(1)) * std::sqrt(p.A(2))) *
                       (ak * ak * al * al) / (ak + al);
        x.X1(l, k) = v;
        x.X1(k, l) = std::conj(v);
    }
    return x;
}

EffectiveAmplitudes effective_amplitudes(const Eigen::VectorXcd& d, const GaussianBasisSet& basis,
                                         AmplitudeTransform mode) {
    basis.validate();
    const auto n = basis.size();
    if (d.size() != n) throw SizeMismatch("amplitude vector does not match the basis");
    EffectiveAmplitudes out;
    if (mode == AmplitudeTransform::exact) {
        out.d_eff = matrix_power(overlap_matrix(basis), 0.5) * d;
    } else {
        Eigen::MatrixXcd inv = Eigen::MatrixXcd::Zero(n, n);
        for (Eigen::Index k = 0; k < n; ++k) inv(k, k) = std::pow(pi * pi * pi / 8.0, 0.25) / quarter_root(basis, k);
        for (Eigen::Index l = 0; l + 1 < n; ++l) {
            const Eigen::Index k = l + 1;
            const PairwiseAux p = pair_aux(basis, l, k);
            const double ak = quarter_root(basis, k), al = quarter_root(basis, l);
            const cplx v = std::pow(8.0 * pi * pi * pi, 0.25) * ak * al / (ak + al) * p.c /
                           (std::sqrt(p.A(0)) * std::sqrt(p.A(1)) * std::sqrt(p.A(2)));
            inv(l, k) = v;
            inv(k, l) = std::conj(v);
        }
        out.d_eff = inv * d;
    }
    out.n = out.d_eff.cwiseAbs2();
    return out;
}

}  // namespace ptbec::gauss
