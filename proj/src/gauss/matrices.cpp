#include "ptbec/gauss/matrices.hpp"

#include <cmath>
#include <numbers>

#include "internal.hpp"
#include "ptbec/errors.hpp"

namespace ptbec::gauss {

namespace {

constexpr double pi = std::numbers::pi;

cplx gauss_norm(cplx A) { return std::sqrt(pi / A); }

cplx overlap_element(const PairwiseAux& p) {
    return gauss_norm(p.A(0)) * gauss_norm(p.A(1)) * gauss_norm(p.A(2)) * p.c;
}

cplx beta(cplx A, double w) { return std::sqrt(A * w * w / (A * w * w + 2.0)); }

// sum over trap wells of the potential factor multiplying K_lk
cplx potential_factor(const GaussianBasisSet& b, const WellPotentialSpec& wells, const PairwiseAux& p,
                      Eigen::Index l, Eigen::Index k) {
    const cplx bxy = beta(p.A(0), wells.wx) * beta(p.A(1), wells.wy) * beta(p.A(2), wells.wz);
    const cplx Ak = b.az(k);
    const cplx Alc = std::conj(b.az(l));
    const cplx den = p.A(2) * (p.A(2) * wells.wz * wells.wz + 2.0);
    cplx sum = 0.0;
    for (Eigen::Index m = 0; m < wells.size(); ++m) {
        const double s = wells.positions(m);
        const cplx u = Ak * (s - b.q(k)) + Alc * (s - b.q(l));
        sum += wells.depths(m) * std::exp(-2.0 * u * u / den);
    }
    return bxy * sum;
}

void check_sizes(const GaussianBasisSet& basis, const WellPotentialSpec& wells) {
    basis.validate();
    wells.validate();
    if (basis.size() != wells.size()) throw SizeMismatch("basis and trap must have one Gaussian per well");
}

}  // namespace

double InteractionTensor::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

Eigen::MatrixXcd overlap_matrix(const GaussianBasisSet& basis) {
    basis.validate();
    const auto n = basis.size();
    Eigen::MatrixXcd K(n, n);
    for (Eigen::Index l = 0; l < n; ++l) {
        K(l, l) = overlap_element(pair_aux(basis, l, l)).real();
        for (Eigen::Index k = l + 1; k < n; ++k) {
            K(l, k) = overlap_element(pair_aux(basis, l, k));
            K(k, l) = std::conj(K(l, k));
        }
    }
    return K;
}

MatrixBundle hamiltonian_matrices(const GaussianBasisSet& basis, const WellPotentialSpec& wells, double g) {
    check_sizes(basis, wells);
    return hamiltonian_matrices_unchecked(basis, wells, g);
}

MatrixBundle hamiltonian_matrices_unchecked(const GaussianBasisSet& basis, const WellPotentialSpec& wells, double g) {
    const auto n = basis.size();
    MatrixBundle m;
    m.K.resize(n, n);
    m.T.resize(n, n);
    m.V.resize(n, n);
    for (Eigen::Index l = 0; l < n; ++l) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const PairwiseAux p = pair_aux(basis, l, k);
            const double dq = basis.q(k) - basis.q(l);
            const cplx K = overlap_element(p);
            m.K(l, k) = K;
            m.T(l, k) = K * (p.kappa.sum() - 2.0 * p.kappa(2) * p.kappa(2) * dq * dq);
            m.V(l, k) = K * potential_factor(basis, wells, p, l, k);
        }
    }
    for (Eigen::Index l = 0; l < n; ++l) m.K(l, l) = m.K(l, l).real();

    m.W = InteractionTensor(n);
    if (g == 0.0) return m;
    const Eigen::VectorXcd* A[3] = {&basis.ax, &basis.ay, &basis.az};
    const Eigen::VectorXd& q = basis.q;
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index i = 0; i < n; ++i) {
                    cplx pre = g;
                    for (int a = 0; a < 3; ++a) {
                        const auto& v = *A[a];
                        pre *= gauss_norm(v(i) + std::conj(v(j)) + v(k) + std::conj(v(l)));
                    }
                    const cplx ai = basis.az(i), ak = basis.az(k);
                    const cplx aj = std::conj(basis.az(j)), al = std::conj(basis.az(l));
                    const cplx S = ai + aj + ak + al;
                    auto sq = [](double x) { return x * x; };
                    const cplx e = ai * aj * sq(q(i) - q(j)) + ai * al * sq(q(i) - q(l)) + ak * aj * sq(q(k) - q(j)) +
                                   ak * al * sq(q(k) - q(l)) + ai * ak * sq(q(i) - q(k)) + aj * al * sq(q(j) - q(l));
                    m.W(l, k, j, i) = pre * std::exp(-e / S);
                }
    return m;
}

double mean_field_energy(const Eigen::VectorXcd& d, const MatrixBundle& m) {
    const auto n = m.K.rows();
    if (d.size() != n) throw SizeMismatch("amplitude vector does not match the basis");
    cplx e = d.dot((m.T + m.V) * d);
    if (m.W.size() == n) {
        cplx w = 0.0;
        for (Eigen::Index l = 0; l < n; ++l)
            for (Eigen::Index k = 0; k < n; ++k) {
                const cplx lk = std::conj(d(l)) * d(k);
                for (Eigen::Index j = 0; j < n; ++j)
                    for (Eigen::Index i = 0; i < n; ++i) w += lk * m.W(l, k, j, i) * std::conj(d(j)) * d(i);
            }
        e += 0.5 * w;
    }
    return e.real();
}

double mean_field_energy(const Eigen::VectorXcd& d, const GaussianBasisSet& basis, const WellPotentialSpec& wells,
                         double g) {
    return mean_field_energy(d, hamiltonian_matrices(basis, wells, g));
}

double norm_of(const Eigen::VectorXcd& d, const Eigen::MatrixXcd& K) {
    if (d.size() != K.rows()) throw SizeMismatch("amplitude vector does not match the overlap matrix");
    return d.dot(K * d).real();
}

}  // namespace ptbec::gauss
