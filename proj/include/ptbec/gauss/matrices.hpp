#pragma once

#include <Eigen/Dense>

#include <vector>

#include "ptbec/gauss/basis.hpp"

namespace ptbec::gauss {

/// Dense rank-4 tensor W(l, k, j, i) = g * integral of conj(g^l) g^k conj(g^j) g^i.
class InteractionTensor {
public:
    InteractionTensor() = default;
    explicit InteractionTensor(Eigen::Index n) : n_(n), data_(static_cast<std::size_t>(n * n * n * n)) {}

    Eigen::Index size() const { return n_; }
    cplx& operator()(Eigen::Index l, Eigen::Index k, Eigen::Index j, Eigen::Index i) { return data_[at(l, k, j, i)]; }
    cplx operator()(Eigen::Index l, Eigen::Index k, Eigen::Index j, Eigen::Index i) const {
        return data_[at(l, k, j, i)];
    }
    double max_abs() const;

private:
    std::size_t at(Eigen::Index l, Eigen::Index k, Eigen::Index j, Eigen::Index i) const {
        return static_cast<std::size_t>(((l * n_ + k) * n_ + j) * n_ + i);
    }
    Eigen::Index n_ = 0;
    std::vector<cplx> data_;
};

/// K(l, k) = <g^l|g^k>, T = <g^l|-Laplacian/2|g^k>, V = <g^l|V|g^k> with
/// every trap well included.
struct MatrixBundle {
    Eigen::MatrixXcd K;
    Eigen::MatrixXcd T;
    Eigen::MatrixXcd V;
    InteractionTensor W;
};

Eigen::MatrixXcd overlap_matrix(const GaussianBasisSet& basis);

/// g is the internal contact coupling (UnitSystem::g()).
MatrixBundle hamiltonian_matrices(const GaussianBasisSet& basis, const WellPotentialSpec& wells, double g);

/// sum conj(d_l) (T + V)_lk d_k + 1/2 sum conj(d_l) d_k W_lkji conj(d_j) d_i
double mean_field_energy(const Eigen::VectorXcd& d, const MatrixBundle& m);
double mean_field_energy(const Eigen::VectorXcd& d, const GaussianBasisSet& basis, const WellPotentialSpec& wells,
                         double g);

/// d^dagger K d
double norm_of(const Eigen::VectorXcd& d, const Eigen::MatrixXcd& K);

}  // namespace ptbec::gauss
