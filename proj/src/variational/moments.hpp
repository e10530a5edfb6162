#pragma once

#include <complex>
#include <numbers>

#include "ptbec/variational/state.hpp"

namespace ptbec::variational::detail {

/// Moments m[n] = int x^n exp(-a x^2 + b x + c) dx for n = 0..4.
struct Moments1D {
    cplx m[5];
};

inline Moments1D moments(cplx a, cplx b = 0.0, cplx c = 0.0) {
    Moments1D r;
    const cplx mu = b / (2.0 * a);
    const cplx s = 1.0 / (2.0 * a);
    const cplx m0 = std::sqrt(std::numbers::pi / a) * std::exp(b * b / (4.0 * a) + c);
    r.m[0] = m0;
    r.m[1] = mu * m0;
    r.m[2] = (mu * mu + s) * m0;
    r.m[3] = (mu * mu * mu + 3.0 * mu * s) * m0;
    r.m[4] = (mu * mu * mu * mu + 6.0 * mu * mu * s + 3.0 * s * s) * m0;
    return r;
}

/// Separable product exp(-ax x^2 - ay y^2 - az z^2 + b z + c).
struct Product {
    cplx ax, ay, az, b, c;

    Product with_trap(double wx, double wy, double wz, double s) const {
        return {ax + 2.0 / (wx * wx), ay + 2.0 / (wy * wy), az + 2.0 / (wz * wz), b + 4.0 * s / (wz * wz),
                c - 2.0 * s * s / (wz * wz)};
    }
};

struct ProductMoments {
    Moments1D x, y, z;
    explicit ProductMoments(const Product& p) : x(moments(p.ax)), y(moments(p.ay)), z(moments(p.az, p.b, p.c)) {}
    cplx operator()(int i, int j, int k) const { return x.m[i] * y.m[j] * z.m[k]; }
};

/// conj(psi_l) psi_k
inline Product pair(const VariationalState& s, Eigen::Index l, Eigen::Index k) {
    using S = VariationalState;
    return {std::conj(s.at(l, S::AX)) + s.at(k, S::AX), std::conj(s.at(l, S::AY)) + s.at(k, S::AY),
            std::conj(s.at(l, S::AZ)) + s.at(k, S::AZ), std::conj(s.at(l, S::B)) + s.at(k, S::B),
            std::conj(s.at(l, S::C)) + s.at(k, S::C)};
}

inline Product operator*(const Product& p, const Product& q) {
    return {p.ax + q.ax, p.ay + q.ay, p.az + q.az, p.b + q.b, p.c + q.c};
}

/// coef * x^ex y^ey z^ez
struct Monomial {
    cplx coef;
    int ex, ey, ez;
};

/// d psi_k / d z for the slots (Ax, Ay, Az, b, c), as multipliers of psi_k.
inline constexpr Monomial tangent[5] = {{-1.0, 2, 0, 0}, {-1.0, 0, 2, 0}, {-1.0, 0, 0, 2}, {1.0, 0, 0, 1},
                                        {1.0, 0, 0, 0}};

}  // namespace ptbec::variational::detail
