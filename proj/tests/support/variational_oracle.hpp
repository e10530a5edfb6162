#pragma once

// Quadrature reference values for sums of Gaussians with complex linear
// terms. Everything factorises into 1D integrals over x, y and z.

#include <array>
#include <cmath>
#include <vector>

#include "ptbec/gauss/basis.hpp"
#include "ptbec/variational/state.hpp"
#include "quadrature_oracle.hpp"

namespace ptbec::oracle {

using variational::VariationalState;

// exp(-A x^2 + b x + c)
struct Factor {
    cplx A;
    cplx b = 0.0;
    cplx c = 0.0;
    cplx operator()(double x) const { return std::exp(-A * x * x + b * x + c); }
    cplx derivative(double x) const { return (-2.0 * A * x + b) * (*this)(x); }
    double centre() const { return b.real() / (2.0 * A.real()); }
};

inline std::array<Factor, 3> factors(const VariationalState& s, Eigen::Index k) {
    using S = VariationalState;
    return {Factor{s.at(k, S::AX)}, Factor{s.at(k, S::AY)}, Factor{s.at(k, S::AZ), s.at(k, S::B), s.at(k, S::C)}};
}

inline cplx psi(const VariationalState& s, double x, double y, double z) {
    cplx r = 0.0;
    for (Eigen::Index k = 0; k < s.gaussians(); ++k) {
        const auto f = factors(s, k);
        r += f[0](x) * f[1](y) * f[2](z);
    }
    return r;
}

template <class F>
cplx integrate_factors(const F& f, const std::vector<Factor>& parts, double lo_cut = -INFINITY,
                       double hi_cut = INFINITY) {
    double width = 0.0;
    double lo = parts.front().centre(), hi = lo;
    std::vector<double> breaks;
    for (const auto& p : parts) {
        width += p.A.real();
        lo = std::min(lo, p.centre());
        hi = std::max(hi, p.centre());
    }
    const double L = std::sqrt(80.0 / width) + 1.0;
    double a = std::max(lo - L, lo_cut), b = std::min(hi + L, hi_cut);
    if (!(b > a)) return 0.0;
    for (const auto& p : parts)
        if (p.centre() > a && p.centre() < b) breaks.push_back(p.centre());
    QuadratureOptions opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = 1e-12;
    return integrate(f, a, b, breaks, opt);
}

// tangent of slot s: monomial coefficient and exponents of (x, y, z)
struct Tangent {
    double coef;
    std::array<int, 3> e;
};
inline Tangent tangent(int slot) {
    switch (slot) {
        case 0: return {-1.0, {2, 0, 0}};
        case 1: return {-1.0, {0, 2, 0}};
        case 2: return {-1.0, {0, 0, 2}};
        case 3: return {1.0, {0, 0, 1}};
        default: return {1.0, {0, 0, 0}};
    }
}

inline double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

// <d psi/d z_(l,a) | d psi/d z_(k,b)>
inline cplx metric_element(const VariationalState& s, Eigen::Index l, int a, Eigen::Index k, int b) {
    const auto fl = factors(s, l), fk = factors(s, k);
    const Tangent ta = tangent(a), tb = tangent(b);
    cplx r = ta.coef * tb.coef;
    for (int ax = 0; ax < 3; ++ax) {
        const int e = ta.e[ax] + tb.e[ax];
        r *= integrate_factors([&](double x) { return ipow(x, e) * std::conj(fl[ax](x)) * fk[ax](x); },
                               {fl[ax], fk[ax]});
    }
    return r;
}

// <d psi/d z_(l,a) | T + V + g |psi|^2 | psi>
inline cplx rhs_element(const VariationalState& s, const gauss::WellPotentialSpec& w, double g, bool free,
                        Eigen::Index l, int a) {
    const auto fl = factors(s, l);
    const Tangent ta = tangent(a);
    auto left = [&](int ax, double x) { return ta.coef * ipow(x, ta.e[ax]) * std::conj(fl[ax](x)); };
    auto left_d = [&](int ax, double x) {
        const int e = ta.e[ax];
        const double m = ipow(x, e), dm = e == 0 ? 0.0 : (e == 1 ? 1.0 : 2.0 * x);
        return ta.coef * (dm * std::conj(fl[ax](x)) + m * std::conj(fl[ax].derivative(x)));
    };
    const double widths[3] = {w.wx, w.wy, w.wz};
    const Eigen::Index n = s.gaussians();
    cplx total = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto fk = factors(s, k);
        cplx ov[3], kin[3];
        for (int ax = 0; ax < 3; ++ax) {
            ov[ax] = integrate_factors([&](double x) { return left(ax, x) * fk[ax](x); }, {fl[ax], fk[ax]});
            kin[ax] = 0.5 * integrate_factors([&](double x) { return left_d(ax, x) * fk[ax].derivative(x); },
                                              {fl[ax], fk[ax]});
        }
        total += kin[0] * ov[1] * ov[2] + ov[0] * kin[1] * ov[2] + ov[0] * ov[1] * kin[2];
        if (!free) {
            for (Eigen::Index m = 0; m < w.size(); ++m) {
                cplx r = w.depths(m);
                for (int ax = 0; ax < 3; ++ax) {
                    const double sh = ax == 2 ? w.positions(m) : 0.0;
                    const double wd = widths[ax];
                    r *= integrate_factors(
                        [&](double x) { return left(ax, x) * fk[ax](x) * std::exp(-2.0 * (x - sh) * (x - sh) / (wd * wd)); },
                        {fl[ax], fk[ax], Factor{2.0 / (wd * wd), 4.0 * sh / (wd * wd)}});
                }
                total += r;
            }
        }
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const auto fi = factors(s, i), fj = factors(s, j);
                cplx r = g;
                for (int ax = 0; ax < 3; ++ax)
                    r *= integrate_factors(
                        [&](double x) { return left(ax, x) * std::conj(fi[ax](x)) * fj[ax](x) * fk[ax](x); },
                        {fl[ax], fi[ax], fj[ax], fk[ax]});
                total += r;
            }
    }
    return total;
}

// int over x, y and z in [lo, hi] of |psi|^2
inline double slab_norm(const VariationalState& s, double lo, double hi) {
    cplx total = 0.0;
    for (Eigen::Index l = 0; l < s.gaussians(); ++l)
        for (Eigen::Index k = 0; k < s.gaussians(); ++k) {
            const auto fl = factors(s, l), fk = factors(s, k);
            cplx r = 1.0;
            for (int ax = 0; ax < 3; ++ax)
                r *= integrate_factors([&](double x) { return std::conj(fl[ax](x)) * fk[ax](x); }, {fl[ax], fk[ax]},
                                       ax == 2 ? lo : -INFINITY, ax == 2 ? hi : INFINITY);
            total += r;
        }
    return total.real();
}

// int dx dy Im(psi^* d psi / dz) at z = zw
inline double wall_current(const VariationalState& s, double zw) {
    cplx total = 0.0;
    for (Eigen::Index l = 0; l < s.gaussians(); ++l)
        for (Eigen::Index k = 0; k < s.gaussians(); ++k) {
            const auto fl = factors(s, l), fk = factors(s, k);
            cplx r = std::conj(fl[2](zw)) * fk[2].derivative(zw);
            for (int ax = 0; ax < 2; ++ax)
                r *= integrate_factors([&](double x) { return std::conj(fl[ax](x)) * fk[ax](x); }, {fl[ax], fk[ax]});
            total += r;
        }
    return total.imag();
}

// <psi|T + V|psi> + g/2 int |psi|^4
inline double energy(const VariationalState& s, const gauss::WellPotentialSpec& w, double g, bool free) {
    const double widths[3] = {w.wx, w.wy, w.wz};
    const Eigen::Index n = s.gaussians();
    cplx total = 0.0;
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto fl = factors(s, l), fk = factors(s, k);
            cplx ov[3], kin[3];
            for (int ax = 0; ax < 3; ++ax) {
                ov[ax] = integrate_factors([&](double x) { return std::conj(fl[ax](x)) * fk[ax](x); }, {fl[ax], fk[ax]});
                kin[ax] = 0.5 * integrate_factors(
                                    [&](double x) { return std::conj(fl[ax].derivative(x)) * fk[ax].derivative(x); },
                                    {fl[ax], fk[ax]});
            }
            total += kin[0] * ov[1] * ov[2] + ov[0] * kin[1] * ov[2] + ov[0] * ov[1] * kin[2];
            if (!free)
                for (Eigen::Index m = 0; m < w.size(); ++m) {
                    cplx r = w.depths(m);
                    for (int ax = 0; ax < 3; ++ax) {
                        const double sh = ax == 2 ? w.positions(m) : 0.0;
                        const double wd = widths[ax];
                        r *= integrate_factors(
                            [&](double x) {
                                return std::conj(fl[ax](x)) * fk[ax](x) * std::exp(-2.0 * (x - sh) * (x - sh) / (wd * wd));
                            },
                            {fl[ax], fk[ax]});
                    }
                    total += r;
                }
            if (g != 0.0)
                for (Eigen::Index i = 0; i < n; ++i)
                    for (Eigen::Index j = 0; j < n; ++j) {
                        const auto fi = factors(s, i), fj = factors(s, j);
                        cplx r = 0.5 * g;
                        for (int ax = 0; ax < 3; ++ax)
                            r *= integrate_factors(
                                [&](double x) {
                                    return std::conj(fl[ax](x)) * std::conj(fi[ax](x)) * fj[ax](x) * fk[ax](x);
                                },
                                {fl[ax], fi[ax], fj[ax], fk[ax]});
                        total += r;
                    }
        }
    return total.real();
}

}  // namespace ptbec::oracle
