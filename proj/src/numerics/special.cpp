#include "ptbec/numerics/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace ptbec::numerics {

namespace {

constexpr int kTerms = 40;

struct WeidemanCoefficients {
    double L;
    std::array<double, kTerms> a{};  // a[n-1] multiplies Z^(n-1)

    WeidemanCoefficients() {
        const int M = 2 * kTerms;
        const int M2 = 2 * M;
        L = std::sqrt(kTerms / std::numbers::sqrt2);
        for (int n = 1; n <= kTerms; ++n) {
            double sum = 0.0;
            for (int k = -M + 1; k <= M - 1; ++k) {
                const double theta = k * std::numbers::pi / M;
                const double t = L * std::tan(theta / 2.0);
                const double f = std::exp(-t * t) * (L * L + t * t);
                sum += f * std::cos(std::numbers::pi * k * n / M);
            }
            a[n - 1] = sum / M2;
        }
    }
};

const WeidemanCoefficients& coefficients() {
    static const WeidemanCoefficients c;
    return c;
}

std::complex<double> w_upper(std::complex<double> z) {
    const auto& c = coefficients();
    const std::complex<double> iz(-z.imag(), z.real());
    const std::complex<double> denom = c.L - iz;
    const std::complex<double> Z = (c.L + iz) / denom;
    std::complex<double> p = 0.0;
    for (int n = kTerms - 1; n >= 0; --n) p = p * Z + c.a[n];
    return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(std::numbers::pi)) / denom;
}

}  // namespace

std::complex<double> faddeeva_w(std::complex<double> z) {
    if (z.imag() >= 0.0) return w_upper(z);
    return 2.0 * std::exp(-z * z) - w_upper(-z);
}

std::complex<double> erfcx(std::complex<double> z) { return faddeeva_w({-z.imag(), z.real()}); }

std::complex<double> erf(std::complex<double> z) {
    if (std::abs(z) < 1e-3) {
        // series avoids cancellation in 1 - exp(-z^2) w(iz)
        const std::complex<double> z2 = z * z;
        return 2.0 / std::sqrt(std::numbers::pi) * z * (1.0 - z2 / 3.0 + z2 * z2 / 10.0 - z2 * z2 * z2 / 42.0);
    }
    if (z.real() >= 0.0) return 1.0 - std::exp(-z * z) * erfcx(z);
    return std::exp(-z * z) * erfcx(-z) - 1.0;
}

std::complex<double> exp_erfc(std::complex<double> u, std::complex<double> z) {
    if (z.real() >= 0.0) return std::exp(u - z * z) * erfcx(z);
    return 2.0 * std::exp(u) - std::exp(u - z * z) * erfcx(-z);
}

}  // namespace ptbec::numerics
