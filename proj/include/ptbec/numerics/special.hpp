#pragma once

#include <complex>

namespace ptbec::numerics {

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz), relative accuracy ~1e-14
/// on the whole complex plane (rational approximation, 40 terms).
std::complex<double> faddeeva_w(std::complex<double> z);

/// Scaled complementary error function erfcx(z) = exp(z^2) erfc(z) = w(iz).
std::complex<double> erfcx(std::complex<double> z);

/// erf(z) for complex z. Loses relative accuracy only where erf itself
/// overflows (large |Im z| with small Re z).
std::complex<double> erf(std::complex<double> z);

/// exp(u) * erfc(z) combined so that large exponents cancel before being
/// evaluated. Useful for Gaussian integrals over half-lines.
std::complex<double> exp_erfc(std::complex<double> u, std::complex<double> z);

}  // namespace ptbec::numerics
