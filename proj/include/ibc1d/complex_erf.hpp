#pragma once

#include <complex>
#include <stdexcept>

namespace ibc {

/// Thrown when a result is not representable in double precision
/// (e.g. erfc(z) with exp(-z^2) overflowing; use erfcx instead).
struct OverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
/// Requires Im(z) >= 0; relative accuracy ~1e-14 on that half plane.
std::complex<double> faddeeva_w(std::complex<double> z);

/// Scaled complementary error function erfcx(z) = exp(z^2) erfc(z).
/// Valid for all finite z; throws OverflowError if exp(z^2) overflows
/// in the left half plane where the reflection formula needs it.
std::complex<double> erfcx_complex(std::complex<double> z);

/// Complementary error function for complex argument.
/// Accuracy ~1e-14 relative wherever the value is representable; throws
/// OverflowError when exp(-z^2) overflows (near the imaginary axis with
/// |Im z| > ~26.6).
std::complex<double> erfc_complex(std::complex<double> z);

} // namespace ibc
