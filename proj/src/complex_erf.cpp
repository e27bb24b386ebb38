#include "ibc1d/complex_erf.hpp"

#include <cmath>
#include <limits>

namespace ibc {

namespace {

using cplx = std::complex<double>;

constexpr double inv_sqrt_pi = 0.5641895835477562869480794515608;

// Laplace continued fraction, evaluated by backward recurrence.
// Good for |z| >= 6 in the closed upper half plane: the neglected
// Re w = exp(-x^2) on the real axis is below 3e-15 of |w| there.
cplx w_continued_fraction(cplx z, int depth) {
    cplx d = z;
    for (int n = depth; n >= 1; --n)
        d = z - (0.5 * n) / d;
    return cplx(0.0, inv_sqrt_pi) / d;
}

// Trapezoidal sum over Gaussian nodes with residue correction,
// w(z) = (ih/pi) sum_n exp(-t_n^2)/(z - t_n) - 2 exp(-z^2) Q/(1-Q),
// Q = exp(2*pi*i*(z - delta)/h), nodes t_n = n*h + delta.
// The node family (delta = 0 or h/2) is chosen so Re z stays at least
// h/4 away from every node, keeping both the sum and 1/(1-Q) tame as
// Im z -> 0.
cplx w_trapezoid(cplx z) {
    const double h = 0.45;
    const double x = z.real();

    double frac = x / h - std::floor(x / h);
    double delta = (std::min(frac, 1.0 - frac) > 0.25) ? 0.0 : 0.5 * h;

    const double t_max = 7.7;
    cplx sum = 0.0;
    int n_lo = static_cast<int>(std::ceil((-t_max - delta) / h));
    int n_hi = static_cast<int>(std::floor((t_max - delta) / h));
    for (int n = n_lo; n <= n_hi; ++n) {
        double t = n * h + delta;
        sum += std::exp(-t * t) / (z - t);
    }
    cplx w = cplx(0.0, h / M_PI) * sum;

    const double two_pi = 2.0 * M_PI;
    cplx Q = std::exp(cplx(0.0, two_pi / h) * (z - delta));
    w -= 2.0 * std::exp(-z * z) * Q / (1.0 - Q);
    return w;
}

} // namespace

cplx faddeeva_w(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument("faddeeva_w: non-finite argument");
    if (z.imag() < 0.0)
        throw std::invalid_argument("faddeeva_w: requires Im(z) >= 0");

    // w(-conj z) = conj(w(z)) reduces to Re z >= 0.
    if (z.real() < 0.0)
        return std::conj(faddeeva_w(-std::conj(z)));

    double r2 = std::norm(z);
    if (r2 >= 36.0) {
        int depth = r2 >= 256.0 ? 12 : 30;
        return w_continued_fraction(z, depth);
    }
    return w_trapezoid(z);
}

cplx erfcx_complex(cplx z) {
    if (z.real() >= 0.0)
        return faddeeva_w(cplx(-z.imag(), z.real())); // w(i z)
    // Reflection: erfcx(z) = 2 exp(z^2) - erfcx(-z).
    cplx z2 = z * z;
    if (z2.real() > 709.0)
        throw OverflowError("erfcx_complex: exp(z^2) overflows");
    return 2.0 * std::exp(z2) - erfcx_complex(-z);
}

cplx erfc_complex(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument("erfc_complex: non-finite argument");

    if (z.real() < 0.0)
        return 2.0 - erfc_complex(-z);

    if (std::norm(z) <= 1.0) {
        // Maclaurin series of erf; no cancellation since |erfc| >= 0.15 here.
        cplx z2 = z * z;
        cplx term = z;
        cplx sum = z;
        for (int n = 1; n < 40; ++n) {
            term *= -z2 / static_cast<double>(n);
            cplx inc = term / static_cast<double>(2 * n + 1);
            sum += inc;
            if (std::norm(inc) < 1e-36 * std::norm(sum))
                break;
        }
        return 1.0 - 2.0 * inv_sqrt_pi * sum;
    }

    cplx mz2 = -z * z;
    if (mz2.real() > 709.0)
        throw OverflowError("erfc_complex: exp(-z^2) overflows; use erfcx_complex");
    return std::exp(mz2) * erfcx_complex(z);
}

} // namespace ibc
