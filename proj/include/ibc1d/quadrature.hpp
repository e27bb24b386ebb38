#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace ibc {

using CplxFn = std::function<std::complex<double>(double)>;

struct QuadResult {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;    // estimated absolute error
    long evals = 0;
    bool converged = true; // false: best estimate attached, error above tol
};

/// Adaptive Gauss-Kronrod (7,15) over [a,b]. Breakpoints split the initial
/// panels (use for integrands with kinks, e.g. |x| at 0).
QuadResult integrate(const CplxFn& f, double a, double b, double tol,
                     std::span<const double> breakpoints = {});

/// ∫_a^∞ f for integrands with exponential-type tail decay on the given
/// scale. Panels of width ~8*decay_scale are added until their contribution
/// drops below tol.
QuadResult integrate_half_line(const CplxFn& f, double a, double decay_scale, double tol);

/// ∫_{-∞}^{∞} f(k) dk for oscillatory integrands with slow algebraic decay.
/// Gaussian damping exp(-eps k^2) is applied and extrapolated eps -> 0 over a
/// three-point Richardson ladder {eps0, eps0/2, eps0/4}. phase_scale is the
/// smallest oscillation scale x of any exp(ikx) factor present; eps0 is
/// reduced below x^2/112 so the damping bias of the oscillatory tail stays
/// under ~1e-12 (default ladder starts at 1e-2 when phase_scale permits).
QuadResult integrate_oscillatory_damped(const CplxFn& f, double phase_scale, double tol);

} // namespace ibc
