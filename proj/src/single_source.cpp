#include "ibc1d/single_source.hpp"

#include "ibc1d/complex_erf.hpp"
#include "ibc1d/parallel.hpp"
#include "ibc1d/roots.hpp"

#include <cmath>

namespace ibc {

namespace {
constexpr double two_pi = 6.283185307179586476925286766559;
const double sqrt_two_pi = std::sqrt(two_pi);
} // namespace

Coupling Coupling::make(cplx c) {
    double a2 = std::norm(c);
    if (a2 == 0.0)
        throw ZeroCouplingError("coupling must be nonzero (free vacuum limit)");
    Coupling out;
    out.c = c;
    out.kappa = std::cbrt(0.5 * a2);
    out.phase = std::arg(c);
    return out;
}

GroundState ground_state(const Coupling& c) {
    GroundState g;
    g.kappa = c.kappa;
    g.energy = -c.kappa * c.kappa;
    g.amplitude = std::sqrt(c.kappa / 3.0);
    g.phi0 = -std::sqrt(2.0 / 3.0) * std::abs(c.c) / c.c;
    return g;
}

GroundState ground_state_massive(const Coupling& c, double M) {
    if (!(M > 0.0))
        throw std::invalid_argument("ground_state_massive: M must be positive");
    double a2 = c.abs2();
    // 2k(k^2 - M) = |c|^2 has exactly one root above sqrt(M).
    double lo = std::sqrt(M);
    double hi = std::sqrt(M) + std::cbrt(a2) + 1.0;
    auto f = [&](double k) { return 2.0 * k * (k * k - M) - a2; };
    while (f(hi) < 0.0)
        hi *= 2.0;
    double kappa = solve_root(f, {lo, hi}, 1e-15);

    GroundState g;
    g.kappa = kappa;
    g.energy = -kappa * kappa + M;
    double k2 = kappa * kappa;
    g.amplitude = std::sqrt(kappa * (k2 - M) / (3.0 * k2 - M));
    g.phi0 = -std::sqrt(2.0 * k2 / (3.0 * k2 - M)) * std::abs(c.c) / c.c;
    return g;
}

cplx ScatteringState::phi1(double x) const {
    double ak = std::abs(k);
    cplx plane = std::exp(cplx(0.0, k * x));
    cplx spherical = b * std::exp(cplx(0.0, ak * std::abs(x)));
    return (plane + spherical) / sqrt_two_pi;
}

cplx ScatteringState::dphi1(double x) const {
    double ak = std::abs(k);
    double sgn = x > 0.0 ? 1.0 : -1.0;
    cplx plane = cplx(0.0, k) * std::exp(cplx(0.0, k * x));
    cplx spherical = b * cplx(0.0, ak * sgn) * std::exp(cplx(0.0, ak * std::abs(x)));
    return (plane + spherical) / sqrt_two_pi;
}

ScatteringState scattering_state(const Coupling& c, double k) {
    if (k == 0.0)
        throw std::invalid_argument("scattering_state: k must be nonzero");
    double ak = std::abs(k);
    double k3 = ak * ak * ak;
    double kap3 = c.kappa * c.kappa * c.kappa;
    ScatteringState s;
    s.k = k;
    s.energy = k * k;
    s.b = cplx(0.0, -kap3) / cplx(k3, kap3);
    s.phi0 = cplx(0.0, 2.0 * ak) * s.b / (sqrt_two_pi * c.c);
    return s;
}

cplx diffraction_coefficient(const Coupling& c, double k) {
    if (!(k > 0.0))
        throw std::invalid_argument("diffraction_coefficient: k must be positive");
    return cplx(0.0, 2.0 * k) * scattering_state(c, k).b;
}

SectorGreen green_line(const Coupling& c, double E, double x, double y) {
    if (E == 0.0)
        throw std::invalid_argument("green_line: E = 0 excluded");
    cplx k = E > 0.0 ? cplx(std::sqrt(E), 0.0) : cplx(0.0, std::sqrt(-E));
    double a2 = c.abs2();
    cplx two_ik = cplx(0.0, 2.0) * k;
    cplx b = a2 / (two_ik * k * k - a2);

    cplx exp_xy = std::exp(cplx(0.0, 1.0) * k * std::abs(x - y));
    cplx exp_x = std::exp(cplx(0.0, 1.0) * k * std::abs(x));
    cplx exp_y = std::exp(cplx(0.0, 1.0) * k * std::abs(y));

    SectorGreen g;
    g.energy = E;
    g.x = x;
    g.y = y;
    g.g11 = (exp_xy + b * exp_x * exp_y) / two_ik;
    g.g01 = b / c.c * exp_y;
    g.g10 = b / std::conj(c.c) * exp_x;
    g.g00 = two_ik * b / a2;
    return g;
}

SectorKernel propagator(const Coupling& c, double t, double x, double y) {
    if (!(t > 0.0))
        throw std::invalid_argument("propagator: t must be positive");

    const cplx i(0.0, 1.0);
    const double sq_t = std::sqrt(t);
    const cplx sqrt_it = std::polar(sq_t, M_PI / 4.0); // e^{i pi/4} sqrt(t)
    const double ax = std::abs(x), ay = std::abs(y);

    cplx kap[3];
    for (int j = 0; j < 3; ++j)
        kap[j] = std::polar(c.kappa, two_pi * j / 3.0);

    // Each term exp(i kap_j^2 t) exp(-kap_j s) erfc(s/(2 sqrt(it)) - kap_j sqrt(it))
    // collapses to exp(i s^2/(4t)) erfcx(...), which has unit-modulus prefactor.
    auto sum_terms = [&](double s, auto&& weight) {
        cplx phase = std::exp(i * (s * s / (4.0 * t)));
        cplx acc = 0.0;
        for (int j = 0; j < 3; ++j) {
            cplx zeta = s / (2.0 * sqrt_it) - kap[j] * sqrt_it;
            acc += weight(j) * phase * erfcx_complex(zeta);
        }
        return acc;
    };

    SectorKernel K;
    K.t = t;
    K.x = x;
    K.y = y;

    cplx k0 = std::exp(i * ((x - y) * (x - y) / (4.0 * t))) *
              std::polar(1.0 / std::sqrt(4.0 * M_PI * t), -M_PI / 4.0);
    K.k11 = k0 + sum_terms(ax + ay, [&](int j) { return kap[j] / 6.0; });
    K.k10 = sum_terms(ax, [&](int j) { return -kap[j] * kap[j] / (3.0 * std::conj(c.c)); });
    K.k01 = sum_terms(ay, [&](int j) { return -kap[j] * kap[j] / (3.0 * c.c); });

    cplx k00 = 0.0;
    for (int j = 0; j < 3; ++j)
        k00 += erfcx_complex(-kap[j] * sqrt_it);
    K.k00 = k00 / 3.0;
    return K;
}

std::vector<SectorKernel> propagator_grid_serial(const Coupling& c, double t,
                                                 std::span<const double> xs, double y) {
    std::vector<SectorKernel> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i)
        out[i] = propagator(c, t, xs[i], y);
    return out;
}

std::vector<SectorKernel> propagator_grid(const Coupling& c, double t,
                                          std::span<const double> xs, double y) {
    std::vector<SectorKernel> out(xs.size());
    parallel_for(static_cast<std::ptrdiff_t>(xs.size()),
                 [&](std::ptrdiff_t i) { out[i] = propagator(c, t, xs[i], y); });
    return out;
}

namespace {

// One-sided derivative at 0 by a 5-point fourth-order stencil.
cplx one_sided_derivative(const std::function<cplx(double)>& f, double sign) {
    const double h = 7e-4 * sign;
    cplx d = (-25.0 * f(0.0) + 48.0 * f(h) - 36.0 * f(2 * h) + 16.0 * f(3 * h) -
              3.0 * f(4 * h)) /
             (12.0 * h);
    return d;
}

} // namespace

FluxBalance flux_balance(const SectorState01& state, const Coupling& c) {
    cplx v0 = state.phi1(0.0);
    cplx d_plus = one_sided_derivative(state.phi1, +1.0);
    cplx d_minus = one_sided_derivative(state.phi1, -1.0);

    double j_plus = 2.0 * std::imag(std::conj(v0) * d_plus);
    double j_minus = 2.0 * std::imag(std::conj(v0) * d_minus);

    FluxBalance fb;
    fb.current_jump = -(j_plus - j_minus);
    fb.vacuum_rate = -2.0 * std::imag(c.c * std::conj(v0) * state.phi0);
    return fb;
}

SectorState01 to_state(const GroundState& g) {
    return {g.phi0, [g](double x) { return g.phi1(x); }};
}

SectorState01 to_state(const ScatteringState& s) {
    return {s.phi0, [s](double x) { return s.phi1(x); }};
}

SectorState01 superpose(const SectorState01& a, const SectorState01& b, cplx wa, cplx wb) {
    auto fa = a.phi1, fb = b.phi1;
    return {wa * a.phi0 + wb * b.phi0,
            [fa, fb, wa, wb](double x) { return wa * fa(x) + wb * fb(x); }};
}

} // namespace ibc
