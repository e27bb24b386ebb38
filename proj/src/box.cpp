#include "ibc1d/box.hpp"

#include "ibc1d/roots.hpp"

#include <algorithm>
#include <cmath>

namespace ibc {

namespace {

// sinh(k l1) sinh(k l2) / sinh(k l) in overflow-free form; l = l1 + l2.
double sinh_ratio(double kappa, double l1, double l2, double l) {
    double e1 = -std::expm1(-2.0 * kappa * l1);
    double e2 = -std::expm1(-2.0 * kappa * l2);
    double e = -std::expm1(-2.0 * kappa * l);
    return e1 * e2 / (2.0 * e);
}

// Pole-free positive-energy secular function
// g(k) = k^3 sin(kl) + |c|^2 sin(k l1) sin(k l2); zeros are the levels.
double secular_positive(const BoxSpec& s, double k) {
    double a2 = s.coupling.abs2();
    return k * k * k * std::sin(k * s.l) + a2 * std::sin(k * s.l1) * std::sin(k * s.l2);
}

std::vector<double> positive_roots(const BoxSpec& spec, double k_max) {
    auto g = [&](double k) { return secular_positive(spec, k); };
    double step0 = std::min(M_PI / (4.0 * spec.l), spec.coupling.kappa / 10.0);
    int n = std::max(16, static_cast<int>(std::ceil(k_max / step0)));
    double k_lo = k_max * 1e-12;

    auto census = [&](int grid_n) { return scan_sign_changes(g, k_lo, k_max, grid_n); };

    std::vector<Bracket> brackets = census(n);
    for (int pass = 0; pass < 6; ++pass) {
        auto refined = census(2 * n);
        if (refined.size() == brackets.size()) {
            brackets = refined;
            break;
        }
        n *= 2;
        brackets = refined;
    }

    std::vector<double> roots;
    roots.reserve(brackets.size());
    for (auto& b : brackets)
        roots.push_back(solve_root(g, b, 1e-14 * std::max(1.0, k_max)));
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace

BoxSpec BoxSpec::make(double l1, double l2, cplx c) {
    if (!(l1 > 0.0) || !(l2 > 0.0))
        throw std::invalid_argument("BoxSpec: l1, l2 must be positive");
    BoxSpec s{l1, l2, l1 + l2, Coupling::make(c)};
    return s;
}

double box_ground_energy(const BoxSpec& spec) {
    double a2 = spec.coupling.abs2();
    auto f = [&](double kappa) {
        return kappa * kappa * kappa - a2 * sinh_ratio(kappa, spec.l1, spec.l2, spec.l);
    };
    // Small-kappa side is negative (rhs ~ |c|^2 l1 l2/l * kappa beats kappa^3).
    double lo = 1e-9 * std::min(1.0, spec.coupling.kappa);
    for (int guard = 0; f(lo) >= 0.0 && guard < 200; ++guard)
        lo *= 0.25;
    double hi = 1.5 * spec.coupling.kappa + 1.0;
    while (f(hi) < 0.0)
        hi *= 2.0;
    double kappa = solve_root(f, {lo, hi}, 1e-16);
    return -kappa * kappa;
}

std::vector<double> box_positive_levels(const BoxSpec& spec, double E_max) {
    if (!(E_max > 0.0))
        throw std::invalid_argument("box_positive_levels: E_max must be positive");
    auto roots = positive_roots(spec, std::sqrt(E_max));
    std::vector<double> levels;
    levels.reserve(roots.size());
    for (double k : roots)
        levels.push_back(k * k);
    return levels;
}

BoxSpectrum box_spectrum(const BoxSpec& spec, double E_max) {
    return {box_ground_energy(spec), box_positive_levels(spec, E_max)};
}

cplx box_green_bare(const BoxSpec& spec, cplx E, double x, double y) {
    cplx k = std::sqrt(E);
    double xl = std::min(x, y), xg = std::max(x, y);
    cplx num = std::sin(k * (xl + spec.l1)) * std::sin(k * (xg - spec.l2));
    return num / (k * std::sin(k * spec.l));
}

SectorGreen box_green(const BoxSpec& spec, cplx E, double x, double y, bool* pole_warning) {
    double a2 = spec.coupling.abs2();
    cplx gb00 = box_green_bare(spec, E, 0.0, 0.0);
    cplx denom = E - a2 * gb00;
    if (pole_warning)
        *pole_warning = std::abs(denom) < 1e-10 * std::max(1.0, std::abs(E));
    cplx g00 = 1.0 / denom;

    SectorGreen g;
    g.energy = E;
    g.x = x;
    g.y = y;
    cplx gb_xy = box_green_bare(spec, E, x, y);
    cplx gb_x0 = box_green_bare(spec, E, x, 0.0);
    cplx gb_0y = box_green_bare(spec, E, 0.0, y);
    g.g11 = gb_xy + gb_x0 * a2 * g00 * gb_0y;
    g.g00 = g00;
    g.g01 = std::conj(spec.coupling.c) * g00 * gb_0y;
    g.g10 = spec.coupling.c * g00 * gb_x0;
    return g;
}

double spectral_determinant(const BoxSpec& spec, double E) {
    double a2 = spec.coupling.abs2();
    double l1 = spec.l1, l2 = spec.l2, l = spec.l;

    double scale = std::max(1.0, 1.0 / (l * l));
    if (std::abs(E) < 1e-9 * scale) {
        // Taylor limit through the removable point at E = 0.
        return 1.0 + E * (l / (a2 * l1 * l2) - (l1 * l1 + l2 * l2) / 6.0);
    }
    if (E > 0.0) {
        double k = std::sqrt(E);
        double s = std::sin(k * l);
        if (std::abs(s) > 0.1) {
            double delta_b = s / (k * l);
            double gb00 = -std::sin(k * l1) * std::sin(k * l2) / (k * s);
            return delta_b * (E - a2 * gb00) * l / (a2 * l1 * l2);
        }
        // expanded product through the removable sin(kl) = 0 points
        return (k * k * k * s + a2 * std::sin(k * l1) * std::sin(k * l2)) /
               (a2 * l1 * l2 * k * k);
    }
    double kappa = std::sqrt(-E);
    if (kappa * l > 700.0)
        throw OverflowError("spectral_determinant: sinh overflow at deep negative E");
    return (a2 * std::sinh(kappa * l1) * std::sinh(kappa * l2) -
            kappa * kappa * kappa * std::sinh(kappa * l)) /
           (a2 * l1 * l2 * kappa * kappa);
}

double staircase_exact(const BoxSpec& spec, double E) {
    if (!(E > 0.0))
        throw std::invalid_argument("staircase_exact: E must be positive");
    double k_max = std::sqrt(E);
    auto roots = positive_roots(spec, k_max * 1.05 + 1.0);
    double count = 0;
    for (double k : roots) {
        double Ek = k * k;
        if (std::abs(Ek - E) < 1e-9 * std::max(1.0, E))
            throw EigenvalueProximityError("staircase_exact: E too close to a level");
        if (Ek <= E)
            count += 1.0;
    }
    return count;
}

namespace {

cplx determinant_complex(const BoxSpec& spec, cplx E) {
    double a2 = spec.coupling.abs2();
    double l1 = spec.l1, l2 = spec.l2, l = spec.l;
    if (std::abs(E) < 1e-12)
        return 1.0;
    cplx k = std::sqrt(E);
    return (k * k * k * std::sin(k * l) + a2 * std::sin(k * l1) * std::sin(k * l2)) /
           (a2 * l1 * l2 * k * k);
}

// Accumulate the phase change of Delta along [E0, E1] + i eps, bisecting
// until each step turns by less than ~0.7 rad.
double unwound_phase(const BoxSpec& spec, double E0, double E1, cplx d0, cplx d1, double eps,
                     int depth) {
    double darg = std::arg(d1 / d0);
    if (std::abs(darg) < 0.7 || depth > 40)
        return darg;
    double Em = 0.5 * (E0 + E1);
    cplx dm = determinant_complex(spec, cplx(Em, eps));
    return unwound_phase(spec, E0, Em, d0, dm, eps, depth + 1) +
           unwound_phase(spec, Em, E1, dm, d1, eps, depth + 1);
}

} // namespace

double staircase_from_determinant(const BoxSpec& spec, double E, double eps) {
    if (!(E > 0.0))
        throw std::invalid_argument("staircase_from_determinant: E must be positive");
    int segments = std::max(64, static_cast<int>(4.0 * spec.l * std::sqrt(E)));
    double total = 0.0;
    cplx prev = determinant_complex(spec, cplx(0.0, eps));
    for (int i = 1; i <= segments; ++i) {
        double Ei = E * static_cast<double>(i) / segments;
        cplx di = determinant_complex(spec, cplx(Ei, eps));
        total += unwound_phase(spec, Ei - E / segments, Ei, prev, di, eps, 0);
        prev = di;
    }
    return -total / M_PI;
}

double bare_staircase_exact(const BoxSpec& spec, double E) {
    if (!(E > 0.0))
        return 0.0;
    return std::floor(std::sqrt(E) * spec.l / M_PI);
}

double bare_staircase_series(const BoxSpec& spec, double E, int terms) {
    double k = std::sqrt(E);
    double acc = k * spec.l / M_PI - 0.5;
    for (int n = 1; n <= terms; ++n)
        acc += std::sin(2.0 * n * k * spec.l) / (M_PI * n);
    return acc;
}

} // namespace ibc
