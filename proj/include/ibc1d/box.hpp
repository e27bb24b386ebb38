#pragma once

#include "ibc1d/single_source.hpp"

#include <span>
#include <vector>

namespace ibc {

struct EigenvalueProximityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dirichlet box [-l1, l2] with one source at the origin.
struct BoxSpec {
    double l1, l2, l; // l = l1 + l2
    Coupling coupling;

    static BoxSpec make(double l1, double l2, cplx c);
};

/// One term of the diffractive-orbit expansion: lengths n0*l + n1*l1 + n2*l2
/// with exact multinomial weight n!/(n0! n1! n2!).
struct OrbitTerm {
    int n0, n1, n2;
    int n; // n0 + n1 + n2 >= 1
    double length;
    double multinomial;
};

struct BoxSpectrum {
    double ground_energy;
    std::vector<double> positive_levels;
};

/// E = -kappa^2 with kappa the unique positive root of
/// kappa^3 = |c|^2 sinh(kappa l1) sinh(kappa l2) / sinh(kappa l).
double box_ground_energy(const BoxSpec& spec);

/// All levels 0 < E <= E_max, from a sign-change census of the pole-free
/// secular function k^3 sin(kl) + |c|^2 sin(k l1) sin(k l2); the census is
/// refined until two successive grids agree.
std::vector<double> box_positive_levels(const BoxSpec& spec, double E_max);

BoxSpectrum box_spectrum(const BoxSpec& spec, double E_max);

/// Green function of the bare Dirichlet box (no source).
cplx box_green_bare(const BoxSpec& spec, cplx E, double x, double y);

/// Sector Green function of the box with source. pole_warning (optional) is
/// set when E sits within ~1e-10 of a with-source eigenvalue.
SectorGreen box_green(const BoxSpec& spec, cplx E, double x, double y,
                      bool* pole_warning = nullptr);

/// Spectral determinant Delta(E) = Delta_b(E) (E - |c|^2 G_b(0,0,E)) l/(|c|^2 l1 l2),
/// Delta_b = sin(kl)/(kl); entire in E with Delta(0) = 1. Removable
/// singularities at sin(kl) = 0 are evaluated through the expanded product.
double spectral_determinant(const BoxSpec& spec, double E);

/// Number of positive levels <= E (the negative level is reported separately
/// by box_ground_energy). Throws EigenvalueProximityError next to a level.
double staircase_exact(const BoxSpec& spec, double E);

/// Diagnostic staircase -(1/pi) Im log Delta(E + i eps) with the phase
/// unwound along the path from 0 to E.
double staircase_from_determinant(const BoxSpec& spec, double E, double eps);

/// Bare Dirichlet staircase, exact count and the periodic-orbit series
/// kl/pi - 1/2 + sum_n sin(2n k l)/(pi n).
double bare_staircase_exact(const BoxSpec& spec, double E);
double bare_staircase_series(const BoxSpec& spec, double E, int terms);

/// The `count` shortest orbit terms (n0,n1,n2) != 0 ordered by length,
/// ties broken lexicographically on (n0,n1,n2).
std::vector<OrbitTerm> enumerate_orbits(const BoxSpec& spec, int count);

/// Trace-formula staircase: kl/pi + arctan(k^3/kappa^3)/pi plus the truncated
/// diffractive-orbit sum.
double staircase_trace_formula(const BoxSpec& spec, double E,
                               std::span<const OrbitTerm> orbits);
double staircase_mean(const BoxSpec& spec, double E);

/// Trace formula over an energy grid; OpenMP-parallel, with a serial
/// reference used by the tests and the benchmark.
std::vector<double> staircase_trace_grid(const BoxSpec& spec, std::span<const double> E,
                                         std::span<const OrbitTerm> orbits);
std::vector<double> staircase_trace_grid_serial(const BoxSpec& spec,
                                                std::span<const double> E,
                                                std::span<const OrbitTerm> orbits);

} // namespace ibc
