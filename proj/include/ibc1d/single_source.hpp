#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ibc {

using cplx = std::complex<double>;

struct ZeroCouplingError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Source coupling constant c with the derived decay rate
/// kappa = (|c|^2/2)^(1/3) and phase, so c = sqrt(2 kappa^3) e^{i phase}.
struct Coupling {
    cplx c;
    double kappa;
    double phase;

    static Coupling make(cplx c);
    double abs2() const { return 2.0 * kappa * kappa * kappa; }
};

/// Bound state of one source on the line: phi1(x) = A e^{-kappa|x|}.
/// Sector weights are |phi0|^2 and A^2/kappa (2/3 and 1/3 in the massless case).
struct GroundState {
    cplx phi0;
    double amplitude; // A
    double kappa;
    double energy;

    cplx phi1(double x) const { return amplitude * std::exp(-kappa * std::abs(x)); }
    double weight_zero() const { return std::norm(phi0); }
    double weight_one() const { return amplitude * amplitude / kappa; }
};

/// Flux-normalised scattering state phi1(x) = (e^{ikx} + b e^{i|k||x|})/sqrt(2 pi).
struct ScatteringState {
    double k;
    cplx b; // reflection amplitude; transmission is 1 + b
    cplx phi0;
    double energy;

    cplx phi1(double x) const;
    cplx dphi1(double x) const; // x != 0
};

/// Four sector components of the resolvent kernel at energy E.
struct SectorGreen {
    cplx g11, g10, g01, g00;
    cplx energy;
    double x, y;
};

/// Four sector components of the time-evolution kernel at time t.
struct SectorKernel {
    cplx k11, k10, k01, k00;
    double t, x, y;
};

/// Truncated-Fock-space state: vacuum amplitude plus a one-particle
/// wavefunction given as a closed-form evaluator.
struct SectorState01 {
    cplx phi0;
    std::function<cplx(double)> phi1;
};

struct FluxBalance {
    double current_jump; // -[j^1]_{0-}^{0+} from one-sided derivatives
    double vacuum_rate;  // d|phi0|^2/dt from the zero-sector equation
};

GroundState ground_state(const Coupling& c);

/// Ground state with zero-point energy M: kappa solves 2k(k^2 - M) = |c|^2,
/// energy = -kappa^2 + M.
GroundState ground_state_massive(const Coupling& c, double M);

ScatteringState scattering_state(const Coupling& c, double k);

/// D = 2ik b_k, the amplitude for annihilation and re-creation at the source.
cplx diffraction_coefficient(const Coupling& c, double k);

/// Retarded Green function; E > 0 uses k = sqrt(E), E < 0 uses k = i sqrt(-E).
SectorGreen green_line(const Coupling& c, double E, double x, double y);

SectorKernel propagator(const Coupling& c, double t, double x, double y);

/// K^{11}(x, y, t) for a column of x values; OpenMP-parallel over x.
std::vector<SectorKernel> propagator_grid(const Coupling& c, double t,
                                          std::span<const double> xs, double y);
std::vector<SectorKernel> propagator_grid_serial(const Coupling& c, double t,
                                                 std::span<const double> xs, double y);

/// Probability flow into the source, evaluated two ways: the jump of the
/// one-particle current across 0 and the zero-sector rate
/// -2 Im(c conj(phi1(0)) phi0). Equal whenever the state satisfies the
/// derivative-jump condition at the source.
FluxBalance flux_balance(const SectorState01& state, const Coupling& c);

SectorState01 to_state(const GroundState& g);
SectorState01 to_state(const ScatteringState& s);
SectorState01 superpose(const SectorState01& a, const SectorState01& b,
                        cplx wa = 1.0, cplx wb = 1.0);

} // namespace ibc
