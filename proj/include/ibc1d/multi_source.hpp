#pragma once

#include "ibc1d/single_source.hpp"

#include <vector>

namespace ibc {

struct NoBoundStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResonanceDenominatorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// n sources at strictly increasing positions with complex couplings.
struct SourceArray {
    std::vector<double> positions;
    std::vector<cplx> couplings;

    static SourceArray make(std::vector<double> positions, std::vector<cplx> couplings);
    size_t size() const { return positions.size(); }
};

/// Ground state for n sources: phi1(x) = sum_i a_i e^{-kappa|x - x_i|},
/// kappa the (largest) root of 2 kappa^3 = sum_{ij} conj(c_i) c_j e^{-kappa|x_i-x_j|}.
struct MultiGroundState {
    double kappa;
    double energy;
    cplx phi0;
    std::vector<cplx> amplitudes;
    int secular_root_count; // > 1 flags additional negative levels found by the scan

    cplx phi1(const SourceArray& s, double x) const;
};

struct MultiScatteringState {
    double k;
    cplx phi0;
    std::vector<cplx> b;

    cplx phi1(const SourceArray& s, double x) const;
};

MultiGroundState ground_state_multi(const SourceArray& sources);

/// Two-source ground state energy E(R); R = 0 handled via the combined
/// coupling c1 + c2 (throws NoBoundStateError when it vanishes).
double interaction_energy(cplx c1, cplx c2, double R);

/// Slope of the small-separation linear (one-dimensional Coulomb) regime,
/// (conj(c1) c2 + conj(c2) c1)/3.
double coulomb_slope(cplx c1, cplx c2);

MultiScatteringState scattering_state_multi(const SourceArray& sources, double k);

/// Net reflection/transmission amplitudes read off the scattering state at
/// x -> -inf / +inf; |r|^2 + |t|^2 = 1 for every configuration.
struct ReflectionTransmission {
    cplx r, t;
};
ReflectionTransmission net_amplitudes(const SourceArray& sources,
                                      const MultiScatteringState& state);

} // namespace ibc
