#include "ibc1d/multi_source.hpp"

#include "ibc1d/roots.hpp"

#include <algorithm>
#include <cmath>

namespace ibc {

namespace {
constexpr double two_pi = 6.283185307179586476925286766559;
const double sqrt_two_pi = std::sqrt(two_pi);

// S(kappa) = sum_{ij} conj(c_i) c_j exp(-kappa |x_i - x_j|); real since the
// exponential kernel is symmetric.
double secular_rhs(const SourceArray& s, double kappa) {
    double acc = 0.0;
    size_t n = s.size();
    for (size_t i = 0; i < n; ++i) {
        acc += std::norm(s.couplings[i]);
        for (size_t j = i + 1; j < n; ++j) {
            double w = std::exp(-kappa * std::abs(s.positions[i] - s.positions[j]));
            acc += 2.0 * std::real(std::conj(s.couplings[i]) * s.couplings[j]) * w;
        }
    }
    return acc;
}
} // namespace

SourceArray SourceArray::make(std::vector<double> positions, std::vector<cplx> couplings) {
    if (positions.size() != couplings.size() || positions.empty())
        throw std::invalid_argument("SourceArray: positions/couplings size mismatch");
    for (size_t i = 1; i < positions.size(); ++i)
        if (!(positions[i] > positions[i - 1]))
            throw std::invalid_argument("SourceArray: positions must be strictly increasing");
    bool any = false;
    for (auto& c : couplings)
        any = any || std::norm(c) > 0.0;
    if (!any)
        throw ZeroCouplingError("SourceArray: at least one coupling must be nonzero");
    return {std::move(positions), std::move(couplings)};
}

cplx MultiGroundState::phi1(const SourceArray& s, double x) const {
    cplx acc = 0.0;
    for (size_t i = 0; i < s.size(); ++i)
        acc += amplitudes[i] * std::exp(-kappa * std::abs(x - s.positions[i]));
    return acc;
}

cplx MultiScatteringState::phi1(const SourceArray& s, double x) const {
    double ak = std::abs(k);
    cplx acc = std::exp(cplx(0.0, k * x));
    for (size_t i = 0; i < s.size(); ++i)
        acc += b[i] * std::exp(cplx(0.0, ak * std::abs(x - s.positions[i])));
    return acc / sqrt_two_pi;
}

MultiGroundState ground_state_multi(const SourceArray& sources) {
    double sum_c2 = 0.0;
    for (auto& c : sources.couplings)
        sum_c2 += std::norm(c);
    double n = static_cast<double>(sources.size());

    auto f = [&](double kappa) {
        return 2.0 * kappa * kappa * kappa - secular_rhs(sources, kappa);
    };

    double kappa_lo = 1e-9;
    double kappa_hi = std::cbrt(0.5 * sum_c2 * n) + 1.0;
    int expand = 0;
    while (f(kappa_hi) < 0.0 && expand++ < 60)
        kappa_hi *= 2.0;
    if (f(kappa_lo) > 0.0 || f(kappa_hi) < 0.0)
        throw NoBoundStateError("ground_state_multi: no positive secular root");

    // Census for additional roots (possible with mixed-phase couplings).
    auto brackets = scan_sign_changes(f, kappa_lo, kappa_hi, 2000);
    if (brackets.empty())
        brackets.push_back({kappa_lo, kappa_hi});

    MultiGroundState g;
    g.secular_root_count = static_cast<int>(brackets.size());
    double kappa = solve_root(f, brackets.back(), 1e-15); // largest root = ground state
    g.kappa = kappa;
    g.energy = -kappa * kappa;

    // Normalisation: |phi0|^2 (1 + sum_{ij} conj(c_i) c_j e^{-kR}(R + 1/k)/(4k^2)) = 1.
    double overlap = 0.0;
    size_t m = sources.size();
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            double R = std::abs(sources.positions[i] - sources.positions[j]);
            overlap += std::real(std::conj(sources.couplings[i]) * sources.couplings[j]) *
                       std::exp(-kappa * R) * (R + 1.0 / kappa);
        }
    double norm0 = 1.0 / std::sqrt(1.0 + overlap / (4.0 * kappa * kappa));
    g.phi0 = norm0; // phase convention: positive vacuum amplitude
    g.amplitudes.resize(m);
    for (size_t i = 0; i < m; ++i)
        g.amplitudes[i] = -sources.couplings[i] * g.phi0 / (2.0 * kappa);
    return g;
}

double interaction_energy(cplx c1, cplx c2, double R) {
    if (R < 0.0)
        throw std::invalid_argument("interaction_energy: R must be >= 0");
    if (R == 0.0) {
        double a2 = std::norm(c1 + c2);
        if (a2 == 0.0)
            throw NoBoundStateError("interaction_energy: combined coupling vanishes at R = 0");
        return -std::pow(0.5 * a2, 2.0 / 3.0);
    }
    auto s = SourceArray::make({0.0, R}, {c1, c2});
    return ground_state_multi(s).energy;
}

double coulomb_slope(cplx c1, cplx c2) {
    return 2.0 * std::real(std::conj(c1) * c2) / 3.0;
}

MultiScatteringState scattering_state_multi(const SourceArray& sources, double k) {
    if (k == 0.0)
        throw std::invalid_argument("scattering_state_multi: k must be nonzero");
    double ak = std::abs(k);
    size_t n = sources.size();

    cplx coupling_sum = 0.0; // sum_i conj(c_i) e^{i k x_i}
    for (size_t i = 0; i < n; ++i)
        coupling_sum += std::conj(sources.couplings[i]) *
                        std::exp(cplx(0.0, k * sources.positions[i]));

    cplx pair_sum = 0.0; // sum_{ij} conj(c_i) c_j e^{i|k||x_i - x_j|}
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            pair_sum += std::conj(sources.couplings[i]) * sources.couplings[j] *
                        std::exp(cplx(0.0, ak * std::abs(sources.positions[i] -
                                                         sources.positions[j])));

    cplx denom = cplx(0.0, 2.0 * ak * ak * ak) - pair_sum;
    if (std::abs(denom) < 1e-12 * (2.0 * ak * ak * ak + std::abs(pair_sum)))
        throw ResonanceDenominatorError("scattering_state_multi: secular denominator vanishes");

    MultiScatteringState st;
    st.k = k;
    st.phi0 = cplx(0.0, 2.0 * ak) * coupling_sum / (sqrt_two_pi * denom);
    st.b.resize(n);
    for (size_t i = 0; i < n; ++i)
        st.b[i] = sqrt_two_pi * sources.couplings[i] * st.phi0 / cplx(0.0, 2.0 * ak);
    return st;
}

ReflectionTransmission net_amplitudes(const SourceArray& sources,
                                      const MultiScatteringState& state) {
    double ak = std::abs(state.k);
    cplx r = 0.0, t = 1.0;
    for (size_t i = 0; i < sources.size(); ++i) {
        double xi = sources.positions[i];
        if (state.k > 0.0) {
            r += state.b[i] * std::exp(cplx(0.0, ak * xi));
            t += state.b[i] * std::exp(cplx(0.0, -ak * xi));
        } else {
            r += state.b[i] * std::exp(cplx(0.0, -ak * xi));
            t += state.b[i] * std::exp(cplx(0.0, ak * xi));
        }
    }
    return {r, t};
}

} // namespace ibc
