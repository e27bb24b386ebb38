#include "ibc1d/box.hpp"

#include "ibc1d/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace ibc {

namespace {

double multinomial_weight(int n0, int n1, int n2) {
    int n = n0 + n1 + n2;
    if (n > 64) {
        // beyond the exact-integer range; amplitudes there are negligible anyway
        return std::exp(std::lgamma(n + 1.0) - std::lgamma(n0 + 1.0) -
                        std::lgamma(n1 + 1.0) - std::lgamma(n2 + 1.0));
    }
    unsigned __int128 acc = 1;
    int denom[3] = {n0, n1, n2};
    int next = 1;
    for (int d = 0; d < 3; ++d) {
        for (int j = 1; j <= denom[d]; ++j) {
            acc = acc * static_cast<unsigned>(next++);
            acc /= static_cast<unsigned>(j);
        }
    }
    return static_cast<double>(acc);
}

} // namespace

std::vector<OrbitTerm> enumerate_orbits(const BoxSpec& spec, int count) {
    if (count < 1)
        throw std::invalid_argument("enumerate_orbits: count must be >= 1");

    double volume = 6.0 * spec.l * spec.l1 * spec.l2;
    double lambda = std::cbrt(volume * count) + spec.l;

    std::vector<OrbitTerm> terms;
    for (int attempt = 0; attempt < 40; ++attempt) {
        terms.clear();
        for (int n0 = 0; n0 * spec.l <= lambda; ++n0) {
            double rem0 = lambda - n0 * spec.l;
            for (int n1 = 0; n1 * spec.l1 <= rem0; ++n1) {
                double rem1 = rem0 - n1 * spec.l1;
                for (int n2 = 0; n2 * spec.l2 <= rem1; ++n2) {
                    if (n0 == 0 && n1 == 0 && n2 == 0)
                        continue;
                    OrbitTerm t;
                    t.n0 = n0;
                    t.n1 = n1;
                    t.n2 = n2;
                    t.n = n0 + n1 + n2;
                    t.length = n0 * spec.l + n1 * spec.l1 + n2 * spec.l2;
                    t.multinomial = multinomial_weight(n0, n1, n2);
                    terms.push_back(t);
                }
            }
        }
        if (static_cast<int>(terms.size()) >= count)
            break;
        lambda *= 1.4;
    }
    if (static_cast<int>(terms.size()) < count)
        throw std::runtime_error("enumerate_orbits: enumeration window too small");

    std::sort(terms.begin(), terms.end(), [](const OrbitTerm& a, const OrbitTerm& b) {
        double tol = 1e-12 * std::max(1.0, std::max(a.length, b.length));
        if (std::abs(a.length - b.length) > tol)
            return a.length < b.length;
        if (a.n0 != b.n0) return a.n0 < b.n0;
        if (a.n1 != b.n1) return a.n1 < b.n1;
        return a.n2 < b.n2;
    });
    terms.resize(count);
    return terms;
}

double staircase_mean(const BoxSpec& spec, double E) {
    double k = std::sqrt(E);
    double kap = spec.coupling.kappa;
    return k * spec.l / M_PI + std::atan(std::pow(k / kap, 3)) / M_PI;
}

double staircase_trace_formula(const BoxSpec& spec, double E,
                               std::span<const OrbitTerm> orbits) {
    if (!(E > 0.0))
        throw std::invalid_argument("staircase_trace_formula: E must be positive");
    double k = std::sqrt(E);
    double kap = spec.coupling.kappa;
    double theta = std::atan(std::pow(k / kap, 3)); // arctan(k^3/kappa^3)

    double k3 = k * k * k;
    double kap3 = kap * kap * kap;
    cplx b = cplx(0.0, -kap3) / cplx(k3, kap3);

    int max_pow = 0;
    for (auto& t : orbits)
        max_pow = std::max(max_pow, t.n1 + t.n2);
    std::vector<cplx> b_pow(max_pow + 1);
    b_pow[0] = 1.0;
    for (int m = 1; m <= max_pow; ++m)
        b_pow[m] = b_pow[m - 1] * b;

    double osc = 0.0;
    for (auto& t : orbits) {
        double sign = (t.n % 2 == 0) ? 1.0 : -1.0;
        cplx amp = sign / (M_PI * t.n) * t.multinomial * b_pow[t.n1 + t.n2];
        double phase = 2.0 * k * t.length + 2.0 * t.n0 * theta;
        osc += std::imag(amp * std::exp(cplx(0.0, phase)));
    }
    return k * spec.l / M_PI + theta / M_PI + osc;
}

std::vector<double> staircase_trace_grid_serial(const BoxSpec& spec,
                                                std::span<const double> E,
                                                std::span<const OrbitTerm> orbits) {
    std::vector<double> out(E.size());
    for (size_t i = 0; i < E.size(); ++i)
        out[i] = staircase_trace_formula(spec, E[i], orbits);
    return out;
}

std::vector<double> staircase_trace_grid(const BoxSpec& spec, std::span<const double> E,
                                         std::span<const OrbitTerm> orbits) {
    std::vector<double> out(E.size());
    parallel_for(static_cast<std::ptrdiff_t>(E.size()), [&](std::ptrdiff_t i) {
        out[i] = staircase_trace_formula(spec, E[i], orbits);
    });
    return out;
}

} // namespace ibc
