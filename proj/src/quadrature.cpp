#include "ibc1d/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace ibc {

namespace {

using cplx = std::complex<double>;

// Gauss-Kronrod 7-15 nodes/weights on [-1,1].
constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const CplxFn& f, double a, double b, long& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    cplx fc = f(c);
    evals += 15;
    cplx result_g = fc * wg[3];
    cplx result_k = fc * wgk[7];
    for (int j = 0; j < 7; ++j) {
        cplx f1 = f(c - h * xgk[j]);
        cplx f2 = f(c + h * xgk[j]);
        result_k += wgk[j] * (f1 + f2);
        if (j % 2 == 1)
            result_g += wg[j / 2] * (f1 + f2);
    }
    result_g *= h;
    result_k *= h;
    double err = std::abs(result_k - result_g);
    return {a, b, result_k, err};
}

} // namespace

QuadResult integrate(const CplxFn& f, double a, double b, double tol,
                     std::span<const double> breakpoints) {
    QuadResult res;
    if (a == b)
        return res;
    double sgn = 1.0;
    if (a > b) {
        std::swap(a, b);
        sgn = -1.0;
    }

    std::vector<double> cuts{a, b};
    for (double bp : breakpoints)
        if (bp > a && bp < b)
            cuts.push_back(bp);
    std::sort(cuts.begin(), cuts.end());

    std::priority_queue<Panel> heap;
    cplx total = 0.0;
    double err_total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        Panel p = gk15(f, cuts[i], cuts[i + 1], res.evals);
        total += p.value;
        err_total += p.error;
        heap.push(p);
    }

    const long max_evals = 2'000'000;
    while (err_total > tol && res.evals < max_evals && !heap.empty()) {
        Panel worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) { // cannot split further
            heap.push(worst);
            break;
        }
        Panel left = gk15(f, worst.a, mid, res.evals);
        Panel right = gk15(f, mid, worst.b, res.evals);
        total += left.value + right.value - worst.value;
        err_total += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    res.value = sgn * total;
    res.error = err_total;
    res.converged = err_total <= tol;
    return res;
}

QuadResult integrate_half_line(const CplxFn& f, double a, double decay_scale, double tol) {
    if (!(decay_scale > 0.0))
        throw std::invalid_argument("integrate_half_line: decay_scale must be positive");
    QuadResult res;
    const double w = 8.0 * decay_scale;
    double lo = a;
    int quiet = 0;
    const int max_panels = 400;
    for (int p = 0; p < max_panels; ++p) {
        QuadResult piece = integrate(f, lo, lo + w, tol / 8.0);
        res.value += piece.value;
        res.error += piece.error;
        res.evals += piece.evals;
        lo += w;
        double mag = std::abs(piece.value);
        if (mag < tol / 8.0) {
            if (++quiet >= 2) {
                // geometric tail bound from the last two panel magnitudes
                res.error += 2.0 * mag;
                res.converged = res.error <= tol;
                return res;
            }
        } else {
            quiet = 0;
        }
    }
    res.converged = false;
    return res;
}

QuadResult integrate_oscillatory_damped(const CplxFn& f, double phase_scale, double tol) {
    double eps0 = 1e-2;
    if (phase_scale > 0.0)
        eps0 = std::min(eps0, phase_scale * phase_scale / 112.0);

    cplx I[3];
    QuadResult res;
    double eps = eps0;
    for (int level = 0; level < 3; ++level) {
        double k_max = std::sqrt(46.0 / eps);
        auto damped = [&](double k) { return f(k) * std::exp(-eps * k * k); };
        double bps[1] = {0.0};
        QuadResult piece = integrate(damped, -k_max, k_max, tol / 8.0, bps);
        I[level] = piece.value;
        res.evals += piece.evals;
        res.error += piece.error;
        eps *= 0.5;
    }

    cplx d1 = I[1] - I[0];
    cplx d2 = I[2] - I[1];
    if (std::abs(d2) < 1e-300 || std::abs(d1) <= std::abs(d2)) {
        res.value = I[2];
        res.error += std::abs(d2);
    } else {
        double r = std::abs(d1) / std::abs(d2);
        cplx extrap = I[2] + d2 / (r - 1.0);
        res.value = extrap;
        res.error += std::abs(extrap - I[2]) * 0.5 + std::abs(d2) / (r - 1.0) * 0.1;
    }
    res.converged = res.error <= tol;
    return res;
}

} // namespace ibc
