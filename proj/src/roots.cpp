#include "ibc1d/roots.hpp"

#include <cmath>
#include <limits>

namespace ibc {

double solve_root(const std::function<double(double)>& f, Bracket bracket, double tol) {
    double lo = bracket.lo, hi = bracket.hi;
    if (!(lo < hi))
        throw std::invalid_argument("solve_root: bracket.lo must be < bracket.hi");
    if (!(tol > 0.0))
        throw std::invalid_argument("solve_root: tol must be positive");

    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw NoSignChangeError("solve_root: no sign change across bracket");

    const int cap = 200;
    int it = 0;
    for (; it < cap; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi)
            break; // bracket collapsed to adjacent doubles
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        double scale = std::max({std::fabs(lo), std::fabs(hi), 1.0});
        if (hi - lo <= std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * scale))
            break;
    }
    if (it == cap && hi - lo > tol)
        throw NonConvergenceError("solve_root: iteration cap reached before tolerance");

    // Secant polish within the final bracket.
    if (fhi != flo) {
        double s = hi - fhi * (hi - lo) / (fhi - flo);
        if (s > lo && s < hi)
            return s;
    }
    return 0.5 * (lo + hi);
}

std::vector<Bracket> scan_sign_changes(const std::function<double(double)>& f,
                                       double a, double b, int n) {
    if (!(a < b) || n < 1)
        throw std::invalid_argument("scan_sign_changes: bad interval or count");
    const double nudge = (b - a) * 1e-9;
    auto eval = [&](double& x) {
        double fx = f(x);
        if (fx == 0.0) { // keep brackets strict: step off exact zeros
            x += nudge;
            fx = f(x);
        }
        return fx;
    };
    std::vector<Bracket> out;
    double x_prev = a;
    double f_prev = eval(x_prev);
    for (int i = 1; i <= n; ++i) {
        double x = a + (b - a) * (static_cast<double>(i) / n);
        double fx = eval(x);
        if (fx != 0.0 && f_prev != 0.0 && std::signbit(fx) != std::signbit(f_prev))
            out.push_back({x_prev, x});
        x_prev = x;
        f_prev = fx;
    }
    return out;
}

} // namespace ibc
