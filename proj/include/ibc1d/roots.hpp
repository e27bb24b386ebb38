#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace ibc {

struct NoSignChangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Interval expected to bracket a sign change of the target function.
struct Bracket {
    double lo;
    double hi;
};

/// Deterministic bracketed root find: bisection to the requested width,
/// then a secant polish. Iteration cap 200.
double solve_root(const std::function<double(double)>& f, Bracket bracket, double tol);

/// All sign-change brackets of f on [a,b], sampled at n+1 equispaced points.
std::vector<Bracket> scan_sign_changes(const std::function<double(double)>& f,
                                       double a, double b, int n);

} // namespace ibc
