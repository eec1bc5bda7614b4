#pragma once

#include <functional>
#include <stdexcept>

namespace stopdur {

// thrown when an iterative scheme gives up (root not converged, quadrature
// out of subdivisions, horizon cap hit). The CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// digamma / trigamma for x > 0, recurrence shift into the asymptotic regime.
// Absolute error is well below 1e-12 over the range the solvers touch.
double digamma(double x);
double trigamma(double x);

// H_n = sum_{j<=n} 1/j, H_0 = 0. Summed smallest term first.
double harmonic(long long n);

struct root_bracket {
    double lo = 0.0;
    double hi = 1.0;
    double tol = 1e-12;
    int max_iter = 200;
};

// bracketing solver, secant step when it stays comfortably interior,
// bisection otherwise. Deterministic for a given f and bracket.
// Throws std::invalid_argument when f(lo), f(hi) have the same sign and
// numerical_error when max_iter is exhausted before the width drops to tol.
double find_root(const std::function<double(double)>& f, root_bracket b);

struct quadrature {
    double abs_tol = 1e-10;
    long long max_subdivisions = 1 << 20;
};

// adaptive Simpson with a global subdivision budget. Left half is always
// refined before the right half, so the arithmetic order is reproducible.
double integrate(const std::function<double(double)>& f, double a, double b,
                 quadrature q = {});

} // namespace stopdur
