#include "stopdur/numerics.hpp"

#include <cmath>
#include <string>

namespace stopdur {

double digamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("digamma: x must be positive");
    double acc = 0.0;
    while (x < 8.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // Bernoulli series through 1/x^14, plenty once x >= 8
    const double inv = 1.0 / x;
    const double z = inv * inv;
    const double tail =
        z * (1.0 / 12.0 -
        z * (1.0 / 120.0 -
        z * (1.0 / 252.0 -
        z * (1.0 / 240.0 -
        z * (1.0 / 132.0 -
        z * (691.0 / 32760.0 -
        z * (1.0 / 12.0)))))));
    return acc + std::log(x) - 0.5 * inv - tail;
}

double trigamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("trigamma: x must be positive");
    double acc = 0.0;
    while (x < 8.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double z = inv * inv;
    const double tail =
        1.0 / 6.0 -
        z * (1.0 / 30.0 -
        z * (1.0 / 42.0 -
        z * (1.0 / 30.0 -
        z * (5.0 / 66.0 -
        z * (691.0 / 2730.0 -
        z * (7.0 / 6.0))))));
    return acc + inv * (1.0 + 0.5 * inv) + inv * z * tail;
}

double harmonic(long long n) {
    if (n < 0)
        throw std::domain_error("harmonic: n must be >= 0");
    double h = 0.0;
    for (long long j = n; j >= 1; --j)
        h += 1.0 / static_cast<double>(j);
    return h;
}

double find_root(const std::function<double(double)>& f, root_bracket b) {
    if (!(b.lo < b.hi))
        throw std::invalid_argument("find_root: bracket is empty");
    double flo = f(b.lo);
    double fhi = f(b.hi);
    if (flo == 0.0) return b.lo;
    if (fhi == 0.0) return b.hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("find_root: no sign change over bracket");

    double lo = b.lo, hi = b.hi;
    for (int it = 0; it < b.max_iter; ++it) {
        const double width = hi - lo;
        if (width <= b.tol)
            return 0.5 * (lo + hi);
        double x = 0.5 * (lo + hi);
        // secant proposal; only taken when clearly interior
        const double denom = fhi - flo;
        if (denom != 0.0) {
            const double xs = lo - flo * width / denom;
            if (xs > lo + 0.01 * width && xs < hi - 0.01 * width)
                x = xs;
        }
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (std::isnan(fx))
            throw numerical_error("find_root: function returned NaN");
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    throw numerical_error("find_root: no convergence after " +
                          std::to_string(b.max_iter) + " iterations");
}

namespace {

struct simpson_state {
    const std::function<double(double)>& f;
    long long budget;
};

double simpson_split(simpson_state& st, double a, double b, double fa,
                     double fm, double fb, double whole, double tol,
                     int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = st.f(lm);
    const double frm = st.f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // insist on at least one split so a symmetric integrand cannot fool the
    // top-level estimate
    if (depth > 0 && std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    if (st.budget <= 0 || depth > 60)
        throw numerical_error("integrate: subdivision limit reached");
    st.budget -= 1;
    const double half = 0.5 * tol;
    return simpson_split(st, a, m, fa, flm, fm, left, half, depth + 1) +
           simpson_split(st, m, b, fm, frm, fb, right, half, depth + 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 quadrature q) {
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a, q);
    if (!(q.abs_tol > 0.0))
        throw std::invalid_argument("integrate: abs_tol must be positive");
    simpson_state st{f, q.max_subdivisions};
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_split(st, a, b, fa, fm, fb, whole, q.abs_tol, 0);
}

} // namespace stopdur
