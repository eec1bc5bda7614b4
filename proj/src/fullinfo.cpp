#include "stopdur/fullinfo.hpp"

#include <cmath>
#include <stdexcept>

#include "stopdur/numerics.hpp"

namespace stopdur {

double w_fidp(double x, int s) {
    if (s < 0)
        throw std::invalid_argument("w_fidp: s must be >= 0");
    if (x < 0.0 || x > 1.0)
        throw std::invalid_argument("w_fidp: x must lie in [0,1]");
    if (s == 0) return 0.0;
    if (x == 0.0) return 1.0;
    const double gap = 1.0 - x;
    if (gap < 1e-9) {
        // series around x = 1: s - s(s-1)/2 gap + ...
        const double ds = s;
        return ds * (1.0 - 0.5 * (ds - 1.0) * gap);
    }
    return -std::expm1(s * std::log(x)) / gap;
}

namespace {

std::vector<double> graded_nodes(int g) {
    // packs nodes toward x = 1 where the thresholds accumulate
    std::vector<double> x(g + 1);
    for (int i = 0; i <= g; ++i) {
        const double t = 1.0 - static_cast<double>(i) / g;
        x[i] = 1.0 - t * t * t;
    }
    x[0] = 0.0;
    x[g] = 1.0;
    return x;
}

template <class F>
double gauss3(const F& f, double a, double b) {
    const double m = 0.5 * (a + b);
    const double d = 0.5 * (b - a) * 0.774596669241483377; // sqrt(3/5)
    return 0.5 * (b - a) *
           ((5.0 * f(m - d) + 5.0 * f(m + d)) / 9.0 + 8.0 * f(m) / 9.0);
}

void check_grid_args(int horizon, int grid_size) {
    if (horizon < 1)
        throw std::invalid_argument("value grid: horizon must be >= 1");
    if (grid_size < 64)
        throw std::invalid_argument("value grid: grid_size must be >= 64");
}

// One backward pass of v(x,s) = x v(x,s-1) + int_x^1 max{w(y,s), v(y,s-1)}.
// Cells are classified by the sign of w - v at both ends; mixed cells get
// their crossing located by bisection against the linear interpolant, so
// the continue part stays exact and the stop part keeps Gauss accuracy.
template <class W>
stage_value_grid run_stage_grid(int horizon, int g, const W& w) {
    stage_value_grid out;
    out.horizon = horizon;
    out.x = graded_nodes(g);
    const auto& x = out.x;
    std::vector<double> v(g + 1, 0.0), vnew(g + 1), wn(g + 1);

    for (int s = 1; s <= horizon; ++s) {
        for (int i = 0; i <= g; ++i) wn[i] = w(x[i], s);
        auto ws = [&](double y) { return w(y, s); };
        double acc = 0.0;
        vnew[g] = v[g]; // x = 1: nothing left to integrate
        for (int i = g - 1; i >= 0; --i) {
            const double a = x[i], b = x[i + 1];
            const double da = wn[i] - v[i], db = wn[i + 1] - v[i + 1];
            double cell;
            if (da >= 0.0 && db >= 0.0) {
                cell = gauss3(ws, a, b);
            } else if (da < 0.0 && db < 0.0) {
                cell = 0.5 * (b - a) * (v[i] + v[i + 1]);
            } else {
                const double va = v[i], slope = (v[i + 1] - v[i]) / (b - a);
                auto lin = [&](double y) { return va + slope * (y - a); };
                double lo = a, hi = b;
                double glo = da;
                for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double gm = ws(mid) - lin(mid);
                    if ((gm >= 0.0) == (glo >= 0.0)) {
                        lo = mid;
                        glo = gm;
                    } else {
                        hi = mid;
                    }
                }
                const double c = 0.5 * (lo + hi);
                if (da >= 0.0)
                    cell = gauss3(ws, a, c) +
                           0.5 * (b - c) * (lin(c) + v[i + 1]);
                else
                    cell = 0.5 * (c - a) * (v[i] + lin(c)) +
                           gauss3(ws, c, b);
            }
            acc += cell;
            vnew[i] = x[i] * v[i] + acc;
        }
        v.swap(vnew);
    }
    out.v = v;
    out.value_at_zero = v[0];
    return out;
}

// recall variant: the held best can always be claimed, so the stage value
// is max{w, continuation} pointwise and the integral needs v itself only
template <class W>
stage_value_grid run_recall_grid(int horizon, int g, const W& w) {
    stage_value_grid out;
    out.horizon = horizon;
    out.x = graded_nodes(g);
    const auto& x = out.x;
    std::vector<double> v(g + 1, 0.0), vnew(g + 1);
    for (int s = 1; s <= horizon; ++s) {
        double acc = 0.0;
        vnew[g] = std::max(w(1.0, s), v[g]);
        for (int i = g - 1; i >= 0; --i) {
            acc += 0.5 * (x[i + 1] - x[i]) * (v[i] + v[i + 1]);
            vnew[i] = std::max(w(x[i], s), x[i] * v[i] + acc);
        }
        v.swap(vnew);
    }
    out.v = v;
    out.value_at_zero = v[0];
    return out;
}

double power_series_over_k(double z) {
    // sum_{k>=1} z^k / (k k!)
    double term = z, sum = 0.0;
    for (int k = 1; k <= 80; ++k) {
        sum += term / k;
        term *= z / (k + 1);
        if (std::fabs(term) < 1e-18) break;
    }
    return sum;
}

double ein(double t) {
    // int_0^t (1 - e^{-u})/u du, entire, alternating series
    double term = t, sum = 0.0;
    for (int k = 1; k <= 80; ++k) {
        sum += term / k;
        term *= -t / (k + 1);
        if (std::fabs(term) < 1e-18) break;
    }
    return sum;
}

double e1_scaled(double x) {
    // e^x E_1(x) for x > 0, stable for both tiny and huge arguments
    constexpr double euler = 0.57721566490153286;
    if (x < 1.0) return std::exp(x) * (ein(x) - euler - std::log(x));
    // modified Lentz on E_1's continued fraction
    double b = x + 1.0, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i <= 300; ++i) {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const double del = c * d;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h;
}

} // namespace

stage_value_grid fidp_value(int horizon, int grid_size) {
    check_grid_args(horizon, grid_size);
    return run_stage_grid(horizon, grid_size,
                          [](double y, int s) { return w_fidp(y, s); });
}

stage_value_grid fidp_recall_value(int horizon, int grid_size) {
    check_grid_args(horizon, grid_size);
    return run_recall_grid(horizon, grid_size,
                           [](double y, int s) { return w_fidp(y, s); });
}

stage_value_grid bcdp_value(int horizon, int grid_size) {
    check_grid_args(horizon, grid_size);
    return run_stage_grid(horizon, grid_size, [](double y, int s) {
        return s * std::pow(y, s - 1);
    });
}

double fidp_threshold(int s) {
    if (s < 1)
        throw std::invalid_argument("fidp_threshold: s must be >= 1");
    if (s <= 2) return 0.0;
    auto f = [s](double x) {
        // stop payoff minus the value of taking the next candidate instead
        double rhs = 0.0;
        if (x == 1.0) {
            rhs = 0.0;
        } else {
            // T[m] = sum_{j<=m} (1-x^j)/j built incrementally, then
            // rhs = sum_{i=1}^{s-1} x^{i-1} T[s-i]
            std::vector<double> t(s, 0.0);
            double xj = 1.0;
            for (int j = 1; j <= s - 1; ++j) {
                xj *= x;
                t[j] = t[j - 1] + (1.0 - xj) / j;
            }
            double xi = 1.0;
            for (int i = 1; i <= s - 1; ++i) {
                rhs += xi * t[s - i];
                xi *= x;
            }
        }
        return w_fidp(x, s) - rhs;
    };
    return std::max(0.0, find_root(f, {0.0, 1.0, 1e-12}));
}

double fidp_recall_threshold(int s) {
    if (s < 1)
        throw std::invalid_argument("fidp_recall_threshold: s must be >= 1");
    if (s <= 2) return 0.0;
    auto f = [s](double x) {
        double acc = -1.0, xj = 1.0;
        for (int j = 1; j <= s - 1; ++j) {
            xj *= x;
            acc += (1.0 - xj) / j;
        }
        return acc;
    };
    return find_root(f, {0.0, 1.0, 1e-12});
}

double bcdp_threshold(int s) {
    if (s < 1)
        throw std::invalid_argument("bcdp_threshold: s must be >= 1");
    if (s == 1) return 0.0;
    auto f = [s](double x) {
        return w_fidp(x, s - 1) - s * std::pow(x, s - 1);
    };
    return find_root(f, {0.0, 1.0, 1e-12});
}

double bcdp_stop_boundary(int s) {
    if (s < 1)
        throw std::invalid_argument("bcdp_stop_boundary: s must be >= 1");
    if (s == 1) return 0.0;
    // indifference between stopping now (s x^{s-1}) and stopping at the next
    // candidate instead, sum_{i=1}^{s-1} x^{i-1} (1 - x^{s-i}); hand checks:
    // s=2 gives 1/3, s=3 gives (1+sqrt(21))/10, both equal to the bcdp_value
    // grid crossing
    auto f = [s](double x) {
        return w_fidp(x, s - 1) - (2 * s - 1) * std::pow(x, s - 1);
    };
    return find_root(f, {0.0, 1.0, 1e-12});
}

double asymptotic_z() {
    auto f = [](double z) {
        return integrate(
            [](double t) { return std::exp(t) * (1.0 - ein(t)); }, 0.0, z,
            {1e-12, 1 << 18});
    };
    return find_root(f, {1.0, 3.0, 1e-12});
}

double fidp_recall_asymptote() {
    return find_root([](double z) { return ein(z) - 1.0; }, {0.5, 3.0, 1e-12});
}

double fidp_limit_constant() {
    const double z = asymptotic_z();
    const double a_const = power_series_over_k(z);
    auto outer = [z, a_const](double u) {
        // u int_0^1 e^{z tau}/(1 - u tau) dtau reduced to exponential
        // integrals via w = 1 - u tau
        const double b =
            std::exp(z) * e1_scaled(z * (1.0 - u) / u) - e1_scaled(z / u);
        return std::exp(-z / u) * (a_const + b - 1.0);
    };
    // endpoints: u -> 0 vanishes like e^{-z/u}, u -> 1 is a log singularity
    // whose clipped mass is O(1e-9)
    return integrate(outer, 1e-10, 1.0 - 1e-10, {1e-10, 1 << 20});
}

double bcdp_limit_c() {
    return find_root([](double c) { return std::exp(c) - 1.0 - 2.0 * c; },
                     {1.0, 3.0, 1e-13});
}

double bcdp_limit_value() {
    const double c = bcdp_limit_c();
    auto outer1 = [c](double x) {
        if (x < 1e-8) return 1.0; // limit of the averaged inner integral
        auto inner = [c, x](double y) {
            const double d = 1.0 - y;
            return d <= 0.0 ? 0.0 : std::exp(-c * x / d);
        };
        return integrate(inner, 0.0, x, {1e-11, 1 << 18}) / x;
    };
    const double i1 = integrate(outer1, 0.0, 1.0, {1e-9, 1 << 21});
    auto f2 = [c](double y) {
        return y <= 0.0 ? 0.0 : y * std::exp(-c / y);
    };
    const double i2 = integrate(f2, 0.0, 1.0, {1e-11, 1 << 18});
    return i1 - 2.0 * i2;
}

double bcdp_recall_limit_value() {
    const double c = std::log(2.0);
    double t_hi = 1.0;
    while (std::exp(-c * t_hi) / (c * t_hi) >= 1e-14)
        t_hi += 1.0;
    const double i_c =
        integrate([c](double t) { return std::exp(-c * t) / t; }, 1.0, t_hi,
                  {1e-12, 1 << 20});
    return 0.5 * (1.0 - c) + c * c * i_c;
}

} // namespace stopdur
