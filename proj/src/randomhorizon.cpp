#include "stopdur/randomhorizon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "stopdur/numerics.hpp"

namespace stopdur {

namespace {

void check_count(int n) {
    if (n < 1)
        throw std::invalid_argument("prior: n must be >= 1");
}

void check_prob(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("p must lie in (0, 1)");
}

void check_stage(const prior_tail& prior, int k) {
    if (k < 1 || k > prior.n)
        throw std::invalid_argument("stage out of range: " + std::to_string(k));
}

// Horner over m = n-k .. 0 of (pi_{k+m}/pi_k) x^m, then / n. No input
// checks so grid engines can evaluate at x = 0 (the continuous limit 1/n
// for the leading term).
double stop_payoff_raw(const prior_tail& prior, int k, double x) {
    double acc = 0.0;
    for (int m = prior.n - k; m >= 0; --m)
        acc = acc * x + prior.pi[k + m - 1] / prior.pi[k - 1];
    return acc / prior.n;
}

double continue_payoff_raw(const prior_tail& prior, int k, double x) {
    const int n = prior.n;
    double tot = 0.0;
    double xp = 1.0; // x^{i-k-1}
    for (int i = k + 1; i <= n; ++i) {
        // int_x^1 of the stage-i stop payoff, term by term
        double j = 0.0, xm = x;
        for (int m = 0; m <= n - i; ++m) {
            j += prior.pi[i + m - 1] / prior.pi[i - 1] * (1.0 - xm) / (m + 1);
            xm *= x;
        }
        tot += prior.pi[i - 1] / prior.pi[k - 1] * xp * j / n;
        xp *= x;
    }
    return tot;
}

std::vector<double> graded_nodes(int g) {
    // same grading as the fixed-horizon engines: dense near x = 1
    std::vector<double> x(g + 1);
    for (int i = 0; i <= g; ++i) {
        const double t = 1.0 - static_cast<double>(i) / g;
        x[i] = 1.0 - t * t * t;
    }
    x[0] = 0.0;
    x[g] = 1.0;
    return x;
}

} // namespace

prior_tail degenerate_prior(int n) {
    check_count(n);
    return {std::vector<double>(n, 1.0), n};
}

prior_tail uniform_prior(int n) {
    check_count(n);
    prior_tail out{std::vector<double>(n), n};
    for (int k = 1; k <= n; ++k)
        out.pi[k - 1] = static_cast<double>(n - k + 1) / n;
    return out;
}

prior_tail truncated_geometric_prior(double p, int n) {
    check_count(n);
    check_prob(p);
    const double q = 1.0 - p;
    const double qn = std::pow(q, n);
    prior_tail out{std::vector<double>(n), n};
    for (int k = 1; k <= n; ++k)
        out.pi[k - 1] = (std::pow(q, k - 1) - qn) / (1.0 - qn);
    return out;
}

prior_tail censored_geometric_prior(double p, int n) {
    check_count(n);
    check_prob(p);
    const double q = 1.0 - p;
    prior_tail out{std::vector<double>(n), n};
    for (int k = 1; k <= n; ++k)
        out.pi[k - 1] = std::pow(q, k - 1);
    return out;
}

void validate_prior(const prior_tail& prior) {
    if (prior.n < 1 || prior.pi.size() != static_cast<std::size_t>(prior.n))
        throw std::invalid_argument("prior: size does not match n");
    if (std::fabs(prior.pi[0] - 1.0) > 1e-12)
        throw std::invalid_argument("prior: pi_1 must be 1");
    for (int i = 1; i < prior.n; ++i)
        if (prior.pi[i] > prior.pi[i - 1] + 1e-15)
            throw std::invalid_argument("prior: tail must be non-increasing");
    if (prior.pi[prior.n - 1] <= 0.0)
        throw std::invalid_argument("prior: pi_n must be positive");
}

double rh_stop_payoff(const prior_tail& prior, int k, double x) {
    validate_prior(prior);
    check_stage(prior, k);
    if (x <= 0.0 || x > 1.0)
        throw std::invalid_argument("rh_stop_payoff: x must lie in (0, 1]");
    return stop_payoff_raw(prior, k, x);
}

double rh_continue_payoff(const prior_tail& prior, int k, double x) {
    validate_prior(prior);
    check_stage(prior, k);
    if (x < 0.0 || x > 1.0)
        throw std::invalid_argument("rh_continue_payoff: x must lie in [0, 1]");
    return continue_payoff_raw(prior, k, x);
}

std::vector<double> rh_thresholds(const prior_tail& prior) {
    validate_prior(prior);
    const int n = prior.n;
    std::vector<double> th(n, 0.0);
    for (int k = 1; k <= n; ++k) {
        auto f = [&prior, k](double x) {
            return stop_payoff_raw(prior, k, x) -
                   continue_payoff_raw(prior, k, x);
        };
        // coarse scan for the last sign change, then polish
        const int scan = 256;
        double lo = -1.0, hi = -1.0;
        double xp = 1e-9, fp = f(xp);
        for (int i = 1; i <= scan; ++i) {
            const double xc = 1e-9 + (1.0 - 1e-9) * i / scan;
            const double fc = f(xc);
            if ((fp < 0.0) != (fc < 0.0)) {
                lo = xp;
                hi = xc;
            }
            xp = xc;
            fp = fc;
        }
        if (lo >= 0.0)
            th[k - 1] = find_root(f, {lo, hi, 1e-13});
    }
    return th;
}

double rh_policy_value(const prior_tail& prior,
                       const std::vector<double>& thresholds, int grid_size) {
    validate_prior(prior);
    const int n = prior.n;
    if (thresholds.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("rh_policy_value: one threshold per stage");
    if (grid_size < 64)
        throw std::invalid_argument("rh_policy_value: grid too small");
    const int g = grid_size;
    const auto x = graded_nodes(g);
    std::vector<double> w(g + 1, 0.0), wn(g + 1), skv(g + 1), phi(g + 1);
    for (int k = n - 1; k >= 0; --k) {
        const double a = thresholds[k];
        for (int i = 0; i <= g; ++i) {
            skv[i] = stop_payoff_raw(prior, k + 1, x[i]);
            phi[i] = x[i] >= a ? skv[i] : w[i];
        }
        const double ratio = k >= 1 ? prior.pi[k] / prior.pi[k - 1] : 1.0;
        double acc = 0.0;
        wn[g] = ratio * w[g];
        for (int i = g - 1; i >= 0; --i) {
            double cell = 0.5 * (phi[i] + phi[i + 1]) * (x[i + 1] - x[i]);
            if (x[i] < a && a < x[i + 1]) {
                // split the straddling cell exactly at the threshold
                const double wl =
                    w[i] + (w[i + 1] - w[i]) * (a - x[i]) / (x[i + 1] - x[i]);
                const double sa = stop_payoff_raw(prior, k + 1, a);
                cell = 0.5 * (phi[i] + wl) * (a - x[i]) +
                       0.5 * (sa + skv[i + 1]) * (x[i + 1] - a);
            }
            acc += cell;
            wn[i] = ratio * (x[i] * w[i] + acc);
        }
        w.swap(wn);
    }
    return w[0];
}

geometric_solution geometric_unbounded(double p) {
    check_prob(p);
    const double q = 1.0 - p;
    geometric_solution out;
    if (p <= std::exp(-1.0)) {
        out.threshold = (1.0 - std::exp(1.0) * p) / q;
        out.value = out.threshold / (1.0 - q * out.threshold) -
                    std::log((1.0 - q) / (1.0 - q * out.threshold)) / q;
    } else {
        out.stop_everywhere = true;
        out.value = -std::log(p) / q;
    }
    return out;
}

double geometric_alt_maturity_payoff(double p, double x) {
    check_prob(p);
    const double q = 1.0 - p;
    if (x < 0.0 || q * x >= 1.0)
        throw std::invalid_argument("alt maturity payoff: need 0 <= x < 1/q");
    return q / (1.0 - q * x);
}

double best2_fixed_payoff(int m, double x) {
    if (m < 1)
        throw std::invalid_argument("best2_fixed_payoff: m must be >= 1");
    if (x < 0.0 || x > 1.0)
        throw std::invalid_argument("best2_fixed_payoff: x must lie in [0,1]");
    double acc = 0.0;
    for (int k = m - 1; k >= 1; --k)
        acc = acc * x + 2.0;
    return acc - m * std::pow(x, m - 1);
}

double best2_fixed_payoff_integral(int m, double x) {
    if (m < 1)
        throw std::invalid_argument("best2_fixed_payoff_integral: m >= 1");
    if (x < 0.0 || x > 1.0)
        throw std::invalid_argument("best2_fixed_payoff_integral: bad x");
    double tot = 0.0, xk = x;
    for (int k = 1; k <= m - 1; ++k) {
        tot += 2.0 * (1.0 - xk) / k;
        xk *= x;
    }
    return tot - (1.0 - xk); // xk is x^m here
}

double best2_fixed_gap(int m, double x) {
    double tot = best2_fixed_payoff(m, x);
    double xp = 1.0;
    for (int k = 1; k <= m - 1; ++k) {
        tot -= xp * best2_fixed_payoff_integral(m - k, x);
        xp *= x;
    }
    return tot;
}

double best2_fixed_gap_root(int m) {
    if (m < 1)
        throw std::invalid_argument("best2_fixed_gap_root: m must be >= 1");
    if (m == 1) return 1.0;
    auto f = [m](double x) { return best2_fixed_gap(m, x); };
    if (f(1e-12) >= 0.0) return 0.0;
    return find_root(f, {1e-12, 1.0, 1e-13});
}

double best2_fixed_threshold(int m) {
    if (m < 1)
        throw std::invalid_argument("best2_fixed_threshold: m must be >= 1");
    if (m == 1) return 1.0;
    std::vector<double> h(m, 0.0);
    for (int i = 1; i < m; ++i)
        h[i] = h[i - 1] + 1.0 / i;
    auto f = [m, &h](double x) {
        double s1 = 0.0, s2 = 0.0, s3 = 0.0;
        double xp = 1.0; // x^{k-1}
        for (int k = 1; k <= m; ++k) {
            s1 += xp;
            if (k < m) {
                s2 += xp * h[m - k - 1];
                s3 += xp * x * h[k];
            }
            xp *= x;
        }
        return 3.0 * s1 - 2.0 * m * std::pow(x, m - 1) - 2.0 * s2 + 2.0 * s3;
    };
    if (f(1e-12) >= 0.0) return 0.0;
    return find_root(f, {1e-12, 1.0, 1e-13});
}

double best2_fixed_optimal_value(int n, int grid_size) {
    if (n < 1)
        throw std::invalid_argument("best2_fixed_optimal_value: n >= 1");
    if (grid_size < 64)
        throw std::invalid_argument("best2_fixed_optimal_value: grid too small");
    const int g = grid_size;
    const auto x = graded_nodes(g);
    std::vector<double> c(g + 1, 0.0), cn(g + 1);
    for (int m = 1; m <= n; ++m) {
        double acc = 0.0;
        double hi = std::max(best2_fixed_payoff(m, x[g]), c[g]);
        cn[g] = c[g];
        for (int i = g - 1; i >= 0; --i) {
            const double lo = std::max(best2_fixed_payoff(m, x[i]), c[i]);
            acc += 0.5 * (lo + hi) * (x[i + 1] - x[i]);
            cn[i] = x[i] * c[i] + acc;
            hi = lo;
        }
        c.swap(cn);
    }
    return c[0];
}

double best2_fixed_policy_value(int n, int grid_size) {
    if (n < 1)
        throw std::invalid_argument("best2_fixed_policy_value: n >= 1");
    if (grid_size < 64)
        throw std::invalid_argument("best2_fixed_policy_value: grid too small");
    const int g = grid_size;
    const auto x = graded_nodes(g);
    std::vector<double> w(g + 1, 0.0), wn(g + 1), uv(g + 1), phi(g + 1);
    for (int m = 1; m <= n; ++m) {
        const double a = best2_fixed_gap_root(m);
        for (int i = 0; i <= g; ++i) {
            uv[i] = best2_fixed_payoff(m, x[i]);
            phi[i] = x[i] >= a ? uv[i] : w[i];
        }
        double acc = 0.0;
        wn[g] = w[g];
        for (int i = g - 1; i >= 0; --i) {
            double cell = 0.5 * (phi[i] + phi[i + 1]) * (x[i + 1] - x[i]);
            if (x[i] < a && a < x[i + 1]) {
                const double wl =
                    w[i] + (w[i + 1] - w[i]) * (a - x[i]) / (x[i + 1] - x[i]);
                const double ua = best2_fixed_payoff(m, a);
                cell = 0.5 * (phi[i] + wl) * (a - x[i]) +
                       0.5 * (ua + uv[i + 1]) * (x[i + 1] - a);
            }
            acc += cell;
            wn[i] = x[i] * w[i] + acc;
        }
        w.swap(wn);
    }
    return w[0];
}

double best2_geometric_mu() {
    return find_root(
        [](double mu) { return 2.0 * std::log(mu) + 2.0 / mu - 3.0; },
        {2.0, 5.0, 1e-14});
}

double best2_geometric_payoff(double p, double x) {
    check_prob(p);
    if (x < 0.0 || x > 1.0)
        throw std::invalid_argument("best2_geometric_payoff: bad x");
    const double q = 1.0 - p;
    const double d = 1.0 - q * x;
    return 2.0 * q / d - q * (1.0 - q) / (d * d);
}

best2_geometric_solution best2_geometric(double p) {
    check_prob(p);
    const double q = 1.0 - p;
    best2_geometric_solution out;
    out.mu_star = best2_geometric_mu();
    out.threshold =
        p >= 1.0 / out.mu_star ? 0.0 : (out.mu_star * p - 1.0) / (p - 1.0);
    auto antider = [p, q](double y) {
        return -2.0 * std::log(1.0 - q * y) - p / (1.0 - q * y);
    };
    out.tail_integral = antider(1.0) - antider(out.threshold);
    out.stop_payoff = q * out.tail_integral / (1.0 - q * out.threshold);
    out.value = out.threshold * out.stop_payoff + out.tail_integral;
    return out;
}

best2_payoff_set best2_payoffs(const best2_state& state) {
    if (state.s * state.t <= 0.0)
        throw std::invalid_argument("best2_payoffs: s*t must be positive");
    if (state.alpha < 0.0 || state.t > state.s + 1e-12 ||
        state.s > 1.0 + 1e-12 || state.t < 1.0 / (1.0 + state.alpha) - 1e-12)
        throw std::invalid_argument("best2_payoffs: state out of range");
    const double lg = std::log(state.s * state.t);
    best2_payoff_set out;
    out.stop_best = state.alpha * state.s * (2.0 - state.s);
    out.stop_second = state.alpha * state.t;
    out.one_step = state.alpha * state.t * (state.s - 1.0 - lg);
    return out;
}

double best2_reduction_threshold(double p) {
    check_prob(p);
    // on the diagonal t = s the keep-best margin factors as
    // alpha s (3 - 2s + 2 ln s); its root is 1/mu_star
    const double s_star = find_root(
        [](double s) { return 3.0 - 2.0 * s + 2.0 * std::log(s); },
        {0.05, 1.0, 1e-14});
    if (p >= s_star) return 0.0;
    return (1.0 - p / s_star) / (1.0 - p);
}

} // namespace stopdur
