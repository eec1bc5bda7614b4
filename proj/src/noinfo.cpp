#include "stopdur/noinfo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stopdur/numerics.hpp"

namespace stopdur {

double transition_prob(int a, int n, int r, int s) {
    if (a < 1 || n < 1)
        throw std::invalid_argument("transition_prob: need a >= 1 and n >= 1");
    if (r == no_candidate)
        return s == no_candidate ? 1.0 : 0.0;
    if (r < 1 || r > n)
        throw std::invalid_argument("transition_prob: source stage out of range");

    if (s == no_candidate) {
        double arrive = 0.0;
        for (int t = r + 1; t <= n; ++t) {
            const int ranks_at_t = std::min(t, a);
            arrive += ranks_at_t * transition_prob(a, n, r, t);
        }
        return 1.0 - arrive;
    }

    if (s <= r)
        throw std::invalid_argument(
            "transition_prob: target stage must exceed source stage");
    if (s > n)
        throw std::invalid_argument("transition_prob: target stage beyond horizon");

    // while fewer than a items have been seen every next item is a candidate
    if (r < a)
        return s == r + 1 ? 1.0 / s : 0.0;

    double num = 1.0, den = 1.0;
    for (int t = 0; t < a; ++t) num *= static_cast<double>(r - t);
    for (int t = 0; t <= a; ++t) den *= static_cast<double>(s - t);
    return num / den;
}

double phi_best2(int n, int k, int r) {
    if (n < 1 || k < 1 || k > n)
        throw std::invalid_argument("phi_best2: need 1 <= k <= n");
    if (r < 1 || r > k)
        throw std::invalid_argument("phi_best2: rank r impossible at stage k");
    const double dn = n, dk = k;
    if (r == 1)
        return dk / (dn * dn) *
               (1.0 + dk - dn + 2.0 * dn * (harmonic(n - 1) - harmonic(k - 1)));
    if (r == 2)
        return dk * (dn - dk + 1.0) / (dn * dn);
    return 0.0; // already outside the top two, nothing to keep
}

double t_phi_best2(int n, int k) {
    if (n < 1 || k < 1 || k > n)
        throw std::invalid_argument("t_phi_best2: need 1 <= k <= n");
    const double dn = n, dk = k;
    return 2.0 * dk / (dn * dn) *
           (dk - dn + dn * (harmonic(n - 1) - harmonic(k - 1)));
}

backward_result backward_induction_noinfo(
    int n, const std::vector<int>& candidate_ranks,
    const std::function<double(int, int)>& phi) {
    if (n < 1)
        throw std::invalid_argument("backward_induction_noinfo: n must be >= 1");
    if (candidate_ranks.empty())
        throw std::invalid_argument(
            "backward_induction_noinfo: candidate set is empty");
    std::vector<int> ranks = candidate_ranks;
    std::sort(ranks.begin(), ranks.end());
    if (ranks.front() < 1 || ranks.back() > n ||
        std::adjacent_find(ranks.begin(), ranks.end()) != ranks.end())
        throw std::invalid_argument(
            "backward_induction_noinfo: candidate ranks must be distinct in 1..n");

    backward_result res;
    res.w_tilde.assign(n + 2, 0.0);
    for (int k = n; k >= 1; --k) {
        const double cont = res.w_tilde[k + 1];
        double acc = 0.0;
        int cnt = 0;
        for (int r : ranks) {
            if (r > k) break;
            acc += std::max(phi(k, r), cont);
            ++cnt;
        }
        res.w_tilde[k] = (acc + (k - cnt) * cont) / k;
    }
    res.value = res.w_tilde[1] / n;
    return res;
}

two_thresholds solve_best2(int n) {
    if (n < 1)
        throw std::invalid_argument("solve_best2: n must be >= 1");
    std::vector<double> h(n + 1, 0.0);
    for (int m = 1; m <= n; ++m) h[m] = h[m - 1] + 1.0 / m;

    // unnormalized payoffs, phi_u(n, r) = 1
    std::vector<double> p1(n + 1, 0.0), p2(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
        p1[k] = k / static_cast<double>(n) *
                (1.0 + k - n + 2.0 * n * (h[n - 1] - h[k - 1]));
        p2[k] = k * (n - k + 1.0) / n;
    }

    std::vector<double> wt(n + 2, 0.0);
    for (int k = n; k >= 1; --k) {
        const double cont = wt[k + 1];
        if (k >= 2)
            wt[k] = (std::max(p1[k], cont) + std::max(p2[k], cont) +
                     (k - 2) * cont) / k;
        else
            wt[k] = std::max(p1[k], cont);
    }

    two_thresholds out;
    out.value = wt[1] / n;
    out.k1 = n;
    for (int k = 1; k <= n; ++k)
        if (p1[k] >= wt[k + 1]) {
            out.k1 = k;
            break;
        }
    int kappa2 = n + 1;
    for (int k = 2; k <= n; ++k)
        if (p2[k] >= wt[k + 1]) {
            kappa2 = k;
            break;
        }
    out.k2 = kappa2 - 1;
    return out;
}

single_threshold classical_bc_duration(int n, bool recall) {
    if (n < 1)
        throw std::invalid_argument("classical_bc_duration: n must be >= 1");
    std::vector<double> h(n + 1, 0.0);
    for (int m = 1; m <= n; ++m) h[m] = h[m - 1] + 1.0 / m;

    single_threshold out;
    if (recall) {
        // commit at the first stage where the expected extension of holding
        // on stops paying; the value is linear in the hold stage around it
        int k_star = n;
        for (int k = 1; k <= n; ++k)
            if (h[n] - h[k] <= 1.0) {
                k_star = k;
                break;
            }
        out.k_star = k_star;
        out.value = (1.0 + k_star * (h[n] - h[k_star])) / n;
        return out;
    }

    std::vector<double> phi(n + 1, 0.0);
    for (int k = 1; k <= n; ++k)
        phi[k] = k * (h[n - 1] - h[k - 1] + 1.0 / n);
    std::vector<double> wt(n + 2, 0.0);
    for (int k = n; k >= 1; --k)
        wt[k] = (std::max(phi[k], wt[k + 1]) + (k - 1) * wt[k + 1]) / k;
    out.k_star = n;
    for (int k = 1; k <= n; ++k)
        if (phi[k] >= wt[k + 1]) {
            out.k_star = k;
            break;
        }
    out.value = wt[1] / n;
    return out;
}

single_threshold bc_duration_choice_of_best(int n, bool recall) {
    if (n < 1)
        throw std::invalid_argument(
            "bc_duration_choice_of_best: n must be >= 1");
    single_threshold out;
    if (recall) {
        const int l = (n + 1) / 2;
        out.k_star = l;
        out.value = static_cast<double>(l) * (n + 1.0 - l) /
                    (static_cast<double>(n) * n);
        return out;
    }
    std::vector<double> phi(n + 1, 0.0);
    for (int k = 1; k <= n; ++k)
        phi[k] = k * (n + 1.0 - k) / n;
    std::vector<double> wt(n + 2, 0.0);
    for (int k = n; k >= 1; --k)
        wt[k] = (std::max(phi[k], wt[k + 1]) + (k - 1) * wt[k + 1]) / k;
    out.k_star = n;
    for (int k = 1; k <= n; ++k)
        if (phi[k] >= wt[k + 1]) {
            out.k_star = k;
            break;
        }
    out.value = wt[1] / n;
    return out;
}

namespace {

struct discount_tables {
    int trunc = 0;              // series truncated past this index
    std::vector<double> tail;   // tail[j] = sum_{i >= j} beta^i / i
    std::vector<double> h;      // harmonic prefix
    std::vector<double> pow_b;  // beta^j
};

discount_tables build_discount_tables(double beta) {
    if (!(beta > 0.0) || !(beta < 1.0))
        throw std::invalid_argument("discount: beta must be in (0,1)");
    // truncate where the geometric remainder bound beta^J/((1-beta) J)
    // drops below 1e-16
    int j_max = 64;
    double pw = std::pow(beta, 64);
    while (pw / ((1.0 - beta) * j_max) >= 1e-16) {
        pw *= beta;
        ++j_max;
        if (j_max > 50'000'000)
            throw numerical_error("discount: beta too close to 1");
    }
    discount_tables t;
    t.trunc = j_max;
    t.tail.assign(j_max + 2, 0.0);
    t.h.assign(j_max + 1, 0.0);
    t.pow_b.assign(j_max + 1, 0.0);
    t.pow_b[0] = 1.0;
    for (int j = 1; j <= j_max; ++j) {
        t.pow_b[j] = t.pow_b[j - 1] * beta;
        t.h[j] = t.h[j - 1] + 1.0 / j;
    }
    for (int j = j_max; j >= 1; --j)
        t.tail[j] = t.tail[j + 1] + t.pow_b[j] / j;
    return t;
}

double rule_value_from(const discount_tables& t, int r, double beta) {
    if (r < 1)
        throw std::invalid_argument("discount: threshold stage must be >= 1");
    if (r > t.trunc / 2)
        throw std::invalid_argument("discount: threshold stage unreasonably large");
    if (r == 1)
        return (1.0 - beta) * t.tail[1];
    double acc = 0.0;
    for (int j = t.trunc; j >= r; --j)
        acc += t.tail[j] / (j - 1.0);
    return (r - 1.0) * (1.0 - beta) * acc;
}

} // namespace

single_threshold discounted_duration(double beta) {
    const discount_tables t = build_discount_tables(beta);
    // one-stage-look-ahead comparison: accept once the expected gain from
    // waiting for the next candidate drops below the immediate payoff
    int r_star = -1;
    // lead_suffix[j] = sum_{i >= j} (beta^i / i) H_{i-1}
    std::vector<double> lead_suffix(t.trunc + 2, 0.0);
    for (int j = t.trunc; j >= 1; --j)
        lead_suffix[j] = lead_suffix[j + 1] + t.pow_b[j] / j * t.h[j - 1];
    for (int r = 1; r <= t.trunc / 2; ++r) {
        const double stay = lead_suffix[r + 1] - t.h[r - 1] * t.tail[r + 1];
        if (stay <= t.tail[r]) {
            r_star = r;
            break;
        }
    }
    if (r_star < 0)
        throw numerical_error("discounted_duration: no threshold found");
    return {r_star, rule_value_from(t, r_star, beta)};
}

double discounted_rule_value(int r, double beta) {
    const discount_tables t = build_discount_tables(beta);
    return rule_value_from(t, r, beta);
}

} // namespace stopdur
