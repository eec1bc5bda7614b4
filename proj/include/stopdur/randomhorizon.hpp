#pragma once

#include <vector>

namespace stopdur {

// Horizon prior expressed through tail probabilities: pi[k-1] = P(N >= k)
// for k = 1..n. Needs pi_1 = 1, non-increasing entries, pi_n > 0.
struct prior_tail {
    std::vector<double> pi;
    int n = 0;
};

prior_tail degenerate_prior(int n);
prior_tail uniform_prior(int n);
prior_tail truncated_geometric_prior(double p, int n);
prior_tail censored_geometric_prior(double p, int n);
void validate_prior(const prior_tail& prior);

// expected scaled duration when stopping at stage k on a running maximum x
double rh_stop_payoff(const prior_tail& prior, int k, double x);
// value of passing the current candidate and stopping at the next one
double rh_continue_payoff(const prior_tail& prior, int k, double x);
// per-stage thresholds a*_k; zero where stopping always wins
std::vector<double> rh_thresholds(const prior_tail& prior);
// expected payoff of the threshold rule, backward grid recursion
double rh_policy_value(const prior_tail& prior,
                       const std::vector<double>& thresholds,
                       int grid_size = 2048);

struct geometric_solution {
    bool stop_everywhere = false;
    double threshold = 0.0;
    double value = 0.0;
};

// memoryless horizon, duration of the relatively best observation
geometric_solution geometric_unbounded(double p);
// maturity variant that does not count the stopping stage; the optimal
// threshold is unchanged and the value picks up a factor q
double geometric_alt_maturity_payoff(double p, double x);

// --- duration of the best or the second best, fixed number of stages ---

// stop payoff with m stages to go; negative when stopping is premature
double best2_fixed_payoff(int m, double x);
// int_x^1 of the stop payoff, closed polynomial form
double best2_fixed_payoff_integral(int m, double x);
// stop-now minus one-more-step gap; the one-step rule stops where >= 0
double best2_fixed_gap(int m, double x);
double best2_fixed_gap_root(int m);
// root of the five-term threshold equation; 1 at m = 1 (never stop on
// the final observation). Differs from the gap root for m >= 5.
double best2_fixed_threshold(int m);
double best2_fixed_optimal_value(int n, int grid_size = 4096);
// value of the one-step rule with gap-root thresholds
double best2_fixed_policy_value(int n, int grid_size = 4096);

// --- duration of the best or the second best, geometric horizon ---

struct best2_geometric_solution {
    double mu_star = 0.0;
    double threshold = 0.0;     // stop at any new maximum >= threshold
    double value = 0.0;
    double stop_payoff = 0.0;   // payoff at the threshold; equals the
                                // continuation value there (smooth fit)
    double tail_integral = 0.0; // int_threshold^1 of the stop payoff
};

double best2_geometric_mu();
double best2_geometric_payoff(double p, double x);
best2_geometric_solution best2_geometric(double p);

// two-variable state (best s, second best t) after the memoryless
// transform; alpha = q/p carries the scale
struct best2_state {
    double s = 1.0;
    double t = 1.0;
    double alpha = 1.0;
};

struct best2_payoff_set {
    double stop_best = 0.0;
    double stop_second = 0.0;
    double one_step = 0.0;
};

best2_payoff_set best2_payoffs(const best2_state& state);
// threshold recovered from the two-variable analysis; matches
// best2_geometric(p).threshold
double best2_reduction_threshold(double p);

} // namespace stopdur
