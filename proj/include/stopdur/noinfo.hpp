#pragma once

#include <functional>
#include <vector>

namespace stopdur {

// sentinel for "no further candidate ever arrives" in the embedded chain
inline constexpr int no_candidate = -1;

// Embedded chain over stages that carry a candidate (an item of relative
// rank <= a). From a candidate at stage r, returns the probability that the
// next candidate arrives at stage s and has one specific rank; multiply by a
// for the total arrival probability. Pass s = no_candidate for the
// absorption mass, r = no_candidate for the absorbing state itself.
double transition_prob(int a, int n, int r, int s);

// Expected normalized duration of keeping top-two status when accepting an
// item of rank r (1 or 2) at stage k of n; zero for ranks beyond 2.
double phi_best2(int n, int k, int r);

// Expected normalized payoff of skipping the candidate at stage k and
// accepting the next one, whatever its rank. Matches the kernel sum
// sum_s transition_prob(2,n,k,s) * (phi(s,1) + phi(s,2)) exactly.
double t_phi_best2(int n, int k);

// Optimal stopping for payoff phi(k, r) on the relative-rank process,
// candidate ranks given explicitly. phi is taken unnormalized (so that
// phi(n, r) = 1 means "status kept for exactly one stage"); `value` is
// w_tilde[1] / n, the expected payoff fraction of the horizon.
struct backward_result {
    std::vector<double> w_tilde; // stage-entry values, indices 1..n+1
    double value = 0.0;
};
backward_result backward_induction_noinfo(
    int n, const std::vector<int>& candidate_ranks,
    const std::function<double(int, int)>& phi);

// thresholds for the top-two duration problem: accept rank-1 candidates
// from stage k1 on, rank-2 candidates from stage k2 + 1 on
struct two_thresholds {
    int k1 = 0;
    int k2 = 0;
    double value = 0.0;
};
two_thresholds solve_best2(int n);

struct single_threshold {
    int k_star = 0;
    double value = 0.0;
};

// duration of the relatively best item, classical best-choice flavor.
// recall = false: stop on relatively best items only, threshold rule from
// stage k_star. recall = true: commit to the best item seen by a fixed
// stage k_star, counting from there.
single_threshold classical_bc_duration(int n, bool recall);

// same, but the duration is paid only when the selected item turns out to
// be the overall best
single_threshold bc_duration_choice_of_best(int n, bool recall);

// geometrically discounted duration of the relatively best item on an
// infinite stream; k_star is the first stage whose candidates are accepted
single_threshold discounted_duration(double beta);

// expected discounted payoff of the rule "accept candidates from stage r"
double discounted_rule_value(int r, double beta);

} // namespace stopdur
