#pragma once

#include <vector>

#include "stopdur/rng.hpp"

namespace stopdur {

// What counts as a candidate at the moment of stopping and when the stopped
// item loses its status. "best" tracks the relatively best item, the
// "or_second" variants track membership in the current top two.
enum class maturity_model {
    best_no_recall,
    best_recall,
    best_require_overall_best,
    best_recall_require_overall_best,
    best_or_second_no_recall,
    best_or_second_stop_at_best_only,
};

// Rank-observation conventions differ between the two regimes:
//  - rank data (no information): rank 1 is the best item and numerically
//    smaller values are better, so Y_k = #{i <= k : X_i <= X_k},
//  - value data (full information): values live in [0,1] and larger is
//    better.

// Y_k for every k, counting the item itself.
std::vector<int> relative_ranks(const std::vector<double>& sample);

// rank of item k within the first j observations, j >= k
int running_rank(const std::vector<double>& sample, int k, int j);

// How long the item selected at `stop` keeps its status, in observations,
// counting the stopping stage itself. An item that keeps it through the end
// earns n + 1 - stop. The require_overall_best variants pay zero unless the
// item survives to the end. Throws std::invalid_argument when the item at
// `stop` is not a candidate for the chosen model.
int duration_no_info(const std::vector<double>& sample, int stop,
                     maturity_model model);

// Same duration for observed values (larger is better), horizon explicit so
// callers can truncate a longer sample path.
int duration_full_info(const std::vector<double>& values, int stop,
                       maturity_model model, int horizon);

// Law of the stage T at which an item of current rank r (1 or 2) at stage i
// leaves the top two. Returned vector covers T = i+1, ..., n, n+1, where the
// final entry is the probability of surviving the whole horizon. r = 2
// requires i >= 2.
std::vector<double> maturity_pmf_best2(int n, int i, int r);

// geometric horizon on {1, 2, ...} with success parameter p
long long sample_horizon(double p, rng_stream& gen,
                         long long cap = 10'000'000);

// Exact optimal expected duration divided by n, maximizing over every
// stopping rule adapted to the relative ranks. Iterates all n! orders, so n
// is capped at 10; beyond that use the dynamic-programming solvers.
double enumerate_optimal_noinfo(int n, maturity_model model);

} // namespace stopdur
