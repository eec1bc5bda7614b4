#pragma once

#include <cstdint>
#include <vector>

namespace stopdur {

// Which duration problem a replication plays out. Fixed-horizon models draw
// a fresh iid sequence each time; the unbounded ones sample the horizon from
// its geometric law first and error out past spec.horizon_cap.
enum class sim_model {
    noinfo_bc,            // relatively best item, rank data
    noinfo_bc_recall,     // commit to the best of a fixed prefix
    noinfo_cob,           // duration paid only if the item is overall best
    noinfo_cob_recall,
    noinfo_best2,         // membership in the running top two
    noinfo_discounted,    // infinite stream, geometric discounting
    fidp,                 // observed values, relatively best
    fidp_recall,          // claim the running maximum at any epoch
    bcdp,                 // observed values, must end up overall best
    rh_prior,             // horizon drawn from a tail prior
    rh_geometric,         // memoryless horizon, single cutoff
    rh_geometric_alt,     // same but the final stage is never paid
    best2_fixed,          // top-two duration, fixed horizon, value data
    best2_geometric,      // top-two duration, geometric horizon
    best2_geometric_full, // same model, two-variable stopping sets
};

struct problem_spec {
    sim_model model = sim_model::noinfo_bc;
    int n = 0;                 // horizon for the fixed-N models
    double beta = 0.0;         // discount factor, noinfo_discounted only
    double p = 0.0;            // success parameter of the geometric horizon
    std::vector<double> prior; // rh_prior only: prior[k-1] = P(N >= k)
    long long horizon_cap = 10'000'000;
};

// One policy shape covers every model; fields a model ignores stay at their
// defaults. simulate_policy validates the parts its model reads.
struct threshold_policy {
    int stage = 0;               // rank rules: accept candidates from here on
    int stage_second = 0;        // noinfo_best2: rank 2 accepted after this
    std::vector<double> cutoffs; // value rules: stage k wants >= cutoffs[k-1]
    double cutoff = 0.0;         // unbounded value rules: single level
};

struct simulation_report {
    double mean = 0.0;
    double std_error = 0.0; // sample standard deviation / sqrt(samples)
    long long samples = 0;
    std::uint64_t seed = 0;
};

// Mean payoff of `policy` on `spec` over independent replications, each on
// its own (seed, index) stream. The estimate lands on the same scale as the
// matching solver: normalized durations for the rank models and rh_prior,
// raw durations for the value models. Replications are batched into blocks;
// OpenMP fans the blocks across threads and the block sums are folded in a
// fixed order, so the result is byte-identical to the serial path.
simulation_report simulate_policy(const problem_spec& spec,
                                  const threshold_policy& policy,
                                  long long samples, std::uint64_t seed);

// single-threaded reference used by the tests and the benchmark
simulation_report simulate_policy_serial(const problem_spec& spec,
                                         const threshold_policy& policy,
                                         long long samples,
                                         std::uint64_t seed);

// The optimal rule for `spec` as the matching solver computes it, so the
// CLI and the tests assemble exactly the same policies.
threshold_policy optimal_policy_for(const problem_spec& spec);

} // namespace stopdur
