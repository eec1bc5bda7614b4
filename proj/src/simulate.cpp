#include "stopdur/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "stopdur/fullinfo.hpp"
#include "stopdur/noinfo.hpp"
#include "stopdur/numerics.hpp"
#include "stopdur/process.hpp"
#include "stopdur/randomhorizon.hpp"
#include "stopdur/rng.hpp"

namespace stopdur {

namespace {

// per-run tables shared by every replication, derived once up front
struct sim_context {
    const problem_spec* spec = nullptr;
    const threshold_policy* pol = nullptr;
    std::vector<double> horizon_cdf; // rh_prior: P(N <= k), k = 1..n
    double log_cutoff = 0.0;         // unbounded rules: log of the level
    double q = 0.0;
    double log_beta = 0.0;
    double alpha = 0.0; // best2_geometric_full: q/p scale of the payoffs
};

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

void check_cutoffs(const threshold_policy& pol, int n, const char* who) {
    require(static_cast<int>(pol.cutoffs.size()) == n, who);
    for (double c : pol.cutoffs)
        require(c >= 0.0 && c <= 1.0, who);
}

sim_context validate(const problem_spec& spec, const threshold_policy& pol) {
    sim_context c;
    c.spec = &spec;
    c.pol = &pol;
    require(spec.horizon_cap >= 1, "simulate_policy: horizon_cap must be >= 1");
    switch (spec.model) {
        case sim_model::noinfo_bc:
        case sim_model::noinfo_bc_recall:
        case sim_model::noinfo_cob:
        case sim_model::noinfo_cob_recall:
            require(spec.n >= 1, "simulate_policy: n must be >= 1");
            require(pol.stage >= 1 && pol.stage <= spec.n,
                    "simulate_policy: stage outside 1..n");
            break;
        case sim_model::noinfo_best2:
            require(spec.n >= 1, "simulate_policy: n must be >= 1");
            require(pol.stage >= 1 && pol.stage <= spec.n,
                    "simulate_policy: stage outside 1..n");
            require(pol.stage_second >= 1 && pol.stage_second <= spec.n,
                    "simulate_policy: stage_second outside 1..n");
            break;
        case sim_model::noinfo_discounted:
            require(spec.beta > 0.0 && spec.beta < 1.0,
                    "simulate_policy: beta must be in (0,1)");
            require(pol.stage >= 1, "simulate_policy: stage must be >= 1");
            c.log_beta = std::log(spec.beta);
            break;
        case sim_model::fidp:
        case sim_model::fidp_recall:
        case sim_model::bcdp:
        case sim_model::best2_fixed:
            require(spec.n >= 1, "simulate_policy: n must be >= 1");
            check_cutoffs(pol, spec.n,
                          "simulate_policy: need one cutoff in [0,1] per stage");
            break;
        case sim_model::rh_prior: {
            const int n = static_cast<int>(spec.prior.size());
            require(n >= 1, "simulate_policy: rh_prior needs a prior");
            validate_prior(prior_tail{spec.prior, n});
            check_cutoffs(pol, n,
                          "simulate_policy: need one cutoff in [0,1] per stage");
            c.horizon_cdf.resize(n);
            for (int k = 1; k <= n; ++k) {
                const double tail_next = k < n ? spec.prior[k] : 0.0;
                c.horizon_cdf[k - 1] = (k > 1 ? c.horizon_cdf[k - 2] : 0.0) +
                                       (spec.prior[k - 1] - tail_next);
            }
            c.horizon_cdf[n - 1] = 1.0; // guard the binary search
            break;
        }
        case sim_model::rh_geometric:
        case sim_model::rh_geometric_alt:
        case sim_model::best2_geometric:
        case sim_model::best2_geometric_full:
            require(spec.p > 0.0 && spec.p < 1.0,
                    "simulate_policy: p must be in (0,1)");
            require(pol.cutoff >= 0.0 && pol.cutoff < 1.0,
                    "simulate_policy: cutoff must lie in [0,1)");
            c.q = 1.0 - spec.p;
            if (pol.cutoff > 0.0) c.log_cutoff = std::log(pol.cutoff);
            c.alpha = c.q / spec.p;
            break;
    }
    return c;
}

// ---- one replication per model, every payoff on the solver's scale ----

double play_noinfo_bc(const sim_context& c, rng_stream& g) {
    const int n = c.spec->n, from = c.pol->stage;
    double mx = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double x = g.next_double();
        if (x <= mx) continue;
        mx = x;
        if (k < from) continue;
        int d = n + 1 - k;
        for (int j = k + 1; j <= n; ++j)
            if (g.next_double() > x) {
                d = j - k;
                break;
            }
        return static_cast<double>(d) / n;
    }
    return 0.0; // the best item arrived before `from`, no candidate left
}

double play_noinfo_bc_recall(const sim_context& c, rng_stream& g) {
    const int n = c.spec->n, commit = c.pol->stage;
    double mx = 0.0;
    for (int k = 1; k <= commit; ++k) mx = std::max(mx, g.next_double());
    int d = n + 1 - commit;
    for (int j = commit + 1; j <= n; ++j)
        if (g.next_double() > mx) {
            d = j - commit;
            break;
        }
    return static_cast<double>(d) / n;
}

double play_noinfo_cob(const sim_context& c, rng_stream& g) {
    const int n = c.spec->n, from = c.pol->stage;
    double mx = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double x = g.next_double();
        if (x <= mx) continue;
        mx = x;
        if (k < from) continue;
        for (int j = k + 1; j <= n; ++j)
            if (g.next_double() > x) return 0.0;
        return static_cast<double>(n + 1 - k) / n;
    }
    return 0.0;
}

double play_noinfo_cob_recall(const sim_context& c, rng_stream& g) {
    const int n = c.spec->n, commit = c.pol->stage;
    double mx = 0.0;
    for (int k = 1; k <= commit; ++k) mx = std::max(mx, g.next_double());
    for (int j = commit + 1; j <= n; ++j)
        if (g.next_double() > mx) return 0.0;
    return static_cast<double>(n + 1 - commit) / n;
}

double play_noinfo_best2(const sim_context& c, rng_stream& g) {
    const int n = c.spec->n, from1 = c.pol->stage,
              after2 = c.pol->stage_second;
    double b1 = 0.0, b2 = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double x = g.next_double();
        int rank;
        if (x > b1) {
            b2 = b1;
            b1 = x;
            rank = 1;
        } else if (x > b2) {
            b2 = x;
            rank = 2;
        } else {
            continue;
        }
        if (rank == 1 ? k < from1 : k <= after2) continue;
        // the item leaves the top two once 3 - rank better values arrive
        const int need = 3 - rank;
        int d = n + 1 - k, seen = 0;
        for (int j = k + 1; j <= n; ++j)
            if (g.next_double() > x && ++seen == need) {
                d = j - k;
                break;
            }
        return static_cast<double>(d) / n;
    }
    return 0.0;
}

double play_noinfo_discounted(const sim_context& c, rng_stream& g) {
    // Record times sampled in closed form: the accepting stage t_rec has
    // P = (r-1)/(j(j-1)) on j >= r, the beating record follows with
    // P = t/(s(s-1)). Payoff depends only on where the status ends.
    const int r = c.pol->stage;
    const double beta = c.spec->beta;
    double t_rec = 1.0;
    if (r > 1)
        t_rec = std::floor((r - 1) / g.next_double_pos()) + 1.0;
    const double t_beat = std::floor(t_rec / g.next_double_pos()) + 1.0;
    return (1.0 - beta) * std::exp((t_beat - 1.0) * c.log_beta) * t_beat;
}

double play_fidp(const sim_context& c, rng_stream& g) {
    const int n = c.spec->n;
    double mx = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double x = g.next_double();
        if (x <= mx) continue;
        mx = x;
        if (x < c.pol->cutoffs[k - 1]) continue;
        int d = n + 1 - k;
        for (int j = k + 1; j <= n; ++j)
            if (g.next_double() > x) {
                d = j - k;
                break;
            }
        return d; // raw duration, same scale as fidp_value
    }
    return 0.0;
}

double play_fidp_recall(const sim_context& c, rng_stream& g) {
    // Claim epochs sit before each remaining observation: with k values seen
    // the bar is cutoffs[k]. A claim earns the stages the held maximum stays
    // best, capped at the horizon itself, and the s <= 2 bars are zero so a
    // path always claims by the final epoch.
    const int n = c.spec->n;
    double mx = 0.0;
    for (int k = 0; k < n; ++k) {
        if (mx >= c.pol->cutoffs[k]) {
            int d = n - k;
            for (int j = k + 1; j <= n; ++j)
                if (g.next_double() > mx) {
                    d = j - k;
                    break;
                }
            return d;
        }
        mx = std::max(mx, g.next_double());
    }
    return 0.0;
}

double play_bcdp(const sim_context& c, rng_stream& g) {
    const int n = c.spec->n;
    double mx = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double x = g.next_double();
        if (x <= mx) continue;
        mx = x;
        if (x < c.pol->cutoffs[k - 1]) continue;
        for (int j = k + 1; j <= n; ++j)
            if (g.next_double() > x) return 0.0;
        return n + 1 - k;
    }
    return 0.0;
}

double play_rh_prior(const sim_context& c, rng_stream& g) {
    const int n = static_cast<int>(c.horizon_cdf.size());
    const double u = g.next_double();
    const int horizon =
        1 + static_cast<int>(std::upper_bound(c.horizon_cdf.begin(),
                                              c.horizon_cdf.end() - 1, u) -
                             c.horizon_cdf.begin());
    double mx = 0.0;
    for (int k = 1; k <= horizon; ++k) {
        const double x = g.next_double();
        if (x <= mx) continue;
        mx = x;
        if (x < c.pol->cutoffs[k - 1]) continue;
        int d = horizon + 1 - k;
        for (int j = k + 1; j <= horizon; ++j)
            if (g.next_double() > x) {
                d = j - k;
                break;
            }
        return static_cast<double>(d) / n;
    }
    return 0.0;
}

double play_rh_geometric(const sim_context& c, rng_stream& g, bool alt) {
    // Everything happens at three closed-form event times: the horizon, the
    // first value above the cutoff, and the first value beating it.
    const long long horizon =
        sample_horizon(c.spec->p, g, c.spec->horizon_cap);
    double stop_at = 1.0;
    if (c.pol->cutoff > 0.0)
        stop_at =
            std::floor(std::log(g.next_double_pos()) / c.log_cutoff) + 1.0;
    if (stop_at > static_cast<double>(horizon)) return 0.0;
    const double x = c.pol->cutoff + (1.0 - c.pol->cutoff) * g.next_double();
    const double beaten_at =
        stop_at + std::floor(std::log(g.next_double_pos()) / std::log(x)) +
        1.0;
    double pay =
        std::min(beaten_at, static_cast<double>(horizon + 1)) - stop_at;
    if (alt && beaten_at > static_cast<double>(horizon)) pay -= 1.0;
    return pay;
}

double play_best2_fixed(const sim_context& c, rng_stream& g) {
    const int n = c.spec->n;
    double mx = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double x = g.next_double();
        if (x <= mx) continue;
        mx = x;
        if (x < c.pol->cutoffs[k - 1]) continue;
        // top-two duration; a never-beaten pick is docked two stages, which
        // is what the stage payoff this model optimizes prices in
        int beats = 0, d = 1;
        for (int j = k + 1; j <= n; ++j) {
            if (g.next_double() > x && ++beats >= 2) break;
            ++d;
        }
        return d - (beats == 0 ? 2.0 : 0.0);
    }
    return 0.0;
}

double play_best2_geometric(const sim_context& c, rng_stream& g) {
    const long long horizon =
        sample_horizon(c.spec->p, g, c.spec->horizon_cap);
    double stop_at = 1.0;
    if (c.pol->cutoff > 0.0)
        stop_at =
            std::floor(std::log(g.next_double_pos()) / c.log_cutoff) + 1.0;
    if (stop_at > static_cast<double>(horizon)) return 0.0;
    const double x = c.pol->cutoff + (1.0 - c.pol->cutoff) * g.next_double();
    const double lx = std::log(x);
    // two independent geometric gaps: first and second arrival above x
    const double gap1 =
        std::floor(std::log(g.next_double_pos()) / lx) + 1.0;
    const double gap2 =
        std::floor(std::log(g.next_double_pos()) / lx) + 1.0;
    const double out_at = stop_at + gap1 + gap2;
    return c.q *
           (std::min(out_at, static_cast<double>(horizon + 1)) - stop_at);
}

double play_best2_geometric_full(const sim_context& c, rng_stream& g) {
    // literal two-variable rule: rank-1 stops on the cutoff region, rank-2
    // stops wherever holding the second best beats one more step
    const double p = c.spec->p, q = c.q;
    const long long horizon = sample_horizon(p, g, c.spec->horizon_cap);
    double best = 0.0, second = 0.0;
    for (long long k = 1; k <= horizon; ++k) {
        const double z = g.next_double();
        int rank;
        if (z > best) {
            second = best;
            best = z;
            rank = 1;
        } else if (z > second) {
            second = z;
            rank = 2;
        } else {
            continue;
        }
        const double s = p / (1.0 - q * best);
        const double t = second > 0.0 ? p / (1.0 - q * second) : p;
        const best2_payoff_set pays = best2_payoffs({s, t, c.alpha});
        const bool stop = rank == 1 ? z >= c.pol->cutoff
                                    : pays.stop_second >= pays.one_step;
        if (!stop) continue;
        const int need = 3 - rank;
        double d = static_cast<double>(horizon + 1 - k);
        int beats = 0;
        for (long long j = k + 1; j <= horizon; ++j)
            if (g.next_double() > z && ++beats == need) {
                d = static_cast<double>(j - k);
                break;
            }
        return q * d;
    }
    return 0.0;
}

double replicate(const sim_context& c, rng_stream& g) {
    switch (c.spec->model) {
        case sim_model::noinfo_bc: return play_noinfo_bc(c, g);
        case sim_model::noinfo_bc_recall: return play_noinfo_bc_recall(c, g);
        case sim_model::noinfo_cob: return play_noinfo_cob(c, g);
        case sim_model::noinfo_cob_recall:
            return play_noinfo_cob_recall(c, g);
        case sim_model::noinfo_best2: return play_noinfo_best2(c, g);
        case sim_model::noinfo_discounted:
            return play_noinfo_discounted(c, g);
        case sim_model::fidp: return play_fidp(c, g);
        case sim_model::fidp_recall: return play_fidp_recall(c, g);
        case sim_model::bcdp: return play_bcdp(c, g);
        case sim_model::rh_prior: return play_rh_prior(c, g);
        case sim_model::rh_geometric: return play_rh_geometric(c, g, false);
        case sim_model::rh_geometric_alt:
            return play_rh_geometric(c, g, true);
        case sim_model::best2_fixed: return play_best2_fixed(c, g);
        case sim_model::best2_geometric: return play_best2_geometric(c, g);
        case sim_model::best2_geometric_full:
            return play_best2_geometric_full(c, g);
    }
    throw std::invalid_argument("simulate_policy: unknown model");
}

simulation_report run(const problem_spec& spec, const threshold_policy& pol,
                      long long samples, std::uint64_t seed, bool parallel) {
    require(samples >= 1, "simulate_policy: samples must be >= 1");
    const sim_context ctx = validate(spec, pol);

    // Fixed-size blocks keep the reduction order independent of the thread
    // schedule: each block owns its slot and the slots are folded in order.
    constexpr long long block = 4096;
    const long long nblocks = (samples + block - 1) / block;
    std::vector<double> sums(nblocks, 0.0), squares(nblocks, 0.0);
    std::atomic<bool> capped{false};

#if defined(STOPDUR_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic) if (parallel)
#else
    (void)parallel;
#endif
    for (long long b = 0; b < nblocks; ++b) {
        if (capped.load(std::memory_order_relaxed)) continue;
        const long long lo = b * block;
        const long long hi = std::min(samples, lo + block);
        double s = 0.0, s2 = 0.0;
        try {
            for (long long r = lo; r < hi; ++r) {
                rng_stream g(seed, static_cast<std::uint64_t>(r));
                const double pay = replicate(ctx, g);
                s += pay;
                s2 += pay * pay;
            }
        } catch (const std::exception&) {
            // only the horizon sampler throws here; surface it after the
            // parallel region instead of unwinding across it
            capped.store(true, std::memory_order_relaxed);
        }
        sums[b] = s;
        squares[b] = s2;
    }
    if (capped.load())
        throw numerical_error(
            "simulate_policy: a replication exceeded the horizon cap");

    double total = 0.0, total_sq = 0.0;
    for (long long b = 0; b < nblocks; ++b) {
        total += sums[b];
        total_sq += squares[b];
    }
    simulation_report report;
    report.samples = samples;
    report.seed = seed;
    report.mean = total / static_cast<double>(samples);
    if (samples > 1) {
        const double ss =
            std::max(total_sq - samples * report.mean * report.mean, 0.0);
        report.std_error = std::sqrt(ss / (samples - 1) / samples);
    }
    return report;
}

} // namespace

simulation_report simulate_policy(const problem_spec& spec,
                                  const threshold_policy& policy,
                                  long long samples, std::uint64_t seed) {
    return run(spec, policy, samples, seed, true);
}

simulation_report simulate_policy_serial(const problem_spec& spec,
                                         const threshold_policy& policy,
                                         long long samples,
                                         std::uint64_t seed) {
    return run(spec, policy, samples, seed, false);
}

threshold_policy optimal_policy_for(const problem_spec& spec) {
    threshold_policy pol;
    switch (spec.model) {
        case sim_model::noinfo_bc:
            pol.stage = classical_bc_duration(spec.n, false).k_star;
            break;
        case sim_model::noinfo_bc_recall:
            pol.stage = classical_bc_duration(spec.n, true).k_star;
            break;
        case sim_model::noinfo_cob:
            pol.stage = bc_duration_choice_of_best(spec.n, false).k_star;
            break;
        case sim_model::noinfo_cob_recall:
            pol.stage = bc_duration_choice_of_best(spec.n, true).k_star;
            break;
        case sim_model::noinfo_best2: {
            const two_thresholds t = solve_best2(spec.n);
            pol.stage = t.k1;
            pol.stage_second = t.k2;
            break;
        }
        case sim_model::noinfo_discounted:
            pol.stage = discounted_duration(spec.beta).k_star;
            break;
        case sim_model::fidp:
            pol.cutoffs.resize(spec.n);
            for (int k = 1; k <= spec.n; ++k)
                pol.cutoffs[k - 1] = fidp_threshold(spec.n - k + 1);
            break;
        case sim_model::fidp_recall:
            pol.cutoffs.resize(spec.n);
            for (int k = 1; k <= spec.n; ++k)
                pol.cutoffs[k - 1] = fidp_recall_threshold(spec.n - k + 1);
            break;
        case sim_model::bcdp:
            pol.cutoffs.resize(spec.n);
            for (int k = 1; k <= spec.n; ++k)
                pol.cutoffs[k - 1] = bcdp_stop_boundary(spec.n - k + 1);
            break;
        case sim_model::rh_prior:
            pol.cutoffs = rh_thresholds(
                prior_tail{spec.prior, static_cast<int>(spec.prior.size())});
            break;
        case sim_model::rh_geometric:
        case sim_model::rh_geometric_alt:
            pol.cutoff = geometric_unbounded(spec.p).threshold;
            break;
        case sim_model::best2_fixed:
            pol.cutoffs.resize(spec.n);
            for (int k = 1; k <= spec.n; ++k)
                pol.cutoffs[k - 1] = best2_fixed_gap_root(spec.n - k + 1);
            break;
        case sim_model::best2_geometric:
        case sim_model::best2_geometric_full:
            pol.cutoff = best2_geometric(spec.p).threshold;
            break;
    }
    return pol;
}

} // namespace stopdur
