// Times the Monte Carlo kernels: serial reference path vs the OpenMP block
// path. Block sums fold in a fixed order, so the two paths must agree bit
// for bit; the table ends with that check.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "stopdur/simulate.hpp"

#ifdef STOPDUR_HAVE_OPENMP
#include <omp.h>
#endif

using namespace stopdur;

namespace {

struct bench_case {
    std::string name;
    problem_spec spec;
    long long samples;
};

double seconds_for(const problem_spec& spec, const threshold_policy& pol,
                   long long samples, bool parallel, double* mean) {
    const auto t0 = std::chrono::steady_clock::now();
    const simulation_report rep =
        parallel ? simulate_policy(spec, pol, samples, 99)
                 : simulate_policy_serial(spec, pol, samples, 99);
    const auto t1 = std::chrono::steady_clock::now();
    *mean = rep.mean;
    return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main() {
#ifdef STOPDUR_HAVE_OPENMP
    std::printf("openmp enabled, max threads %d\n\n", omp_get_max_threads());
#else
    std::printf("serial build (no openmp)\n\n");
#endif

    std::vector<bench_case> cases;
    auto fixed = [&cases](const char* name, sim_model m, int n,
                          long long samples) {
        problem_spec s;
        s.model = m;
        s.n = n;
        cases.push_back({name, s, samples});
    };
    fixed("noinfo-best2 n=50", sim_model::noinfo_best2, 50, 2'000'000);
    fixed("fidp n=20", sim_model::fidp, 20, 2'000'000);
    fixed("bcdp n=20", sim_model::bcdp, 20, 2'000'000);
    fixed("best2-fixed n=20", sim_model::best2_fixed, 20, 2'000'000);
    {
        problem_spec s;
        s.model = sim_model::rh_geometric;
        s.p = 0.1;
        cases.push_back({"rh-geometric p=0.1", s, 2'000'000});
        s.model = sim_model::best2_geometric_full;
        s.p = 0.25;
        cases.push_back({"best2-geometric-full p=0.25", s, 1'000'000});
    }

    std::printf("%-28s %10s %10s %10s %8s %s\n", "model", "samples",
                "serial s", "openmp s", "speedup", "bitwise");
    bool all_equal = true;
    for (const auto& c : cases) {
        const threshold_policy pol = optimal_policy_for(c.spec);
        double mean_serial = 0.0, mean_parallel = 0.0;
        const double ts =
            seconds_for(c.spec, pol, c.samples, false, &mean_serial);
        const double tp =
            seconds_for(c.spec, pol, c.samples, true, &mean_parallel);
        const bool equal = mean_serial == mean_parallel;
        all_equal = all_equal && equal;
        std::printf("%-28s %10lld %10.3f %10.3f %7.2fx %s\n", c.name.c_str(),
                    c.samples, ts, tp, ts / tp, equal ? "ok" : "MISMATCH");
    }
    if (!all_equal) {
        std::printf("\nparallel and serial means diverged\n");
        return 1;
    }
    return 0;
}
