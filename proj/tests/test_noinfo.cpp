#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "stopdur/noinfo.hpp"
#include "stopdur/numerics.hpp"
#include "stopdur/process.hpp"

using namespace stopdur;

TEST_CASE("candidate chain kernel values") {
    CHECK(std::fabs(transition_prob(2, 10, 3, 5) - 0.1) < 1e-15);
    CHECK(transition_prob(2, 10, no_candidate, no_candidate) == 1.0);
    CHECK(transition_prob(2, 10, no_candidate, 5) == 0.0);
    // early stages, every next item is a candidate
    CHECK(transition_prob(2, 10, 1, 2) == 0.5);
    CHECK(transition_prob(2, 10, 1, 3) == 0.0);

    CHECK_THROWS_AS(transition_prob(2, 10, 5, 5), std::invalid_argument);
    CHECK_THROWS_AS(transition_prob(2, 10, 5, 3), std::invalid_argument);
    CHECK_THROWS_AS(transition_prob(2, 10, 5, 11), std::invalid_argument);
    CHECK_THROWS_AS(transition_prob(0, 10, 1, 2), std::invalid_argument);

    // closed-form absorption for the top-two chain
    for (int r = 2; r <= 10; ++r)
        CHECK(std::fabs(transition_prob(2, 10, r, no_candidate) -
                        r * (r - 1.0) / 90.0) < 1e-14);
}

TEST_CASE("kernel rows sum to one") {
    const int n = 30;
    for (int a : {1, 2, 3}) {
        for (int r = 1; r <= n; ++r) {
            double total = transition_prob(a, n, r, no_candidate);
            for (int s = r + 1; s <= n; ++s)
                total += std::min(s, a) * transition_prob(a, n, r, s);
            CHECK(std::fabs(total - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("top-two stopping payoff") {
    for (int n : {2, 5, 10, 40}) {
        CHECK(std::fabs(phi_best2(n, n, 1) - 1.0 / n) < 1e-13);
        CHECK(std::fabs(phi_best2(n, n, 2) - 1.0 / n) < 1e-13);
        // rank 1 is never worth less than rank 2 at the same stage
        for (int k = 2; k <= n; ++k)
            CHECK(phi_best2(n, k, 1) >= phi_best2(n, k, 2) - 1e-15);
    }
    CHECK(std::fabs(phi_best2(10, 3, 2) - 0.24) < 1e-15);
    CHECK(phi_best2(10, 5, 3) == 0.0);
    CHECK_THROWS_AS(phi_best2(10, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(phi_best2(10, 11, 1), std::invalid_argument);
    CHECK_THROWS_AS(phi_best2(10, 1, 2), std::invalid_argument);
}

TEST_CASE("skip-one payoff matches the kernel sum") {
    for (int n : {10, 25, 50}) {
        for (int k = 1; k <= n; ++k) {
            double acc = 0.0;
            for (int s = k + 1; s <= n; ++s)
                acc += transition_prob(2, n, k, s) *
                       (phi_best2(n, s, 1) + phi_best2(n, s, 2));
            CHECK(std::fabs(acc - t_phi_best2(n, k)) < 1e-12);
        }
        CHECK(std::fabs(t_phi_best2(n, n - 1) - 2.0 / (static_cast<double>(n) * n)) <
              1e-14);
        CHECK(t_phi_best2(n, n) == 0.0);
    }
}

TEST_CASE("backward induction argument checks") {
    auto phi = [](int, int) { return 1.0; };
    CHECK_THROWS_AS(backward_induction_noinfo(0, {1}, phi), std::invalid_argument);
    CHECK_THROWS_AS(backward_induction_noinfo(5, {}, phi), std::invalid_argument);
    CHECK_THROWS_AS(backward_induction_noinfo(5, {1, 1}, phi), std::invalid_argument);
    CHECK_THROWS_AS(backward_induction_noinfo(5, {0}, phi), std::invalid_argument);
    CHECK_THROWS_AS(backward_induction_noinfo(5, {6}, phi), std::invalid_argument);
}

TEST_CASE("stage-entry values decrease") {
    for (int n : {10, 100}) {
        auto phi = [n](int k, int r) { return n * phi_best2(n, k, r); };
        const auto res = backward_induction_noinfo(n, {1, 2}, phi);
        for (int k = 1; k < n; ++k)
            CHECK(res.w_tilde[k] >= res.w_tilde[k + 1] - 1e-12);
        CHECK(std::fabs(res.value - solve_best2(n).value) < 1e-13);
    }
}

TEST_CASE("top-two thresholds and values") {
    const struct { int n, k1, k2; double v; } table[] = {
        {2, 1, 1, 1.0},
        {10, 2, 4, 0.527526455026},
        {20, 3, 8, 0.464357329234},
        {25, 4, 10, 0.449370844066},
        {50, 7, 21, 0.426410552871},
        {200, 25, 83, 0.409430751455},
        {1000, 121, 417, 0.404943990251},
    };
    for (const auto& row : table) {
        const auto r = solve_best2(row.n);
        CHECK(r.k1 == row.k1);
        CHECK(r.k2 == row.k2);
        CHECK(std::fabs(r.value - row.v) < 1e-9);
    }
}

TEST_CASE("top-two threshold characterizations agree") {
    for (int n : {10, 20, 25, 50, 200, 1000}) {
        const auto r = solve_best2(n);
        auto phi = [n](int k, int rank) { return n * phi_best2(n, k, rank); };
        const auto dp = backward_induction_noinfo(n, {1, 2}, phi);
        int k1_alt = n;
        for (int k = 1; k <= n; ++k)
            if (dp.w_tilde[k] / n < phi_best2(n, k, 1)) {
                k1_alt = k;
                break;
            }
        int k2_alt = n;
        for (int k = 2; k <= n; ++k)
            if (t_phi_best2(n, k) <= phi_best2(n, k, 2)) {
                k2_alt = k - 1;
                break;
            }
        CHECK(k1_alt == r.k1);
        CHECK(k2_alt == r.k2);
    }
}

TEST_CASE("top-two value rebuilt from the candidate chain") {
    // value = sum over rank-1 stops inside the one-rank zone plus the tail
    // entered when no rank-1 candidate shows up in between
    for (int n : {10, 50, 200}) {
        const auto r = solve_best2(n);
        auto phi = [n](int k, int rank) { return n * phi_best2(n, k, rank); };
        const auto dp = backward_induction_noinfo(n, {1, 2}, phi);
        const int k = r.k1 - 1;
        const int s = r.k2;
        REQUIRE(k >= 1);
        double acc = 0.0;
        for (int j = k + 1; j <= s; ++j)
            acc += static_cast<double>(k) / (static_cast<double>(j) * (j - 1)) *
                   phi_best2(n, j, 1);
        acc += static_cast<double>(k) / s * dp.w_tilde[s + 1] / n;
        CHECK(std::fabs(acc - r.value) < 1e-12);
    }
}

TEST_CASE("best-item duration, no recall") {
    const struct { int n, k; double v; } table[] = {
        {10, 2, 0.351454365079},
        {20, 3, 0.307604404119},
        {25, 4, 0.300476332651},
        {50, 7, 0.284914027201},
        {5000, 677, 0.270811193104},
    };
    for (const auto& row : table) {
        const auto r = classical_bc_duration(row.n, false);
        CHECK(r.k_star == row.k);
        CHECK(std::fabs(r.value - row.v) < 1e-9);
    }
}

TEST_CASE("best-item duration with recall") {
    const struct { int n, k; double v; } table[] = {
        {10, 4, 0.438253968254},
        {20, 8, 0.401953005715},
        {25, 9, 0.395316372563},
        {50, 19, 0.381556958851},
    };
    for (const auto& row : table) {
        const auto r = classical_bc_duration(row.n, true);
        CHECK(r.k_star == row.k);
        CHECK(std::fabs(r.value - row.v) < 1e-9);
    }
    // the commit stage maximizes the hold value over all fixed stages
    for (int n : {10, 37, 100}) {
        const auto r = classical_bc_duration(n, true);
        const double hn = harmonic(n);
        for (int k = 1; k <= n; ++k) {
            const double v = (1.0 + k * (hn - harmonic(k))) / n;
            CHECK(v <= r.value + 1e-13);
        }
    }
}

TEST_CASE("best-item duration counted only when overall best") {
    const struct { int n, k; double v; } table[] = {
        {10, 3, 0.205793650794},
        {20, 5, 0.182881264762},
        {25, 6, 0.178524968884},
        {50, 11, 0.170047416872},
    };
    for (const auto& row : table) {
        const auto r = bc_duration_choice_of_best(row.n, false);
        CHECK(r.k_star == row.k);
        CHECK(std::fabs(r.value - row.v) < 1e-9);
    }
    const auto r9 = bc_duration_choice_of_best(9, true);
    CHECK(r9.k_star == 5);
    CHECK(std::fabs(r9.value - 25.0 / 81.0) < 1e-14);
    const auto r20 = bc_duration_choice_of_best(20, true);
    CHECK(r20.k_star == 10);
    CHECK(std::fabs(r20.value - 0.275) < 1e-14);
}

TEST_CASE("discounted duration thresholds and values") {
    const struct { double beta; int r; double v; } table[] = {
        {0.5, 1, 0.346573590280},
        {0.8, 1, 0.321887582487},
        {0.9, 2, 0.265094905524},
        {0.95, 4, 0.246634877561},
        {0.99, 18, 0.235405847942},
    };
    for (const auto& row : table) {
        const auto r = discounted_duration(row.beta);
        CHECK(r.k_star == row.r);
        CHECK(std::fabs(r.value - row.v) < 1e-9);
        // the look-ahead threshold is also the argmax over rule stages
        for (int k = 1; k <= row.r + 15; ++k)
            CHECK(discounted_rule_value(k, row.beta) <= r.value + 1e-12);
    }
    // immediate acceptance has a closed value
    for (double beta : {0.3, 0.6, 0.9})
        CHECK(std::fabs(discounted_rule_value(1, beta) +
                        (1.0 - beta) * std::log(1.0 - beta)) < 1e-12);
    CHECK_THROWS_AS(discounted_duration(0.0), std::invalid_argument);
    CHECK_THROWS_AS(discounted_duration(1.0), std::invalid_argument);
    CHECK_THROWS_AS(discounted_rule_value(0, 0.5), std::invalid_argument);
}

TEST_CASE("dynamic programs match exhaustive enumeration") {
    for (int n = 2; n <= 7; ++n) {
        CHECK(std::fabs(enumerate_optimal_noinfo(n, maturity_model::best_no_recall) -
                        classical_bc_duration(n, false).value) < 1e-12);
        CHECK(std::fabs(enumerate_optimal_noinfo(n, maturity_model::best_recall) -
                        classical_bc_duration(n, true).value) < 1e-12);
        CHECK(std::fabs(enumerate_optimal_noinfo(
                            n, maturity_model::best_require_overall_best) -
                        bc_duration_choice_of_best(n, false).value) < 1e-12);
        CHECK(std::fabs(enumerate_optimal_noinfo(
                            n, maturity_model::best_or_second_no_recall) -
                        solve_best2(n).value) < 1e-12);
        auto phi = [n](int k, int r) { return n * phi_best2(n, k, r); };
        CHECK(std::fabs(enumerate_optimal_noinfo(
                            n, maturity_model::best_or_second_stop_at_best_only) -
                        backward_induction_noinfo(n, {1}, phi).value) < 1e-12);
    }
}

TEST_CASE("recall commit stage differs from fixed-stage rule only in value") {
    // the recall variant with the overall-best requirement has a closed
    // optimum at the middle stage; enumeration confirms it for small n
    for (int n = 2; n <= 7; ++n)
        CHECK(std::fabs(enumerate_optimal_noinfo(
                            n, maturity_model::best_recall_require_overall_best) -
                        bc_duration_choice_of_best(n, true).value) < 1e-12);
}
