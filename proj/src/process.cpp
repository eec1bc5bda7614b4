#include "stopdur/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "stopdur/numerics.hpp"

namespace stopdur {

std::vector<int> relative_ranks(const std::vector<double>& sample) {
    const int n = static_cast<int>(sample.size());
    std::vector<int> ranks(n);
    for (int k = 0; k < n; ++k) {
        int r = 0;
        for (int i = 0; i <= k; ++i)
            if (sample[i] <= sample[k]) ++r;
        ranks[k] = r;
    }
    return ranks;
}

int running_rank(const std::vector<double>& sample, int k, int j) {
    const int n = static_cast<int>(sample.size());
    if (k < 1 || j < k || j > n)
        throw std::invalid_argument("running_rank: need 1 <= k <= j <= n");
    int r = 0;
    for (int i = 0; i < j; ++i)
        if (sample[i] <= sample[k - 1]) ++r;
    return r;
}

namespace {

bool requires_survival(maturity_model m) {
    return m == maturity_model::best_require_overall_best ||
           m == maturity_model::best_recall_require_overall_best;
}

bool recall_model(maturity_model m) {
    return m == maturity_model::best_recall ||
           m == maturity_model::best_recall_require_overall_best;
}

} // namespace

int duration_no_info(const std::vector<double>& sample, int stop,
                     maturity_model model) {
    const int n = static_cast<int>(sample.size());
    if (stop < 1 || stop > n)
        throw std::invalid_argument("duration_no_info: stop out of range");

    if (recall_model(model)) {
        // the currently best item is claimed, whenever it arrived
        const double best = *std::min_element(sample.begin(),
                                              sample.begin() + stop);
        int t = n + 1;
        for (int j = stop; j < n; ++j) {
            if (sample[j] < best) {
                t = j + 1;
                break;
            }
        }
        if (requires_survival(model) && t <= n) return 0;
        return t - stop;
    }

    const double x = sample[stop - 1];
    int rank = 0;
    for (int i = 0; i < stop; ++i)
        if (sample[i] <= x) ++rank;

    const bool top2 = model == maturity_model::best_or_second_no_recall;
    const bool ok = top2 ? rank <= 2 : rank == 1;
    if (!ok)
        throw std::invalid_argument(
            "duration_no_info: item at stop is not a candidate");

    // a best item leaves its status at the first better arrival, a top-two
    // item once its running rank passes 2
    int needed = (model == maturity_model::best_or_second_no_recall ||
                  model == maturity_model::best_or_second_stop_at_best_only)
                     ? 3 - rank
                     : 1;
    int t = n + 1;
    for (int j = stop; j < n; ++j) {
        if (sample[j] < x && --needed == 0) {
            t = j + 1;
            break;
        }
    }
    if (requires_survival(model) && t <= n) return 0;
    return t - stop;
}

int duration_full_info(const std::vector<double>& values, int stop,
                       maturity_model model, int horizon) {
    if (horizon < 1 || horizon > static_cast<int>(values.size()))
        throw std::invalid_argument(
            "duration_full_info: horizon out of range");
    if (stop < 1 || stop > horizon)
        throw std::invalid_argument("duration_full_info: stop out of range");

    if (recall_model(model)) {
        const double best = *std::max_element(values.begin(),
                                              values.begin() + stop);
        int t = horizon + 1;
        for (int j = stop; j < horizon; ++j) {
            if (values[j] > best) {
                t = j + 1;
                break;
            }
        }
        if (requires_survival(model) && t <= horizon) return 0;
        return t - stop;
    }

    const double x = values[stop - 1];
    int above = 0; // items in the prefix strictly better
    for (int i = 0; i + 1 < stop; ++i)
        if (values[i] > x) ++above;

    const bool top2 = model == maturity_model::best_or_second_no_recall;
    const bool ok = top2 ? above <= 1 : above == 0;
    if (!ok)
        throw std::invalid_argument(
            "duration_full_info: item at stop is not a candidate");

    int needed = (model == maturity_model::best_or_second_no_recall ||
                  model == maturity_model::best_or_second_stop_at_best_only)
                     ? 2 - above
                     : 1;
    int t = horizon + 1;
    for (int j = stop; j < horizon; ++j) {
        if (values[j] > x && --needed == 0) {
            t = j + 1;
            break;
        }
    }
    if (requires_survival(model) && t <= horizon) return 0;
    return t - stop;
}

std::vector<double> maturity_pmf_best2(int n, int i, int r) {
    if (n < 1 || i < 1 || i > n)
        throw std::invalid_argument("maturity_pmf_best2: need 1 <= i <= n");
    if (r != 1 && r != 2)
        throw std::invalid_argument("maturity_pmf_best2: rank must be 1 or 2");
    if (r == 2 && i < 2)
        throw std::invalid_argument(
            "maturity_pmf_best2: no rank-2 item before stage 2");

    std::vector<double> pmf(n - i + 1, 0.0);
    if (n == 1) {
        pmf.back() = 1.0;
        return pmf;
    }
    const double di = i;
    if (r == 2) {
        for (int k = i + 1; k <= n; ++k)
            pmf[k - i - 1] =
                2.0 * (di - 1.0) * di /
                (static_cast<double>(k - 2) * (k - 1) * k);
        pmf.back() = di * (di - 1.0) /
                     (static_cast<double>(n) * (n - 1));
        return pmf;
    }
    // rank 1: first the item is pushed to rank 2 at some stage s, then out.
    // P(first beat at s) = i/((s-1)s); from s the rank-2 law above applies
    // and the product is constant in s.
    for (int k = i + 2; k <= n; ++k) {
        double mass = 0.0;
        for (int s = i + 1; s <= k - 1; ++s) {
            const double first = di / (static_cast<double>(s - 1) * s);
            const double second =
                2.0 * (static_cast<double>(s) - 1.0) * s /
                (static_cast<double>(k - 2) * (k - 1) * k);
            mass += first * second;
        }
        pmf[k - i - 1] = mass;
    }
    pmf.back() = di * (2.0 * n - di - 1.0) /
                 (static_cast<double>(n) * (n - 1));
    return pmf;
}

long long sample_horizon(double p, rng_stream& gen, long long cap) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::invalid_argument("sample_horizon: p must be in (0,1)");
    const double u = gen.next_double_pos();
    const long long n =
        1 + static_cast<long long>(std::log(u) / std::log1p(-p));
    if (n > cap)
        throw numerical_error("sample_horizon: horizon cap exceeded");
    return n;
}

namespace {

struct enum_ctx {
    std::vector<std::vector<double>> perms;
    std::vector<std::vector<int>> ranks;
    maturity_model model;
    int n = 0;
};

bool stoppable(const enum_ctx& c, int rank_at_k) {
    switch (c.model) {
        case maturity_model::best_recall:
        case maturity_model::best_recall_require_overall_best:
            return true;
        case maturity_model::best_or_second_no_recall:
            return rank_at_k <= 2;
        default:
            return rank_at_k == 1;
    }
}

// expected optimal payoff over the permutations in `group`, all of which
// share the same relative-rank prefix through stage k
double enum_value(const enum_ctx& c, const std::vector<int>& group, int k) {
    const int y_k = c.ranks[group[0]][k - 1];
    double stop_val = -1.0;
    if (stoppable(c, y_k)) {
        double acc = 0.0;
        for (int idx : group)
            acc += duration_no_info(c.perms[idx], k, c.model);
        stop_val = acc / static_cast<double>(group.size());
    }
    if (k == c.n)
        return std::max(stop_val, 0.0);

    std::vector<std::vector<int>> parts(k + 1);
    for (int idx : group)
        parts[c.ranks[idx][k] - 1].push_back(idx);
    double cont = 0.0;
    for (const auto& part : parts)
        if (!part.empty())
            cont += enum_value(c, part, k + 1) *
                    (static_cast<double>(part.size()) / group.size());
    return std::max(stop_val, cont);
}

} // namespace

double enumerate_optimal_noinfo(int n, maturity_model model) {
    if (n < 1 || n > 10)
        throw std::invalid_argument(
            "enumerate_optimal_noinfo: n must be in 1..10");
    enum_ctx c;
    c.model = model;
    c.n = n;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 1);
    do {
        std::vector<double> perm(order.begin(), order.end());
        c.ranks.push_back(relative_ranks(perm));
        c.perms.push_back(std::move(perm));
    } while (std::next_permutation(order.begin(), order.end()));

    std::vector<int> all(c.perms.size());
    std::iota(all.begin(), all.end(), 0);
    return enum_value(c, all, 1) / n;
}

} // namespace stopdur
