#pragma once

#include <vector>

namespace stopdur {

// sum_{m=0}^{s-1} x^m evaluated without the raw quotient, stable through
// x = 1 where it equals s
double w_fidp(double x, int s);

// value function v(x, s) on a graded grid, s counted as stages remaining;
// `v` holds the final stage (s = horizon), piecewise linear between nodes
struct stage_value_grid {
    int horizon = 0;
    std::vector<double> x;
    std::vector<double> v;
    double value_at_zero = 0.0;
};

// expected duration of the selected relatively best observation, values
// observed directly (uniform [0,1]), no recall
stage_value_grid fidp_value(int horizon, int grid_size = 2048);

// same duration payoff but the best value so far can be claimed at any time
stage_value_grid fidp_recall_value(int horizon, int grid_size = 2048);

// duration paid only when the selected observation ends up overall best
stage_value_grid bcdp_value(int horizon, int grid_size = 2048);

// stage acceptance thresholds x_s (stop at a candidate y >= x_s with s
// stages remaining); zero for the trivial early stages
double fidp_threshold(int s);
double fidp_recall_threshold(int s);

// quoted overall-best indifference table, root of
// sum_{j=1}^{s-1} x^{j-1} = s x^{s-1}; kept for reference but it is NOT the
// optimal boundary (its rule loses 1/24 at n = 2 and scaled gaps s(1-x_s)
// shrink to 0 instead of approaching bcdp_limit_c)
double bcdp_threshold(int s);

// optimal overall-best stop boundary, root of
// sum_{j=1}^{s-1} x^{j-1} = (2s-1) x^{s-1}; matches the bcdp_value stop
// region and s(1-x_s) -> bcdp_limit_c
double bcdp_stop_boundary(int s);

// limit of s * (1 - fidp_threshold(s))
double asymptotic_z();

// limit of fidp value per stage, v(0, n) / n
double fidp_limit_constant();

// limit of s * (1 - fidp_recall_threshold(s))
double fidp_recall_asymptote();

// limits for the overall-best variant: c* solves e^c = 1 + 2c, v* is the
// per-stage value, u* its recall counterpart
double bcdp_limit_c();
double bcdp_limit_value();
double bcdp_recall_limit_value();

} // namespace stopdur
